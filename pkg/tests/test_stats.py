import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bjdm_null import SamplerConfig, sample_many, sequential_from_lists, transactional_from_lists
from bjdm_null.mining import Pattern, mine
from bjdm_null.stats import (DEFAULT_K_GRID, arsd, convergence_trace, empirical_pvalue,
                             fi_statistics, pattern_supports, significance_report,
                             statistics_csv, to_json, westfall_young,
                             wy_adjusted_critical_value, wy_min_pvalues)

from oracles import TINY_SEQUENTIAL, TINY_TRANSACTIONAL, grocery


def test_arsd_examples():
    d = transactional_from_lists([["a"]] * 5 + [["b"]] * 4)
    a, b = d.item_labels.index("a"), d.item_labels.index("b")
    assert arsd([((a,), 10)], d) == pytest.approx(0.5)
    assert arsd([((a,), 10), ((b,), 4)], d) == pytest.approx(0.25)
    fis = mine(grocery(), 2)
    assert arsd(fis, grocery()) == 0.0
    with pytest.raises(ValueError):
        arsd([], d)
    with pytest.raises(ValueError):
        arsd([((a,), 0)], d)


def test_arsd_on_sequences():
    s = sequential_from_lists(TINY_SEQUENTIAL)
    fis = mine(s, 2)
    assert arsd(fis, s) == 0.0
    supports = pattern_supports(s, fis)
    assert supports.tolist() == [p.support for p in fis]


@pytest.mark.parametrize("T, expected", [(4352, 2.3e-4), (2176, 4.6e-4)])
def test_pvalue_floor(T, expected):
    r = empirical_pvalue(100, [50] * T)
    assert r.count_extreme == 0 and r.T == T
    assert r.p_hat == 1 / (T + 1)
    assert round(r.p_hat, 5) == pytest.approx(expected, abs=0.05e-4)


def test_pvalue_all_extreme_and_less():
    assert empirical_pvalue(1, [5] * 9).p_hat == 1.0
    r = empirical_pvalue(1, [0, 1, 2, 3], direction="less")
    assert r.count_extreme == 2 and r.p_hat == pytest.approx(3 / 5)
    assert r.to_dict()["direction"] == "less"
    with pytest.raises(ValueError):
        empirical_pvalue(1, [])
    with pytest.raises(ValueError):
        empirical_pvalue(1, [1], direction="both")


@given(st.lists(st.integers(0, 20), min_size=1, max_size=30), st.integers(0, 20),
       st.integers(0, 20))
def test_pvalue_properties(samples, x, y):
    lo, hi = sorted((x, y))
    p_lo = empirical_pvalue(lo, samples).p_hat
    p_hi = empirical_pvalue(hi, samples).p_hat
    assert p_hi <= p_lo
    assert 1 / (1 + len(samples)) <= p_hi <= 1


def test_wy_examples():
    vals = [0.1 * i for i in range(1, 11)]
    assert wy_adjusted_critical_value(vals, 0.2) == pytest.approx(0.2)
    alpha = wy_adjusted_critical_value([1.0] * 20, 0.05)
    assert alpha < 1.0
    assert wy_adjusted_critical_value([0.3], 0.5) < 0.3
    # ties: the whole tied block is either in or out
    assert wy_adjusted_critical_value([0.1, 0.1, 0.5, 0.9], 0.25) < 0.1
    assert wy_adjusted_critical_value([0.1, 0.1, 0.5, 0.9], 0.5) == 0.1
    with pytest.raises(ValueError):
        wy_adjusted_critical_value(vals, 1.0)
    with pytest.raises(ValueError):
        wy_adjusted_critical_value([], 0.1)


@given(st.lists(st.floats(0.001, 1.0), min_size=1, max_size=40),
       st.floats(0.01, 0.98), st.floats(0.01, 0.98))
def test_wy_monotone_in_delta(pvals, d1, d2):
    lo, hi = sorted((d1, d2))
    a_lo = wy_adjusted_critical_value(pvals, lo)
    a_hi = wy_adjusted_critical_value(pvals, hi)
    assert a_lo <= a_hi
    # the defining property holds at the returned value
    assert sum(p <= a_hi for p in pvals) / len(pvals) <= hi + 1e-9


def test_wy_min_pvalues():
    inner = np.array([[1, 5], [2, 6], [3, 7]])
    outer = np.array([[3, 5], [0, 8]])
    # row 0: p = (1+1)/4, (1+3)/4 -> 0.5; row 1: p = 1, 1/4 -> 0.25
    assert wy_min_pvalues(outer, inner).tolist() == [0.5, 0.25]
    # less: row 0 -> (1+3)/4, (1+1)/4; row 1 -> (1+0)/4, (1+3)/4
    assert wy_min_pvalues(outer, inner, "less").tolist() == [0.5, 0.25]
    with pytest.raises(ValueError):
        wy_min_pvalues(outer, inner[:, :1])


def test_westfall_young_end_to_end():
    data = transactional_from_lists(TINY_TRANSACTIONAL * 4)
    cfg = SamplerConfig("alice-a", seed=1)
    samples = sample_many(data, cfg, 12, parallelism=1)
    out = westfall_young(data, samples[:6], samples[6:], theta=4, delta=0.2)
    assert out["num_hypotheses"] == len(mine(data, 4))
    assert len(out["min_pvalues"]) == 6
    for p, pv in out["significant"]:
        assert isinstance(p, Pattern) and pv <= out["adjusted_critical_value"]


def test_convergence_trace():
    data = transactional_from_lists(TINY_TRANSACTIONAL * 6)
    cfg = SamplerConfig("alice-b", seed=3)
    trace = convergence_trace(data, cfg, (0, 0.5, 1, 2), theta=3)
    assert [k for k, _, _ in trace] == [0, 0.5, 1, 2]
    assert trace[0][1] == 0.0
    assert all(a >= 0 for _, a, _ in trace)
    assert [t for _, _, t in trace] == sorted(t for _, _, t in trace)
    again = convergence_trace(data, cfg, (0, 0.5, 1, 2), theta=3)
    assert [a for _, a, _ in again] == [a for _, a, _ in trace]
    with pytest.raises(ValueError):
        convergence_trace(data, cfg, (1, 0.5), theta=3)


def test_default_k_grid():
    assert DEFAULT_K_GRID[:3] == (0.0, 0.15, 0.3)
    assert DEFAULT_K_GRID[13] == 1.95
    assert DEFAULT_K_GRID[-5:] == (2, 3, 4, 5, 6)
    assert len(DEFAULT_K_GRID) == 19


def test_significance_report_and_exports():
    data = transactional_from_lists(TINY_TRANSACTIONAL * 4)
    samples = sample_many(data, SamplerConfig("gmmt", seed=2), 5, parallelism=1)
    rep = significance_report(data, samples, 4)
    assert rep["observed_fi_count"] == fi_statistics(data, 4)["fi_count"]
    assert len(rep["sampled_fi_counts"]) == 5
    assert rep["pvalue"]["T"] == 5
    back = json.loads(to_json(rep))
    assert back["observed_fi_count"] == rep["observed_fi_count"]
    text = statistics_csv([(0, "fi-count", 3), (1, "fi-count", 4)])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["sample_index", "statistic", "value"]
    assert rows[2] == ["1", "fi-count", "4"]
