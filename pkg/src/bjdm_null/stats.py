"""Resampling statistics: ARSD, empirical p-values and Westfall-Young.

Everything here consumes sampled datasets (or statistics already extracted
from them), so the functions are independent of the sampler used.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .dataset_io import SequenceDataset
from .mining import Pattern, contains_sequence, fi_length_histogram, mine
from .samplers import SamplerConfig, advance, chain_dataset, make_chain

__all__ = [
    "DEFAULT_K_GRID",
    "PvalueReport",
    "pattern_supports",
    "arsd",
    "empirical_pvalue",
    "wy_adjusted_critical_value",
    "wy_min_pvalues",
    "westfall_young",
    "convergence_trace",
    "fi_statistics",
    "significance_report",
    "statistics_csv",
    "to_json",
]

# k = 0, 0.15, ..., 1.95, then 2, 3, 4, 5, 6
DEFAULT_K_GRID = tuple([round(0.15 * i, 2) for i in range(14)] + [2, 3, 4, 5, 6])

DIRECTIONS = ("greater", "less")


@dataclass
class PvalueReport:
    """Empirical p-value ``(1 + count_extreme) / (1 + T)``."""

    observed: float
    T: int
    count_extreme: int
    p_hat: float
    direction: str = "greater"

    def to_dict(self) -> dict:
        return asdict(self)


def _items(p):
    return p.items if isinstance(p, Pattern) else p[0]


def _support(p):
    return p.support if isinstance(p, Pattern) else p[1]


def pattern_supports(dataset, patterns) -> np.ndarray:
    """Support of each pattern (itemsets or sequential patterns) in ``dataset``."""
    patterns = list(patterns)
    out = np.zeros(len(patterns), dtype=np.int64)
    if isinstance(dataset, SequenceDataset):
        seqs = [tuple(frozenset(x) for x in s) for s in dataset.itemset_sequences()]
        for k, p in enumerate(patterns):
            pat = _items(p)
            out[k] = sum(1 for s in seqs if contains_sequence(s, pat))
        return out
    tids = [0] * dataset.num_items
    for k, t in enumerate(dataset.transactions):
        bit = 1 << k
        for i in t:
            tids[i] |= bit
    everything = (1 << len(dataset)) - 1
    for k, p in enumerate(patterns):
        acc = everything
        for i in _items(p):
            acc &= tids[i] if i < len(tids) else 0
        out[k] = acc.bit_count()
    return out


def arsd(observed_fis, sample) -> float:
    """Average relative support difference of the observed patterns in ``sample``.

    Parameters
    ----------
    observed_fis : list of Pattern or (items, support) pairs
        Frequent patterns of the observed dataset with their supports.
    sample : dataset
    """
    observed_fis = list(observed_fis)
    if not observed_fis:
        raise ValueError("ARSD needs at least one observed pattern")
    obs = np.array([_support(p) for p in observed_fis], dtype=float)
    if np.any(obs <= 0):
        raise ValueError("observed supports must be positive")
    sam = pattern_supports(sample, observed_fis)
    return float(np.mean(np.abs(obs - sam) / obs))


def empirical_pvalue(observed_stat, sample_stats, direction: str = "greater") -> PvalueReport:
    """Resampling p-value of ``observed_stat`` against ``sample_stats``.

    ``direction="greater"`` counts samples with a statistic ``>=`` the
    observed one, ``"less"`` those with ``<=``.
    """
    stats = np.asarray(list(sample_stats), dtype=float)
    if stats.size < 1:
        raise ValueError("need at least one sampled statistic")
    if direction == "greater":
        count = int(np.sum(stats >= observed_stat))
    elif direction == "less":
        count = int(np.sum(stats <= observed_stat))
    else:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    T = int(stats.size)
    return PvalueReport(float(observed_stat), T, count, (1 + count) / (1 + T), direction)


def wy_adjusted_critical_value(min_pvalues, delta: float) -> float:
    """Largest observed minimum p-value ``a`` with ``#{p <= a} / T' <= delta``.

    Sorting makes ties deterministic: a tied block is either entirely below
    the returned value or entirely above it.  When no observed value
    qualifies, 0.0 is returned, which rejects nothing since p-values are
    positive.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must be in (0, 1)")
    p = np.sort(np.asarray(list(min_pvalues), dtype=float))
    if p.size < 1:
        raise ValueError("need at least one minimum p-value")
    # counts[i] = #{p <= p[i]}
    counts = np.searchsorted(p, p, side="right")
    ok = counts <= delta * p.size * (1 + 1e-12)
    if not ok.any():
        return 0.0
    return float(p[np.flatnonzero(ok)[-1]])


def _pvalue_matrix(stats, reference, direction):
    # p[i, j] = (1 + #{t : reference[t, j] extreme vs stats[i, j]}) / (1 + T)
    T = reference.shape[0]
    out = np.empty(stats.shape, dtype=float)
    for j in range(stats.shape[1]):
        ref = np.sort(reference[:, j])
        if direction == "greater":
            count = T - np.searchsorted(ref, stats[:, j], side="left")
        else:
            count = np.searchsorted(ref, stats[:, j], side="right")
        out[:, j] = (1 + count) / (1 + T)
    return out


def wy_min_pvalues(outer_stats, inner_stats, direction: str = "greater") -> np.ndarray:
    """Minimum p-value over hypotheses for each outer sampled dataset.

    Parameters
    ----------
    outer_stats : array (T', P)
        Statistic of each of P hypotheses in each outer sample.
    inner_stats : array (T, P)
        The same statistics in the inner samples used to estimate p-values.
    """
    outer = np.atleast_2d(np.asarray(outer_stats, dtype=float))
    inner = np.atleast_2d(np.asarray(inner_stats, dtype=float))
    if outer.shape[1] != inner.shape[1]:
        raise ValueError("outer and inner statistics cover different hypotheses")
    if outer.shape[1] == 0:
        return np.ones(outer.shape[0])
    return _pvalue_matrix(outer, inner, direction).min(axis=1)


def westfall_young(observed, outer_samples, inner_samples, theta, delta=0.05,
                   direction: str = "greater") -> dict:
    """Significant frequent patterns of ``observed`` with FWER control.

    The hypotheses are the patterns frequent in ``observed`` at ``theta``;
    the statistic of a pattern is its support.  Inner samples estimate
    p-values, outer samples give the minimum p-value distribution.
    """
    fis = mine(observed, theta)
    obs = np.array([[p.support for p in fis]], dtype=float)
    inner = np.array([pattern_supports(s, fis) for s in inner_samples], dtype=float)
    outer = np.array([pattern_supports(s, fis) for s in outer_samples], dtype=float)
    if len(fis):
        p_obs = _pvalue_matrix(obs, inner, direction)[0]
        minp = wy_min_pvalues(outer, inner, direction)
    else:
        p_obs = np.zeros(0)
        minp = np.ones(len(outer_samples))
    alpha = wy_adjusted_critical_value(minp, delta)
    significant = [(p, float(pv)) for p, pv in zip(fis, p_obs) if pv <= alpha]
    return {
        "num_hypotheses": len(fis),
        "delta": delta,
        "adjusted_critical_value": alpha,
        "min_pvalues": minp.tolist(),
        "significant": significant,
    }


def convergence_trace(observed, config: SamplerConfig, k_grid=DEFAULT_K_GRID,
                      theta=0.1, chain_index: int = 0) -> list:
    """ARSD along one chain, recorded after ``floor(k * w)`` steps for each k.

    Returns a list of ``(k, arsd, cumulative_seconds)``; the observed
    patterns are mined once and the seconds exclude that mining.
    """
    ks = list(k_grid)
    if any(b < a for a, b in zip(ks, ks[1:])):
        raise ValueError("k_grid must be non-decreasing")
    if ks and ks[0] < 0:
        raise ValueError("k must be non-negative")
    fis = mine(observed, theta)
    if not fis:
        raise ValueError("no frequent patterns at this threshold")
    w = observed.total_length
    chain = make_chain(observed, config, chain_index)
    done = 0
    spent = 0.0
    out = []
    for k in ks:
        target = math.floor(k * w)
        t0 = time.perf_counter()
        advance(chain, config, target - done)
        spent += time.perf_counter() - t0
        done = target
        out.append((k, arsd(fis, chain_dataset(chain, observed)), spent))
    return out


def fi_statistics(dataset, theta) -> dict:
    """Number of frequent patterns and their length histogram."""
    fis = mine(dataset, theta)
    return {"fi_count": len(fis), "fi_histogram": fi_length_histogram(fis)}


def significance_report(observed, samples, theta, direction: str = "greater") -> dict:
    """Observed vs sampled number of frequent patterns, with a p-value."""
    obs = fi_statistics(observed, theta)
    per_sample = [fi_statistics(s, theta) for s in samples]
    counts = [s["fi_count"] for s in per_sample]
    report = empirical_pvalue(obs["fi_count"], counts, direction)
    lengths = sorted(set(obs["fi_histogram"]).union(
        *(s["fi_histogram"] for s in per_sample)))
    sampled_hist = {
        n: float(np.mean([s["fi_histogram"].get(n, 0) for s in per_sample]))
        for n in lengths}
    return {
        "theta": theta,
        "observed_fi_count": obs["fi_count"],
        "mean_sampled_fi_count": float(np.mean(counts)),
        "sampled_fi_counts": counts,
        "pvalue": report.to_dict(),
        "observed_fi_histogram": {n: obs["fi_histogram"].get(n, 0) for n in lengths},
        "mean_sampled_fi_histogram": sampled_hist,
    }


def statistics_csv(rows) -> str:
    """CSV with header ``sample_index,statistic,value``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sample_index", "statistic", "value"])
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"
