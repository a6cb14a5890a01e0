import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bjdm_null import (DuplicateGroups, apply_update, log_num_matrices,
                       num_matrices_exact, sequential_from_lists, transition_ratio)
from bjdm_null.multiplicity import ratio_terms

from oracles import brute_num_matrices, brute_num_matrices_full

A, B, C, D = "ABCD"


def fs(*x):
    return frozenset(x)


def test_all_identical_gives_one():
    g = DuplicateGroups([fs(A, B)] * 5)
    assert num_matrices_exact(g) == 1
    assert log_num_matrices(g) == pytest.approx(0.0)


def test_all_distinct_single_length():
    g = DuplicateGroups([fs(A, B), fs(A, C), fs(B, C), fs(C, D)])
    assert log_num_matrices(g) == pytest.approx(math.log(24))


def test_q_example():
    rows = [fs(A, B), fs(A, B), fs(A, C), fs(D)]
    g = DuplicateGroups(rows)
    assert num_matrices_exact(g) == 3
    assert brute_num_matrices(rows) == 3
    assert g.totals == {2: 3, 1: 1}
    assert len(g) == 4


def test_self_loop_ratio():
    g = DuplicateGroups([fs(A, B), fs(C, D)])
    assert transition_ratio(g, [fs(A, B)], [fs(A, B)]) == 1
    assert transition_ratio(g, [fs(A, B), fs(C, D)], [fs(A, B), fs(C, D)]) == 1


def test_distinct_swap_ratio():
    g = DuplicateGroups([fs(A, B), fs(C, D)])
    assert transition_ratio(g, [fs(A, B), fs(C, D)], [fs(A, D), fs(C, B)]) == 1


def test_duplicate_swap_ratio():
    rows = [fs(A, B), fs(A, B), fs(C, D)]
    g = DuplicateGroups(rows)
    r = transition_ratio(g, [fs(A, B), fs(C, D)], [fs(A, D), fs(C, B)])
    assert r == Fraction(1, 2)
    after = [fs(A, B), fs(A, D), fs(C, B)]
    exact = math.exp(log_num_matrices(g) - log_num_matrices(DuplicateGroups(after)))
    assert float(r) == pytest.approx(exact)
    assert g.counts[fs(A, B)] == 2  # not mutated


def test_absent_fingerprint_rejected():
    g = DuplicateGroups([fs(A, B)])
    with pytest.raises(KeyError):
        transition_ratio(g, [fs(C, D)], [fs(A, B)])
    with pytest.raises(KeyError):
        transition_ratio(g, [fs(A, B), fs(A, B)], [fs(A, C), fs(B, D)])
    with pytest.raises(KeyError):
        apply_update(g, [fs(C, D)], [])


def test_length_mismatch_rejected():
    g = DuplicateGroups([fs(A, B)])
    with pytest.raises(ValueError):
        transition_ratio(g, [fs(A, B)], [fs(A)])


def test_apply_and_inverse():
    g = DuplicateGroups([fs(A, B), fs(A, B), fs(C, D)])
    orig = g.copy()
    apply_update(g, [fs(A, B), fs(C, D)], [fs(A, D), fs(C, B)])
    assert fs(C, D) not in g.counts  # zero groups dropped
    assert g.totals == orig.totals
    assert log_num_matrices(g) == pytest.approx(
        log_num_matrices(DuplicateGroups([fs(A, B), fs(A, D), fs(C, B)])))
    apply_update(g, [fs(A, D), fs(C, B)], [fs(A, B), fs(C, D)])
    assert g == orig


def test_sequence_fingerprints():
    s = sequential_from_lists([[[1], [2]], [[1], [2]], [[2], [1]]])
    g = DuplicateGroups.from_dataset(s)
    assert num_matrices_exact(g) == 3
    # order within a sequence matters, so permute whole sequences
    assert len(set(itertools.permutations(s.sequences))) == 3


def test_overlay_with_repeated_fingerprints():
    # moves touching the same group twice use the sequential overlay
    counts = {fs(A): 3, fs(B): 1}
    assert ratio_terms(counts, [fs(A), fs(A)], [fs(B), fs(B)]) == (2 * 3, 3 * 2)
    num, den = ratio_terms(counts, [fs(A), fs(B)], [fs(B), fs(C)])
    assert Fraction(num, den) == Fraction(1, 3)


rows_strategy = st.lists(
    st.frozensets(st.sampled_from("abcd"), min_size=1, max_size=3), min_size=1, max_size=7)


@given(rows_strategy)
def test_q_matches_permutation_oracle(rows):
    g = DuplicateGroups(rows)
    q = num_matrices_exact(g)
    assert q == brute_num_matrices_full([tuple(sorted(r)) for r in rows])
    assert math.exp(log_num_matrices(g)) == pytest.approx(q)


@st.composite
def moves(draw):
    rows = draw(rows_strategy)
    k = draw(st.integers(1, min(3, len(rows))))
    idx = draw(st.permutations(range(len(rows))))[:k]
    removed = [rows[i] for i in idx]
    added = [draw(st.frozensets(st.sampled_from("abcdef"), min_size=len(r), max_size=len(r)))
             for r in removed]
    return rows, removed, added


@given(moves())
def test_ratio_matches_recomputation_and_reverses(move):
    rows, removed, added = move
    g = DuplicateGroups(rows)
    r = transition_ratio(g, removed, added)
    after = list(rows)
    for x in removed:
        after.remove(x)
    after += added
    h = g.copy()
    apply_update(h, removed, added)
    assert h == DuplicateGroups(after)
    assert r == Fraction(num_matrices_exact(g), num_matrices_exact(h))
    assert r * transition_ratio(h, added, removed) == 1
