"""Frequent itemset and frequent sequential pattern mining.

Itemsets are mined depth first with tid-set intersection (Eclat), tid-sets
being Python integers used as bitsets.  Sequential patterns are mined depth
first as well; every pattern carries, per sequence, the positions at which
its last itemset can end, which is enough to extend it both by a new itemset
(s-extension) and by a new item in the last itemset (i-extension).

Patterns are reported in a canonical order: by length, then
lexicographically by item ids.  The length of an itemset is its number of
items; the length of a sequential pattern is its number of itemsets.
"""
from __future__ import annotations

import math
from numbers import Integral
from typing import NamedTuple

from .dataset_io import SequenceDataset, TransactionalDataset

__all__ = [
    "Pattern",
    "min_count",
    "support",
    "sequence_support",
    "contains_sequence",
    "mine_frequent_itemsets",
    "mine_frequent_sequences",
    "mine",
    "fi_length_histogram",
    "format_patterns",
]


class Pattern(NamedTuple):
    """A frequent pattern.

    ``items`` is a sorted tuple of item ids for itemsets, or a tuple of
    sorted item tuples for sequential patterns.
    """

    items: tuple
    support: int

    @property
    def length(self) -> int:
        return len(self.items)

    @property
    def is_sequential(self) -> bool:
        return bool(self.items) and isinstance(self.items[0], tuple)


def min_count(theta, num_rows: int) -> int:
    """Absolute support threshold.

    Integers are absolute counts in ``[1, num_rows]``; other numbers are
    fractions in ``(0, 1]`` and are rounded up.
    """
    if isinstance(theta, bool):
        raise TypeError("theta must be a number")
    if isinstance(theta, Integral):
        if theta <= 0:
            raise ValueError("theta must be positive")
        if theta > num_rows:
            raise ValueError(f"absolute theta {theta} exceeds the {num_rows} rows")
        return int(theta)
    theta = float(theta)
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"fractional theta must be in (0, 1], got {theta}")
    # the rounding guards against products like 0.7 * 10 = 7.000000000000001
    return max(1, math.ceil(round(theta * num_rows, 9)))


def support(dataset: TransactionalDataset, itemset) -> int:
    """Number of transactions containing every item of ``itemset``."""
    need = set(itemset)
    return sum(1 for t in dataset.transactions if need.issubset(t))


def contains_sequence(sequence, pattern) -> bool:
    """Whether ``pattern`` (itemsets) occurs in ``sequence`` (itemsets).

    Greedy leftmost matching is exact for this containment relation.
    """
    k = 0
    for itemset in sequence:
        if k == len(pattern):
            break
        if set(pattern[k]).issubset(itemset):
            k += 1
    return k == len(pattern)


def sequence_support(dataset: SequenceDataset, pattern) -> int:
    """Number of sequences containing ``pattern`` (a sequence of item tuples)."""
    return sum(1 for s in dataset.itemset_sequences() if contains_sequence(s, pattern))


def _sort(patterns) -> list:
    patterns.sort(key=lambda p: (len(p.items), p.items))
    return patterns


def mine_frequent_itemsets(dataset: TransactionalDataset, theta) -> list:
    """All itemsets with support at least ``theta`` (see :func:`min_count`)."""
    minsup = min_count(theta, len(dataset))
    tids = [0] * dataset.num_items
    for k, t in enumerate(dataset.transactions):
        bit = 1 << k
        for i in t:
            tids[i] |= bit
    roots = [(i, tid) for i, tid in enumerate(tids) if tid.bit_count() >= minsup]
    out: list = []
    stack = [((), roots)]
    while stack:
        prefix, cands = stack.pop()
        for idx, (i, tid) in enumerate(cands):
            items = prefix + (i,)
            out.append(Pattern(items, tid.bit_count()))
            ext = []
            for j, other in cands[idx + 1:]:
                both = tid & other
                if both.bit_count() >= minsup:
                    ext.append((j, both))
            if ext:
                stack.append((items, ext))
    return _sort(out)


def mine_frequent_sequences(dataset: SequenceDataset, theta) -> list:
    """All sequential patterns with support at least ``theta``.

    A pattern <A_1 .. A_k> occurs in <B_1 .. B_m> if there are positions
    i_1 < .. < i_k with A_j a subset of B_{i_j}; support counts sequences.
    """
    minsup = min_count(theta, len(dataset))
    seqs = [tuple(frozenset(x) for x in s) for s in dataset.itemset_sequences()]
    out: list = []

    def s_extensions(proj):
        # proj: {sequence index: sorted end positions}; -1 means empty prefix
        found: dict = {}
        for v, ends in proj.items():
            seq = seqs[v]
            first = ends[0] + 1
            seen = set()
            for p in range(first, len(seq)):
                for i in seq[p]:
                    if i not in seen:
                        seen.add(i)
                        found.setdefault(i, {})[v] = p
        for i in sorted(found):
            hits = found[i]
            if len(hits) < minsup:
                continue
            new = {}
            for v in hits:
                seq = seqs[v]
                new[v] = [p for p in range(proj[v][0] + 1, len(seq)) if i in seq[p]]
            yield i, new

    def i_extensions(proj, last_max):
        found: dict = {}
        for v, ends in proj.items():
            seq = seqs[v]
            seen = set()
            for p in ends:
                for i in seq[p]:
                    if i > last_max:
                        seen.add(i)
            for i in seen:
                found.setdefault(i, []).append(v)
        for i in sorted(found):
            vs = found[i]
            if len(vs) < minsup:
                continue
            new = {}
            for v in vs:
                seq = seqs[v]
                new[v] = [p for p in proj[v] if i in seq[p]]
            yield i, new

    def grow(pattern, proj):
        out.append(Pattern(pattern, len(proj)))
        last = pattern[-1]
        for i, new in i_extensions(proj, last[-1]):
            grow(pattern[:-1] + (last + (i,),), new)
        for i, new in s_extensions(proj):
            grow(pattern + ((i,),), new)

    start = {v: [-1] for v in range(len(seqs))}
    for i, proj in s_extensions(start):
        grow(((i,),), proj)
    return _sort(out)


def mine(dataset, theta) -> list:
    """Dispatch on the dataset kind."""
    if isinstance(dataset, SequenceDataset):
        return mine_frequent_sequences(dataset, theta)
    return mine_frequent_itemsets(dataset, theta)


def fi_length_histogram(patterns) -> dict:
    """``length -> number of patterns``, lengths in increasing order."""
    hist: dict = {}
    for p in patterns:
        hist[p.length] = hist.get(p.length, 0) + 1
    return dict(sorted(hist.items()))


def format_patterns(patterns, item_labels=None) -> str:
    """One pattern per line: ``a b -1 c #SUP: n`` (no ``-1`` for itemsets)."""
    def lab(i):
        return str(item_labels[i]) if item_labels is not None else str(i)

    lines = []
    for p in patterns:
        if p.is_sequential:
            body = " -1 ".join(" ".join(lab(i) for i in s) for s in p.items)
        else:
            body = " ".join(lab(i) for i in p.items)
        lines.append(f"{body} #SUP: {p.support}")
    return "".join(line + "\n" for line in lines)
