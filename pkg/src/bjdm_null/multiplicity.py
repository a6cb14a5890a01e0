"""Number of matrices representing a dataset, and its ratio between neighbours.

A dataset is a bag of transactions (or sequences).  Reordering the rows of a
matrix gives another matrix for the same dataset, so a dataset D with
``|T_l|`` transactions of length ``l``, split into groups of identical
content of sizes ``n_g``, is represented by

    Q(D) = prod_l |T_l|! / prod_g n_g!

distinct matrices (rows of different lengths can never be exchanged by a
degree preserving move, hence the product over lengths).  A chain on matrices
corrects for this with the ratio Q(D) / Q(D').

Fingerprints are the full contents themselves (frozensets of item ids for
transactions, tuples of itemset ids for sequences).  Python hashes them for
indexing and compares by content, so two different groups can never be
merged.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

__all__ = [
    "DuplicateGroups",
    "log_num_matrices",
    "num_matrices_exact",
    "transition_ratio",
    "ratio_terms",
    "apply_update",
]


class DuplicateGroups:
    """Occurrence counts of each distinct transaction (or sequence).

    Attributes
    ----------
    counts : dict
        ``fingerprint -> number of occurrences`` (only positive counts).
    totals : dict
        ``length -> |T_length|``; unchanged by :func:`apply_update`.
    """

    __slots__ = ("counts", "totals")

    def __init__(self, fingerprints=()):
        self.counts: dict = dict(Counter(fingerprints))
        totals: dict = {}
        for fp, n in self.counts.items():
            totals[len(fp)] = totals.get(len(fp), 0) + n
        self.totals = totals

    @classmethod
    def from_dataset(cls, dataset) -> "DuplicateGroups":
        """Groups of a TransactionalDataset or SequenceDataset."""
        if hasattr(dataset, "transactions"):
            return cls(frozenset(t) for t in dataset.transactions)
        return cls(tuple(s) for s in dataset.sequences)

    def __len__(self):
        return sum(self.totals.values())

    def __eq__(self, other):
        if not isinstance(other, DuplicateGroups):
            return NotImplemented
        return self.counts == other.counts and self.totals == other.totals

    def __repr__(self):
        return f"DuplicateGroups({len(self.counts)} groups, {len(self)} rows)"

    def count(self, fingerprint) -> int:
        return self.counts.get(fingerprint, 0)

    def copy(self) -> "DuplicateGroups":
        out = DuplicateGroups.__new__(DuplicateGroups)
        out.counts = dict(self.counts)
        out.totals = dict(self.totals)
        return out


def log_num_matrices(groups: DuplicateGroups) -> float:
    """Natural logarithm of Q(D), via log-gamma."""
    out = sum(math.lgamma(t + 1) for t in groups.totals.values())
    out -= sum(math.lgamma(n + 1) for n in groups.counts.values())
    return out


def num_matrices_exact(groups: DuplicateGroups) -> int:
    """Q(D) as an exact integer; intended for small test instances."""
    num = 1
    for t in groups.totals.values():
        num *= math.factorial(t)
    den = 1
    for n in groups.counts.values():
        den *= math.factorial(n)
    q, r = divmod(num, den)
    assert r == 0
    return q


def ratio_terms(counts: dict, removed, added) -> tuple:
    """Exact ``Q(D) / Q(D')`` as an integer pair ``(num, den)``.

    Removals are processed first, then additions, against a scratch overlay
    of ``counts`` (which is not modified).  Removing a member of a group of
    current size ``n`` contributes ``1 / n``; adding to a group of current
    size ``n`` contributes ``n + 1``.
    """
    if len(removed) == 2 and len(added) == 2:
        # two-row moves; valid when the four fingerprints are pairwise distinct
        r1, r2 = removed
        a1, a2 = added
        if r1 != r2 and a1 != a2 and a1 != r1 and a1 != r2 and a2 != r1 and a2 != r2:
            return ((counts.get(a1, 0) + 1) * (counts.get(a2, 0) + 1),
                    counts[r1] * counts[r2])
    elif len(removed) == 1 and len(added) == 1:
        # the common single-row case needs no overlay
        r, a = removed[0], added[0]
        if r == a:
            return 1, 1
        n = counts.get(r, 0)
        if n <= 0:
            raise KeyError("removed fingerprint is not present")
        return counts.get(a, 0) + 1, n
    delta: dict = {}
    num = den = 1
    for fp in removed:
        n = counts.get(fp, 0) + delta.get(fp, 0)
        if n <= 0:
            raise KeyError("removed fingerprint is not present")
        den *= n
        delta[fp] = delta.get(fp, 0) - 1
    for fp in added:
        n = counts.get(fp, 0) + delta.get(fp, 0)
        num *= n + 1
        delta[fp] = delta.get(fp, 0) + 1
    return num, den


def transition_ratio(groups: DuplicateGroups, removed, added) -> Fraction:
    """Exact ratio ``Q(D) / Q(D')`` for the move replacing ``removed`` by ``added``.

    Parameters
    ----------
    groups : DuplicateGroups
        Groups of the current dataset D; not mutated.
    removed, added : sequence of fingerprints
        Contents of the rows before and after the move.  Must have the same
        multiset of lengths.
    """
    if sorted(len(x) for x in removed) != sorted(len(x) for x in added):
        raise ValueError("removed and added rows must have matching lengths")
    num, den = ratio_terms(groups.counts, list(removed), list(added))
    return Fraction(num, den)


def apply_update(groups: DuplicateGroups, removed, added) -> None:
    """Replace the rows ``removed`` by ``added`` in place."""
    counts = groups.counts
    for fp in removed:
        n = counts.get(fp, 0)
        if n <= 0:
            raise KeyError("removed fingerprint is not present")
        if n == 1:
            del counts[fp]
        else:
            counts[fp] = n - 1
    for fp in added:
        counts[fp] = counts.get(fp, 0) + 1
