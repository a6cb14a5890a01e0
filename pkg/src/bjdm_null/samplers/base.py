"""Chain state, proposals and degree-class pickers shared by all samplers."""
from __future__ import annotations

import random
from bisect import bisect_right
from math import comb

import numpy as np

from ..bipartite import BiadjacencyState, BipartiteMultigraph
from ..multiplicity import DuplicateGroups

__all__ = ["Proposal", "SELF_LOOP", "ClassPicker", "ChainState", "chain_rng"]


class Proposal:
    """A proposed move.

    Attributes
    ----------
    kind : str
        ``self-loop``, ``rso``, ``rrbso``, ``crbso``, ``mrso`` or ``gmmt-swap``.
    removed, added : tuple
        Fingerprints of the rows (sequences) before and after the move.
    edit : tuple
        Matrix moves: ``(row, old_row, new_row, dropped_cols, added_cols)``
        per touched row.  Multigraph moves: ``(port, old_item, new_item)``
        per touched port.
    hastings : tuple of int or None
        ``(num, den)`` proposal-asymmetry factor, ``None`` when symmetric.
    extra : object
        Sampler private data applied together with the edit.
    """

    __slots__ = ("kind", "removed", "added", "edit", "hastings", "extra")

    def __init__(self, kind, removed=(), added=(), edit=(), hastings=None, extra=None):
        self.kind = kind
        self.removed = removed
        self.added = added
        self.edit = edit
        self.hastings = hastings
        self.extra = extra

    def __repr__(self):
        return f"Proposal({self.kind!r}, edit={self.edit!r})"

    @property
    def is_self_loop(self) -> bool:
        return self.kind == "self-loop"

    def inverse(self) -> "Proposal":
        """Proposal undoing this one once it has been applied."""
        if self.edit and len(self.edit[0]) == 5:
            edit = tuple((r, new, old, add, drop) for r, old, new, drop, add in self.edit)
        else:
            edit = tuple((p, new, old) for p, old, new in self.edit)
        hastings = None
        if self.hastings is not None:
            hastings = (self.hastings[1], self.hastings[0])
        extra = self.extra.inverse() if hasattr(self.extra, "inverse") else self.extra
        return Proposal(self.kind, self.added, self.removed, edit, hastings, extra)


SELF_LOOP = Proposal("self-loop")


class ClassPicker:
    """Draw a degree class with probability proportional to a pair count.

    Classes are chain invariant, so the cumulative weights are computed once.
    """

    __slots__ = ("classes", "cum", "total")

    def __init__(self, degree_classes: dict, weight):
        self.classes = []
        self.cum = []
        total = 0
        for _, members in degree_classes.items():
            w = weight(len(members))
            if w > 0:
                total += w
                self.classes.append(members)
                self.cum.append(total)
        self.total = total

    def pick(self, rng):
        """Members of the drawn class, or None when every weight is zero."""
        if not self.classes:
            return None
        if len(self.classes) == 1:
            return self.classes[0]
        return self.classes[bisect_right(self.cum, rng.random() * self.total)]


def pairs(k: int) -> int:
    return comb(k, 2)


def pairs_with_repeats(k: int) -> int:
    return comb(k + 1, 2)


def chain_rng(seed, chain_index: int = 0) -> random.Random:
    """Independent stream for chain ``chain_index`` of a run seeded by ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=(chain_index,))
    state = ss.generate_state(4, dtype=np.uint64)
    return random.Random(int.from_bytes(state.tobytes(), "little"))


class ChainState:
    """Everything a single chain owns.

    Attributes
    ----------
    state : BiadjacencyState or BipartiteMultigraph
    groups : DuplicateGroups
    rng : random.Random
    step_count : int
    aux : dict
        Sampler specific indexes (for example the edge list of GMMT).
    """

    def __init__(self, state, groups: DuplicateGroups, rng, check_invariants=False):
        self.state = state
        self.groups = groups
        self.rng = rng
        self.step_count = 0
        self.accepted = 0
        self.aux: dict = {}
        self.check_invariants = check_invariants
        self.preserves_bjdm = True
        self.is_matrix = isinstance(state, BiadjacencyState)
        if self.is_matrix:
            self.row_picker = ClassPicker(state.degree_class_rows, pairs)
            self.col_picker = ClassPicker(state.degree_class_cols, pairs)
        else:
            self.left_picker = ClassPicker(state.degree_class_left, pairs_with_repeats)
            self.right_picker = ClassPicker(state.degree_class_right, pairs)

    @classmethod
    def from_dataset(cls, dataset, rng, check_invariants=False) -> "ChainState":
        if hasattr(dataset, "transactions"):
            state = BiadjacencyState.from_dataset(dataset)
        else:
            state = BipartiteMultigraph.from_dataset(dataset)
        return cls(state, DuplicateGroups.from_dataset(dataset), rng, check_invariants)

    def apply(self, proposal: Proposal) -> None:
        """Apply the structural edit of ``proposal`` (not the group update)."""
        st = self.state
        if self.is_matrix:
            # inlined BiadjacencyState.set_row / IndexedSet updates
            rows, cols = st.rows, st.cols
            for r, _, new, drop, add in proposal.edit:
                rows[r] = new
                for c in drop:
                    s = cols[c]
                    pos, items = s.pos, s.items
                    i = pos.pop(r)
                    last = items.pop()
                    if i < len(items):
                        items[i] = last
                        pos[last] = i
                for c in add:
                    s = cols[c]
                    s.pos[r] = len(s.items)
                    s.items.append(r)
        else:
            for p, _, new in proposal.edit:
                st.set_port(p, new)
        if proposal.extra is not None:
            proposal.extra.apply(self)
