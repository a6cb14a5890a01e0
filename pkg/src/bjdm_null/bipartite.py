"""Chain states and the degree statistics of their bipartite (multi)graphs.

Two structural states are provided:

* :class:`BiadjacencyState` -- a sparse binary matrix (transactions x items)
  used by the transactional samplers.
* :class:`BipartiteMultigraph` -- sequences as left vertices with ordered
  ports, itemsets as right vertices, used by the sequence samplers.

Both expose the degree classes (rows/left vertices grouped by degree and
columns/right vertices grouped by degree).  Every move implemented in
:mod:`bjdm_null.samplers` preserves all degrees, so the classes are computed
once and never rebuilt.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .dataset_io import SequenceDataset, TransactionalDataset

__all__ = [
    "IndexedSet",
    "BiadjacencyState",
    "BipartiteMultigraph",
    "Bjdm",
    "bjdm_of_matrix",
    "bjdm_of_multigraph",
    "bjdm_of_dataset",
    "caterpillars_from_bjdm",
    "caterpillars_direct",
    "degree_histograms",
    "count_l3_paths_multigraph",
]


class IndexedSet:
    """Set with O(1) add, discard and uniform random choice."""

    __slots__ = ("items", "pos")

    def __init__(self, iterable=()):
        self.items = list(dict.fromkeys(iterable))
        self.pos = {x: i for i, x in enumerate(self.items)}

    def __contains__(self, x):
        return x in self.pos

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __repr__(self):
        return f"IndexedSet({sorted(self.items)!r})"

    def add(self, x):
        pos = self.pos
        if x not in pos:
            pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x):
        pos = self.pos
        i = pos.pop(x, None)
        if i is None:
            return
        items = self.items
        last = items.pop()
        if i < len(items):
            items[i] = last
            pos[last] = i

    def copy(self) -> "IndexedSet":
        out = IndexedSet.__new__(IndexedSet)
        out.items = list(self.items)
        out.pos = dict(self.pos)
        return out


def _degree_classes(degrees) -> dict:
    classes: dict = {}
    for v, d in enumerate(degrees):
        if d > 0:
            classes.setdefault(int(d), []).append(v)
    return {d: tuple(vs) for d, vs in sorted(classes.items())}


class BiadjacencyState:
    """Mutable sparse biadjacency matrix of a transactional dataset.

    Rows are stored as frozensets of column indices (they double as the
    duplicate-group fingerprints); columns as :class:`IndexedSet` of row
    indices so that a uniform member can be drawn in O(1).

    Attributes
    ----------
    rows : list of frozenset
    cols : list of IndexedSet
    row_sums, col_sums : ndarray
        Degrees at construction time; invariant under every sampler move.
    degree_class_rows, degree_class_cols : dict
        ``degree -> tuple of indices`` (the sets A_m and B_n).
    """

    def __init__(self, rows, num_cols: int):
        self.rows = [frozenset(r) for r in rows]
        self.num_cols = int(num_cols)
        cols = [[] for _ in range(self.num_cols)]
        for r, row in enumerate(self.rows):
            for c in row:
                cols[c].append(r)
        self.cols = [IndexedSet(c) for c in cols]
        self.row_sums = np.array([len(r) for r in self.rows], dtype=np.int64)
        self.col_sums = np.array([len(c) for c in self.cols], dtype=np.int64)
        self.degree_class_rows = _degree_classes(self.row_sums)
        self.degree_class_cols = _degree_classes(self.col_sums)

    @classmethod
    def from_dataset(cls, dataset: TransactionalDataset) -> "BiadjacencyState":
        return cls(dataset.transactions, dataset.num_items)

    @classmethod
    def from_dense(cls, matrix) -> "BiadjacencyState":
        m = np.asarray(matrix)
        return cls([np.flatnonzero(row) for row in m], m.shape[1])

    def to_dataset(self, item_labels=None) -> TransactionalDataset:
        labels = list(item_labels) if item_labels is not None else [
            str(i) for i in range(self.num_cols)]
        return TransactionalDataset([tuple(sorted(r)) for r in self.rows], labels)

    @property
    def row_sets(self) -> list:
        return self.rows

    @property
    def col_sets(self) -> list:
        return self.cols

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_edges(self) -> int:
        return int(self.row_sums.sum())

    def has(self, r: int, c: int) -> bool:
        return c in self.rows[r]

    def dense(self) -> np.ndarray:
        m = np.zeros((self.num_rows, self.num_cols), dtype=np.int8)
        for r, row in enumerate(self.rows):
            m[r, list(row)] = 1
        return m

    def edges(self):
        for r, row in enumerate(self.rows):
            for c in row:
                yield r, c

    def set_row(self, r: int, new_row: frozenset, drop, add) -> None:
        """Replace row ``r`` by ``new_row``; ``drop``/``add`` are the changed columns."""
        self.rows[r] = new_row
        cols = self.cols
        for c in drop:
            cols[c].discard(r)
        for c in add:
            cols[c].add(r)

    def copy(self) -> "BiadjacencyState":
        out = BiadjacencyState.__new__(BiadjacencyState)
        out.rows = list(self.rows)
        out.num_cols = self.num_cols
        out.cols = [c.copy() for c in self.cols]
        out.row_sums = self.row_sums
        out.col_sums = self.col_sums
        out.degree_class_rows = self.degree_class_rows
        out.degree_class_cols = self.degree_class_cols
        return out

    def check_consistency(self) -> None:
        """Raise AssertionError unless rows and columns are transposes."""
        for r, row in enumerate(self.rows):
            for c in row:
                if r not in self.cols[c]:
                    raise AssertionError(f"entry ({r},{c}) missing from column index")
        if sum(len(c) for c in self.cols) != sum(len(r) for r in self.rows):
            raise AssertionError("column index has extra entries")
        if not np.array_equal(self.row_sums, [len(r) for r in self.rows]):
            raise AssertionError("row sums changed")
        if not np.array_equal(self.col_sums, [len(c) for c in self.cols]):
            raise AssertionError("column sums changed")


class BipartiteMultigraph:
    """Port-labelled bipartite multigraph of a sequence dataset.

    Every edge is identified by a global port id ``p``: it belongs to left
    vertex ``port_owner[p]`` at position ``p - offsets[port_owner[p]]`` and
    joins the right vertex ``port_item[p]``.

    Attributes
    ----------
    port_item : list of int
    offsets : list of int
        ``offsets[v]:offsets[v + 1]`` are the ports of left vertex ``v``.
    port_owner : list of int
    incidence : list of IndexedSet
        Ports currently attached to each right vertex.
    left_degrees, right_degrees : ndarray
    degree_class_left, degree_class_right : dict
    """

    def __init__(self, sequences, num_right: int):
        self.port_item = [int(w) for s in sequences for w in s]
        offsets = [0]
        owner = []
        for v, s in enumerate(sequences):
            if len(s) == 0:
                raise ValueError(f"sequence {v} is empty")
            offsets.append(offsets[-1] + len(s))
            owner.extend([v] * len(s))
        self.offsets = offsets
        self.port_owner = owner
        self.num_right = int(num_right)
        inc = [[] for _ in range(self.num_right)]
        for p, w in enumerate(self.port_item):
            inc[w].append(p)
        self.incidence = [IndexedSet(x) for x in inc]
        self.left_degrees = np.diff(np.array(offsets, dtype=np.int64))
        self.right_degrees = np.array([len(x) for x in self.incidence], dtype=np.int64)
        self.degree_class_left = _degree_classes(self.left_degrees)
        self.degree_class_right = _degree_classes(self.right_degrees)

    @classmethod
    def from_dataset(cls, dataset: SequenceDataset) -> "BipartiteMultigraph":
        return cls(dataset.sequences, len(dataset.dictionary))

    @property
    def num_left(self) -> int:
        return len(self.offsets) - 1

    @property
    def num_edges(self) -> int:
        return len(self.port_item)

    def sequence(self, v: int) -> tuple:
        return tuple(self.port_item[self.offsets[v]:self.offsets[v + 1]])

    def sequences(self) -> list:
        pi, off = self.port_item, self.offsets
        return [tuple(pi[off[v]:off[v + 1]]) for v in range(self.num_left)]

    def to_dataset(self, template: SequenceDataset) -> SequenceDataset:
        return SequenceDataset(self.sequences(), template.dictionary,
                               template.item_labels)

    def edges(self):
        """Yield edges as ``(left vertex, port position, right vertex)``."""
        off = self.offsets
        for p, w in enumerate(self.port_item):
            v = self.port_owner[p]
            yield v, p - off[v], w

    def set_port(self, p: int, w: int) -> None:
        old = self.port_item[p]
        if old == w:
            return
        self.incidence[old].discard(p)
        self.incidence[w].add(p)
        self.port_item[p] = w

    def copy(self) -> "BipartiteMultigraph":
        out = BipartiteMultigraph.__new__(BipartiteMultigraph)
        out.port_item = list(self.port_item)
        out.offsets = self.offsets
        out.port_owner = self.port_owner
        out.num_right = self.num_right
        out.incidence = [x.copy() for x in self.incidence]
        out.left_degrees = self.left_degrees
        out.right_degrees = self.right_degrees
        out.degree_class_left = self.degree_class_left
        out.degree_class_right = self.degree_class_right
        return out

    def check_consistency(self) -> None:
        for p, w in enumerate(self.port_item):
            if p not in self.incidence[w]:
                raise AssertionError(f"port {p} missing from incidence of {w}")
        if sum(len(x) for x in self.incidence) != len(self.port_item):
            raise AssertionError("incidence lists have extra entries")
        if not np.array_equal(self.right_degrees, [len(x) for x in self.incidence]):
            raise AssertionError("right degrees changed")


@dataclass(frozen=True, eq=False)
class Bjdm:
    """Bipartite joint degree matrix.

    ``entries[i - 1, j - 1]`` counts the edges joining a left vertex of
    degree ``i`` to a right vertex of degree ``j``.
    """

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=np.int64))
        if self.entries.ndim != 2:
            raise ValueError("BJDM must be a 2-d array")

    @property
    def k_left(self) -> int:
        return self.entries.shape[0]

    @property
    def k_right(self) -> int:
        return self.entries.shape[1]

    @property
    def num_edges(self) -> int:
        return int(self.entries.sum())

    def at(self, i: int, j: int) -> int:
        """Entry for left degree ``i`` and right degree ``j`` (1-indexed)."""
        if 1 <= i <= self.k_left and 1 <= j <= self.k_right:
            return int(self.entries[i - 1, j - 1])
        return 0

    def __eq__(self, other):
        if not isinstance(other, Bjdm):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"Bjdm({self.entries.tolist()!r})"

    def checksum(self) -> str:
        h = hashlib.sha256()
        h.update(np.asarray(self.entries.shape, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.entries).tobytes())
        return h.hexdigest()

    def to_csv(self) -> str:
        """One row per left degree; the header lists the right degrees."""
        header = ["left_degree"] + [str(j) for j in range(1, self.k_right + 1)]
        lines = [",".join(header)]
        for i, row in enumerate(self.entries, start=1):
            lines.append(",".join([str(i)] + [str(int(x)) for x in row]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "Bjdm":
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        return cls(np.array([[int(x) for x in r[1:]] for r in rows], dtype=np.int64)
                   .reshape(len(rows), -1))


def _bjdm_from_edges(left_deg, right_deg, left_idx, right_idx) -> Bjdm:
    left_deg = np.asarray(left_deg, dtype=np.int64)
    right_deg = np.asarray(right_deg, dtype=np.int64)
    k_l = int(left_deg.max()) if left_deg.size else 0
    k_r = int(right_deg.max()) if right_deg.size else 0
    entries = np.zeros((k_l, k_r), dtype=np.int64)
    if len(left_idx):
        li = np.asarray(left_idx, dtype=np.int64)
        ri = np.asarray(right_idx, dtype=np.int64)
        np.add.at(entries, (left_deg[li] - 1, right_deg[ri] - 1), 1)
    return Bjdm(entries)


def bjdm_of_matrix(state: BiadjacencyState) -> Bjdm:
    """BJDM computed from the current contents of ``state``.

    Degrees are recounted from the row and column sets rather than taken
    from the cached sums, so the result can be used to detect drift.
    """
    row_deg = [len(r) for r in state.rows]
    col_deg = [len(c) for c in state.cols]
    li = [r for r, row in enumerate(state.rows) for _ in row]
    ri = [c for row in state.rows for c in row]
    return _bjdm_from_edges(row_deg, col_deg, li, ri)


def bjdm_of_multigraph(g: BipartiteMultigraph) -> Bjdm:
    """BJDM of a multigraph; parallel edges are counted separately."""
    right_deg = np.bincount(np.asarray(g.port_item, dtype=np.int64),
                            minlength=g.num_right)
    return _bjdm_from_edges(g.left_degrees, right_deg, g.port_owner, g.port_item)


def bjdm_of_dataset(dataset) -> Bjdm:
    if isinstance(dataset, SequenceDataset):
        return bjdm_of_multigraph(BipartiteMultigraph.from_dataset(dataset))
    return bjdm_of_matrix(BiadjacencyState.from_dataset(dataset))


def caterpillars_from_bjdm(j: Bjdm) -> int:
    """Number of simple paths of length three determined by a BJDM."""
    e = j.entries
    if e.shape[0] < 2 or e.shape[1] < 2:
        return 0
    wl = np.arange(1, e.shape[0], dtype=object)[:, None]
    wr = np.arange(1, e.shape[1], dtype=object)[None, :]
    return int((e[1:, 1:].astype(object) * wl * wr).sum())


def caterpillars_direct(state: BiadjacencyState) -> int:
    """Sum of ``(deg(u) - 1) * (deg(v) - 1)`` over the edges ``(u, v)``."""
    col_deg = [len(c) for c in state.cols]
    total = 0
    for row in state.rows:
        du = len(row) - 1
        if du:
            total += du * sum(col_deg[c] - 1 for c in row)
    return total


def degree_histograms(j: Bjdm) -> tuple:
    """Recover the left and right degree histograms from a BJDM.

    Returns two dicts ``degree -> number of vertices``.  Raises ValueError if
    a row or column total is not a multiple of its degree, which means the
    matrix cannot be the BJDM of any graph.
    """
    left, right = {}, {}
    for i, total in enumerate(j.entries.sum(axis=1), start=1):
        q, r = divmod(int(total), i)
        if r:
            raise ValueError(f"left degree {i}: {total} edges is not a multiple of {i}")
        if q:
            left[i] = q
    for d, total in enumerate(j.entries.sum(axis=0), start=1):
        q, r = divmod(int(total), d)
        if r:
            raise ValueError(f"right degree {d}: {total} edges is not a multiple of {d}")
        if q:
            right[d] = q
    return left, right


def count_l3_paths_multigraph(g: BipartiteMultigraph) -> int:
    """Count walks made of three distinct edges in a multigraph.

    A walk is identified by its middle edge ``(u, v)`` plus one further edge
    at ``u`` and one at ``v``; a walk and its reversal share all three and are
    counted once.  Both side edges may be parallel to the middle one, but not
    the same edge, hence the correction ``m (m - 1)`` per vertex pair joined
    by ``m`` parallel edges.
    """
    right_deg = np.bincount(np.asarray(g.port_item, dtype=np.int64),
                            minlength=g.num_right)
    total = 0
    pairs: Counter = Counter()
    for p, w in enumerate(g.port_item):
        v = g.port_owner[p]
        total += (int(g.left_degrees[v]) - 1) * (int(right_deg[w]) - 1)
        pairs[v, w] += 1
    return total - sum(m * (m - 1) for m in pairs.values())
