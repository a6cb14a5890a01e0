"""Proposers for transactional datasets (binary matrices).

All proposers take a :class:`ChainState` whose ``state`` is a
:class:`BiadjacencyState` and return a :class:`Proposal`; none of them
mutates the chain.
"""
from __future__ import annotations

from .base import SELF_LOOP, Proposal

__all__ = [
    "propose_alice_a",
    "propose_alice_b",
    "propose_gmmt",
    "propose_selfloop_naive",
]

# rejection attempts before falling back to materializing a difference set
_MAX_TRIES = 128


def _distinct_pair(members, rng):
    k = len(members)
    i = int(rng.random() * k)
    j = int(rng.random() * (k - 1))
    if j >= i:
        j += 1
    return members[i], members[j]


def _sample_difference(x, y, rng):
    """Uniform member of ``x - y`` for two IndexedSets, or None if empty."""
    items = x.items
    n = len(items)
    ypos = y.pos
    for _ in range(_MAX_TRIES):
        v = items[int(rng.random() * n)]
        if v not in ypos:
            return v
    z = tuple(x.pos.keys() - ypos.keys())
    if not z:
        return None
    return z[int(rng.random() * len(z))]


def _rso(rows, a, b, c, d, kind="rso"):
    """Swap (a,c),(b,d) -> (a,d),(b,c); requires c in a, d in b, not vice versa."""
    ra, rb = rows[a], rows[b]
    na = ra.difference((c,)).union((d,))
    nb = rb.difference((d,)).union((c,))
    return Proposal(kind, (ra, rb), (na, nb),
                    ((a, ra, na, (c,), (d,)), (b, rb, nb, (d,), (c,))))


def propose_alice_a(chain) -> Proposal:
    """Restricted swap: the two rows or the two columns share a degree."""
    rng = chain.rng
    rand = rng.random
    rows = chain.state.rows
    if rand() < 0.5:
        members = chain.row_picker.pick(rng)
        if members is None:
            return SELF_LOOP
        # _distinct_pair and _rso inlined: this is the hot path
        k = len(members)
        i = int(rand() * k)
        j = int(rand() * (k - 1))
        if j >= i:
            j += 1
        a, b = members[i], members[j]
        ra, rb = rows[a], rows[b]
        if ra == rb:
            return SELF_LOOP
        za = tuple(ra - rb)
        zb = tuple(rb - ra)
        c = za[int(rand() * len(za))]
        d = zb[int(rand() * len(zb))]
        cc, dd = (c,), (d,)
        na = ra.difference(cc).union(dd)
        nb = rb.difference(dd).union(cc)
        return Proposal("rso", (ra, rb), (na, nb),
                        ((a, ra, na, cc, dd), (b, rb, nb, dd, cc)))
    members = chain.col_picker.pick(rng)
    if members is None:
        return SELF_LOOP
    c, d = _distinct_pair(members, rng)
    cols = chain.state.cols
    p = _sample_difference(cols[c], cols[d], rng)
    if p is None:
        return SELF_LOOP
    q = _sample_difference(cols[d], cols[c], rng)
    # (p,c),(q,d) -> (p,d),(q,c)
    return _rso(rows, p, q, c, d)


def propose_alice_b(chain) -> Proposal:
    """Restricted binomial swap (curveball trade) between two rows or columns."""
    rng = chain.rng
    state = chain.state
    rows = state.rows
    if rng.random() < 0.5:
        members = chain.row_picker.pick(rng)
        if members is None:
            return SELF_LOOP
        a, b = _distinct_pair(members, rng)
        ra, rb = rows[a], rows[b]
        if ra == rb:
            return SELF_LOOP
        za = sorted(ra - rb)
        zb = sorted(rb - ra)
        u = frozenset(rng.sample(za + zb, len(za)))
        common = ra & rb
        na = common | u
        if na == ra:
            return SELF_LOOP
        nb = common.union(za, zb) - u
        a_drop = tuple(ra - na)
        a_add = tuple(na - ra)
        return Proposal("rrbso", (ra, rb), (na, nb),
                        ((a, ra, na, a_drop, a_add), (b, rb, nb, a_add, a_drop)))
    members = chain.col_picker.pick(rng)
    if members is None:
        return SELF_LOOP
    c, d = _distinct_pair(members, rng)
    cols = state.cols
    pc, pd = cols[c].pos.keys(), cols[d].pos.keys()
    zc = sorted(pc - pd)
    if not zc:
        return SELF_LOOP
    zd = sorted(pd - pc)
    u = set(rng.sample(zc + zd, len(zc)))
    # rows leaving column c move to d and vice versa
    to_d = [r for r in zc if r not in u]
    if not to_d:
        return SELF_LOOP
    to_c = [r for r in zd if r in u]
    removed, added, edit = [], [], []
    for r in to_d:
        old = rows[r]
        new = old.difference((c,)).union((d,))
        removed.append(old)
        added.append(new)
        edit.append((r, old, new, (c,), (d,)))
    for r in to_c:
        old = rows[r]
        new = old.difference((d,)).union((c,))
        removed.append(old)
        added.append(new)
        edit.append((r, old, new, (d,), (c,)))
    return Proposal("crbso", tuple(removed), tuple(added), tuple(edit))


class _EdgeListUpdate:
    """Keeps the GMMT edge list in step with an accepted swap."""

    __slots__ = ("i", "ei", "j", "ej", "old_i", "old_j")

    def __init__(self, i, old_i, ei, j, old_j, ej):
        self.i, self.old_i, self.ei = i, old_i, ei
        self.j, self.old_j, self.ej = j, old_j, ej

    def apply(self, chain):
        edges = chain.aux["edges"]
        edges[self.i] = self.ei
        edges[self.j] = self.ej

    def inverse(self):
        return _EdgeListUpdate(self.i, self.ei, self.old_i, self.j, self.ej, self.old_j)


def _edge_list(chain):
    edges = chain.aux.get("edges")
    if edges is None:
        edges = [(r, c) for r, row in enumerate(chain.state.rows) for c in sorted(row)]
        chain.aux["edges"] = edges
    return edges


def propose_gmmt(chain) -> Proposal:
    """Margin preserving checkerboard swap between two uniform edges."""
    rng = chain.rng
    edges = _edge_list(chain)
    n = len(edges)
    if n < 2:
        return SELF_LOOP
    i = int(rng.random() * n)
    j = int(rng.random() * n)
    a, c = edges[i]
    b, d = edges[j]
    rows = chain.state.rows
    ra, rb = rows[a], rows[b]
    if d in ra or c in rb:
        return SELF_LOOP
    p = _rso(rows, a, b, c, d, kind="gmmt-swap")
    p.extra = _EdgeListUpdate(i, (a, c), (a, d), j, (b, d), (b, c))
    return p


def propose_selfloop_naive(chain) -> Proposal:
    """Uniform 4-tuple (a, b, c, d); an RSO if it happens to be one."""
    rng = chain.rng
    state = chain.state
    rows = state.rows
    nr, nc = len(rows), state.num_cols
    a = int(rng.random() * nr)
    b = int(rng.random() * nr)
    c = int(rng.random() * nc)
    d = int(rng.random() * nc)
    ra, rb = rows[a], rows[b]
    if c not in ra or d not in rb or d in ra or c in rb:
        return SELF_LOOP
    if len(ra) != len(rb) and len(state.cols[c]) != len(state.cols[d]):
        return SELF_LOOP
    return _rso(rows, a, b, c, d)
