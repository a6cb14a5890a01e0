"""Proposers for sequence datasets (port-labelled multigraphs)."""
from __future__ import annotations

from collections import Counter

from .base import SELF_LOOP, Proposal

__all__ = ["propose_alice_s", "propose_gmmt_s", "heads_pair_count"]

_MAX_TRIES = 32


def heads_pair_count(seq_a, seq_b) -> int:
    """Number of port pairs (x in a, y in b) holding different itemsets.

    For ``a is b`` pass the same sequence twice: the count is over ordered
    pairs of ports of one sequence.
    """
    ca, cb = Counter(seq_a), Counter(seq_b)
    return len(seq_a) * len(seq_b) - sum(n * cb[w] for w, n in ca.items())


def _mrso(chain, x, y, kind="mrso"):
    """Exchange the itemsets held by ports ``x`` and ``y``."""
    g = chain.state
    pi, owner, off = g.port_item, g.port_owner, g.offsets
    c, d = pi[x], pi[y]
    a, b = owner[x], owner[y]
    sa = tuple(pi[off[a]:off[a + 1]])
    na = list(sa)
    na[x - off[a]] = d
    if a == b:
        na[y - off[a]] = c
        na = tuple(na)
        return Proposal(kind, (sa,), (na,), ((x, c, d), (y, d, c)))
    sb = tuple(pi[off[b]:off[b + 1]])
    nb = list(sb)
    nb[y - off[b]] = c
    na, nb = tuple(na), tuple(nb)
    return Proposal(kind, (sa, sb), (na, nb), ((x, c, d), (y, d, c)))


def _hastings(chain, proposal):
    """Proposal probability ratio nu_{G'}(G) / nu_G(G') for an mRSO.

    The tails route (through the two right vertices) is symmetric, and so is
    the heads route when both ports belong to one sequence.  For two distinct
    sequences of equal length the heads route picks the port pair uniformly
    from H_ab, whose size can change with the swap, so the ratio is
    ``(A/|H'| + B) / (A/|H| + B)`` with ``A`` the heads weight and ``B`` the
    tails weight of the move.
    """
    if len(proposal.removed) == 1:
        return None
    sa, sb = proposal.removed
    if len(sa) != len(sb):
        return None
    na, nb = proposal.added
    h_old = heads_pair_count(sa, sb)
    h_new = heads_pair_count(na, nb)
    if h_old == h_new:
        return None
    g = chain.state
    k = len(g.degree_class_left[len(sa)])
    s_left = chain.left_picker.total
    (x, c, d), _ = proposal.edit
    deg_c = len(g.incidence[c])
    if deg_c == len(g.incidence[d]):
        s_right = chain.right_picker.total
        heads = (k + 1) * s_right * deg_c * deg_c
        tails = s_left * k
        return h_old * (heads + tails * h_new), h_new * (heads + tails * h_old)
    return h_old, h_new


def propose_alice_s(chain) -> Proposal:
    """Multigraph restricted swap (mRSO) with an exact Hastings factor."""
    rng = chain.rng
    g = chain.state
    pi = g.port_item
    if rng.random() < 0.5:
        members = chain.left_picker.pick(rng)
        k = len(members)
        a = members[int(rng.random() * k)]
        b = members[int(rng.random() * k)]
        off = g.offsets
        oa, ob = off[a], off[b]
        m = off[a + 1] - oa
        for _ in range(_MAX_TRIES):
            x = oa + int(rng.random() * m)
            y = ob + int(rng.random() * m)
            if pi[x] != pi[y]:
                break
        else:
            cand = [(x, y) for x in range(oa, oa + m) for y in range(ob, ob + m)
                    if pi[x] != pi[y]]
            if not cand:
                return SELF_LOOP
            x, y = cand[int(rng.random() * len(cand))]
    else:
        members = chain.right_picker.pick(rng)
        if members is None:
            return SELF_LOOP
        k = len(members)
        i = int(rng.random() * k)
        j = int(rng.random() * (k - 1))
        if j >= i:
            j += 1
        ic, id_ = g.incidence[members[i]].items, g.incidence[members[j]].items
        x = ic[int(rng.random() * len(ic))]
        y = id_[int(rng.random() * len(id_))]
    p = _mrso(chain, x, y)
    p.hastings = _hastings(chain, p)
    return p


def propose_gmmt_s(chain) -> Proposal:
    """Swap the itemsets of two uniform edges; parallel edges are allowed."""
    rng = chain.rng
    pi = chain.state.port_item
    n = len(pi)
    x = int(rng.random() * n)
    y = int(rng.random() * n)
    if pi[x] == pi[y]:
        return SELF_LOOP
    return _mrso(chain, x, y, kind="gmmt-swap")
