"""Brute-force reference implementations used by the tests.

They are deliberately naive: enumeration over permutations, paths, powersets
and swap neighbourhoods, sharing no code with the package beyond the dataset
containers.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from collections import Counter, deque

from bjdm_null import sequential_from_lists, transactional_from_lists

GROCERY_BASKETS = [
    ["carrot", "broccoli", "apple", "banana"],
    ["carrot", "bread", "milk", "cheese", "eggs"],
    ["broccoli", "bread", "milk", "tomato", "onion", "pepper"],
]

# the left multigraph of the multigraph swap figure and its image
SWAP_PAIR_BEFORE = [[["A"], ["B"], ["B"]], [["B"], ["C"], ["D"]]]
SWAP_PAIR_AFTER = [[["B"], ["B"], ["B"]], [["A"], ["C"], ["D"]]]


def grocery():
    return transactional_from_lists(GROCERY_BASKETS)


def swap_pair():
    return sequential_from_lists(SWAP_PAIR_BEFORE), sequential_from_lists(SWAP_PAIR_AFTER)


def brute_num_matrices(rows) -> int:
    """Distinct row orderings of a bag of rows."""
    rows = [tuple(sorted(r)) for r in rows]
    # rows of different lengths cannot be exchanged, so permute within lengths
    by_len: dict = {}
    for r in rows:
        by_len.setdefault(len(r), []).append(r)
    total = 1
    for group in by_len.values():
        total *= len(set(itertools.permutations(group)))
    return total


def brute_num_matrices_full(rows) -> int:
    """Distinct matrices with the same row-sum vector, over all permutations."""
    rows = [tuple(sorted(r)) for r in rows]
    sums = [len(r) for r in rows]
    seen = set()
    for perm in itertools.permutations(rows):
        if [len(r) for r in perm] == sums:
            seen.add(perm)
    return len(seen)


def brute_bjdm(rows) -> Counter:
    col_deg = Counter(i for r in rows for i in set(r))
    return Counter((len(set(r)), col_deg[i]) for r in rows for i in set(r))


def simple_paths_of_length_3(rows) -> int:
    """Enumerate vertex sequences x0-x1-x2-x3 (distinct), halve for reversal."""
    adj: dict = {}
    for k, r in enumerate(rows):
        for i in set(r):
            adj.setdefault(("L", k), set()).add(("R", i))
            adj.setdefault(("R", i), set()).add(("L", k))
    count = 0
    for x0 in adj:
        for x1 in adj[x0]:
            for x2 in adj[x1]:
                if x2 == x0:
                    continue
                for x3 in adj[x2]:
                    if x3 not in (x1, x0):
                        count += 1
    assert count % 2 == 0
    return count // 2


def multigraph_walks_of_3_edges(sequences) -> int:
    """Ordered triples of distinct edges forming a walk, halved for reversal."""
    edges = [(("L", v), ("R", w)) for v, s in enumerate(sequences) for w in s]
    n = len(edges)
    count = 0
    for i, j, k in itertools.permutations(range(n), 3):
        u, v = edges[j]
        for a, b in ((u, v), (v, u)):
            if a in edges[i] and b in edges[k]:
                count += 1
    assert count % 2 == 0
    return count // 2


def brute_frequent_itemsets(rows, minsup) -> dict:
    items = sorted({i for r in rows for i in r})
    sets = [set(r) for r in rows]
    out = {}
    for k in range(1, len(items) + 1):
        found = False
        for combo in itertools.combinations(items, k):
            s = sum(1 for r in sets if set(combo) <= r)
            if s >= minsup:
                out[combo] = s
                found = True
        if not found:
            break
    return out


def _contains(seq, pattern):
    k = 0
    for itemset in seq:
        if k < len(pattern) and set(pattern[k]) <= set(itemset):
            k += 1
    return k == len(pattern)


def brute_frequent_sequences(seqs, minsup, max_len) -> dict:
    """All patterns with up to ``max_len`` itemsets, by exhaustive generation."""
    items = sorted({i for s in seqs for x in s for i in x})
    subsets = [c for k in range(1, len(items) + 1)
               for c in itertools.combinations(items, k)]
    out = {}
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for pat in frontier:
            for x in subsets:
                cand = pat + (x,)
                s = sum(1 for q in seqs if _contains(q, cand))
                if s >= minsup:
                    out[cand] = s
                    nxt.append(cand)
        frontier = nxt
    return out


def _key_rows(rows):
    return tuple(sorted(tuple(sorted(r)) for r in rows))


def rso_neighbours(rows):
    """All datasets one RSO away from ``rows`` (a list of item tuples)."""
    rows = [tuple(sorted(r)) for r in rows]
    col_deg = Counter(i for r in rows for i in r)
    out = set()
    for a, b in itertools.permutations(range(len(rows)), 2):
        ra, rb = set(rows[a]), set(rows[b])
        for c in ra - rb:
            for d in rb - ra:
                if len(ra) != len(rb) and col_deg[c] != col_deg[d]:
                    continue
                new = list(rows)
                new[a] = tuple(sorted(ra - {c} | {d}))
                new[b] = tuple(sorted(rb - {d} | {c}))
                out.add(_key_rows(new))
    return out


def bfs_null_set_transactional(rows) -> set:
    start = _key_rows(rows)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in rso_neighbours(cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def mrso_neighbours(seqs):
    seqs = [tuple(s) for s in seqs]
    multi = Counter(w for s in seqs for w in s)
    ports = [(v, k) for v, s in enumerate(seqs) for k in range(len(s))]
    out = set()
    for (a, x), (b, y) in itertools.combinations(ports, 2):
        c, d = seqs[a][x], seqs[b][y]
        if c == d:
            continue
        if len(seqs[a]) != len(seqs[b]) and multi[c] != multi[d]:
            continue
        new = [list(s) for s in seqs]
        new[a][x] = d
        new[b][y] = c
        out.add(tuple(sorted(tuple(s) for s in new)))
    return out


def bfs_null_set_sequential(seqs) -> set:
    start = tuple(sorted(tuple(s) for s in seqs))
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in mrso_neighbours(cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def total_variation(counts: Counter, support) -> float:
    """TV distance between empirical ``counts`` and uniform over ``support``."""
    n = sum(counts.values())
    u = 1.0 / len(support)
    keys = set(support) | set(counts)
    return 0.5 * sum(abs(counts.get(k, 0) / n - (u if k in support else 0.0)) for k in keys)


def tv_between(c1: Counter, c2: Counter) -> float:
    n1, n2 = sum(c1.values()), sum(c2.values())
    keys = set(c1) | set(c2)
    return 0.5 * sum(abs(c1.get(k, 0) / n1 - c2.get(k, 0) / n2) for k in keys)


# Tiny instances for the uniformity checks.  Both contain duplicated rows,
# so a chain without the multiplicity correction would be visibly biased.
TINY_TRANSACTIONAL = [
    ["a", "b"], ["a", "b"], ["c", "d"], ["a", "c"], ["b", "e", "d"],
]
TINY_SEQUENTIAL = [
    [["x"], ["y"]], [["x"], ["y"]], [["z"], ["x"], ["y"]], [["x"]],
]


# Exact proposal kernels.  Each maps a labelled state (tuple of rows, or of
# port sequences) to {next labelled state: probability}, by enumerating every
# random choice of the proposal procedure with exact fractions.

def _classes(degrees):
    out: dict = {}
    for i, d in enumerate(degrees):
        out.setdefault(d, []).append(i)
    return out


def _columns(rows):
    cols: dict = {}
    for r, row in enumerate(rows):
        for c in row:
            cols.setdefault(c, set()).add(r)
    return cols


def _swap_rows(rows, a, b, c, d):
    new = [set(r) for r in rows]
    new[a] = (new[a] - {c}) | {d}
    new[b] = (new[b] - {d}) | {c}
    return tuple(frozenset(r) for r in new)


def _add(out, key, p):
    out[key] = out.get(key, Fraction(0)) + p


def _side_weights(classes, weight):
    ws = {d: weight(len(m)) for d, m in classes.items()}
    total = sum(ws.values())
    return {d: Fraction(w, total) for d, w in ws.items() if w} if total else {}


def alice_a_kernel(rows) -> dict:
    rows = tuple(frozenset(r) for r in rows)
    cols = _columns(rows)
    out: dict = {}
    half = Fraction(1, 2)
    for m, pm in _side_weights(_classes([len(r) for r in rows]),
                               lambda k: k * (k - 1) // 2).items():
        members = _classes([len(r) for r in rows])[m]
        pab = Fraction(1, len(members) * (len(members) - 1))
        for a, b in itertools.permutations(members, 2):
            za, zb = rows[a] - rows[b], rows[b] - rows[a]
            if not za:
                _add(out, rows, half * pm * pab)
                continue
            for c in za:
                for d in zb:
                    _add(out, _swap_rows(rows, a, b, c, d),
                         half * pm * pab / (len(za) * len(zb)))
    col_ids = sorted(cols)
    col_cls = _classes([len(cols[c]) for c in col_ids])
    for n, pn in _side_weights(col_cls, lambda k: k * (k - 1) // 2).items():
        members = [col_ids[i] for i in col_cls[n]]
        pcd = Fraction(1, len(members) * (len(members) - 1))
        for c, d in itertools.permutations(members, 2):
            kc, kd = cols[c] - cols[d], cols[d] - cols[c]
            if not kc:
                _add(out, rows, half * pn * pcd)
                continue
            for p in kc:
                for q in kd:
                    _add(out, _swap_rows(rows, p, q, c, d),
                         half * pn * pcd / (len(kc) * len(kd)))
    lost = 1 - sum(out.values())
    if lost:
        _add(out, rows, lost)  # a side without any pair
    return out


def alice_b_kernel(rows) -> dict:
    rows = tuple(frozenset(r) for r in rows)
    cols = _columns(rows)
    out: dict = {}
    half = Fraction(1, 2)
    row_cls = _classes([len(r) for r in rows])
    for m, pm in _side_weights(row_cls, lambda k: k * (k - 1) // 2).items():
        members = row_cls[m]
        pab = Fraction(1, len(members) * (len(members) - 1))
        for a, b in itertools.permutations(members, 2):
            za, zb = rows[a] - rows[b], rows[b] - rows[a]
            pool = sorted(za | zb)
            subsets = list(itertools.combinations(pool, len(za)))
            common = rows[a] & rows[b]
            for u in subsets:
                new = list(rows)
                new[a] = common | frozenset(u)
                new[b] = common | (frozenset(pool) - frozenset(u))
                _add(out, tuple(new), half * pm * pab / len(subsets))
    col_ids = sorted(cols)
    col_cls = _classes([len(cols[c]) for c in col_ids])
    for n, pn in _side_weights(col_cls, lambda k: k * (k - 1) // 2).items():
        members = [col_ids[i] for i in col_cls[n]]
        pcd = Fraction(1, len(members) * (len(members) - 1))
        for c, d in itertools.permutations(members, 2):
            kc, kd = cols[c] - cols[d], cols[d] - cols[c]
            pool = sorted(kc | kd)
            subsets = list(itertools.combinations(pool, len(kc)))
            for u in subsets:
                new = [set(r) for r in rows]
                for r in pool:
                    new[r] -= {c, d}
                    new[r].add(c if r in u else d)
                _add(out, tuple(frozenset(r) for r in new), half * pn * pcd / len(subsets))
    lost = 1 - sum(out.values())
    if lost:
        _add(out, rows, lost)
    return out


def alice_s_kernel(seqs) -> dict:
    """Kernel of the multigraph sampler, heads pairs drawn with replacement."""
    seqs = tuple(tuple(s) for s in seqs)
    ports = [(v, k) for v, s in enumerate(seqs) for k in range(len(s))]
    out: dict = {}
    half = Fraction(1, 2)

    def swap(x, y):
        new = [list(s) for s in seqs]
        (a, i), (b, j) = x, y
        new[a][i], new[b][j] = seqs[b][j], seqs[a][i]
        return tuple(tuple(s) for s in new)

    left_cls = _classes([len(s) for s in seqs])
    for m, pm in _side_weights(left_cls, lambda k: k * (k + 1) // 2).items():
        members = left_cls[m]
        pab = Fraction(1, len(members) ** 2)
        for a in members:
            for b in members:
                h = [((a, i), (b, j)) for i in range(m) for j in range(m)
                     if seqs[a][i] != seqs[b][j]]
                if not h:
                    _add(out, seqs, half * pm * pab)
                    continue
                for x, y in h:
                    _add(out, swap(x, y), half * pm * pab / len(h))
    inc: dict = {}
    for v, k in ports:
        inc.setdefault(seqs[v][k], []).append((v, k))
    items = sorted(inc)
    right_cls = _classes([len(inc[w]) for w in items])
    for n, pn in _side_weights(right_cls, lambda k: k * (k - 1) // 2).items():
        members = [items[i] for i in right_cls[n]]
        pcd = Fraction(1, len(members) * (len(members) - 1))
        for c, d in itertools.permutations(members, 2):
            for x in inc[c]:
                for y in inc[d]:
                    _add(out, swap(x, y), half * pn * pcd / (n * n))
    lost = 1 - sum(out.values())
    if lost:
        _add(out, seqs, lost)
    return out


def reachable_states(start, kernel) -> set:
    start = kernel_key(start)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in kernel(cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def kernel_key(state):
    return tuple(frozenset(r) if isinstance(r, (set, frozenset)) else tuple(r)
                 for r in state)
