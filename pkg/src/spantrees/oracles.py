"""Brute-force reference computations for small graphs.

These deliberately avoid the fast paths used elsewhere (no peeling, no matroid
union, no connected-subset pruning) so that they can serve as independent
oracles.  All of them are exponential.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .graph import MultiGraph, UnionFind


def brute_colouring_number(g: MultiGraph) -> int:
    """1 + min over all vertex orderings of the max back-degree."""
    n = g.vertex_count
    if n == 0:
        return 1
    best = None
    for order in permutations(range(n)):
        pos = {v: i for i, v in enumerate(order)}
        back = [0] * n
        for u, v in g.edges:
            back[u if pos[u] > pos[v] else v] += 1
        worst = max(back)
        if best is None or worst < best:
            best = worst
    return 1 + best


def brute_edge_connectivity(g: MultiGraph) -> int:
    n = g.vertex_count
    best = None
    # vertex 0 always on the first side: each bipartition visited once
    for mask in range(1 << (n - 1)):
        side = {0} | {v for v in range(1, n) if mask >> (v - 1) & 1}
        if len(side) == n:
            continue
        cut = sum(1 for u, v in g.edges if (u in side) != (v in side))
        best = cut if best is None else min(best, cut)
    return best


def raw_density_violation(g: MultiGraph, k: int) -> frozenset[int] | None:
    """First vertex set (by size, then lexicographic) spanning > k(|U|-1) edges."""
    n = g.vertex_count
    for size in range(2, n + 1):
        for u in combinations(range(n), size):
            inside = set(u)
            count = sum(1 for a, b in g.edges if a in inside and b in inside)
            if count > k * (size - 1):
                return frozenset(u)
    return None


def _acyclic(g: MultiGraph, edges) -> bool:
    uf = UnionFind(g.vertex_count)
    return all(uf.union(*g.edges[e]) for e in edges)


def all_spanning_trees(g: MultiGraph) -> list[frozenset[int]]:
    n = g.vertex_count
    if n <= 1:
        return [frozenset()]
    return [frozenset(c) for c in combinations(range(g.edge_count), n - 1) if _acyclic(g, c)]


def exhaustive_packing(g: MultiGraph, k: int) -> list[frozenset[int]] | None:
    """k pairwise disjoint spanning trees found by backtracking, or None."""
    trees = all_spanning_trees(g)
    if g.vertex_count <= 1:
        return [frozenset()] * k
    masks = [sum(1 << e for e in t) for t in trees]

    def search(start: int, used: int, chosen: list[int]):
        if len(chosen) == k:
            return chosen
        for i in range(start, len(masks)):
            if not masks[i] & used:
                res = search(i + 1, used | masks[i], chosen + [i])
                if res:
                    return res
        return None

    found = search(0, 0, [])
    return None if found is None else [trees[i] for i in found]


def exhaustive_covering(g: MultiGraph, k: int) -> list[frozenset[int]] | None:
    """k spanning trees whose union is E(G), by enumeration, or None."""
    trees = all_spanning_trees(g)
    full = (1 << g.edge_count) - 1
    masks = sorted({sum(1 << e for e in t) for t in trees}, reverse=True)

    def search(start: int, used: int, chosen: list[int]):
        if len(chosen) == k:
            return chosen if used == full else None
        for i in range(start, len(masks)):
            res = search(i, used | masks[i], chosen + [i])
            if res:
                return res
        return None

    found = search(0, 0, [])
    if found is None:
        return None
    return [frozenset(e for e in range(g.edge_count) if masks[i] >> e & 1) for i in found]


def set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def partition_obstruction(g: MultiGraph, k: int) -> list[frozenset[int]] | None:
    """A vertex partition P with fewer than k(|P|-1) crossing edges, or None."""
    for parts in set_partitions(list(range(g.vertex_count))):
        where = {v: i for i, p in enumerate(parts) for v in p}
        cross = sum(1 for u, v in g.edges if where[u] != where[v])
        if cross < k * (len(parts) - 1):
            return sorted((frozenset(p) for p in parts), key=min)
    return None
