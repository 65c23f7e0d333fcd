"""Good vertex orderings, colouring numbers, back-edge blocks and the edge order.

For a vertex ordering ``v_0, v_1, ...`` the back-degree of ``v_i`` is the number
of edges (with multiplicity) joining it to earlier vertices.  The colouring
number is the least ``mu`` for which some ordering keeps every back-degree
below ``mu``.  On finite multigraphs this is degeneracy plus one, and the
ordering obtained by repeatedly peeling a minimum-degree vertex (placed last)
attains it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError
from .graph import MultiGraph


@dataclass(frozen=True)
class GoodOrdering:
    order: tuple[int, ...]
    mu: int
    back_degrees: tuple[int, ...]  # indexed by vertex, not by position

    @property
    def position(self) -> tuple[int, ...]:
        pos = [0] * len(self.order)
        for i, v in enumerate(self.order):
            pos[v] = i
        return tuple(pos)


@dataclass(frozen=True)
class BackEdgePartition:
    order: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]  # blocks[i] = back edges of order[i]

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


@dataclass(frozen=True)
class EdgeOrder:
    sequence: tuple[int, ...]  # edge ids from first to last
    rank: tuple[int, ...]  # rank[e] = index of e in sequence
    block: tuple[int, ...]  # block[e] = position of e's later endpoint

    def precedes(self, a: int, b: int) -> bool:
        return self.rank[a] < self.rank[b]

    def __len__(self):
        return len(self.sequence)


def _check_permutation(g: MultiGraph, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(g.vertex_count)):
        raise InputError("order must be a permutation of the vertices")
    return order


def back_degrees(g: MultiGraph, order: Sequence[int]) -> tuple[int, ...]:
    order = _check_permutation(g, order)
    pos = [0] * g.vertex_count
    for i, v in enumerate(order):
        pos[v] = i
    deg = [0] * g.vertex_count
    for u, v in g.edges:
        deg[u if pos[u] > pos[v] else v] += 1
    return tuple(deg)


def degeneracy_ordering(g: MultiGraph) -> GoodOrdering:
    n = g.vertex_count
    deg = [g.degree(v) for v in range(n)]
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * n
    peeled = []
    back = [0] * n
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        back[v] = d
        peeled.append(v)
        for e in g.incidence[v]:
            w = g.other_end(e, v)
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    peeled.reverse()
    return GoodOrdering(tuple(peeled), 1 + max(back, default=0), tuple(back))


def colouring_number(g: MultiGraph) -> int:
    return degeneracy_ordering(g).mu


def verify_good_ordering(g: MultiGraph, order: Sequence[int], mu: int) -> bool:
    return all(d < mu for d in back_degrees(g, order))


def _order_of(ordering) -> tuple[int, ...]:
    return ordering.order if isinstance(ordering, GoodOrdering) else tuple(ordering)


def back_edge_partition(g: MultiGraph, ordering) -> BackEdgePartition:
    """``ordering`` may be a GoodOrdering or a bare vertex permutation."""
    order = _check_permutation(g, _order_of(ordering))
    pos = [0] * g.vertex_count
    for i, v in enumerate(order):
        pos[v] = i
    blocks: list[list[int]] = [[] for _ in order]
    for e, (u, v) in enumerate(g.edges):
        blocks[max(pos[u], pos[v])].append(e)
    return BackEdgePartition(order, tuple(tuple(b) for b in blocks))


def build_edge_order(
    p: BackEdgePartition,
    within: Sequence[Sequence[int]] | Mapping[int, Sequence[int]] | None = None,
) -> EdgeOrder:
    """Concatenate the blocks, each in the order given by ``within``.

    ``within`` maps block positions to a permutation of that block; blocks it
    does not mention keep increasing edge-id order.
    """
    if within is None:
        within = {}
    elif not isinstance(within, Mapping):
        within = dict(enumerate(within))
    sequence: list[int] = []
    block_of: dict[int, int] = {}
    for i, members in enumerate(p.blocks):
        chosen = tuple(within[i]) if i in within else tuple(sorted(members))
        if sorted(chosen) != sorted(members):
            raise InputError(f"within-order for block {i} is not a permutation of it")
        sequence.extend(chosen)
        for e in chosen:
            block_of[e] = i
    m = len(sequence)
    rank = [0] * m
    for r, e in enumerate(sequence):
        rank[e] = r
    return EdgeOrder(tuple(sequence), tuple(rank), tuple(block_of[e] for e in range(m)))
