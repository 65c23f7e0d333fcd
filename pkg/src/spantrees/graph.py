"""Finite loopless multigraphs with stable integer edge ids.

Every edge is its own record, so parallel copies are distinguishable and all
certificates refer to edge ids rather than endpoint pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError

Edge = tuple[int, int]


@dataclass(frozen=True)
class MultiGraph:
    vertex_count: int
    edges: tuple[Edge, ...] = ()
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InputError("vertex_count must be non-negative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for eid, (u, v) in enumerate(edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InputError(f"edge {eid} has an endpoint outside 0..{self.vertex_count - 1}")
            if u == v:
                raise InputError(f"edge {eid} is a loop at vertex {u}")
        object.__setattr__(self, "edges", edges)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.vertex_count:
                raise InputError("labels must name every vertex exactly once")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_records(cls, vertex_count: int, records: Iterable[Sequence[int]], labels=None):
        """Build from ``(edge_id, u, v)`` records; ids must be exactly 0..m-1."""
        records = sorted((int(e), int(u), int(v)) for e, u, v in records)
        if [r[0] for r in records] != list(range(len(records))):
            raise InputError("edge ids must be unique and dense (0..|E|-1)")
        return cls(vertex_count, tuple((u, v) for _, u, v in records), labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def records(self):
        for eid, (u, v) in enumerate(self.edges):
            yield eid, u, v

    def endpoints(self, e: int) -> Edge:
        return self.edges[e]

    def other_end(self, e: int, x: int) -> int:
        u, v = self.edges[e]
        return v if x == u else u

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for eid, (u, v) in enumerate(self.edges):
            inc[u].append(eid)
            inc[v].append(eid)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def add_edges(self, extra: Iterable[Edge]) -> "MultiGraph":
        return MultiGraph(self.vertex_count, self.edges + tuple(extra), self.labels)

    def induced_edge_count(self, vertices: Iterable[int]) -> int:
        inside = set(vertices)
        return sum(1 for u, v in self.edges if u in inside and v in inside)


def check_edge_ids(g: MultiGraph, ids: Iterable[int]) -> frozenset[int]:
    ids = list(ids)
    for e in ids:
        if not isinstance(e, int) or not 0 <= e < g.edge_count:
            raise InputError(f"edge id {e!r} does not exist in the graph")
    return frozenset(ids)


def check_vertices(g: MultiGraph, vertices: Iterable[int]) -> frozenset[int]:
    vs = list(vertices)
    for v in vs:
        if not isinstance(v, int) or not 0 <= v < g.vertex_count:
            raise InputError(f"vertex {v!r} does not exist in the graph")
    return frozenset(vs)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def is_acyclic(g: MultiGraph, edges: Iterable[int]) -> bool:
    uf = UnionFind(g.vertex_count)
    return all(uf.union(*g.edges[e]) for e in edges)


def components(g: MultiGraph, edges: Iterable[int] | None = None, vertices=None) -> list[frozenset[int]]:
    """Connected components of the spanning subgraph on ``edges`` (default: all).

    When ``vertices`` is given, only edges with both ends inside it are used and
    only those vertices are reported.
    """
    vs = range(g.vertex_count) if vertices is None else sorted(vertices)
    inside = set(vs)
    uf = UnionFind(g.vertex_count)
    for e in range(g.edge_count) if edges is None else edges:
        u, v = g.edges[e]
        if u in inside and v in inside:
            uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in vs:
        groups.setdefault(uf.find(v), []).append(v)
    return sorted((frozenset(x) for x in groups.values()), key=min)


def is_connected(g: MultiGraph, vertices=None) -> bool:
    return len(components(g, vertices=vertices)) <= 1


def is_spanning_tree(g: MultiGraph, t: Iterable[int]) -> bool:
    t = list(t)
    ids = check_edge_ids(g, t)
    if len(ids) != len(t) or len(ids) != max(g.vertex_count - 1, 0):
        return False
    # n-1 acyclic edges on n vertices are automatically connected and spanning
    return is_acyclic(g, ids)


def tree_path(g: MultiGraph, tree: Iterable[int], source: int, target: int) -> list[int] | None:
    """Edge ids of the path from ``source`` to ``target`` inside a forest, or None."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in tree:
        u, v = g.edges[e]
        adj.setdefault(u, []).append((e, v))
        adj.setdefault(v, []).append((e, u))
    back: dict[int, tuple[int, int] | None] = {source: None}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for e, y in adj.get(x, ()):
            if y not in back:
                back[y] = (e, x)
                queue.append(y)
    if target not in back:
        return None
    path = []
    x = target
    while back[x] is not None:
        e, x = back[x]
        path.append(e)
    path.reverse()
    return path


def fundamental_cycle(g: MultiGraph, t: Iterable[int], e: int) -> frozenset[int]:
    t = check_edge_ids(g, t)
    check_edge_ids(g, [e])
    if not is_spanning_tree(g, t):
        raise InputError("the given edge set is not a spanning tree")
    if e in t:
        raise InputError(f"edge {e} already belongs to the tree")
    u, v = g.edges[e]
    return frozenset(tree_path(g, t, u, v)) | {e}


def edge_connectivity(g: MultiGraph) -> int:
    """Global minimum edge cut of a multigraph (Stoer-Wagner on multiplicities)."""
    n = g.vertex_count
    if n < 2:
        raise InputError("edge connectivity needs at least two vertices")
    if not is_connected(g):
        return 0
    w = [[0] * n for _ in range(n)]
    for u, v in g.edges:
        w[u][v] += 1
        w[v][u] += 1
    alive = list(range(n))
    best = g.edge_count
    while len(alive) > 1:
        weights = {v: 0 for v in alive}
        seen: list[int] = []
        prev = last = alive[0]
        while weights:
            last = max(weights, key=lambda v: (weights[v], -v))
            cut = weights.pop(last)
            seen.append(last)
            for v in weights:
                weights[v] += w[last][v]
            if weights:
                prev = last
        best = min(best, cut)
        # merge the last vertex into the second to last one
        for v in alive:
            w[prev][v] += w[last][v]
            w[v][prev] = w[prev][v]
        w[prev][prev] = 0
        alive.remove(last)
    return best


def contract(g: MultiGraph, x: Iterable[int]) -> tuple[MultiGraph, list[int], list[int]]:
    """Merge the vertex set ``x`` into one vertex and drop the resulting loops.

    Returns ``(h, edge_map, vertex_map)`` where ``edge_map[i]`` is the original id
    of edge ``i`` of ``h`` and ``vertex_map[v]`` is the new index of vertex ``v``.
    The merged vertex takes the smallest index of ``x``; relative order of the
    remaining vertices and edges is preserved.
    """
    x = check_vertices(g, x)
    if not x:
        raise InputError("cannot contract an empty vertex set")
    keep = min(x)
    vertex_map = []
    fresh = 0
    for v in range(g.vertex_count):
        if v in x and v != keep:
            vertex_map.append(-1)
        else:
            vertex_map.append(fresh)
            fresh += 1
    for v in x:
        vertex_map[v] = vertex_map[keep]
    edges, edge_map = [], []
    for eid, (u, v) in enumerate(g.edges):
        if u in x and v in x:
            continue
        edges.append((vertex_map[u], vertex_map[v]))
        edge_map.append(eid)
    labels = None
    if g.labels is not None:
        labels = [""] * fresh
        for v in range(g.vertex_count):
            if v not in x or v == keep:
                labels[vertex_map[v]] = g.labels[v]
    return MultiGraph(fresh, tuple(edges), labels), edge_map, vertex_map


def cut_edges(g: MultiGraph, side: Iterable[int]) -> frozenset[int]:
    side = set(side)
    return frozenset(e for e, (u, v) in enumerate(g.edges) if (u in side) != (v in side))


def check_bond(g: MultiGraph, side: Iterable[int]) -> frozenset[int]:
    """Validate that ``side | rest`` is a bond and return its edge set."""
    side = check_vertices(g, side)
    rest = frozenset(range(g.vertex_count)) - side
    if not side or not rest:
        raise InputError("a bond needs both sides non-empty")
    for name, part in (("side", side), ("complement", rest)):
        if not is_connected(g, vertices=part):
            raise InputError(f"not a bond: the {name} {sorted(part)} is disconnected")
    return cut_edges(g, side)


def crosses_bond(g: MultiGraph, t: Iterable[int], side: Iterable[int]) -> bool:
    t = check_edge_ids(g, t)
    return bool(check_bond(g, side) & t)


def bfs_spanning_tree(g: MultiGraph, root: int = 0) -> list[int]:
    """Edges of a breadth-first spanning tree; raises if ``g`` is disconnected."""
    if g.vertex_count == 0:
        return []
    seen = {root}
    queue = deque([root])
    tree = []
    while queue:
        x = queue.popleft()
        for e in g.incidence[x]:
            y = g.other_end(e, x)
            if y not in seen:
                seen.add(y)
                tree.append(e)
                queue.append(y)
    if len(seen) != g.vertex_count:
        raise InputError("graph is disconnected")
    return tree
