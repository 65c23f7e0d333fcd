"""Forest covers, spanning-tree coverings and packings, and their certificates.

Packings and the matroid-mode density check share one engine: a k-fold union
of the graphic matroid grown by shortest augmenting exchange paths.  When it
stops short, the set of edges reachable from the unplaced ones is spanned by
every forest, which yields the density witness for coverings and the
partition witness for packings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Literal

from . import oracles
from .errors import InputError, PreconditionError, ResourceError
from .graph import (
    MultiGraph,
    UnionFind,
    bfs_spanning_tree,
    check_edge_ids,
    components,
    is_acyclic,
    is_connected,
    is_spanning_tree,
    tree_path,
)
from .ordering import back_edge_partition

Kind = Literal["packing", "covering", "decomposition"]
KINDS = ("packing", "covering", "decomposition")
EXHAUSTIVE_VERTEX_LIMIT = 20
EXHAUSTIVE_PACKING_LIMIT = 7


@dataclass(frozen=True)
class ForestCover:
    k: int
    forests: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class DensityCertificate:
    k: int
    ok: bool
    witness: frozenset[int] | None = None
    edge_count: int | None = None

    @property
    def verdict(self) -> str:
        return "ok" if self.ok else "violated"

    @property
    def bound(self) -> int | None:
        return None if self.witness is None else self.k * (len(self.witness) - 1)


@dataclass(frozen=True)
class TreeCertificate:
    kind: str
    k: int
    trees: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"kind": self.kind, "k": self.k, "trees": [list(t) for t in self.trees]}

    @classmethod
    def from_json(cls, data: dict) -> "TreeCertificate":
        try:
            kind, k, trees = data["kind"], data["k"], data["trees"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"certificate is missing field {exc}") from None
        if kind not in KINDS:
            raise InputError(f"unknown certificate kind {kind!r}")
        if not isinstance(k, int) or k < 1:
            raise InputError("certificate k must be a positive integer")
        return cls(kind, k, tuple(tuple(t) for t in trees))


@dataclass(frozen=True)
class PartitionWitness:
    """A vertex partition with fewer than ``k(|P|-1)`` crossing edges."""

    k: int
    parts: tuple[frozenset[int], ...]
    cross_edges: int

    @property
    def bound(self) -> int:
        return self.k * (len(self.parts) - 1)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "parts": [sorted(p) for p in self.parts],
            "cross_edges": self.cross_edges,
            "bound": self.bound,
        }


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok


def _require_k(k: int):
    if not isinstance(k, int) or k < 1:
        raise InputError("k must be a positive integer")


def eh_forest_cover(g: MultiGraph, ordering, k: int, within=None) -> ForestCover:
    """Rainbow-colour every back-edge block with at most ``k`` colours.

    Colour ``c`` receives the ``c``-th edge of each block (in ``within`` order,
    default increasing id).  A cycle's latest vertex contributes two edges of
    one block, which get distinct colours, so every colour class is a forest.
    """
    _require_k(k)
    part = back_edge_partition(g, ordering)
    forests: list[set[int]] = [set() for _ in range(k)]
    for i, block in enumerate(part.blocks):
        if len(block) > k:
            raise PreconditionError(
                f"vertex {g.label(part.order[i])} has {len(block)} back edges, more than k={k}"
            )
        members = tuple(within[i]) if within and i in within else sorted(block)
        for colour, e in enumerate(members):
            forests[colour].add(e)
    return ForestCover(k, tuple(frozenset(f) for f in forests))


def extend_to_spanning_trees(g: MultiGraph, fc: ForestCover) -> TreeCertificate:
    if not is_connected(g):
        raise PreconditionError("a covering needs a connected graph")
    scaffold = bfs_spanning_tree(g) if g.vertex_count else []
    trees = []
    for forest in fc.forests:
        uf = UnionFind(g.vertex_count)
        tree = []
        for e in sorted(forest):
            if not uf.union(*g.edges[e]):
                raise InputError("forest cover contains a cycle")
            tree.append(e)
        for e in scaffold:
            if uf.union(*g.edges[e]):
                tree.append(e)
        trees.append(tuple(sorted(tree)))
    return TreeCertificate("covering", fc.k, tuple(trees))


class _ForestUnion:
    """k edge-disjoint forests of maximum total size (graphic matroid union)."""

    def __init__(self, g: MultiGraph, k: int):
        self.g = g
        self.k = k
        self.forests: list[set[int]] = [set() for _ in range(k)]
        self.owner: dict[int, int] = {}
        self.unplaced: list[int] = []
        for e in range(g.edge_count):
            if not self._augment(e):
                self.unplaced.append(e)

    def _cycle(self, j: int, e: int) -> list[int] | None:
        u, v = self.g.edges[e]
        return tree_path(self.g, self.forests[j], u, v)

    def _search(self, sources: Iterable[int]):
        """BFS over the exchange graph; returns (sink, target forest, parents, seen)."""
        parent: dict[int, tuple[int, int] | None] = {}
        queue = deque()
        for s in sources:
            parent[s] = None
            queue.append(s)
        while queue:
            y = queue.popleft()
            for j in range(self.k):
                if self.owner.get(y) == j:
                    continue
                cyc = self._cycle(j, y)
                if cyc is None:
                    return y, j, parent
                for z in cyc:
                    if z not in parent:
                        parent[z] = (y, j)
                        queue.append(z)
        return None, None, parent

    def _augment(self, e: int) -> bool:
        sink, j, parent = self._search([e])
        if sink is None:
            return False
        y = sink
        while True:
            old = self.owner.get(y)
            if old is not None:
                self.forests[old].discard(y)
            self.forests[j].add(y)
            self.owner[y] = j
            step = parent[y]
            if step is None:
                break
            # the element that displaced y enters y's old forest
            y, j = step
        return True

    def spanned_set(self) -> frozenset[int]:
        """Edges reachable from unplaced edges; each forest spans this set."""
        sink, _, parent = self._search(self.unplaced)
        assert sink is None, "forest union is not maximal"
        return frozenset(parent)


def forest_partition(g: MultiGraph, k: int) -> ForestCover | DensityCertificate:
    """Partition E(G) into ``k`` forests, or return a Nash-Williams witness."""
    _require_k(k)
    fu = _ForestUnion(g, k)
    if not fu.unplaced:
        return ForestCover(k, tuple(frozenset(f) for f in fu.forests))
    return _density_witness(g, k, fu.spanned_set())


def _density_witness(g: MultiGraph, k: int, span: frozenset[int]) -> DensityCertificate:
    for comp in components(g, span):
        if len(comp) < 2:
            continue
        inside = sum(1 for e in span if g.edges[e][0] in comp)
        if inside > k * (len(comp) - 1):
            return DensityCertificate(k, False, comp, g.induced_edge_count(comp))
    raise AssertionError("spanned set carries no dense component")


def _connected_subsets(g: MultiGraph) -> list[frozenset[int]]:
    """Every vertex set of size >= 2 inducing a connected subgraph (ESU enumeration)."""
    nbrs = [set() for _ in range(g.vertex_count)]
    for u, v in g.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    found = []

    def extend(sub: frozenset, ext: set, closed: set, root: int):
        if len(sub) >= 2:
            found.append(sub)
        ext = set(ext)
        while ext:
            w = min(ext)
            ext.discard(w)
            exclusive = {u for u in nbrs[w] if u > root and u not in closed}
            extend(sub | {w}, ext | exclusive, closed | nbrs[w] | {w}, root)

    for root in range(g.vertex_count):
        extend(frozenset({root}), {u for u in nbrs[root] if u > root}, nbrs[root] | {root}, root)
    return found


def nash_williams_check(
    g: MultiGraph,
    k: int,
    mode: str = "matroid",
    limit: int = EXHAUSTIVE_VERTEX_LIMIT,
) -> DensityCertificate:
    """Does every vertex set ``U`` span at most ``k(|U|-1)`` edges?

    Exhaustive mode only inspects connected vertex sets: a disconnected set
    splits into parts that each satisfy the bound with room to spare.  Its
    witness is the first violator by (size, sorted vertices).
    """
    _require_k(k)
    if mode == "matroid":
        res = forest_partition(g, k)
        return DensityCertificate(k, True) if isinstance(res, ForestCover) else res
    if mode != "exhaustive":
        raise InputError(f"unknown mode {mode!r}")
    if g.vertex_count > limit:
        raise ResourceError(f"exhaustive mode is limited to {limit} vertices")
    for u in sorted(_connected_subsets(g), key=lambda s: (len(s), sorted(s))):
        count = g.induced_edge_count(u)
        if count > k * (len(u) - 1):
            return DensityCertificate(k, False, u, count)
    return DensityCertificate(k, True)


def covering(g: MultiGraph, k: int) -> TreeCertificate | DensityCertificate:
    """A ``k``-covering built from a forest partition, or the density witness."""
    if not is_connected(g):
        raise PreconditionError("a covering needs a connected graph")
    res = forest_partition(g, k)
    if isinstance(res, DensityCertificate):
        return res
    return extend_to_spanning_trees(g, res)


def min_cover_number(g: MultiGraph) -> int:
    if not is_connected(g):
        raise PreconditionError("a covering needs a connected graph")
    if g.vertex_count <= 1:
        return 1
    k = max(1, -(-g.edge_count // (g.vertex_count - 1)))
    while not nash_williams_check(g, k).ok:
        k += 1
    return k


def _partition_witness(g: MultiGraph, k: int, parts) -> PartitionWitness:
    where = {}
    for i, part in enumerate(parts):
        for v in part:
            where[v] = i
    cross = sum(1 for u, v in g.edges if where[u] != where[v])
    return PartitionWitness(k, tuple(parts), cross)


def max_tree_packing(
    g: MultiGraph, k: int, mode: str = "matroid"
) -> TreeCertificate | PartitionWitness:
    """``k`` edge-disjoint spanning trees, or a partition certifying none exist."""
    _require_k(k)
    if not is_connected(g):
        raise PreconditionError("a packing needs a connected graph")
    if mode == "exhaustive":
        if g.vertex_count > EXHAUSTIVE_PACKING_LIMIT:
            raise ResourceError(
                f"exhaustive packing is limited to {EXHAUSTIVE_PACKING_LIMIT} vertices"
            )
        trees = oracles.exhaustive_packing(g, k)
        if trees is not None:
            return TreeCertificate("packing", k, tuple(tuple(sorted(t)) for t in trees))
        parts = oracles.partition_obstruction(g, k)
        return _partition_witness(g, k, parts)
    if mode != "matroid":
        raise InputError(f"unknown mode {mode!r}")
    fu = _ForestUnion(g, k)
    n = g.vertex_count
    if all(len(f) == n - 1 for f in fu.forests):
        return TreeCertificate("packing", k, tuple(tuple(sorted(f)) for f in fu.forests))
    parts = components(g, fu.spanned_set())
    witness = _partition_witness(g, k, parts)
    assert witness.cross_edges < witness.bound
    return witness


def max_packing_size(g: MultiGraph) -> int:
    """Largest k with a k-packing (a single vertex counts one empty tree)."""
    if not is_connected(g):
        raise PreconditionError("a packing needs a connected graph")
    if g.vertex_count <= 1:
        return 1
    k = 0
    while isinstance(max_tree_packing(g, k + 1), TreeCertificate):
        k += 1
    return k


def verify_certificate(g: MultiGraph, cert: TreeCertificate) -> CertificateCheck:
    if cert.kind not in KINDS:
        return CertificateCheck(False, f"unknown certificate kind {cert.kind!r}")
    if len(cert.trees) != cert.k:
        return CertificateCheck(False, f"expected {cert.k} trees, got {len(cert.trees)}")
    for i, tree in enumerate(cert.trees):
        try:
            check_edge_ids(g, tree)
        except InputError as exc:
            return CertificateCheck(False, f"tree {i}: {exc}")
    for i, tree in enumerate(cert.trees):
        if len(set(tree)) != len(tree):
            return CertificateCheck(False, f"tree {i} lists an edge twice")
        if not is_spanning_tree(g, tree):
            if not is_acyclic(g, tree):
                why = "contains a cycle"
            else:
                why = f"has {len(tree)} edges but a spanning tree needs {max(g.vertex_count - 1, 0)}"
            return CertificateCheck(False, f"tree {i} is not a spanning tree: {why}")
    if cert.kind in ("packing", "decomposition"):
        seen: dict[int, int] = {}
        for i, tree in enumerate(cert.trees):
            for e in tree:
                if e in seen:
                    return CertificateCheck(False, f"edge {e} is shared by trees {seen[e]} and {i}")
                seen[e] = i
    if cert.kind in ("covering", "decomposition"):
        used = set().union(*map(set, cert.trees)) if cert.trees else set()
        for e in range(g.edge_count):
            if e not in used:
                return CertificateCheck(False, f"edge {e} is not covered")
    return CertificateCheck(True)
