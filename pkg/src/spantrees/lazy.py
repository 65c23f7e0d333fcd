"""Countably infinite multigraphs presented by rules, and budgeted exchange runs.

A family fixes a vertex order ``0, 1, 2, ...`` (vertices are their positions)
and enumerates edges block by block: block ``p`` holds the back edges of vertex
``p`` and edge ids are consecutive, so the edge id *is* the edge's rank in the
edge order.  Stage ``n`` is the subgraph induced by vertices ``0..n``; because
every edge's later endpoint names its block, a stage is an enumeration prefix.

Base trees are given by parent pointers (the root path of a vertex is finite
even when the tree has vertices of infinite degree).  The exchange engine only
ever needs finitely many parent queries per step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Iterable

from .errors import InputError, InvariantViolation, NoEligibleTree, PreconditionError
from .exchange import BondMonitor, PackingState, invariant_report, run
from .graph import MultiGraph, UnionFind
from .ordering import GoodOrdering, back_edge_partition, build_edge_order

DEFAULT_BUDGET = 1000
DEFAULT_CHECKPOINT = 100
VERIFY_STAGE = 50


@dataclass(frozen=True)
class Stage:
    n: int
    graph: MultiGraph
    # tree index -> [(edge, inside vertex, outside vertex)] base edges leaving the stage
    boundary: dict[int, list[tuple[int, int, int]]]


class LazyBaseTree:
    def __init__(self, family: "LazyFamily", index: int):
        self.family = family
        self.index = index
        self.root = family.root(index)

    def parent(self, v):
        return self.family.parent(self.index, v)

    def __contains__(self, e):
        return self.family.base_tree_of(e) == self.index


class LazyFamily:
    """A countable multigraph with ``k`` rule-based edge-disjoint base trees.

    Subclasses define the block structure and base trees; everything else is
    derived.  ``max_back_degree`` is the family's claimed bound on block sizes;
    the exchange hypothesis holds iff it is at most ``k``.
    """

    name = "family"
    finite_vertex_count: int | None = None

    def __init__(self, k: int):
        if not isinstance(k, int) or k < 1:
            raise InputError("k must be a positive integer")
        self.k = k
        self._verified = False

    # --- to be provided by subclasses ---
    def params(self) -> dict:
        return {}

    def block_size(self, p: int) -> int:
        raise NotImplementedError

    def block_start(self, p: int) -> int:
        raise NotImplementedError

    def block_of_edge(self, e: int) -> int:
        raise NotImplementedError

    def endpoints(self, e: int) -> tuple[int, int]:
        """(earlier endpoint, later endpoint)."""
        raise NotImplementedError

    def base_tree_of(self, e: int) -> int | None:
        raise NotImplementedError

    def root(self, i: int) -> int:
        return 0

    def parent(self, i: int, v: int) -> tuple[int, int] | None:
        raise NotImplementedError

    def window(self, t: int) -> int:
        """Largest vertex any cycle met at step ``t`` may touch."""
        raise NotImplementedError

    def declared_bonds(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        """(finite vertex side, its edge boundary) pairs known to be bonds."""
        return []

    @property
    def max_back_degree(self) -> int:
        raise NotImplementedError

    # --- derived ---
    def describe(self) -> dict:
        return {"family": self.name, "k": self.k, **self.params(),
                "max_back_degree": self.max_back_degree,
                "satisfies_hypothesis": self.max_back_degree <= self.k}

    @property
    def base_trees(self):
        return [LazyBaseTree(self, i) for i in range(self.k)]

    def rank(self, e: int) -> int:
        return e

    def block(self, e: int) -> int:
        return self.block_of_edge(e)

    def block_edges(self, p: int) -> range:
        start = self.block_start(p)
        return range(start, start + self.block_size(p))

    def earlier_in_block(self, e: int):
        return range(self.block_start(self.block_of_edge(e)), e)

    def edge_at(self, t: int) -> int | None:
        if self.finite_vertex_count is not None:
            last = self.finite_vertex_count - 1
            if last < 1 or t >= self.block_start(last) + self.block_size(last):
                return None
        return t

    def stage_edge_count(self, n: int) -> int:
        return self.block_start(n + 1) if n >= 0 else 0

    def safe_prefix(self, budget: int) -> int:
        """Edges below this index are guaranteed processed after ``budget`` steps."""
        return budget

    def check_bond(self, bond: Iterable[int]) -> frozenset[int]:
        bond = frozenset(bond)
        if bond not in {b for _, b in self.declared_bonds()}:
            raise InputError("only the family's declared bonds can be monitored")
        return bond

    def root_path(self, i: int, v: int, limit: int = 10**6) -> list[int]:
        """Vertices from ``v`` up to the root of base tree ``i``."""
        out = [v]
        while True:
            step = self.parent(i, v)
            if step is None:
                return out
            v = step[1]
            out.append(v)
            if len(out) > limit:
                raise InvariantViolation(f"root path of tree {i} does not terminate")

    def tree_path(self, i: int, u: int, v: int) -> list[int]:
        """Edge ids of the base-tree path from ``u`` to ``v``."""
        up_u, up_v = self._edge_path(i, u), self._edge_path(i, v)
        while up_u and up_v and up_u[-1] == up_v[-1]:
            up_u.pop()
            up_v.pop()
        return up_u + up_v[::-1]

    def _edge_path(self, i: int, v: int) -> list[int]:
        out = []
        while (step := self.parent(i, v)) is not None:
            out.append(step[0])
            v = step[1]
        return out

    def verify(self, stages: int = VERIFY_STAGE) -> None:
        """Brute-force the family's structural claims on stages ``0..stages``."""
        if self.finite_vertex_count is not None:
            stages = min(stages, self.finite_vertex_count - 1)
        g = materialize(self, stages).graph
        for p in range(1, stages + 1):
            if self.block_size(p) > self.max_back_degree:
                raise InvariantViolation(f"block {p} exceeds the claimed back-degree")
        seen = set()
        for e in range(g.edge_count):
            if e in seen:
                raise InvariantViolation(f"edge {e} enumerated twice")
            seen.add(e)
            u, v = self.endpoints(e)
            if not u < v or self.block_of_edge(e) != v or e not in self.block_edges(v):
                raise InvariantViolation(f"edge {e} is not a back edge of its block")
        for i in range(self.k):
            uf = UnionFind(g.vertex_count)
            for e in range(g.edge_count):
                if self.base_tree_of(e) == i and not uf.union(*g.edges[e]):
                    raise InvariantViolation(f"base tree {i} has a cycle in stage {stages}")
            for v in range(g.vertex_count):
                step = self.parent(i, v)
                if v == self.root(i):
                    if step is not None:
                        raise InvariantViolation(f"root of tree {i} has a parent")
                    continue
                e, p = step
                if set(self.endpoints(e)) != {v, p} or self.base_tree_of(e) != i:
                    raise InvariantViolation(f"parent edge of {v} in tree {i} is wrong")
                self.root_path(i, v)
            for e in range(g.edge_count):
                if self.base_tree_of(e) == i:
                    u, v = self.endpoints(e)
                    if self.parent(i, u) != (e, v) and self.parent(i, v) != (e, u):
                        raise InvariantViolation(f"tree edge {e} is nobody's parent edge")
        self._verified = True


class CombStar(LazyFamily):
    """Comb plus star: col = k+1, a k-packing, infinitely many uncovered edges.

    Vertices: root ``r = 0``; tooth ``t_j = 2j-1`` and spine ``s_j = 2j`` for
    ``j >= 1`` (and ``s_0 = r``).  Block slots per vertex:

    * spine ``s_j``: spine edge ``s_{j-1}s_j`` and tooth edge ``t_j s_j``
      (both tree 0, the comb);
    * tooth ``t_j``: star edge ``r t_j`` (tree 1), then either the serve edge
      ``s_m t_j`` (tree 1) when ``j`` is not a square, where ``m = j - isqrt(j)``,
      or an uncovered extra edge ``s_{j-1} t_j`` when ``j`` is a square;
    * slots ``2..k-1`` of every block: a path edge ``(p-1, p)`` for tree ``slot``.

    Spine ``s_m`` hangs in the star from tooth ``t_{serve(m)}``, the ``m``-th
    non-square, which is always later than ``s_m``.  See docs/comb_star.md.
    """

    name = "comb_star"

    def __init__(self, k: int = 2):
        if not isinstance(k, int) or k < 2:
            raise InputError("comb_star needs k >= 2")
        super().__init__(k)

    def params(self):
        return {}

    @property
    def max_back_degree(self):
        return self.k

    def block_size(self, p):
        return 0 if p == 0 else self.k

    def block_start(self, p):
        return 0 if p <= 0 else (p - 1) * self.k

    def block_of_edge(self, e):
        return e // self.k + 1

    @staticmethod
    def is_slack(j: int) -> bool:
        return isqrt(j) ** 2 == j

    @staticmethod
    def serve(m: int) -> int:
        """Index of the m-th non-square (m >= 1)."""
        a = isqrt(m)
        return m + a + (1 if m > a * a + a else 0)

    def _edge_id(self, p: int, slot: int) -> int:
        return (p - 1) * self.k + slot

    def endpoints(self, e):
        p, slot = e // self.k + 1, e % self.k
        if slot >= 2:
            return p - 1, p
        if p % 2 == 0:  # spine s_j
            j = p // 2
            return (2 * j - 2, p) if slot == 0 else (2 * j - 1, p)
        j = (p + 1) // 2  # tooth t_j
        if slot == 0:
            return 0, p
        if self.is_slack(j):
            return 2 * j - 2, p
        return 2 * (j - isqrt(j)), p

    def base_tree_of(self, e):
        p, slot = e // self.k + 1, e % self.k
        if slot >= 2:
            return slot
        if p % 2 == 0:
            return 0
        if slot == 0:
            return 1
        return None if self.is_slack((p + 1) // 2) else 1

    def parent(self, i, v):
        if v == 0:
            return None
        if i >= 2:
            return self._edge_id(v, i), v - 1
        if i == 0:
            if v % 2 == 0:
                return self._edge_id(v, 0), v - 2
            return self._edge_id(v + 1, 1), v + 1
        if v % 2 == 1:
            return self._edge_id(v, 0), 0
        tooth = 2 * self.serve(v // 2) - 1
        return self._edge_id(tooth, 1), tooth

    def window(self, t):
        p = self.block_of_edge(t)
        return 2 * self.serve(p // 2 + 1)

    def declared_bonds(self):
        out = []
        for side in ({1}, {7}, {4}, {3}, {2, 3, 4}):
            out.append((frozenset(side), frozenset(self._boundary(side))))
        return out

    def _boundary(self, side):
        edges = set()
        for v in side:
            for e in self.incident(v):
                a, b = self.endpoints(e)
                if (a in side) != (b in side):
                    edges.add(e)
        return edges

    def incident(self, v):
        """All edges at ``v`` (finitely many unless ``v`` is the root)."""
        if v == 0:
            raise InputError("the root has infinitely many incident edges")
        out = set(self.block_edges(v))
        if v % 2 == 1:  # tooth: comb tooth edge, path edge of the next block
            out.add(self._edge_id(v + 1, 1))
        else:
            j = v // 2
            out.add(self._edge_id(v + 2, 0))  # next spine edge
            out.add(self._edge_id(2 * self.serve(j) - 1, 1))
            if self.is_slack(j + 1):
                out.add(self._edge_id(2 * j + 1, 1))
        for slot in range(2, self.k):
            out.add(self._edge_id(v + 1, slot))
        return out


class MultipliedRay(LazyFamily):
    """A ray ``0-1-2-...`` with every edge repeated ``m`` times; base tree i = copy i."""

    name = "multiplied_ray"

    def __init__(self, m: int = 3, k: int = 2):
        if not isinstance(m, int) or m < 1:
            raise InputError("multiplied_ray needs m >= 1")
        super().__init__(k)
        if k > m:
            raise InputError(f"multiplied_ray(m={m}) has only {m} disjoint base trees, k={k} requested")
        self.m = m

    def params(self):
        return {"m": self.m}

    @property
    def max_back_degree(self):
        return self.m

    def block_size(self, p):
        return 0 if p == 0 else self.m

    def block_start(self, p):
        return 0 if p <= 0 else (p - 1) * self.m

    def block_of_edge(self, e):
        return e // self.m + 1

    def endpoints(self, e):
        p = e // self.m + 1
        return p - 1, p

    def base_tree_of(self, e):
        c = e % self.m
        return c if c < self.k else None

    def parent(self, i, v):
        if v == 0:
            return None
        return (v - 1) * self.m + i, v - 1

    def window(self, t):
        return self.block_of_edge(t)

    def declared_bonds(self):
        # edges between {0..p-1} and the rest
        return [(frozenset(range(p)), frozenset(self.block_edges(p))) for p in (1, 5, 20)]

    def check_bond(self, bond):
        bond = frozenset(bond)
        p = self.block_of_edge(min(bond)) if bond else 0
        if not bond or bond != frozenset(self.block_edges(p)):
            raise InputError("not a bond of the multiplied ray")
        return bond


def doubled_ray() -> MultipliedRay:
    fam = MultipliedRay(2, 2)
    fam.name = "doubled_ray"
    return fam


class FiniteFamily(LazyFamily):
    """A finite multigraph with a packing, relabelled to the lazy conventions."""

    name = "finite"

    def __init__(self, g: MultiGraph, ordering, trees):
        super().__init__(len(trees))
        order = ordering.order if isinstance(ordering, GoodOrdering) else tuple(ordering)
        part = back_edge_partition(g, order)
        eord = build_edge_order(part)
        pos = [0] * g.vertex_count
        for i, v in enumerate(order):
            pos[v] = i
        self.g = g
        self.finite_vertex_count = g.vertex_count
        self.original_edge = list(eord.sequence)
        self._ends = [tuple(sorted((pos[a], pos[b]))) for a, b in (g.edges[e] for e in eord.sequence)]
        self._starts = [0]
        for b in part.blocks:
            self._starts.append(self._starts[-1] + len(b))
        owner = {}
        for i, t in enumerate(trees):
            for e in t:
                owner[eord.rank[e]] = i
        self._owner = owner
        self._parents: list[dict[int, tuple[int, int]]] = []
        for i in range(self.k):
            adj: dict[int, list[int]] = {}
            for e, o in owner.items():
                if o == i:
                    a, b = self._ends[e]
                    adj.setdefault(a, []).append(e)
                    adj.setdefault(b, []).append(e)
            par: dict[int, tuple[int, int]] = {}
            stack, seen = [0], {0}
            while stack:
                x = stack.pop()
                for e in adj.get(x, ()):
                    a, b = self._ends[e]
                    y = b if a == x else a
                    if y not in seen:
                        seen.add(y)
                        par[y] = (e, x)
                        stack.append(y)
            if len(seen) != g.vertex_count:
                raise PreconditionError(f"tree {i} does not span the graph")
            self._parents.append(par)
        self._max_block = max((len(b) for b in part.blocks), default=0)

    @property
    def max_back_degree(self):
        return self._max_block

    def block_size(self, p):
        return self._starts[p + 1] - self._starts[p] if 0 <= p < len(self._starts) - 1 else 0

    def block_start(self, p):
        return self._starts[min(max(p, 0), len(self._starts) - 1)]

    def block_of_edge(self, e):
        return self._ends[e][1]

    def endpoints(self, e):
        return self._ends[e]

    def base_tree_of(self, e):
        return self._owner.get(e)

    def parent(self, i, v):
        return self._parents[i].get(v)

    def window(self, t):
        return self.finite_vertex_count - 1


def comb_star(k: int = 2) -> CombStar:
    return CombStar(k)


def multiplied_ray(m: int = 3, k: int = 2) -> MultipliedRay:
    return MultipliedRay(m, k)


FAMILIES: dict[str, Callable[..., LazyFamily]] = {
    "comb_star": lambda k=2, **_: comb_star(k),
    "multiplied_ray": lambda k=2, m=3, **_: multiplied_ray(m, k),
    "doubled_ray": lambda k=2, **_: doubled_ray() if k == 2 else multiplied_ray(2, k),
}


def make_family(name: str, **params) -> LazyFamily:
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise InputError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
    return builder(**params)


def materialize(lg: LazyFamily, n: int) -> Stage:
    if n < 0:
        raise InputError("stage index must be non-negative")
    if lg.finite_vertex_count is not None:
        n = min(n, lg.finite_vertex_count - 1)
    edges = [lg.endpoints(e) for e in range(lg.stage_edge_count(n))]
    g = MultiGraph(n + 1, tuple(edges))
    boundary: dict[int, list[tuple[int, int, int]]] = {}
    for i in range(lg.k):
        out = []
        for v in range(n + 1):
            step = lg.parent(i, v)
            if step is not None and step[1] > n:
                out.append((step[0], v, step[1]))
        boundary[i] = out
    return Stage(n, g, boundary)


@dataclass
class ClosureResult:
    vertices: frozenset[int]
    fixed_point: bool
    rounds: int


def closure_budgeted(lg: LazyFamily, x: Iterable[int], budget: int) -> ClosureResult:
    """Iterate X -> union of base-tree root paths of X, at most ``budget`` times."""
    current = frozenset(x)
    for r in range(budget):
        nxt = set(current)
        for v in current:
            for i in range(lg.k):
                nxt.update(lg.root_path(i, v))
        if nxt == current:
            return ClosureResult(current, True, r)
        current = frozenset(nxt)
    done = all(set(lg.root_path(i, v)) <= current for v in current for i in range(lg.k))
    return ClosureResult(current, done, budget)


@dataclass
class SimulationResult:
    family: dict
    budget: int
    steps: int
    swaps: int
    trace: object
    report: object
    stabilization: dict
    overlays: list[dict]
    obstruction: dict | None = None
    monitors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.obstruction is None and self.report.clean and self.stabilization["stable"]

    def summary(self) -> dict:
        return {
            "family": self.family,
            "budget": self.budget,
            "steps": self.steps,
            "swaps": self.swaps,
            "obstruction": self.obstruction,
            "invariants": self.report.to_json(),
            "stabilization": self.stabilization,
            "overlays": self.overlays,
        }


def run_budgeted(lg: LazyFamily, k: int | None = None, budget: int = DEFAULT_BUDGET,
                 checkpoint: int = DEFAULT_CHECKPOINT, bonds=None) -> SimulationResult:
    """Run ``budget`` exchange steps on a lazy family with every monitor attached.

    A ``NoEligibleTree`` obstruction is reported in the result, not raised.
    """
    if k is not None and k != lg.k:
        raise InputError(f"family was built for k={lg.k}, not k={k}")
    if budget < 0 or checkpoint < 1:
        raise InputError("budget must be >= 0 and checkpoint interval >= 1")
    if not lg._verified:
        lg.verify()
    state = PackingState(lg)
    declared = [b for _, b in lg.declared_bonds()] if bonds is None else list(bonds)
    monitors = [BondMonitor(state, b) for b in declared]
    snapshots: dict[int, list] = {}

    def snap(st, _record=None):
        if st.t % checkpoint == 0 or st.t == budget:
            prefix = min(lg.safe_prefix(st.t), _known_edges(lg, budget))
            snapshots[st.t] = [st.tree_of(e) for e in range(prefix)]

    snap(state)
    obstruction = None
    try:
        trace = run(state, budget, monitors, on_step=snap)
    except NoEligibleTree as exc:
        trace = exc.trace
        obstruction = {"kind": "NoEligibleTree", "step": exc.step, "edge": exc.edge, "block": exc.block}
    snap(state)
    report = invariant_report(trace, monitors=monitors)
    stab = _stabilization(lg, state, snapshots)
    overlays = [
        {"tree": i, "added": sorted(t.added), "removed": sorted(t.removed)}
        for i, t in enumerate(state.trees)
    ]
    return SimulationResult(lg.describe(), budget, state.t, trace.swaps, trace, report,
                            stab, overlays, obstruction, monitors)


def _known_edges(lg: LazyFamily, budget: int) -> int:
    if lg.finite_vertex_count is None:
        return budget
    last = lg.finite_vertex_count - 1
    return lg.block_start(last) + lg.block_size(last) if last >= 1 else 0


def _stabilization(lg: LazyFamily, state: PackingState, snapshots: dict[int, list]) -> dict:
    final_t = state.t
    final = [state.tree_of(e) for e in range(lg.safe_prefix(final_t) if final_t else 0)]
    changed = []
    for t, snap in sorted(snapshots.items()):
        for e, owner in enumerate(snap):
            if e < len(final) and owner != final[e]:
                changed.append({"checkpoint": t, "edge": e, "was": owner, "now": final[e]})
    uncovered = [e for e, owner in enumerate(final) if owner is None]
    return {
        "safe_prefix": len(final),
        "checkpoints": sorted(snapshots),
        "changed_after_checkpoint": changed[:20],
        "uncovered_in_prefix": uncovered[:20],
        "stable": not changed and not uncovered,
    }
