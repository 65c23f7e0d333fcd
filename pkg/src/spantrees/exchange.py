"""Turn a k-packing plus a good ordering into a k-decomposition by edge exchange.

Edges are processed once each in the edge order.  An uncovered edge ``e`` goes
into the first tree holding no earlier edge of ``e``'s back-edge block; the
latest edge ``f`` of the resulting fundamental cycle leaves that tree.  Since
``f`` always comes after ``e``, processed edges are never removed again.

The engine works on any *exchange system*: an object exposing

* ``k`` and ``base_trees`` (objects with ``root``, ``parent(v)`` and ``in``),
* ``endpoints(e)``, ``rank(e)``, ``block(e)``, ``earlier_in_block(e)``,
* ``edge_at(t)`` (``None`` past the end) and ``window(t)`` (``None`` or the
  largest vertex a step-``t`` cycle may touch).

Finite graphs are wrapped by :class:`FiniteSystem`; lazy families implement the
protocol themselves.  Each tree is kept as its base tree plus finite sets of
added and removed edges, together with an explicit subtree containing every
modified edge, so paths and tree-ness can be checked in finite time even when
the base tree is infinite.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .coverpack import TreeCertificate, verify_certificate
from .errors import InputError, InvariantViolation, NoEligibleTree, PreconditionError, WindowViolation
from .graph import MultiGraph, check_bond, components
from .ordering import EdgeOrder, GoodOrdering, back_edge_partition, verify_good_ordering


class RootedTree:
    """Parent pointers of a finite spanning tree, rooted at ``root``."""

    def __init__(self, g: MultiGraph, edges: Iterable[int], root: int = 0):
        self.edges = frozenset(edges)
        self.root = root
        self._parent: dict[int, tuple[int, int]] = {}
        adj: dict[int, list[int]] = {}
        for e in self.edges:
            u, v = g.edges[e]
            adj.setdefault(u, []).append(e)
            adj.setdefault(v, []).append(e)
        queue = deque([root])
        seen = {root}
        while queue:
            x = queue.popleft()
            for e in adj.get(x, ()):
                y = g.other_end(e, x)
                if y not in seen:
                    seen.add(y)
                    self._parent[y] = (e, x)
                    queue.append(y)

    def parent(self, v):
        return self._parent.get(v)

    def __contains__(self, e):
        return e in self.edges


class FiniteSystem:
    def __init__(self, g: MultiGraph, eord: EdgeOrder, trees: Sequence[Iterable[int]]):
        self.g = g
        self.eord = eord
        self.k = len(trees)
        self.base_trees = [RootedTree(g, t) for t in trees]
        self._blocks: dict[int, list[int]] = {}
        for e in eord.sequence:
            self._blocks.setdefault(eord.block[e], []).append(e)

    def endpoints(self, e):
        return self.g.edges[e]

    def rank(self, e):
        return self.eord.rank[e]

    def block(self, e):
        return self.eord.block[e]

    def earlier_in_block(self, e):
        r = self.eord.rank[e]
        return [x for x in self._blocks[self.eord.block[e]] if self.eord.rank[x] < r]

    def edge_at(self, t):
        return self.eord.sequence[t] if t < len(self.eord.sequence) else None

    def window(self, t):
        return None

    def check_bond(self, bond: Iterable[int]) -> frozenset[int]:
        bond = frozenset(bond)
        rest = [e for e in range(self.g.edge_count) if e not in bond]
        comps = components(self.g, rest)
        if len(comps) != 2:
            raise InputError(f"edge set {sorted(bond)} is not a bond")
        side = comps[0]
        if check_bond(self.g, side) != bond:
            raise InputError(f"edge set {sorted(bond)} is not a bond")
        return bond


class OverlayTree:
    def __init__(self, base):
        self.base = base
        self.added: set[int] = set()
        self.removed: set[int] = set()
        self._endpoints: dict[int, tuple] = {}
        # explicit subtree of the current tree; always contains every modified edge
        self.adj: dict[object, dict[int, object]] = {base.root: {}}

    def __contains__(self, e):
        return e in self.added or (e in self.base and e not in self.removed)

    def _link(self, e, x, y):
        self.adj.setdefault(x, {})[e] = y
        self.adj.setdefault(y, {})[e] = x
        self._endpoints[e] = (x, y)

    def _attach(self, x):
        segment = []
        while x not in self.adj:
            step = self.base.parent(x)
            if step is None:
                raise InvariantViolation(f"vertex {x} has no base-tree path to the root")
            e, p = step
            segment.append((e, x, p))
            x = p
        for e, a, b in segment:
            self._link(e, a, b)

    def path(self, u, v) -> list[int]:
        """Edge ids of the unique path from ``u`` to ``v`` in the current tree."""
        self._attach(u)
        self._attach(v)
        back = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for e, y in self.adj[x].items():
                if y not in back:
                    back[y] = (e, x)
                    queue.append(y)
        if v not in back:
            raise InvariantViolation(f"tree lost connectivity between {u} and {v}")
        out = []
        x = v
        while back[x] is not None:
            e, x = back[x]
            out.append(e)
        out.reverse()
        return out

    def vertices_of(self, edges: Iterable[int]):
        for e in edges:
            yield from self._endpoints[e]

    def swap(self, add: int, add_ends, remove: int):
        x, y = self._endpoints.pop(remove)
        del self.adj[x][remove]
        del self.adj[y][remove]
        if remove in self.added:
            self.added.discard(remove)
        else:
            self.removed.add(remove)
        self._link(add, *add_ends)
        if add in self.removed:
            self.removed.discard(add)
        else:
            self.added.add(add)

    def edge_set(self, base_edges: Iterable[int]) -> set[int]:
        """Current edges, given the (finite) edge set of the base tree."""
        return (set(base_edges) - self.removed) | self.added

    def check(self) -> str | None:
        """Recompute the explicit subtree from the base tree and the edits."""
        inside = set(self.adj)
        expected = set()
        for q in inside:
            step = self.base.parent(q)
            if step is not None and step[1] in inside and step[0] not in self.removed:
                expected.add(step[0])
        for e in self.added:
            if not set(self._endpoints.get(e, ())) <= inside:
                return f"added edge {e} lies outside the tracked subtree"
            expected.add(e)
        actual = set(self._endpoints)
        if expected != actual:
            return f"tracked edges differ from base-minus-removed-plus-added: {sorted(expected ^ actual)[:5]}"
        if any(e not in self.base for e in self.removed) or any(e in self.base for e in self.added):
            return "edit sets inconsistent with the base tree"
        if len(actual) != len(inside) - 1:
            return f"tracked subtree has {len(actual)} edges on {len(inside)} vertices"
        seen = {self.base.root}
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for y in self.adj[x].values():
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(inside):
            return "tracked subtree is disconnected"
        return None


@dataclass
class StepRecord:
    t: int
    edge: int
    action: str  # noop | swap | error
    tree: int | None = None
    removed: int | None = None
    edge_rank: int | None = None
    removed_rank: int | None = None
    cycle: list[int] | None = None

    def to_json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if v is not None})

    @classmethod
    def from_json(cls, line: str) -> "StepRecord":
        return cls(**json.loads(line))


@dataclass
class Trace:
    k: int
    records: list[StepRecord] = field(default_factory=list)
    packing_problems: list[str] = field(default_factory=list)

    @property
    def swaps(self) -> int:
        return sum(1 for r in self.records if r.action == "swap")

    def to_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, k: int, text: str) -> "Trace":
        return cls(k, [StepRecord.from_json(x) for x in text.splitlines() if x.strip()])


class PackingState:
    def __init__(self, system):
        self.system = system
        self.k = system.k
        self.trees = [OverlayTree(b) for b in system.base_trees]
        self.t = 0

    def tree_of(self, e) -> int | None:
        for i, tree in enumerate(self.trees):
            if e in tree:
                return i
        return None

    def check_packing(self) -> str | None:
        for i, tree in enumerate(self.trees):
            problem = tree.check()
            if problem:
                return f"tree {i}: {problem}"
        for i, tree in enumerate(self.trees):
            for e in tree.added:
                owners = [j for j, other in enumerate(self.trees) if e in other]
                if owners != [i]:
                    return f"edge {e} lies in trees {owners}"
        return None


def choose_tree(state: PackingState, e, rng: random.Random | None = None) -> int:
    """Smallest (or, with ``rng``, a random) tree holding no earlier edge of e's block."""
    if state.tree_of(e) is not None:
        raise InputError(f"edge {e} is already covered")
    blocked = {state.tree_of(x) for x in state.system.earlier_in_block(e)}
    eligible = [i for i in range(state.k) if i not in blocked]
    if not eligible:
        raise NoEligibleTree(state.t, e, state.system.block(e))
    return rng.choice(eligible) if rng is not None else eligible[0]


def fundamental_cycle_in(state: PackingState, i: int, e) -> list[int]:
    u, v = state.system.endpoints(e)
    return state.trees[i].path(u, v) + [e]


def _window_check(state: PackingState, i: int, cycle: list[int], e):
    bound = state.system.window(state.t)
    if bound is None:
        return
    tree = state.trees[i]
    touched = set(tree.vertices_of(cycle[:-1])) | set(state.system.endpoints(e))
    outside = [x for x in touched if x > bound]
    if outside:
        raise WindowViolation(
            f"step {state.t}: cycle of edge {e} reaches vertices {sorted(outside)[:3]} beyond window {bound}"
        )


def exchange_step(state: PackingState, e, rng: random.Random | None = None):
    """Process edge ``e``; returns ``(state, record)`` with ``state`` updated in place."""
    system = state.system
    rank = system.rank
    if state.tree_of(e) is not None:
        record = StepRecord(state.t, e, "noop", edge_rank=rank(e))
    else:
        i = choose_tree(state, e, rng)
        cycle = fundamental_cycle_in(state, i, e)
        _window_check(state, i, cycle, e)
        f = max(cycle, key=rank)
        if f == e:
            raise InvariantViolation(f"edge {e} is the latest edge of its own cycle")
        state.trees[i].swap(e, system.endpoints(e), f)
        record = StepRecord(state.t, e, "swap", i, f, rank(e), rank(f), cycle)
    state.t += 1
    return state, record


class BondMonitor:
    def __init__(self, state: PackingState, bond: Iterable[int]):
        self.bond = state.system.check_bond(bond)
        self.violations: list[str] = []
        self.history: list[tuple[int | None, ...]] = []
        self.observe(state)

    def minima(self, state: PackingState) -> tuple[int | None, ...]:
        rank = state.system.rank
        out = []
        for tree in state.trees:
            ranks = [rank(e) for e in self.bond if e in tree]
            out.append(min(ranks) if ranks else None)
        return tuple(out)

    def observe(self, state: PackingState):
        current = self.minima(state)
        for i, r in enumerate(current):
            if r is None:
                self.violations.append(f"step {state.t}: tree {i} misses bond {sorted(self.bond)[:4]}")
        if self.history:
            for i, (old, new) in enumerate(zip(self.history[-1], current)):
                if old is not None and new is not None and new > old:
                    self.violations.append(
                        f"step {state.t}: tree {i} bond minimum rose from rank {old} to {new}"
                    )
        self.history.append(current)


def attach_bond_monitor(state: PackingState, bond: Iterable[int]) -> BondMonitor:
    return BondMonitor(state, bond)


def run(state: PackingState, steps: int | None = None, monitors: Sequence[BondMonitor] = (),
        check_packing: bool = True, rng: random.Random | None = None, on_step=None) -> Trace:
    """Run from ``state.t`` for ``steps`` steps (default: until the edges run out).

    ``NoEligibleTree`` propagates with the partial trace attached as ``exc.trace``.
    """
    trace = Trace(state.k)
    end = None if steps is None else state.t + steps
    while end is None or state.t < end:
        e = state.system.edge_at(state.t)
        if e is None:
            break
        try:
            _, record = exchange_step(state, e, rng)
        except NoEligibleTree as exc:
            trace.records.append(StepRecord(state.t, e, "error", edge_rank=state.system.rank(e)))
            exc.trace = trace
            raise
        trace.records.append(record)
        if check_packing and record.action == "swap":
            problem = state.check_packing()
            if problem:
                trace.packing_problems.append(f"step {record.t}: {problem}")
        for m in monitors:
            m.observe(state)
        if on_step is not None:
            on_step(state, record)
    return trace


@dataclass
class InvariantReport:
    packing: list[str] = field(default_factory=list)
    persistence: list[str] = field(default_factory=list)
    direction: list[str] = field(default_factory=list)
    bonds: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (self.packing or self.persistence or self.direction or self.bonds)

    def to_json(self) -> dict:
        return {**asdict(self), "clean": self.clean}


def invariant_report(trace: Trace, replay: PackingState | None = None,
                     monitors: Sequence[BondMonitor] = ()) -> InvariantReport:
    """Audit a trace: packing preservation, covered persistence, swap direction.

    With ``replay`` (a fresh state at step 0) every swap is re-applied, the
    packing re-verified and the removed edge checked against the recomputed
    cycle; otherwise the engine's own per-step packing checks are used.
    """
    report = InvariantReport(packing=list(trace.packing_problems))
    processed: set = set()
    for r in trace.records:
        if r.action == "swap":
            if r.removed in processed or r.removed == r.edge:
                report.persistence.append(
                    f"step {r.t}: removed edge {r.removed} was covered at an earlier step"
                )
            if r.edge_rank is None or r.removed_rank is None or not r.edge_rank < r.removed_rank:
                report.direction.append(
                    f"step {r.t}: removed edge {r.removed} does not come after {r.edge}"
                )
            if replay is not None:
                _replay_swap(replay, r, report)
        elif replay is not None and r.action == "noop":
            if replay.tree_of(r.edge) is None:
                report.packing.append(f"step {r.t}: noop on uncovered edge {r.edge}")
        if replay is not None:
            replay.t = r.t + 1
        if r.action != "error":
            processed.add(r.edge)
    for m in monitors:
        report.bonds.extend(m.violations)
    return report


def _replay_swap(state: PackingState, r: StepRecord, report: InvariantReport):
    rank = state.system.rank
    if state.tree_of(r.edge) is not None:
        report.packing.append(f"step {r.t}: swap adds edge {r.edge} which is already covered")
        return
    cycle = fundamental_cycle_in(state, r.tree, r.edge)
    if r.removed not in cycle:
        report.packing.append(f"step {r.t}: removed edge {r.removed} is not on the cycle of {r.edge}")
        return
    if max(cycle, key=rank) != r.removed:
        report.direction.append(f"step {r.t}: removed edge {r.removed} is not the latest on its cycle")
    state.trees[r.tree].swap(r.edge, state.system.endpoints(r.edge), r.removed)
    problem = state.check_packing()
    if problem:
        report.packing.append(f"step {r.t}: {problem}")


def init_state(g: MultiGraph, ordering, eord: EdgeOrder, packing: TreeCertificate) -> PackingState:
    check = verify_certificate(g, packing)
    if packing.kind == "covering" or not check:
        raise PreconditionError(f"initial trees are not a packing: {check.reason or 'kind ' + packing.kind}")
    order = ordering.order if isinstance(ordering, GoodOrdering) else tuple(ordering)
    part = back_edge_partition(g, order)
    for i, block in enumerate(part.blocks):
        if any(eord.block[e] != i for e in block):
            raise PreconditionError("edge order was not built from this ordering's back-edge blocks")
    return PackingState(FiniteSystem(g, eord, packing.trees))


def decomposition_of(state: PackingState) -> TreeCertificate:
    trees = []
    for tree in state.trees:
        trees.append(tuple(sorted(tree.edge_set(tree.base.edges))))
    return TreeCertificate("decomposition", state.k, tuple(trees))


def run_finite(g: MultiGraph, ordering, eord: EdgeOrder, packing: TreeCertificate):
    """Returns ``(decomposition certificate, trace)``."""
    order = ordering.order if isinstance(ordering, GoodOrdering) else tuple(ordering)
    if not verify_good_ordering(g, order, packing.k + 1):
        raise PreconditionError(
            f"the ordering gives some vertex more than k={packing.k} back edges"
        )
    state = init_state(g, order, eord, packing)
    trace = run(state)
    if trace.swaps:
        raise InvariantViolation(f"finite run performed {trace.swaps} swaps; expected none")
    cert = decomposition_of(state)
    check = verify_certificate(g, cert)
    if not check:
        raise InvariantViolation(f"finite run did not produce a decomposition: {check.reason}")
    return cert, trace

