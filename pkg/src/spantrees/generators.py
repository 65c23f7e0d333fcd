"""Deterministic graph generators used by the CLI and the test corpus."""

from __future__ import annotations

import random
from itertools import combinations

from .errors import InputError
from .graph import MultiGraph


def prop32(levels: int, c: int) -> MultiGraph:
    """Start from K_2; each level adds ``c`` new length-two paths between every
    pair of existing vertices.  New vertices have degree two, so ordering the
    levels one after another gives back-degree at most 2.
    """
    if levels < 0 or c < 1:
        raise InputError("prop32 needs levels >= 0 and c >= 1")
    n = 2
    edges = [(0, 1)]
    for _ in range(levels):
        current = n
        for u, v in combinations(range(current), 2):
            for _ in range(c):
                edges.append((u, n))
                edges.append((v, n))
                n += 1
    return MultiGraph(n, tuple(edges))


def complete(n: int) -> MultiGraph:
    if n < 1:
        raise InputError("complete graph needs n >= 1")
    return MultiGraph(n, tuple(combinations(range(n), 2)))


def cycle(n: int) -> MultiGraph:
    if n < 2:
        raise InputError("cycle needs n >= 2")
    return MultiGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> MultiGraph:
    if n < 1:
        raise InputError("path needs n >= 1")
    return MultiGraph(n, tuple((i, i + 1) for i in range(n - 1)))


def multiply(g: MultiGraph, m: int) -> MultiGraph:
    """Every edge repeated ``m`` times; copy c of edge e gets id ``e*m + c``."""
    return MultiGraph(g.vertex_count, tuple(e for e in g.edges for _ in range(m)), g.labels)


def random_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    return [(rng.randrange(v), v) for v in range(1, n)]


def doubled_tree(n: int, seed: int) -> MultiGraph:
    """A random recursive tree on ``n`` vertices with every edge doubled."""
    if n < 1:
        raise InputError("doubled_tree needs n >= 1")
    rng = random.Random(seed)
    return multiply(MultiGraph(n, tuple(random_tree(n, rng))), 2)


def random_multigraph(n: int, m: int, seed: int, connected: bool = True) -> MultiGraph:
    """``m`` uniformly random loopless edges on ``n`` vertices (parallel copies allowed).

    With ``connected`` the first ``n-1`` edges form a random spanning tree, so
    ``m`` must be at least ``n-1``.
    """
    if n < 1 or m < 0:
        raise InputError("random_multigraph needs n >= 1 and m >= 0")
    if n == 1 and m:
        raise InputError("a single vertex carries no loopless edges")
    rng = random.Random(seed)
    edges = []
    if connected:
        if m < n - 1:
            raise InputError("a connected graph on n vertices needs m >= n-1")
        edges = random_tree(n, rng)
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        edges.append((u, v))
    return MultiGraph(n, tuple(edges))


def tree_union(n: int, k: int, seed: int) -> MultiGraph:
    """Union of ``k`` independent random spanning trees (a k-packing by construction)."""
    rng = random.Random(seed)
    edges = []
    for _ in range(k):
        perm = list(range(n))
        rng.shuffle(perm)
        edges.extend((perm[rng.randrange(i)], perm[i]) for i in range(1, n))
    return MultiGraph(n, tuple(edges))


GENERATORS = {
    "prop32": (prop32, ("levels", "c")),
    "complete": (complete, ("n",)),
    "cycle": (cycle, ("n",)),
    "path": (path, ("n",)),
    "doubled_tree": (doubled_tree, ("n", "seed")),
    "random_multigraph": (random_multigraph, ("n", "m", "seed")),
    "tree_union": (tree_union, ("n", "k", "seed")),
}


def generate(family: str, **params) -> MultiGraph:
    try:
        fn, names = GENERATORS[family]
    except KeyError:
        raise InputError(f"unknown generator {family!r}; choose from {sorted(GENERATORS)}") from None
    missing = [p for p in names if params.get(p) is None]
    if missing:
        raise InputError(f"generator {family} needs parameters {missing}")
    return fn(**{p: params[p] for p in names})
