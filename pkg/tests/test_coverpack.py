import random

import pytest
from hypothesis import given, settings

from spantrees import oracles
from spantrees.coverpack import (
    DensityCertificate,
    ForestCover,
    PartitionWitness,
    TreeCertificate,
    _connected_subsets,
    covering,
    eh_forest_cover,
    extend_to_spanning_trees,
    forest_partition,
    max_packing_size,
    max_tree_packing,
    min_cover_number,
    nash_williams_check,
    verify_certificate,
)
from spantrees.errors import InputError, PreconditionError, ResourceError
from spantrees.generators import complete, cycle, multiply, path
from spantrees.graph import MultiGraph, is_acyclic, is_connected, is_spanning_tree
from spantrees.ordering import degeneracy_ordering

from conftest import small_multigraphs
from test_graph import multigraphs

CORPUS = small_multigraphs(250, seed=21, max_n=6, max_extra=6)


# forest covers from good orderings


def test_eh_cover_examples(c5, k4, p3):
    fc = eh_forest_cover(c5, range(5), 2)
    assert all(is_acyclic(c5, f) for f in fc.forests)
    assert set().union(*fc.forests) == set(range(5))
    assert sorted(len(f) for f in fc.forests) == [1, 4]
    fc = eh_forest_cover(k4, degeneracy_ordering(k4), 3)
    assert len(fc.forests) == 3 and all(is_acyclic(k4, f) for f in fc.forests)
    with pytest.raises(PreconditionError, match="vertex 3"):
        eh_forest_cover(k4, range(4), 2)
    with pytest.raises(InputError):
        eh_forest_cover(p3, range(3), 0)


def test_eh_cover_within_order(k2x2):
    fc = eh_forest_cover(k2x2, [0, 1], 2, within={1: (1, 0)})
    assert fc.forests == (frozenset({1}), frozenset({0}))


@settings(max_examples=300, deadline=None)
@given(multigraphs(max_n=8, max_m=16))
def test_eh_cover_property(g):
    o = degeneracy_ordering(g)
    k = max(o.mu - 1, 1)
    fc = eh_forest_cover(g, o, k)
    assert all(is_acyclic(g, f) for f in fc.forests)
    flat = [e for f in fc.forests for e in f]
    assert sorted(flat) == list(range(g.edge_count))
    if is_connected(g):
        cert = extend_to_spanning_trees(g, fc)
        assert verify_certificate(g, cert).ok
        assert all(f <= set(t) for f, t in zip(fc.forests, cert.trees))


def test_extension_needs_connectivity():
    g = MultiGraph(3, ((0, 1),))
    with pytest.raises(PreconditionError):
        extend_to_spanning_trees(g, ForestCover(1, (frozenset({0}),)))


# density


def test_nash_williams_examples(c5, k4):
    res = nash_williams_check(c5, 1)
    assert not res.ok and res.witness == frozenset(range(5))
    assert res.edge_count == 5 and res.bound == 4 and res.verdict == "violated"
    ex = nash_williams_check(c5, 1, mode="exhaustive")
    assert ex.witness == frozenset(range(5))
    assert nash_williams_check(c5, 2).ok
    assert nash_williams_check(k4, 2).ok
    assert nash_williams_check(k4, 2, mode="exhaustive").ok
    # K4 spans 6 > 1 * 3
    assert not nash_williams_check(k4, 1, mode="exhaustive").ok


def test_exhaustive_limit():
    with pytest.raises(ResourceError):
        nash_williams_check(path(5), 1, mode="exhaustive", limit=4)
    with pytest.raises(InputError):
        nash_williams_check(path(5), 1, mode="bogus")


def test_connected_subsets_match_brute_force():
    from itertools import combinations

    from spantrees.graph import is_connected as conn

    for g in CORPUS[:80]:
        n = g.vertex_count
        expected = {
            frozenset(c)
            for r in range(2, n + 1)
            for c in combinations(range(n), r)
            if conn(g, set(c))
        }
        found = _connected_subsets(g)
        assert len(found) == len(set(found))
        assert set(found) == expected


@pytest.mark.parametrize("k", [1, 2, 3])
def test_density_modes_agree_with_raw_subsets(k):
    for g in CORPUS:
        raw = oracles.raw_density_violation(g, k)
        ex = nash_williams_check(g, k, mode="exhaustive")
        mat = nash_williams_check(g, k, mode="matroid")
        assert ex.ok == mat.ok == (raw is None)
        if raw is not None:
            # raw and exhaustive use the same (size, lexicographic) tie rule
            assert ex.witness == raw
            assert mat.edge_count > k * (len(mat.witness) - 1)
            assert g.induced_edge_count(mat.witness) == mat.edge_count


@pytest.mark.parametrize("k", [1, 2, 3])
def test_forest_partition_acyclic(k):
    for g in CORPUS:
        res = forest_partition(g, k)
        if isinstance(res, ForestCover):
            assert len(res.forests) == k
            assert all(is_acyclic(g, f) for f in res.forests)
            assert sorted(e for f in res.forests for e in f) == list(range(g.edge_count))
        else:
            assert isinstance(res, DensityCertificate) and not res.ok


# coverings


def test_min_cover_examples(p3, c5, k4):
    assert min_cover_number(p3) == 1
    assert min_cover_number(c5) == 2
    assert min_cover_number(k4) == 2
    assert min_cover_number(MultiGraph(1)) == 1
    with pytest.raises(PreconditionError):
        min_cover_number(MultiGraph(2))


def test_covering_examples(c5):
    cert = covering(c5, 2)
    assert isinstance(cert, TreeCertificate) and cert.kind == "covering"
    assert verify_certificate(c5, cert).ok
    res = covering(c5, 1)
    assert isinstance(res, DensityCertificate) and not res.ok


def test_min_cover_against_exhaustive_covering():
    for g in CORPUS[:120]:
        k = min_cover_number(g)
        assert oracles.exhaustive_covering(g, k) is not None
        if k > 1:
            assert oracles.exhaustive_covering(g, k - 1) is None
        # counting lower bound
        if g.vertex_count > 1:
            assert k * (g.vertex_count - 1) >= g.edge_count


# packings


def test_packing_examples(k4, c5, k2x2):
    cert = max_tree_packing(k4, 2)
    assert isinstance(cert, TreeCertificate) and verify_certificate(k4, cert).ok
    res = max_tree_packing(c5, 2)
    assert isinstance(res, PartitionWitness)
    assert res.cross_edges < res.bound
    assert res.to_json()["cross_edges"] == 5 and len(res.parts) == 5
    cert = max_tree_packing(k2x2, 2)
    assert sorted(cert.trees) == [(0,), (1,)]
    assert max_packing_size(k4) == 2
    assert max_packing_size(c5) == 1
    assert max_packing_size(MultiGraph(1)) == 1
    assert max_tree_packing(k2x2, 2, mode="exhaustive").kind == "packing"


def test_packing_limit_and_connectivity():
    with pytest.raises(ResourceError):
        max_tree_packing(complete(8), 2, mode="exhaustive")
    with pytest.raises(PreconditionError):
        max_tree_packing(MultiGraph(2), 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_packing_matches_exhaustive(k):
    for g in CORPUS:
        fast = max_tree_packing(g, k)
        slow = oracles.exhaustive_packing(g, k)
        assert isinstance(fast, TreeCertificate) == (slow is not None)
        if isinstance(fast, TreeCertificate):
            assert verify_certificate(g, fast).ok
        else:
            # the returned partition is a genuine obstruction
            assert fast.cross_edges < k * (len(fast.parts) - 1)
            assert sorted(v for p in fast.parts for v in p) == list(range(g.vertex_count))
            assert oracles.partition_obstruction(g, k) is not None


def test_packing_duality_exhaustive_mode():
    # Tutte / Nash-Williams: a k-packing exists iff no partition is short of cross edges
    for g in CORPUS[:120]:
        for k in (1, 2):
            has = oracles.exhaustive_packing(g, k) is not None
            assert has == (oracles.partition_obstruction(g, k) is None)
            res = max_tree_packing(g, k, mode="exhaustive")
            assert isinstance(res, TreeCertificate) == has


def test_col_bound_decomposes():
    # |E| = k(n-1) and col <= k+1 force both a packing and a covering by the same trees
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(2, 6)
        g = multiply(MultiGraph(n, tuple((rng.randrange(v), v) for v in range(1, n))), 2)
        assert degeneracy_ordering(g).mu <= 3
        cert = max_tree_packing(g, 2)
        assert isinstance(cert, TreeCertificate)
        assert sorted(e for t in cert.trees for e in t) == list(range(g.edge_count))


# certificate verification


def test_verify_examples(k2x2, k4):
    assert verify_certificate(k2x2, TreeCertificate("decomposition", 2, ((0,), (1,)))).ok
    res = verify_certificate(k2x2, TreeCertificate("packing", 2, ((0,), (0,))))
    assert not res and "edge 0" in res.reason and "shared" in res.reason
    res = verify_certificate(k4, TreeCertificate("covering", 1, ((0, 1, 2),)))
    assert not res.ok and "edge 3 is not covered" in res.reason
    res = verify_certificate(k4, TreeCertificate("packing", 1, ((0, 1, 3),)))
    assert "contains a cycle" in res.reason
    res = verify_certificate(k4, TreeCertificate("packing", 1, ((0, 1),)))
    assert "has 2 edges" in res.reason
    res = verify_certificate(k4, TreeCertificate("packing", 2, ((0, 1, 2),)))
    assert "expected 2 trees" in res.reason
    res = verify_certificate(k4, TreeCertificate("packing", 1, ((0, 1, 9),)))
    assert not res.ok and "9" in res.reason


def test_certificate_json_roundtrip():
    cert = TreeCertificate("packing", 2, ((0, 2), (1, 3)))
    assert TreeCertificate.from_json(cert.to_json()) == cert
    with pytest.raises(InputError):
        TreeCertificate.from_json({"kind": "packing", "k": 1})
    with pytest.raises(InputError):
        TreeCertificate.from_json({"kind": "forest", "k": 1, "trees": []})


def test_verify_agrees_with_tree_oracle():
    for g in CORPUS[:60]:
        trees = oracles.all_spanning_trees(g)
        allowed = set(trees)
        rng = random.Random(g.edge_count)
        for _ in range(10):
            r = rng.randint(max(g.vertex_count - 2, 0), g.vertex_count)
            cand = tuple(sorted(rng.sample(range(g.edge_count), min(r, g.edge_count))))
            res = verify_certificate(g, TreeCertificate("packing", 1, (cand,)))
            assert res.ok == (frozenset(cand) in allowed) == is_spanning_tree(g, cand)


def test_cover_number_on_cycles():
    for n in range(3, 9):
        assert min_cover_number(cycle(n)) == 2
