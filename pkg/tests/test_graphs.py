import random

import pytest

from troplanar.graphs import (
    GraphError,
    MarkedGraph,
    Multigraph,
    certificate,
    chain,
    chain_count,
    chain_strings,
    complete_graph,
    dumbbell,
    enumerate_trivalent,
    isomorphic_bruteforce,
    k33,
    loop_graph,
    marked_certificate,
    prune_leaves,
    smooth,
    theta,
)
from troplanar.lattice import LatticePolygon
from troplanar.skeleton import code_to_graph, dual_graph, skeleton
from troplanar.triangulation import Triangulation, enumerate_unimodular_triangulations, placing_triangulation
from troplanar import _kernels
from troplanar._geometry import prepare


def shuffled(g, rng):
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


def test_line_round_trip_and_genus():
    g = Multigraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])
    assert Multigraph.from_line(g.to_line()) == g
    assert g.genus == 2
    assert g.is_trivalent()


def test_small_named_graphs():
    assert theta().genus == dumbbell().genus == 2
    assert len(dumbbell().bridges) == 1
    assert theta().bridges == ()
    assert k33().genus == 4
    assert complete_graph(4).genus == 3
    assert loop_graph().genus == 1


def test_bridges_examples():
    # two triangles joined by an edge
    g = Multigraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
    assert g.bridge_edges() == [(2, 3)]
    assert not g.is_two_edge_connected()
    assert sorted(map(sorted, g.two_edge_components())) == [[0, 1, 2], [3, 4, 5]]
    assert chain("111").bridges and len(chain("111").bridges) == 3
    assert chain("000").is_two_edge_connected()


def test_certificates_match_bruteforce_oracle():
    rng = random.Random(5)
    graphs = enumerate_trivalent(3) + enumerate_trivalent(4)
    for a in graphs:
        b = shuffled(a, rng)
        assert certificate(a) == certificate(b)
        assert isomorphic_bruteforce(a, b)
    for i, a in enumerate(graphs):
        for b in graphs[i + 1:]:
            assert certificate(a) != certificate(b)
            assert not isomorphic_bruteforce(a, b)


def test_marked_certificate_sees_marks():
    rng = random.Random(2)
    g = chain("00")
    pairs = [(a, b) for a in range(g.n) for b in range(g.n) if a != b]
    classes = {marked_certificate(MarkedGraph(g, a, b)) for a, b in pairs}
    assert 1 < len(classes) < len(pairs)
    for a, b in pairs:
        perm = list(range(g.n))
        rng.shuffle(perm)
        h = g.relabel(perm)
        assert marked_certificate(MarkedGraph(h, perm[a], perm[b])) == marked_certificate(MarkedGraph(g, a, b))


@pytest.mark.parametrize("g,count", [(2, 2), (3, 5), (4, 17), (5, 71), (6, 388)])
def test_trivalent_counts(g, count):
    assert len(enumerate_trivalent(g)) == count


def test_trivalent_out_of_range():
    with pytest.raises(GraphError):
        enumerate_trivalent(1)


@pytest.mark.parametrize("g", range(2, 13))
def test_chain_count_formula(g):
    strings = chain_strings(g)
    assert len(strings) == chain_count(g)
    if g <= 9:
        certs = {chain(s).certificate for s in strings}
        assert len(certs) == len(strings)
        assert all(chain(s).genus == g for s in strings)


def test_chain_rejects_non_binary():
    with pytest.raises(GraphError):
        chain("012")


def test_prune_and_smooth():
    # a loop with a pendant path, then a subdivided theta
    g = Multigraph.from_edges(4, [(0, 0), (0, 1), (1, 2), (2, 3)])
    assert prune_leaves(g).n == 1
    h = Multigraph.from_edges(4, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 1)])
    assert smooth(h).certificate == theta().certificate


def test_skeletons_of_small_triangulations():
    tri = LatticePolygon.from_points([(0, 0), (3, 0), (0, 3)])
    for t in enumerate_unimodular_triangulations(tri):
        assert skeleton(t).certificate == loop_graph().certificate
    strip = LatticePolygon.from_points([(0, 0), (3, 0), (3, 2), (0, 2)])
    certs = {skeleton(t).certificate for t in enumerate_unimodular_triangulations(strip, method="placement")}
    assert certs == {theta().certificate, dumbbell().certificate}


def test_dual_graph_sizes():
    t = placing_triangulation(LatticePolygon.from_points([(0, 0), (4, 0), (0, 4)]))
    d, tris = dual_graph(t)
    assert d.n == len(tris) == 16
    assert d.m == len(t.interior_edges)
    assert skeleton(t).genus == 3


def test_kernel_codes_decode_to_skeletons():
    p = LatticePolygon.from_points([(0, 0), (4, 0), (0, 4)])
    cfg = prepare(p)
    seen = {}

    def cb(code, tris, index):
        seen[code] = tris
        return True

    _kernels.kernel.scan_skeletons(cfg, set(), {}, cb)
    assert len(seen) >= 4
    for code, tris in seen.items():
        t = Triangulation.from_indices(p, cfg.points, tris)
        assert code_to_graph(code).certificate == skeleton(t).certificate


def test_genus_one_square():
    sq = LatticePolygon.from_points([(0, 0), (2, 0), (2, 2), (0, 2)])
    for t in enumerate_unimodular_triangulations(sq, method="placement"):
        d, _ = dual_graph(t)
        assert d.n == 8 and d.genus == 1
        assert skeleton(t).certificate == loop_graph().certificate
