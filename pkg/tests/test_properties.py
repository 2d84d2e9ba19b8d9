from hypothesis import assume, given, settings
from hypothesis import strategies as st

from troplanar.graphs import certificate, enumerate_trivalent, isomorphic_bruteforce
from troplanar.lattice import LatticePolygon, PolygonError, canonical_form, lattice_width
from troplanar.triangulation import bistellar_flip, is_regular, placing_triangulation

points = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=8)
unimodular_steps = st.lists(st.sampled_from(["shear_x", "shear_y", "swap", "neg"]), max_size=6)


def polygon_or_skip(pts):
    try:
        return LatticePolygon.from_points(pts)
    except PolygonError:
        assume(False)


def apply(steps, p):
    mats = {"shear_x": [[1, 1], [0, 1]], "shear_y": [[1, 0], [1, 1]], "swap": [[0, 1], [1, 0]], "neg": [[-1, 0], [0, 1]]}
    for s in steps:
        p = p.transform(mats[s])
    return p


@settings(max_examples=60, deadline=None)
@given(points)
def test_pick_identity(pts):
    p = polygon_or_skip(pts)
    assert p.area2 == 2 * p.genus + p.r - 2
    assert len(p.lattice_points) == p.genus + p.r


@settings(max_examples=60, deadline=None)
@given(points, unimodular_steps, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_canonical_form_is_invariant(pts, steps, shift):
    p = polygon_or_skip(pts)
    q = apply(steps, p).translate(shift)
    assert canonical_form(q) == canonical_form(p)
    assert lattice_width(q) == lattice_width(p)
    assert (q.genus, q.r, q.area2) == (p.genus, p.r, p.area2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 70), st.permutations(range(8)))
def test_certificate_matches_permutation_oracle(index, perm):
    g = enumerate_trivalent(5)[index]
    h = g.relabel(perm)
    assert certificate(h) == certificate(g)
    assert isomorphic_bruteforce(g, h)


@settings(max_examples=40, deadline=None)
@given(points, st.data())
def test_flips_keep_triangulations_valid(pts, data):
    p = polygon_or_skip(pts)
    assume(len(p.lattice_points) <= 14)
    t = placing_triangulation(p)
    assert is_regular(t)
    edges = t.interior_edges
    assume(edges)
    e = data.draw(st.sampled_from(edges))
    u = bistellar_flip(t, e)
    if u is not None:
        u.validate()
        assert len(u.triangles) == p.area2
