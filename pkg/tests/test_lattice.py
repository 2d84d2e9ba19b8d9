import random

import pytest

from troplanar.lattice import (
    InteriorKind,
    LatticePolygon,
    PolygonError,
    automorphisms,
    bound_r,
    canonical_form,
    enumerate_maximal_nonhyperelliptic,
    equivalent,
    interior_polygon,
    is_hyperelliptic,
    lattice_width,
    move_out,
    polygons_with_lattice_points,
    refined_r_bound,
    scale_double,
    width_in_direction,
)

SQUARE3 = LatticePolygon.from_points([(0, 0), (3, 0), (3, 3), (0, 3)])
TRIANGLE4 = LatticePolygon.from_points([(0, 0), (4, 0), (0, 4)])


def random_unimodular(rng, steps=6):
    m = [[1, 0], [0, 1]]
    for _ in range(steps):
        k = rng.randint(-2, 2)
        e = rng.choice([[[1, k], [0, 1]], [[1, 0], [k, 1]], [[0, 1], [1, 0]], [[-1, 0], [0, 1]]])
        m = [[sum(e[i][t] * m[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    return m


def brute_count(p):
    xs = [x for x, _ in p.vertices]
    ys = [y for _, y in p.vertices]
    inside = boundary = 0
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if p.strictly_contains((x, y)):
                inside += 1
            elif p.contains((x, y)):
                boundary += 1
    return inside, boundary


def test_basic_invariants_of_square():
    assert SQUARE3.area2 == 18
    assert SQUARE3.genus == 4
    assert SQUARE3.r == 12
    assert lattice_width(SQUARE3) == 3


def test_pick_against_point_count():
    for p in [SQUARE3, TRIANGLE4] + polygons_with_lattice_points(9):
        inside, boundary = brute_count(p)
        assert (p.genus, p.r) == (inside, boundary)
        assert p.area2 == 2 * p.genus + p.r - 2


def test_from_points_takes_hull_and_rejects_degenerate():
    p = LatticePolygon.from_points([(0, 0), (2, 0), (1, 0), (0, 2), (1, 1)])
    assert len(p.vertices) == 3
    with pytest.raises(PolygonError):
        LatticePolygon.from_points([(0, 0), (1, 1), (2, 2)])


def test_json_round_trip():
    assert LatticePolygon.from_json(TRIANGLE4.to_json()) == TRIANGLE4


def test_canonical_form_invariant_under_unimodular_maps():
    rng = random.Random(7)
    for p in [SQUARE3, TRIANGLE4] + polygons_with_lattice_points(8)[:20]:
        c = canonical_form(p)
        for _ in range(5):
            m = random_unimodular(rng)
            q = p.transform(m, (rng.randint(-5, 5), rng.randint(-5, 5)))
            assert canonical_form(q) == c
            assert equivalent(p, q)
            assert lattice_width(q) == lattice_width(p)


def test_transform_rejects_non_unimodular():
    with pytest.raises(PolygonError):
        TRIANGLE4.transform([[2, 0], [0, 1]])


def test_inequivalent_polygons_have_distinct_forms():
    forms = [canonical_form(p).vertices for p in polygons_with_lattice_points(7)]
    assert len(set(forms)) == len(forms)


def test_polygon_counts_by_lattice_points():
    counts = [len(polygons_with_lattice_points(n)) for n in range(3, 10)]
    assert counts == [1, 3, 6, 13, 21, 41, 66]


def test_interior_polygon_kinds():
    assert interior_polygon(LatticePolygon.from_points([(0, 0), (1, 0), (0, 1)])).kind is InteriorKind.EMPTY
    assert interior_polygon(LatticePolygon.from_points([(0, 0), (3, 0), (0, 3)])).kind is InteriorKind.POINT
    seg = LatticePolygon.from_points([(0, 0), (3, 0), (3, 2), (0, 2)])
    assert interior_polygon(seg).kind is InteriorKind.SEGMENT
    assert is_hyperelliptic(seg)
    ip = interior_polygon(SQUARE3)
    assert ip.kind is InteriorKind.TWO_DIMENSIONAL
    assert set(ip.points) == {(1, 1), (1, 2), (2, 1), (2, 2)}
    assert not is_hyperelliptic(SQUARE3)


def test_move_out_examples():
    assert move_out(LatticePolygon.from_points([(0, 0), (1, 0), (0, 1)])) == LatticePolygon.from_points(
        [(-1, -1), (3, -1), (-1, 3)]
    )
    unit = LatticePolygon.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert canonical_form(move_out(unit)) == canonical_form(SQUARE3.translate((-1, -1)))
    # the moved-out triangle has extra interior points here
    assert move_out(LatticePolygon.from_points([(0, 0), (1, 0), (0, 3)])) is None
    assert move_out(LatticePolygon.from_points([(0, 0), (1, 0), (2, 5)])) is None


@pytest.mark.parametrize("g,count", [(3, 1), (4, 3), (5, 4), (6, 5), (7, 7)])
def test_maximal_nonhyperelliptic_counts(g, count):
    polys = enumerate_maximal_nonhyperelliptic(g)
    assert len(polys) == count
    for p in polys:
        assert p.genus == g
        assert not is_hyperelliptic(p)
        assert move_out(canonical_form(interior_polygon(p).polygon)) is not None


def test_genus3_maximal_is_the_quartic_triangle():
    (p,) = enumerate_maximal_nonhyperelliptic(3)
    assert equivalent(p, TRIANGLE4)


def test_maximal_polygon_bound_and_width():
    for g in range(3, 8):
        for p in enumerate_maximal_nonhyperelliptic(g):
            assert p.r <= bound_r(g, lattice_width(p))
            assert 3 * lattice_width(p) ** 2 <= 8 * p.area2 // 2


def test_bound_r_values():
    assert bound_r(7) == 16
    assert bound_r(1) == 9
    assert bound_r(3, hyperelliptic=True) == 13
    assert refined_r_bound(6, 3) == 17
    with pytest.raises(PolygonError):
        bound_r(0)


def test_scale_double_genus():
    for p in polygons_with_lattice_points(6):
        q = scale_double(p)
        assert q.genus == 4 * p.genus + p.r - 3


def test_width_in_direction_and_automorphisms():
    assert width_in_direction(TRIANGLE4, (1, 0)) == 4
    assert width_in_direction(TRIANGLE4, (1, 1)) == 4
    assert len(automorphisms(TRIANGLE4)) == 6
    assert len(automorphisms(SQUARE3)) == 8
    for m, t in automorphisms(TRIANGLE4):
        assert TRIANGLE4.transform(m, t) == TRIANGLE4
