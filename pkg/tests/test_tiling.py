import mpmath
import pytest

from troplanar import tiling as tl
from troplanar.graphs import MarkedGraph
from troplanar.triangulation import is_regular


def test_parallelogram_and_q_polygons():
    for g in (2, 4, 6, 8):
        p = tl.parallelogram(g)
        assert p.genus == g and p.area2 == 3 * g
    odd, even = tl.q_polygons(3)
    assert (odd.genus, even.genus) == (9, 10)
    with pytest.raises(tl.TilingError):
        tl.parallelogram(3)
    with pytest.raises(tl.TilingError):
        tl.q_polygons(0)


def test_parallelogram_triangulation_counts():
    assert [len(tl._all_triangulations(g)) for g in (2, 4)] == [2, 46]


def test_small_parallelograms_are_all_regular():
    for g in (2, 4):
        assert all(is_regular(t) for t in tl._all_triangulations(g))


def test_tile_counts_small():
    tiles = tl.derive_tiles(1)
    assert len(tiles) == 2
    assert sorted(t.bridged for t in tiles) == [False, True]
    four = tl.derive_tiles(2)
    assert len(four) == 13
    assert sum(not t.bridged for t in four) == 8


def test_tiles_have_distinct_marked_graphs():
    for k in (1, 2):
        tiles = tl.derive_tiles(k)
        assert len({t.certificate for t in tiles}) == len(tiles)
        for t in tiles:
            assert isinstance(t.marked_graph, MarkedGraph)
            assert t.marked_graph.graph.genus == 2 * k
            assert t.name.startswith(f"g{2 * k}-")


def test_tiles_are_deterministic():
    a = [t.to_dict() for t in tl.derive_tiles(2)]
    tl._derive.cache_clear()
    assert [t.to_dict() for t in tl.derive_tiles(2)] == a


def test_caps_cover_their_polygons():
    caps = tl.caps()
    assert len(caps.odd_left) == tl.ODD_LEFT_CAP.area2
    assert len(caps.even_left) == tl.EVEN_LEFT_CAP.area2
    assert len(caps.right) == tl.parallelogram(2).area2


def test_compositions():
    assert tl.compositions(4) == [(2, 2), (4,)]
    assert len(tl.compositions(6)) == 4


def test_assembly_gives_the_q_polygons():
    tiles = tl.all_tiles()
    for parity in ("odd", "even"):
        t, skel = tl.assemble([tiles[2][0], tiles[2][1]], parity)
        odd, even = tl.q_polygons(2)
        assert t.polygon == (odd if parity == "odd" else even)
        assert skel.genus == t.polygon.genus
    with pytest.raises(tl.TilingError):
        tl.assemble([tiles[2][0]], "sideways")


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_verify_distinctness_small(parity):
    for n, expected in ((1, 2), (2, 17)):
        res = tl.verify_distinctness(n, parity, check_regular=(n == 1))
        assert res["distinct_skeletons"] == res["sequences"] == expected
        assert res["ok"]


def test_verify_limit():
    with pytest.raises(tl.TilingError):
        tl.verify_distinctness(tl.MAX_VERIFY_N + 1)


def test_recurrence_values():
    assert [tl.recurrence_a(n) for n in range(5)] == [1, 2, 17, 135, 641]
    with pytest.raises(ValueError):
        tl.recurrence_a(-1)


def test_closed_form_against_mpmath_roots():
    res = tl.closed_form_check(40)
    # independent: the real root of x^3 - 2x^2 - 13x - 75 by bisection
    alpha = mpmath.findroot(lambda x: x ** 3 - 2 * x ** 2 - 13 * x - 75, (5, 7), solver="bisect")
    assert res["alpha"] == pytest.approx(float(alpha), rel=1e-12)
    assert res["r"] ** 2 * res["alpha"] == pytest.approx(75, rel=1e-12)
    assert res["max_relative_error_n5_up"] < 1e-30
    assert res["max_relative_error_minus_arg"] > 1e-6


def test_lower_bound_report():
    rep = tl.lower_bound_report(7, census_value=672)
    assert rep["tiling_bound"] == 17
    assert rep["consistent"]
    with pytest.raises(tl.TilingError):
        tl.lower_bound_report(4)
