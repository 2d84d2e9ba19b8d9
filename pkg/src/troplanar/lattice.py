"""Exact lattice-polygon arithmetic.

Everything here works on plain Python integers (and ``Fraction`` where a
half-plane intersection needs it); no floating point is used.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

Point = tuple[int, int]


def cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Strictly convex hull in counterclockwise order (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


class PolygonError(ValueError):
    pass


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon, vertices counterclockwise and strictly convex."""

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        vs = tuple((int(x), int(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", vs)
        n = len(vs)
        if n < 3:
            raise PolygonError(f"need at least 3 vertices, got {n}")
        for i in range(n):
            if cross(vs[i - 1], vs[i], vs[(i + 1) % n]) <= 0:
                raise PolygonError(f"vertices not strictly convex ccw at {vs[i]}")

    @classmethod
    def from_points(cls, points: Iterable[Point]) -> "LatticePolygon":
        hull = convex_hull(points)
        if len(hull) < 3:
            raise PolygonError("points span no two-dimensional polygon")
        return cls(tuple(hull))

    @classmethod
    def from_json(cls, text: str | dict) -> "LatticePolygon":
        data = json.loads(text) if isinstance(text, str) else text
        return cls(tuple(tuple(v) for v in data["vertices"]))

    def to_dict(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    # -- counting -------------------------------------------------------
    @cached_property
    def area2(self) -> int:
        vs = self.vertices
        n = len(vs)
        return sum(vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1] for i in range(n))

    @cached_property
    def boundary_count(self) -> int:
        vs = self.vertices
        n = len(vs)
        return sum(
            math.gcd(vs[(i + 1) % n][0] - vs[i][0], vs[(i + 1) % n][1] - vs[i][1]) for i in range(n)
        )

    @cached_property
    def genus(self) -> int:
        g2 = self.area2 - self.boundary_count + 2
        assert g2 % 2 == 0
        return g2 // 2

    @property
    def r(self) -> int:
        return self.boundary_count

    @property
    def g(self) -> int:
        return self.genus

    @cached_property
    def lattice_points(self) -> tuple[Point, ...]:
        """All lattice points, sorted lexicographically."""
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        out = []
        for x in range(min(xs), max(xs) + 1):
            for y in range(min(ys), max(ys) + 1):
                if self.contains((x, y)):
                    out.append((x, y))
        return tuple(out)

    @cached_property
    def interior_points(self) -> tuple[Point, ...]:
        return tuple(p for p in self.lattice_points if self.strictly_contains(p))

    @cached_property
    def boundary_points(self) -> tuple[Point, ...]:
        return tuple(p for p in self.lattice_points if not self.strictly_contains(p))

    def contains(self, p: Point) -> bool:
        vs = self.vertices
        return all(cross(vs[i - 1], vs[i], p) >= 0 for i in range(len(vs)))

    def strictly_contains(self, p: Point) -> bool:
        vs = self.vertices
        return all(cross(vs[i - 1], vs[i], p) > 0 for i in range(len(vs)))

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def boundary_edge_of(self, p: Point) -> list[int]:
        """Indices of the polygon edges whose closed segment contains ``p``."""
        out = []
        for i, (a, b) in enumerate(self.edges()):
            if cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(
                a[1], b[1]
            ) <= p[1] <= max(a[1], b[1]):
                out.append(i)
        return out

    def transform(self, m: Sequence[Sequence[int]], t: Point = (0, 0)) -> "LatticePolygon":
        (a, b), (c, d) = m
        det = a * d - b * c
        if det not in (1, -1):
            raise PolygonError("transformation is not unimodular")
        pts = [(a * x + b * y + t[0], c * x + d * y + t[1]) for x, y in self.vertices]
        return LatticePolygon.from_points(pts)

    def translate(self, t: Point) -> "LatticePolygon":
        return LatticePolygon(tuple((x + t[0], y + t[1]) for x, y in self.vertices))

    def __repr__(self) -> str:
        return f"LatticePolygon({list(self.vertices)})"


def area2(p: LatticePolygon) -> int:
    return p.area2


# -- equivalence ----------------------------------------------------------


def _placements(vs: Sequence[Point]) -> Iterable[tuple[Point, ...]]:
    """Every placement of a ccw vertex cycle with one edge on the positive x-axis."""
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        dx, dy = b[0] - a[0], b[1] - a[1]
        k = math.gcd(dx, dy)
        p, q = dx // k, dy // k
        _, s, t = _ext_gcd(p, q)
        # rows (s, t) and (-q, p): sends (p, q) to (1, 0), determinant 1
        rows = ((s, t), (-q, p))
        moved = []
        for j in range(n):
            x, y = vs[(i + j) % n]
            x, y = x - a[0], y - a[1]
            moved.append((rows[0][0] * x + rows[0][1] * y, rows[1][0] * x + rows[1][1] * y))
        # fix the residual shear by the vertex preceding the edge
        px, py = moved[-1]
        m = -(px // py)
        yield tuple((x + m * y, y) for x, y in moved)


def canonical_form(p: LatticePolygon) -> LatticePolygon:
    """Normal form under affine unimodular maps, reflections included."""
    vs = list(p.vertices)
    mirror = [(-x, y) for x, y in reversed(vs)]
    best = min(min(_placements(vs)), min(_placements(mirror)))
    return LatticePolygon(best)


def equivalent(p: LatticePolygon, q: LatticePolygon) -> bool:
    return canonical_form(p) == canonical_form(q)


def automorphisms(p: LatticePolygon) -> list[tuple[tuple[tuple[int, int], tuple[int, int]], Point]]:
    """Affine unimodular maps (matrix, translation) sending ``p`` onto itself."""
    vs = list(p.vertices)
    n = len(vs)
    out = []
    pts = set(vs)
    for i in range(n):
        for direction in (1, -1):
            # candidate map sends vs[0] -> vs[i], vs[1] -> vs[i+direction]
            a0, a1, a2 = vs[0], vs[1], vs[-1]
            b0, b1 = vs[i], vs[(i + direction) % n]
            b2 = vs[(i - direction) % n]
            u1 = (a1[0] - a0[0], a1[1] - a0[1])
            u2 = (a2[0] - a0[0], a2[1] - a0[1])
            w1 = (b1[0] - b0[0], b1[1] - b0[1])
            w2 = (b2[0] - b0[0], b2[1] - b0[1])
            det = u1[0] * u2[1] - u1[1] * u2[0]
            # M = W U^{-1}
            m00 = Fraction(w1[0] * u2[1] - w2[0] * u1[1], det)
            m01 = Fraction(-w1[0] * u2[0] + w2[0] * u1[0], det)
            m10 = Fraction(w1[1] * u2[1] - w2[1] * u1[1], det)
            m11 = Fraction(-w1[1] * u2[0] + w2[1] * u1[0], det)
            if any(v.denominator != 1 for v in (m00, m01, m10, m11)):
                continue
            m = ((int(m00), int(m01)), (int(m10), int(m11)))
            if m[0][0] * m[1][1] - m[0][1] * m[1][0] not in (1, -1):
                continue
            t = (b0[0] - m[0][0] * a0[0] - m[0][1] * a0[1], b0[1] - m[1][0] * a0[0] - m[1][1] * a0[1])
            image = {(m[0][0] * x + m[0][1] * y + t[0], m[1][0] * x + m[1][1] * y + t[1]) for x, y in vs}
            if image == pts:
                out.append((m, t))
    return out


# -- lattice width --------------------------------------------------------


def width_in_direction(p: LatticePolygon, d: Point) -> int:
    vals = [d[0] * x + d[1] * y for x, y in p.vertices]
    return max(vals) - min(vals)


def lattice_width(p: LatticePolygon) -> int:
    """Minimal strip width over primitive directions.

    Directions are scanned by growing max-norm; the scan stops once a norm
    bound from two independent edge vectors proves no larger direction can
    beat the running optimum.
    """
    vs = p.vertices
    u1 = (vs[1][0] - vs[0][0], vs[1][1] - vs[0][1])
    u2 = (vs[2][0] - vs[1][0], vs[2][1] - vs[1][1])
    det = abs(u1[0] * u2[1] - u1[1] * u2[0])
    rowsum = max(abs(u2[1]) + abs(u1[1]), abs(u2[0]) + abs(u1[0]))
    best = min(width_in_direction(p, (1, 0)), width_in_direction(p, (0, 1)))
    k = 1
    # any d with |d|_inf = k has width >= k * det / rowsum
    while k * det <= best * rowsum:
        for a in range(-k, k + 1):
            for b in range(0, k + 1):
                # d and -d give the same strip
                if max(abs(a), b) != k or (b == 0 and a < 0) or math.gcd(a, b) != 1:
                    continue
                w = width_in_direction(p, (a, b))
                if w < best:
                    best = w
        k += 1
    return best


# -- interior polygon -----------------------------------------------------


class InteriorKind(enum.Enum):
    EMPTY = "empty"
    POINT = "point"
    SEGMENT = "segment"
    TWO_DIMENSIONAL = "two_dimensional"


@dataclass(frozen=True)
class InteriorPolygon:
    kind: InteriorKind
    points: tuple[Point, ...] = ()
    polygon: Optional[LatticePolygon] = None

    @property
    def hyperelliptic(self) -> bool:
        return self.kind is not InteriorKind.TWO_DIMENSIONAL


def interior_polygon(p: LatticePolygon) -> InteriorPolygon:
    pts = p.interior_points
    if not pts:
        return InteriorPolygon(InteriorKind.EMPTY)
    if len(pts) == 1:
        return InteriorPolygon(InteriorKind.POINT, pts)
    hull = convex_hull(pts)
    if len(hull) < 3:
        return InteriorPolygon(InteriorKind.SEGMENT, pts)
    return InteriorPolygon(InteriorKind.TWO_DIMENSIONAL, pts, LatticePolygon(tuple(hull)))


def is_hyperelliptic(p: LatticePolygon) -> bool:
    return interior_polygon(p).hyperelliptic


# -- maximal polygons -----------------------------------------------------


def _halfplane_vertices(halfplanes: list[tuple[int, int, int]]) -> list[tuple[Fraction, Fraction]]:
    """Vertices of {x : n.x <= c for all (n0, n1, c)}; assumed bounded."""
    pts = set()
    m = len(halfplanes)
    for i in range(m):
        a1, b1, c1 = halfplanes[i]
        for j in range(i + 1, m):
            a2, b2, c2 = halfplanes[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            x = Fraction(c1 * b2 - c2 * b1, det)
            y = Fraction(a1 * c2 - a2 * c1, det)
            if all(a * x + b * y <= c for a, b, c in halfplanes):
                pts.add((x, y))
    return list(pts)


def move_out(sigma: LatticePolygon) -> Optional[LatticePolygon]:
    """Move every edge of ``sigma`` out by lattice distance one.

    Returns the resulting polygon when it is a lattice polygon whose interior
    lattice points are exactly the lattice points of ``sigma``; otherwise None.
    """
    if not isinstance(sigma, LatticePolygon):
        raise PolygonError("move_out needs a two-dimensional polygon")
    halfplanes = []
    for a, b in sigma.edges():
        dx, dy = b[0] - a[0], b[1] - a[1]
        k = math.gcd(dx, dy)
        n = (dy // k, -dx // k)
        c = n[0] * a[0] + n[1] * a[1]
        halfplanes.append((n[0], n[1], c + 1))
    verts = _halfplane_vertices(halfplanes)
    if any(x.denominator != 1 or y.denominator != 1 for x, y in verts):
        return None
    result = LatticePolygon.from_points((int(x), int(y)) for x, y in verts)
    if set(result.interior_points) != set(sigma.lattice_points):
        return None
    return result


def _polygons_with_n_points(n: int) -> list[LatticePolygon]:
    """Two-dimensional lattice polygons with exactly n lattice points, up to equivalence."""
    if n < 3:
        return []
    found: dict[tuple, LatticePolygon] = {}
    base = canonical_form(LatticePolygon.from_points([(0, 0), (n - 2, 0), (0, 1)]))
    found[base.vertices] = base
    for small in _polygons_with_n_points_cached(n - 1):
        pts = set(small.lattice_points)
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        for x in range(min(xs) - 2, max(xs) + 3):
            for y in range(min(ys) - 2, max(ys) + 3):
                if (x, y) in pts:
                    continue
                cand = LatticePolygon.from_points(list(pts) + [(x, y)])
                if len(cand.lattice_points) != n:
                    continue
                c = canonical_form(cand)
                found.setdefault(c.vertices, c)
    return sorted(found.values(), key=lambda q: q.vertices)


_POLY_CACHE: dict[int, list[LatticePolygon]] = {}


def _polygons_with_n_points_cached(n: int) -> list[LatticePolygon]:
    if n not in _POLY_CACHE:
        _POLY_CACHE[n] = _polygons_with_n_points(n)
    return _POLY_CACHE[n]


def polygons_with_lattice_points(n: int) -> list[LatticePolygon]:
    """All two-dimensional lattice polygons with exactly ``n`` lattice points."""
    return list(_polygons_with_n_points_cached(n))


def enumerate_maximal_nonhyperelliptic(g: int) -> list[LatticePolygon]:
    """Canonical forms of the maximal nonhyperelliptic polygons of genus ``g``."""
    if g < 2:
        raise PolygonError("genus must be at least 2")
    out: dict[tuple, LatticePolygon] = {}
    for sigma in polygons_with_lattice_points(g):
        big = move_out(sigma)
        if big is None:
            continue
        assert big.area2 == big.r + 2 * big.g - 2
        c = canonical_form(big)
        out.setdefault(c.vertices, c)
    return sorted(out.values(), key=lambda q: (q.r, q.vertices))


def scale_double(p: LatticePolygon) -> LatticePolygon:
    q = LatticePolygon(tuple((2 * x, 2 * y) for x, y in p.vertices))
    assert q.genus == 4 * p.genus + p.r - 3
    if p.genus >= 1:
        assert q.genus <= 6 * p.genus + 4
    return q


def _floor_rational_plus_sqrt(q: Fraction, s: Fraction) -> int:
    """floor(q + sqrt(s)) for rational q and s >= 0, exactly."""
    m = math.floor(q) + math.isqrt(math.floor(s))
    # adjust m to be the largest integer with m - q <= sqrt(s)
    def ok(k: int) -> bool:
        d = k - q
        return d <= 0 or d * d <= s

    while ok(m + 1):
        m += 1
    while not ok(m):
        m -= 1
    return m


def bound_r(g: int, lw: Optional[int] = None, hyperelliptic: bool = False) -> int:
    """Upper bound on boundary points of a genus-g polygon, used for pruning."""
    if g < 1:
        raise PolygonError("bound_r needs g >= 1")
    best = 2 * g + 7
    if not hyperelliptic:
        best = min(best, g + 9)
    if lw is not None and lw >= 4:
        ell = lw - 1
        refined = _floor_rational_plus_sqrt(
            Fraction(2 * g, ell) + 2, Fraction(16) * (Fraction(g) + Fraction(8, 3))
        )
        best = min(best, refined)
    return best


def refined_r_bound(g: int, ell: int) -> int:
    """floor(2g/ell + 4 sqrt(g + 8/3) + 2) without capping."""
    return _floor_rational_plus_sqrt(Fraction(2 * g, ell) + 2, Fraction(16) * (Fraction(g) + Fraction(8, 3)))
