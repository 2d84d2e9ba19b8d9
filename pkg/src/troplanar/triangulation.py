"""Unimodular triangulations, regular subdivisions and the regularity test.

Triangles are stored as sorted triples of lattice points.  Regularity is
decided by a linear program over heights with one fold constraint per
interior edge.  A floating-point solve proposes an answer and the answer is
then certified in exact arithmetic: an integral height function whose folds
are all positive when regular, or a nonnegative rational combination of fold
constraints that vanishes identically when not.  If neither certificate can
be confirmed the exact rational simplex in :mod:`troplanar.simplex` decides.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from . import simplex
from ._geometry import prepare
from ._kernels import kernel
from .lattice import LatticePolygon, Point, convex_hull, cross

Tri = tuple[Point, Point, Point]
Seg = tuple[Point, Point]


class TriangulationError(ValueError):
    pass


def _tri(a: Point, b: Point, c: Point) -> Tri:
    return tuple(sorted((a, b, c)))  # type: ignore[return-value]


def _seg(a: Point, b: Point) -> Seg:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Triangulation:
    polygon: LatticePolygon
    triangles: frozenset

    @classmethod
    def from_triangles(cls, polygon: LatticePolygon, triangles: Iterable[Sequence[Point]],
                       check: bool = True) -> "Triangulation":
        t = cls(polygon, frozenset(_tri(*(tuple(p) for p in tri)) for tri in triangles))
        if check:
            t.validate()
        return t

    @classmethod
    def from_indices(cls, polygon: LatticePolygon, points: Sequence[Point],
                     triangles: Iterable[Sequence[int]]) -> "Triangulation":
        return cls(polygon, frozenset(_tri(points[a], points[b], points[c]) for a, b, c in triangles))

    # -- derived structure -------------------------------------------------
    @cached_property
    def edges(self) -> dict[Seg, tuple[Tri, ...]]:
        out: dict[Seg, list[Tri]] = {}
        for t in self.triangles:
            a, b, c = t
            for s in (_seg(a, b), _seg(b, c), _seg(a, c)):
                out.setdefault(s, []).append(t)
        return {s: tuple(ts) for s, ts in out.items()}

    @property
    def interior_edges(self) -> list[Seg]:
        return sorted(s for s, ts in self.edges.items() if len(ts) == 2)

    @property
    def boundary_edges(self) -> list[Seg]:
        return sorted(s for s, ts in self.edges.items() if len(ts) == 1)

    @cached_property
    def key(self) -> tuple[Tri, ...]:
        """Stable identity: the sorted triangle list."""
        return tuple(sorted(self.triangles))

    def __hash__(self) -> int:
        return hash(self.key)

    def validate(self) -> None:
        p = self.polygon
        for t in self.triangles:
            if abs(cross(*t)) != 1:
                raise TriangulationError(f"triangle {t} is not unimodular")
            if not all(p.contains(q) for q in t):
                raise TriangulationError(f"triangle {t} leaves the polygon")
        if len(self.triangles) != p.area2:
            raise TriangulationError("triangle areas do not add up to the polygon area")
        boundary = set(_boundary_segments(p))
        for s, ts in self.edges.items():
            want = 1 if s in boundary else 2
            if len(ts) != want:
                raise TriangulationError(f"edge {s} has {len(ts)} incident triangles")
        for s in boundary:
            if s not in self.edges:
                raise TriangulationError(f"boundary segment {s} is not covered")

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "polygon": self.polygon.to_dict(),
            "triangles": [[list(q) for q in t] for t in self.key],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str | dict) -> "Triangulation":
        d = json.loads(text) if isinstance(text, str) else text
        return cls.from_triangles(LatticePolygon.from_json(d["polygon"]), d["triangles"])

    def transform(self, m: Sequence[Sequence[int]], t: Point = (0, 0)) -> "Triangulation":
        def f(q: Point) -> Point:
            return (m[0][0] * q[0] + m[0][1] * q[1] + t[0], m[1][0] * q[0] + m[1][1] * q[1] + t[1])
        return Triangulation(self.polygon.transform(m, t),
                             frozenset(_tri(f(a), f(b), f(c)) for a, b, c in self.triangles))


def _boundary_segments(p: LatticePolygon) -> list[Seg]:
    out = []
    vs = p.vertices
    for k in range(len(vs)):
        a, b = vs[k], vs[(k + 1) % len(vs)]
        g = math.gcd(b[0] - a[0], b[1] - a[1])
        step = ((b[0] - a[0]) // g, (b[1] - a[1]) // g)
        for i in range(g):
            q0 = (a[0] + i * step[0], a[1] + i * step[1])
            out.append(_seg(q0, (q0[0] + step[0], q0[1] + step[1])))
    return out


# -- heights and regular subdivisions -----------------------------------------

@dataclass(frozen=True)
class HeightFunction:
    values: dict

    def __getitem__(self, q: Point) -> Fraction:
        return Fraction(self.values[q])

    def to_dict(self) -> dict:
        return {"heights": [[q[0], q[1], str(Fraction(v))] for q, v in sorted(self.values.items())]}


def induce_subdivision(p: LatticePolygon, h: HeightFunction | dict) -> list[tuple[Point, ...]]:
    """Cells of the regular subdivision induced by ``h`` (exact).

    Each cell is the sorted tuple of all lattice points lying on one lower
    facet of the lifted point set.
    """
    hv = h.values if isinstance(h, HeightFunction) else h
    pts = list(p.lattice_points)
    den = 1
    for q in pts:
        den = den * Fraction(hv[q]).denominator // math.gcd(den, Fraction(hv[q]).denominator)
    z = {q: int(Fraction(hv[q]) * den) for q in pts}
    cells: set[tuple[Point, ...]] = set()
    n = len(pts)
    for i in range(n):
        a = pts[i]
        for j in range(i + 1, n):
            b = pts[j]
            for k in range(j + 1, n):
                c = pts[k]
                o = cross(a, b, c)
                if o == 0:
                    continue
                ux, uy, uz = b[0] - a[0], b[1] - a[1], z[b] - z[a]
                vx, vy, vz = c[0] - a[0], c[1] - a[1], z[c] - z[a]
                # normal (nx, ny, nz) with nz = o; q is above the plane iff sign(o)*side > 0
                nx = uy * vz - uz * vy
                ny = uz * vx - ux * vz
                on = []
                ok = True
                for q in pts:
                    side = nx * (q[0] - a[0]) + ny * (q[1] - a[1]) + o * (z[q] - z[a])
                    side = side if o > 0 else -side
                    if side < 0:
                        ok = False
                        break
                    if side == 0:
                        on.append(q)
                if ok:
                    cells.add(tuple(sorted(on)))
    return sorted(cells)


# -- regularity ------------------------------------------------------------

def _fold_rows(t: Triangulation, index: dict[Point, int]) -> list[dict[int, int]]:
    """Per interior edge, integer coefficients c with fold(h) = sum c_q h_q."""
    rows = []
    for s in t.interior_edges:
        t1, t2 = t.edges[s]
        a, b = s
        c = next(q for q in t1 if q not in s)
        d = next(q for q in t2 if q not in s)
        # barycentric coordinates of d with respect to (a, b, c); integral here
        la = cross(b, c, d) // cross(b, c, a)
        lb = cross(c, a, d) // cross(c, a, b)
        lc = cross(a, b, d) // cross(a, b, c)
        row: dict[int, int] = {}
        for q, coef in ((d, 1), (a, -la), (b, -lb), (c, -lc)):
            if coef:
                row[index[q]] = row.get(index[q], 0) + coef
        rows.append(row)
    return rows


@dataclass
class RegularityResult:
    regular: bool
    witness: Optional[HeightFunction] = None
    # nonnegative multipliers of fold constraints summing to zero when not regular
    farkas: Optional[list[Fraction]] = None
    method: str = ""


def _fold_values(rows: list[dict[int, int]], h: Sequence) -> list:
    return [sum(c * h[q] for q, c in row.items()) for row in rows]


def _float_certificate(rows: list[dict[int, int]], npts: int, gauge: Sequence[int]) -> Optional[RegularityResult]:
    try:
        import numpy as np
        from scipy.optimize import linprog
        from scipy.sparse import csr_matrix
    except ImportError:  # pragma: no cover - scipy is a declared dependency
        return None
    m = len(rows)
    if m == 0:
        return RegularityResult(True, None, None, "float")
    data, ri, ci = [], [], []
    for r, row in enumerate(rows):
        for q, c in row.items():
            ri.append(r)
            ci.append(q)
            data.append(-float(c))
    a_ub = csr_matrix((data, (ri, ci)), shape=(m, npts))
    bounds = [(None, None)] * npts
    for q in gauge:
        bounds[q] = (0, 0)
    res = linprog(np.zeros(npts), A_ub=a_ub, b_ub=-np.ones(m), bounds=bounds, method="highs")
    if res.status == 0:
        heights = [int(round(v * 64)) for v in res.x]
        if all(f > 0 for f in _fold_values(rows, heights)):
            return RegularityResult(True, heights, None, "float+exact")  # type: ignore[arg-type]
        return None
    if res.status != 2:
        return None
    # infeasible: look for y >= 0, sum y = 1, sum_e y_e row_e = 0
    a_eq = csr_matrix((-np.array(data), (ci, ri)), shape=(npts, m))
    a_eq = np.vstack([a_eq.toarray(), np.ones((1, m))])
    b_eq = np.zeros(npts + 1)
    b_eq[-1] = 1.0
    res = linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs-ds")
    if res.status != 0:
        return None
    support = [e for e in range(m) if res.x[e] > 1e-9]
    y = _solve_support(rows, npts, support)
    if y is None:
        return None
    full = [Fraction(0)] * m
    for e, v in zip(support, y):
        full[e] = v
    return RegularityResult(False, None, full, "float+exact")


def _solve_support(rows: list[dict[int, int]], npts: int, support: list[int]) -> Optional[list[Fraction]]:
    """Exact y on ``support`` with sum_e y_e row_e = 0, sum y = 1, y >= 0."""
    k = len(support)
    eqs = []
    for q in range(npts):
        coeffs = [Fraction(rows[e].get(q, 0)) for e in support]
        if any(coeffs):
            eqs.append(coeffs + [Fraction(0)])
    eqs.append([Fraction(1)] * k + [Fraction(1)])
    sol = simplex.solve_linear_system(eqs, k)
    if sol is None or any(v < 0 for v in sol):
        return None
    for q in range(npts):
        if sum(rows[e].get(q, 0) * v for e, v in zip(support, sol)) != 0:
            return None
    if sum(sol) != 1:
        return None
    return sol


def _exact_regularity(rows: list[dict[int, int]], npts: int) -> RegularityResult:
    """maximize eps subject to fold_e(h) >= eps, 0 <= h <= 1, 0 <= eps <= 1."""
    nv = npts + 1
    a_rows: list[list[Fraction]] = []
    b: list[Fraction] = []
    for row in rows:
        r = [Fraction(0)] * nv
        for q, c in row.items():
            r[q] = Fraction(-c)
        r[npts] = Fraction(1)
        a_rows.append(r)
        b.append(Fraction(0))
    for q in range(nv):
        r = [Fraction(0)] * nv
        r[q] = Fraction(1)
        a_rows.append(r)
        b.append(Fraction(1))
    c = [Fraction(0)] * npts + [Fraction(1)]
    value, x = simplex.maximize(c, a_rows, b)
    if value > 0:
        return RegularityResult(True, list(x[:npts]), None, "exact-simplex")  # type: ignore[arg-type]
    return RegularityResult(False, None, None, "exact-simplex")


def regularity(t: Triangulation, exact_only: bool = False) -> RegularityResult:
    """Decide regularity of a unimodular triangulation, with a certificate."""
    pts = list(t.polygon.lattice_points)
    index = {q: i for i, q in enumerate(pts)}
    rows = _fold_rows(t, index)
    res = None
    if not exact_only:
        gauge = [index[q] for q in min(t.triangles)]
        res = _float_certificate(rows, len(pts), gauge)
    if res is None:
        res = _exact_regularity(rows, len(pts))
    if res.regular:
        raw = res.witness if res.witness is not None else [0] * len(pts)
        lo, hi = min(raw), max(raw)  # type: ignore[type-var]
        span = (hi - lo) or 1
        res.witness = HeightFunction({q: Fraction(raw[i] - lo) / span for q, i in index.items()})  # type: ignore[index]
        assert all(f > 0 for f in _fold_values(rows, [res.witness[q] for q in pts]))
    return res


def is_regular(t: Triangulation) -> bool:
    return regularity(t).regular


def regularity_from_indices(polygon: LatticePolygon, points: Sequence[Point],
                            triangles: Iterable[Sequence[int]]) -> bool:
    return is_regular(Triangulation.from_indices(polygon, points, triangles))


# -- flips -----------------------------------------------------------------

def bistellar_flip(t: Triangulation, e: Seg) -> Optional[Triangulation]:
    e = _seg(*e)
    ts = t.edges.get(e)
    if ts is None:
        raise TriangulationError(f"{e} is not an edge of the triangulation")
    if len(ts) != 2:
        return None
    a, b = e
    c = next(q for q in ts[0] if q not in e)
    d = next(q for q in ts[1] if q not in e)
    # convex quadrilateral: a and b strictly on opposite sides of cd
    if cross(c, d, a) * cross(c, d, b) >= 0:
        return None
    new = set(t.triangles)
    new.discard(ts[0])
    new.discard(ts[1])
    new.add(_tri(a, c, d))
    new.add(_tri(b, c, d))
    return Triangulation(t.polygon, frozenset(new))


def placing_triangulation(p: LatticePolygon) -> Triangulation:
    """Place the lattice points in lexicographic order (all of them used)."""
    pts = sorted(p.lattice_points)
    k = 2
    while cross(pts[0], pts[1], pts[k]) == 0:
        k += 1
    run, apex = pts[:k], pts[k]
    tris = [_tri(run[i], run[i + 1], apex) for i in range(k - 1)]
    if cross(run[0], run[-1], apex) > 0:
        boundary = run + [apex]
    else:
        boundary = list(reversed(run)) + [apex]
    for q in pts[k + 1:]:
        nb = len(boundary)
        vis = [cross(boundary[i], boundary[(i + 1) % nb], q) < 0 for i in range(nb)]
        start = next(i for i in range(nb) if vis[i] and not vis[i - 1])
        i = start
        while vis[i % nb]:
            tris.append(_tri(boundary[i % nb], boundary[(i + 1) % nb], q))
            i += 1
        end = i % nb  # boundary[end] is the last vertex of the visible chain
        # rotate so the chain starts at index 0, then splice q in
        rot = boundary[start:] + boundary[:start]
        length = (end - start) % nb
        boundary = [rot[0], q] + rot[length:]
    return Triangulation(p, frozenset(tris))


def _flip_bfs(p: LatticePolygon) -> Iterator[Triangulation]:
    start = placing_triangulation(p)
    seen = {start.key}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        yield t
        for e in t.interior_edges:
            u = bistellar_flip(t, e)
            if u is not None and u.key not in seen:
                seen.add(u.key)
                queue.append(u)


def _placement(p: LatticePolygon) -> Iterator[Triangulation]:
    cfg = prepare(p)
    out: list[Triangulation] = []
    kernel.enumerate_triangulations(
        cfg, lambda tris: out.append(Triangulation.from_indices(p, cfg.points, tris)))
    yield from out


def enumerate_unimodular_triangulations(
    p: LatticePolygon, regular_only: bool = False, method: str = "flip"
) -> Iterator[Triangulation]:
    """Every unimodular triangulation of ``p`` exactly once.

    ``method="flip"`` walks the flip graph from a placing triangulation;
    ``method="placement"`` runs the direct-placement kernel.
    """
    if method == "flip":
        gen = _flip_bfs(p)
    elif method == "placement":
        gen = _placement(p)
    else:
        raise ValueError(f"unknown method {method!r}")
    for t in gen:
        if not regular_only or is_regular(t):
            yield t


def count_unimodular_triangulations(p: LatticePolygon) -> int:
    return kernel.count(prepare(p))


def orbit_key(t: Triangulation, group: Sequence) -> tuple:
    """Least image of ``t`` under a group of (matrix, translation) maps."""
    best = None
    for m, s in group:
        img = tuple(sorted(
            _tri(*[(m[0][0] * q[0] + m[0][1] * q[1] + s[0], m[1][0] * q[0] + m[1][1] * q[1] + s[1])
                   for q in tri])
            for tri in t.triangles))
        if best is None or img < best:
            best = img
    return best  # type: ignore[return-value]


def orbit_counts(p: LatticePolygon, triangulations: Iterable[Triangulation]) -> dict[str, int]:
    """Labeled count and orbit counts under the full and the orientation-preserving symmetry groups."""
    from .lattice import automorphisms

    full = automorphisms(p)
    rot = [(m, s) for m, s in full if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1]
    labeled = 0
    o_full, o_rot = set(), set()
    for t in triangulations:
        labeled += 1
        o_full.add(orbit_key(t, full))
        o_rot.add(orbit_key(t, rot))
    return {"labeled": labeled, "full_group": len(o_full), "orientation_preserving": len(o_rot),
            "group_order": len(full)}


# -- splits ----------------------------------------------------------------

@dataclass(frozen=True)
class Split:
    edge: Seg
    sides: tuple[LatticePolygon, LatticePolygon]
    nontrivial: bool


def _on_edges(p: LatticePolygon, q: Point) -> set[int]:
    vs = p.vertices
    return {k for k in range(len(vs)) if cross(vs[k], vs[(k + 1) % len(vs)], q) == 0}


def split_sides(p: LatticePolygon, e: Seg) -> tuple[LatticePolygon, LatticePolygon]:
    a, b = e
    left = [q for q in p.lattice_points if cross(a, b, q) >= 0]
    right = [q for q in p.lattice_points if cross(a, b, q) <= 0]
    return LatticePolygon.from_points(left), LatticePolygon.from_points(right)


def splits(t: Triangulation) -> list[Split]:
    p = t.polygon
    out = []
    for s in t.interior_edges:
        ea, eb = _on_edges(p, s[0]), _on_edges(p, s[1])
        if not ea or not eb or ea & eb:
            continue
        sides = split_sides(p, s)
        out.append(Split(s, sides, sides[0].genus > 0 and sides[1].genus > 0))
    return out


def is_triangulation_of(cells: Sequence[Sequence[Point]], t: Triangulation) -> bool:
    return sorted(tuple(sorted(c)) for c in cells) == sorted(t.triangles)


def random_regular_triangulation(p: LatticePolygon, rng) -> Optional[Triangulation]:
    """Triangulation induced by perturbed convex heights, if it is unimodular."""
    # the convex part keeps every lattice point a vertex; the noise breaks ties
    h = {q: 10 ** 6 * (q[0] ** 2 + q[1] ** 2) + rng.randrange(0, 10 ** 5) for q in p.lattice_points}
    cells = induce_subdivision(p, h)
    if all(len(c) == 3 and abs(cross(*c)) == 1 for c in cells):
        return Triangulation(p, frozenset(_tri(*c) for c in cells))
    return None


def convex_hull_polygon(points: Iterable[Point]) -> LatticePolygon:
    return LatticePolygon(tuple(convex_hull(points)))
