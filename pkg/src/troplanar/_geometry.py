"""Precomputed combinatorial geometry of a polygon's lattice point set.

Both enumeration kernels (compiled and pure Python) consume a
:class:`PointConfiguration`: point coordinates, primitive segments, a
crossing relation, and the unimodular "third points" of each directed
segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .lattice import LatticePolygon, Point, cross

MAX_POINTS = 40
WORDS = 16  # bitset words per segment set; 1024 segments max


@dataclass
class PointConfiguration:
    polygon: LatticePolygon
    points: list[Point]
    index: dict[Point, int]
    interior: list[bool]
    segments: list[tuple[int, int]]
    seg_id: dict[tuple[int, int], int]
    crossings: list[list[int]]
    # thirds[2*s + side]: points c completing a unimodular triangle on that side
    thirds: list[list[int]]
    boundary_slots: list[int]
    words: int = field(default=0)

    @property
    def n_points(self) -> int:
        return len(self.points)

    def slot(self, a: int, b: int) -> int:
        """Slot on the left of the directed segment a -> b."""
        if a < b:
            return 2 * self.seg_id[(a, b)]
        return 2 * self.seg_id[(b, a)] + 1


def _proper_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    o1 = cross(p1, p2, q1)
    o2 = cross(p1, p2, q2)
    o3 = cross(q1, q2, p1)
    o4 = cross(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def prepare(polygon: LatticePolygon) -> PointConfiguration:
    pts = list(polygon.lattice_points)
    if len(pts) > MAX_POINTS:
        raise ValueError(f"polygon has {len(pts)} lattice points; limit is {MAX_POINTS}")
    index = {p: i for i, p in enumerate(pts)}
    interior_set = set(polygon.interior_points)
    segments = []
    seg_id = {}
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            dx, dy = pts[j][0] - pts[i][0], pts[j][1] - pts[i][1]
            if math.gcd(dx, dy) == 1:
                seg_id[(i, j)] = len(segments)
                segments.append((i, j))
    words = (len(segments) + 63) // 64
    if words > WORDS:
        raise ValueError("too many segments for the kernel bitsets")
    crossings: list[list[int]] = [[] for _ in segments]
    for s, (i, j) in enumerate(segments):
        for t in range(s + 1, len(segments)):
            k, l = segments[t]
            if len({i, j, k, l}) < 4:
                continue
            if _proper_cross(pts[i], pts[j], pts[k], pts[l]):
                crossings[s].append(t)
                crossings[t].append(s)
    thirds: list[list[int]] = [[] for _ in range(2 * len(segments))]
    for s, (i, j) in enumerate(segments):
        for c, pc in enumerate(pts):
            o = cross(pts[i], pts[j], pc)
            if o == 1:
                thirds[2 * s].append(c)
            elif o == -1:
                thirds[2 * s + 1].append(c)
    # boundary unit segments, with the slot facing into the polygon
    boundary_slots = []
    vs = polygon.vertices
    for k in range(len(vs)):
        a, b = vs[k], vs[(k + 1) % len(vs)]
        g = math.gcd(b[0] - a[0], b[1] - a[1])
        step = ((b[0] - a[0]) // g, (b[1] - a[1]) // g)
        for t in range(g):
            p = (a[0] + t * step[0], a[1] + t * step[1])
            q = (p[0] + step[0], p[1] + step[1])
            ip, iq = index[p], index[q]
            # ccw boundary: the polygon lies to the left of p -> q
            if ip < iq:
                boundary_slots.append(2 * seg_id[(ip, iq)])
            else:
                boundary_slots.append(2 * seg_id[(iq, ip)] + 1)
    return PointConfiguration(
        polygon=polygon,
        points=pts,
        index=index,
        interior=[p in interior_set for p in pts],
        segments=segments,
        seg_id=seg_id,
        crossings=crossings,
        thirds=thirds,
        boundary_slots=boundary_slots,
        words=words,
    )
