"""Tiles, tilings of the genus-g parallelogram, and the resulting lower bound.

A tile is a unimodular triangulation of the parallelogram of genus 2, 4 or
6.  Tiles are glued left to right along their slanted edges (lattice length
one, so each seam is a split and becomes a bridge of the skeleton) and the
strip is closed off by fixed end caps.  The skeleton of the result is a
chain of 2-edge-connected pieces; each tile contributes one or two of them,
marked at the points where the neighbouring bridges attach.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import mpmath

from .graphs import MarkedGraph, Multigraph, prune_leaves_map, suppress_degree_two
from .lattice import LatticePolygon
from .skeleton import dual_graph
from .triangulation import Triangulation, enumerate_unimodular_triangulations, is_regular

Point = tuple[int, int]

TILE_GENERA = (2, 4, 6)
RECURRENCE = (2, 13, 75)  # tiles of genus 2, 4, 6
MAX_VERIFY_N = 4


class TilingError(ValueError):
    pass


def parallelogram(g: int) -> LatticePolygon:
    if g < 2 or g % 2:
        raise TilingError(f"parallelogram needs an even genus >= 2, got {g}")
    p = LatticePolygon.from_points([(0, 3), (1, 0), (g // 2, 3), ((g + 2) // 2, 0)])
    assert p.genus == g
    return p


def q_polygons(n: int) -> tuple[LatticePolygon, LatticePolygon]:
    """The trapezoid of genus 2n+3 and the pentagon of genus 2n+4."""
    if n < 1:
        raise TilingError("n must be at least 1")
    odd = LatticePolygon.from_points([(0, 3), (2, 0), (n + 2, 3), (n + 3, 0)])
    even = LatticePolygon.from_points([(0, 1), (0, 3), (2, 0), (n + 2, 3), (n + 3, 0)])
    assert odd.genus == 2 * n + 3 and even.genus == 2 * n + 4
    return odd, even


def _shift(tris, dx: int) -> list[tuple[Point, ...]]:
    return [tuple((x + dx, y) for x, y in tri) for tri in tris]


def triangulation_hash(t: Triangulation) -> str:
    return hashlib.sha256(json.dumps(t.key).encode()).hexdigest()


@lru_cache(maxsize=None)
def _all_triangulations(g: int) -> tuple[Triangulation, ...]:
    ts = list(enumerate_unimodular_triangulations(parallelogram(g), method="placement"))
    return tuple(sorted(ts, key=triangulation_hash))


# -- chain decomposition of an assembled skeleton -------------------------------

@dataclass
class Piece:
    vertices: list[int]  # skeleton vertices of one 2-edge-connected component
    left: Optional[int]  # attachment of the bridge towards the left end
    right: Optional[int]
    region: str


def _skeleton_with_regions(t: Triangulation, region_of) -> tuple[Multigraph, list[str]]:
    dual, tris = dual_graph(t)
    pruned, pmap = prune_leaves_map(dual)
    skel, smap = suppress_degree_two(pruned)
    regions = [""] * skel.n
    for tri_index, pv in pmap.items():
        sv = smap.get(pv)
        if sv is not None:
            regions[sv] = region_of(tris[tri_index])
    return skel, regions


def chain_pieces(skel: Multigraph, regions: Sequence[str], start: str) -> Optional[list[Piece]]:
    """Pieces along the bridge path from the one in region ``start``.

    None unless the components, joined by the bridges, form a path whose
    pieces have positive genus and lie in single regions.
    """
    comps = skel.two_edge_components()
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    links: dict[int, list[tuple[int, int, int]]] = {i: [] for i in range(len(comps))}
    for b in skel.bridges:
        u, v = skel.edges[b]
        links[comp_of[u]].append((comp_of[v], u, v))
        links[comp_of[v]].append((comp_of[u], v, u))
    if any(len(x) > 2 for x in links.values()):
        return None
    for c in comps:
        sub, _ = skel.induced(c)
        if sub.genus == 0 or len({regions[v] for v in c}) != 1:
            return None
    ends = [i for i in links if len(links[i]) <= 1]
    first = [i for i in ends if regions[comps[i][0]] == start]
    if len(first) != 1:
        return None
    out: list[Piece] = []
    prev, cur, entry = None, first[0], None
    while cur is not None:
        nxt = [x for x in links[cur] if x[0] != prev]
        exit_v = nxt[0][1] if nxt else None
        out.append(Piece(sorted(comps[cur]), entry, exit_v, regions[comps[cur][0]]))
        if not nxt:
            break
        prev, cur, entry = cur, nxt[0][0], nxt[0][2]
    if len(out) != len(comps):
        return None
    return out


def _marked(skel: Multigraph, pieces: Sequence[Piece]) -> MarkedGraph:
    verts = sorted(v for p in pieces for v in p.vertices)
    sub, m = skel.induced(verts)
    return MarkedGraph(sub, m[pieces[0].left], m[pieces[-1].right])


# -- end caps ---------------------------------------------------------------------

ODD_LEFT_CAP = LatticePolygon.from_points([(2, 0), (1, 3), (0, 3)])
EVEN_LEFT_CAP = LatticePolygon.from_points([(0, 1), (2, 0), (1, 3), (0, 3)])


@dataclass(frozen=True)
class Caps:
    odd_left: tuple
    even_left: tuple
    right: tuple  # in parallelogram(2) coordinates


def _cap_candidates(p: LatticePolygon) -> list[Triangulation]:
    return sorted(enumerate_unimodular_triangulations(p, method="placement"), key=triangulation_hash)


def _shape(t: Triangulation, n: int) -> Optional[list[Piece]]:
    """Pieces of an assembled triangulation, with regions named by x-range."""
    def region(tri) -> str:
        cx3 = sum(x for x, _ in tri)
        cy3 = sum(y for _, y in tri)
        # the seams are the lines 3x + y = 3s + 6 for s = 0..n
        u = 3 * cx3 + cy3  # 3 * (3x + y) at the centroid
        if u < 18:
            return "L"
        if u > 9 * (n + 2):
            return "R"
        return "T"

    skel, regions = _skeleton_with_regions(t, region)
    return chain_pieces(skel, regions, "L")


@lru_cache(maxsize=None)
def caps() -> Caps:
    """Deterministic end caps with the required chain shape.

    Right cap: a genus-2 piece with no loop and one attachment.  Even left
    cap: a loop, then a double edge around (1, 2), then the tiles.
    """
    base = list(_all_triangulations(2))
    odd_left = _cap_candidates(ODD_LEFT_CAP)
    assert len(odd_left) == 1
    filler = base[0]
    right = None
    for cand in base:
        tris = list(odd_left[0].triangles) + _shift(filler.triangles, 1) + _shift(cand.triangles, 2)
        t = Triangulation.from_triangles(q_polygons(1)[0], tris)
        pieces = _shape(t, 1)
        if pieces is None or pieces[-1].region != "R":
            continue
        if _right_piece_ok(t, pieces[-1]):
            right = cand
            break
    if right is None:
        raise TilingError("no admissible right cap")
    even_left = None
    for cand in _cap_candidates(EVEN_LEFT_CAP):
        tris = list(cand.triangles) + _shift(filler.triangles, 1) + _shift(right.triangles, 2)
        t = Triangulation.from_triangles(q_polygons(1)[1], tris)
        pieces = _shape(t, 1)
        if pieces is None or len(pieces) < 3:
            continue
        if _even_left_ok(t, pieces):
            even_left = cand
            break
    if even_left is None:
        raise TilingError("no admissible even left cap")
    return Caps(odd_left[0].key, even_left.key, right.key)


def _piece_graph(t: Triangulation, piece: Piece) -> Multigraph:
    skel = _skeleton_with_regions(t, lambda tri: "")[0]
    return skel.induced(piece.vertices)[0]


def _right_piece_ok(t: Triangulation, piece: Piece) -> bool:
    g = _piece_graph(t, piece)
    return g.genus == 2 and g.is_two_edge_connected and not any(u == v for u, v in g.edges)


def _even_left_ok(t: Triangulation, pieces: list[Piece]) -> bool:
    a, b = pieces[0], pieces[1]
    if a.region != "L" or b.region != "L" or pieces[2].region == "L":
        return False
    ga, gb = _piece_graph(t, a), _piece_graph(t, b)
    return (ga.n == 1 and ga.genus == 1 and gb.n == 2 and gb.genus == 1
            and _around(t, b, (1, 2)))


def _around(t: Triangulation, piece: Piece, q: Point) -> bool:
    """Whether the piece's vertices come from triangles containing ``q``."""
    dual, tris = dual_graph(t)
    pruned, pmap = prune_leaves_map(dual)
    skel, smap = suppress_degree_two(pruned)
    inverse = {smap[pv]: ti for ti, pv in pmap.items() if pv in smap}
    return all(q in tris[inverse[v]] for v in piece.vertices)


# -- tiles ------------------------------------------------------------------------

@dataclass
class Tile:
    genus: int
    triangulation: Triangulation
    marked_graph: MarkedGraph
    bridged: bool
    components: tuple[str, ...] = ()  # marked certificates, left to right
    name: str = ""

    @property
    def certificate(self) -> str:
        return self.marked_graph.certificate

    @property
    def hash(self) -> str:
        return triangulation_hash(self.triangulation)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "genus": self.genus,
            "bridged": self.bridged,
            "marked_certificate": self.certificate,
            "component_certificates": list(self.components),
            "graph": self.marked_graph.graph.to_line(),
            "left": self.marked_graph.left,
            "right": self.marked_graph.right,
            "triangulation": [[list(p) for p in tri] for tri in self.triangulation.key],
        }


def assemble_triangles(tiles: Sequence[Triangulation], genera: Sequence[int], parity: str
                       ) -> Triangulation:
    n = sum(genera) // 2
    c = caps()
    odd, even = q_polygons(n)
    tris = list(c.odd_left if parity == "odd" else c.even_left)
    s = 1
    for t, g in zip(tiles, genera):
        tris += _shift(t.triangles, s)
        s += g // 2
    tris += _shift(c.right, n + 1)
    return Triangulation.from_triangles(odd if parity == "odd" else even, tris)


def _tile_data(t: Triangulation, k: int) -> Optional[tuple[MarkedGraph, tuple[str, ...]]]:
    whole = assemble_triangles([t], [2 * k], "odd")
    pieces = _shape(whole, k)
    if pieces is None or len(pieces) not in (3, 4) or pieces[0].region != "L" or pieces[-1].region != "R":
        return None
    mid = pieces[1:-1]
    if any(p.region != "T" for p in mid):
        return None
    skel = _skeleton_with_regions(whole, lambda tri: "")[0]
    marked = _marked(skel, mid)
    comps = tuple(_marked(skel, [p]).certificate for p in mid)
    return marked, comps


def candidate_tiles(k: int) -> list[Tile]:
    """Every admissible tile of genus 2k before selection."""
    out = []
    for t in _all_triangulations(2 * k):
        data = _tile_data(t, k)
        if data is None:
            continue
        marked, comps = data
        out.append(Tile(2 * k, t, marked, len(comps) == 2, comps))
    return out


@lru_cache(maxsize=None)
def _derive(k: int) -> tuple[Tile, ...]:
    if k not in (1, 2, 3):
        raise TilingError("tiles exist for k = 1, 2, 3 only")
    cands = candidate_tiles(k)
    bridgeless: dict[str, Tile] = {}
    for t in cands:
        if not t.bridged and t.certificate not in bridgeless:
            bridgeless[t.certificate] = t  # candidates are sorted by hash
    single = set(bridgeless)
    for j in (1, 2):
        single |= {c for t in _derive(j) if not t.bridged for c in t.components} if j < k else set()
    bridged: dict[tuple[str, ...], Tile] = {}
    for t in cands:
        if t.bridged and not (set(t.components) & single) and t.components not in bridged:
            bridged[t.components] = t
    tiles = sorted(bridgeless.values(), key=lambda t: t.certificate)
    tiles += sorted(bridged.values(), key=lambda t: t.components)
    for i, t in enumerate(tiles):
        t.name = f"g{2 * k}-{'b' if t.bridged else 'n'}{i:02d}"
    return tuple(tiles)


def derive_tiles(k: int) -> list[Tile]:
    return list(_derive(k))


def all_tiles() -> dict[int, list[Tile]]:
    return {2 * k: derive_tiles(k) for k in (1, 2, 3)}


# -- assembly and distinctness -------------------------------------------------

def assemble(seq: Sequence[Tile], parity: str, check_regular: bool = True
             ) -> tuple[Triangulation, Multigraph]:
    if parity not in ("odd", "even"):
        raise TilingError("parity must be 'odd' or 'even'")
    if not seq or any(t.genus not in TILE_GENERA for t in seq):
        raise TilingError("malformed tile sequence")
    t = assemble_triangles([x.triangulation for x in seq], [x.genus for x in seq], parity)
    t.validate()
    if check_regular and not is_regular(t):
        raise TilingError("assembled triangulation is not regular")
    skel = _skeleton_with_regions(t, lambda tri: "")[0]
    return t, skel


def compositions(total: int) -> list[tuple[int, ...]]:
    """Ordered sequences of tile genera summing to ``total``."""
    if total == 0:
        return [()]
    out = []
    for g in TILE_GENERA:
        if g <= total:
            out += [(g,) + rest for rest in compositions(total - g)]
    return out


def tile_sequences(n: int):
    tiles = all_tiles()
    for comp in compositions(2 * n):
        yield from itertools.product(*(tiles[g] for g in comp))


def tile_counts() -> tuple[int, int, int]:
    """Numbers of derived tiles of genus 2, 4, 6."""
    return tuple(len(derive_tiles(k)) for k in (1, 2, 3))


def derived_recurrence(n: int) -> int:
    """Tilings of the genus-2n parallelogram by the derived tiles."""
    c = tile_counts()
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(c[i] * a[m - 1 - i] for i in range(3) if m - 1 - i >= 0))
    return a[n]


def verify_distinctness(n: int, parity: str = "odd", check_regular: bool = False,
                        limit: int = MAX_VERIFY_N) -> dict:
    """Assemble every tile sequence of total genus 2n and count skeletons."""
    if n > limit:
        raise TilingError(f"n = {n} exceeds the verification limit {limit}")
    certs: dict[str, tuple] = {}
    sequences = 0
    clashes = 0
    for seq in tile_sequences(n):
        sequences += 1
        _, skel = assemble(seq, parity, check_regular)
        c = skel.certificate
        if c in certs:
            clashes += 1
        else:
            certs[c] = tuple(t.name for t in seq)
    return {
        "n": n,
        "parity": parity,
        "genus": 2 * n + (3 if parity == "odd" else 4),
        "sequences": sequences,
        "distinct_skeletons": len(certs),
        "recurrence": recurrence_a(n),
        "derived_recurrence": derived_recurrence(n),
        "ok": len(certs) == sequences == derived_recurrence(n),
        "certificates": sorted(certs),
    }


# -- the recurrence ----------------------------------------------------------------

def recurrence_a(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = [1, 2, 17]
    while len(a) <= n:
        a.append(sum(c * a[-1 - i] for i, c in enumerate(RECURRENCE)))
    return a[n]


def closed_form_check(n: int = 40, dps: int = 50) -> dict:
    """Roots, Vandermonde coefficients and reconstruction errors up to ``n``."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([1, -RECURRENCE[0], -RECURRENCE[1], -RECURRENCE[2]], maxsteps=200, extraprec=dps)
        alpha = max((z for z in roots if abs(mpmath.im(z)) < mpmath.mpf(10) ** (-dps // 2)), key=lambda z: mpmath.re(z))
        alpha = mpmath.re(alpha)
        beta = next(z for z in roots if mpmath.im(z) > 0)
        beta_bar = mpmath.conj(beta)
        m = mpmath.matrix([[1, 1, 1], [alpha, beta, beta_bar], [alpha ** 2, beta ** 2, beta_bar ** 2]])
        a_, b_, c_ = mpmath.lu_solve(m, mpmath.matrix([1, 2, 17]))
        A = mpmath.re(a_)
        r, theta = abs(beta), mpmath.arg(beta)
        d, delta = abs(b_), mpmath.arg(b_)
        rows = []
        printed_sign = 0.0  # the same formula written with cos(k theta - arg B)
        for k in range(n + 1):
            exact = recurrence_a(k)
            # B beta^k + conj = 2|B| r^k cos(k theta + arg B)
            approx = A * alpha ** k + 2 * d * r ** k * mpmath.cos(k * theta + delta)
            rows.append({"n": k, "a_n": exact, "relative_error": float(abs(approx - exact) / exact)})
            if k >= 5:
                other = A * alpha ** k + 2 * d * r ** k * mpmath.cos(k * theta - delta)
                printed_sign = max(printed_sign, float(abs(other - exact) / exact))
        return {
            "alpha": float(alpha),
            "r": float(r),
            "theta": float(theta),
            "A": float(A),
            "B": [float(mpmath.re(b_)), float(mpmath.im(b_))],
            "C": [float(mpmath.re(c_)), float(mpmath.im(c_))],
            "gamma": float(mpmath.sqrt(alpha)),
            "max_relative_error_n5_up": max(x["relative_error"] for x in rows[5:]) if n >= 5 else None,
            "max_relative_error_minus_arg": printed_sign,
            "reconstruction": rows,
        }


def lower_bound_report(g: int, census_value: Optional[int] = None) -> dict:
    if g < 5:
        raise TilingError("the tiling bound needs g >= 5")
    k = (g - 3) // 2
    bound = recurrence_a(k)
    alpha = closed_form_check(0)["alpha"]
    out = {
        "genus": g,
        "tiling_bound": bound,
        "tiling_index": k,
        "chain_bound": 2 ** (g - 2) + 2 ** ((g - 2) // 2),
        "gamma": alpha ** 0.5,
        "gamma_power": alpha ** (g / 2),
    }
    if census_value is not None:
        out["census"] = census_value
        out["consistent"] = bound <= census_value
    return out
