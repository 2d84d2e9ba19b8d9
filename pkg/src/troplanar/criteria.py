"""Obstructions to tropical planarity and the bridge surgeries.

Embeddings are handled combinatorially.  Every edge ``i`` has two darts,
``2i`` at its first endpoint and ``2i+1`` at its second (both at the same
vertex for a loop).  A rotation system lists the darts around each vertex
in cyclic order; faces are the orbits of "go to the twin dart, then to the
next dart around its vertex".  A rotation system is planar exactly when
Euler's formula |V| - |E| + |F| = 2 holds.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .graphs import GraphError, Multigraph, suppress_degree_two

Rotation = tuple[tuple[int, ...], ...]

MAX_EMBED_VERTICES = 16


@dataclass(frozen=True)
class EmbeddedGraph:
    graph: Multigraph
    rotation: Rotation
    faces: tuple[tuple[int, ...], ...]  # each face: its darts in walk order
    outer_face: Optional[int] = None

    def face_edges(self, f: int) -> list[int]:
        return [d >> 1 for d in self.faces[f]]


def _darts_at(g: Multigraph) -> list[list[int]]:
    at: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        at[u].append(2 * i)
        at[v].append(2 * i + 1)
    return at


def _cyclic_orders(darts: list[int]) -> list[tuple[int, ...]]:
    if len(darts) <= 2:
        return [tuple(darts)]
    first, rest = darts[0], darts[1:]
    return [(first,) + p for p in itertools.permutations(rest)]


def trace_faces(g: Multigraph, rotation: Rotation) -> list[tuple[int, ...]]:
    nxt = {}
    for rot in rotation:
        for k, d in enumerate(rot):
            nxt[d] = rot[(k + 1) % len(rot)]
    seen = set()
    faces = []
    for d0 in range(2 * g.m):
        if d0 in seen:
            continue
        face = []
        d = d0
        while d not in seen:
            seen.add(d)
            face.append(d)
            d = nxt[d ^ 1]
        faces.append(tuple(face))
    return faces


def rotation_systems(g: Multigraph) -> Iterator[Rotation]:
    if g.n > MAX_EMBED_VERTICES:
        raise GraphError(f"embedding enumeration is limited to {MAX_EMBED_VERTICES} vertices")
    choices = [_cyclic_orders(ds) for ds in _darts_at(g)]
    for combo in itertools.product(*choices):
        yield tuple(combo)


def _planar_rotations(g: Multigraph) -> Iterator[tuple[Rotation, list[tuple[int, ...]]]]:
    target = 2 - g.n + g.m
    for rot in rotation_systems(g):
        faces = trace_faces(g, rot)
        if len(faces) == target:
            yield rot, faces


def planar_embeddings(g: Multigraph, outer_faces: bool = False) -> list[EmbeddedGraph]:
    """All planar rotation systems of a connected graph.

    With ``outer_faces`` each rotation system is repeated once per choice of
    outer face.
    """
    out = []
    for rot, faces in _planar_rotations(g):
        fs = tuple(faces)
        if outer_faces:
            out.extend(EmbeddedGraph(g, rot, fs, k) for k in range(len(fs)))
        else:
            out.append(EmbeddedGraph(g, rot, fs))
    return out


def first_planar_rotation(g: Multigraph) -> Optional[Rotation]:
    for rot, _ in _planar_rotations(g):
        return rot
    return None


def is_planar(g: Multigraph) -> bool:
    return _is_planar_cached(g)


@lru_cache(maxsize=None)
def _is_planar_cached(g: Multigraph) -> bool:
    return first_planar_rotation(g) is not None


def is_planar_networkx(g: Multigraph) -> bool:
    """Independent check on the simple graph obtained by subdividing."""
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    fresh = itertools.count(g.n)
    seen: set[tuple[int, int]] = set()
    for u, v in g.edges:
        if u == v:
            a, b = next(fresh), next(fresh)
            h.add_edges_from([(u, a), (a, b), (b, u)])
        elif (u, v) in seen:
            a = next(fresh)
            h.add_edges_from([(u, a), (a, v)])
        else:
            seen.add((u, v))
            h.add_edge(u, v)
    return nx.check_planarity(h)[0]


# -- sprawling and crowded ------------------------------------------------

def _components_without(g: Multigraph, removed: set[int], skip_edges: Iterable[int] = ()) -> list[set[int]]:
    skip = set(skip_edges)
    adj: dict[int, set[int]] = {v: set() for v in range(g.n) if v not in removed}
    for i, (u, v) in enumerate(g.edges):
        if i in skip or u in removed or v in removed:
            continue
        adj[u].add(v)
        adj[v].add(u)
    comps = []
    seen: set[int] = set()
    for s in adj:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def is_sprawling(g: Multigraph) -> bool:
    return any(len(_components_without(g, {v})) >= 3 for v in range(g.n))


def embedding_is_crowded(e: EmbeddedGraph, outer: Optional[int], bounded_only: bool = True) -> bool:
    faces = [k for k in range(len(e.faces)) if not (bounded_only and k == outer)]
    edge_sets = {}
    for k in faces:
        es = e.face_edges(k)
        if len(set(es)) < len(es):
            return True
        edge_sets[k] = set(es)
    for a, b in itertools.combinations(faces, 2):
        if len(edge_sets[a] & edge_sets[b]) >= 2:
            return True
    return False


def is_crowded(g: Multigraph, bounded_only: bool = True) -> bool:
    """True iff every planar embedding (and every outer face) is crowded."""
    embeddings = planar_embeddings(g)
    if not embeddings:
        raise GraphError("crowdedness is defined for planar graphs only")
    for e in embeddings:
        outers = range(len(e.faces)) if bounded_only else [None]
        for k in outers:
            if not embedding_is_crowded(e, k, bounded_only):
                return False
    return True


# -- TIE-fighters and loops ---------------------------------------------

def _genus_of(g: Multigraph, vertices: set[int], skip_edges: Iterable[int] = ()) -> int:
    skip = set(skip_edges)
    m = sum(1 for i, (u, v) in enumerate(g.edges) if i not in skip and u in vertices and v in vertices)
    ncomp = len(_components_without(g, set(range(g.n)) - vertices, skip))
    return m - len(vertices) + ncomp


def _two_disjoint_paths(g: Multigraph, alive: set[int], skip: set[int], s: int, t: int) -> bool:
    """Two internally vertex-disjoint s-t paths (unit vertex capacities)."""
    cap: dict[tuple, int] = {}

    def add(a, b, c):
        cap[(a, b)] = cap.get((a, b), 0) + c
        cap.setdefault((b, a), 0)

    for v in alive:
        add(("in", v), ("out", v), 2 if v in (s, t) else 1)
    for i, (u, v) in enumerate(g.edges):
        if i in skip or u == v or u not in alive or v not in alive:
            continue
        add(("out", u), ("in", v), 1)
        add(("out", v), ("in", u), 1)
    nbr: dict = {}
    for a, b in cap:
        nbr.setdefault(a, []).append(b)
    src, snk = ("out", s), ("in", t)
    flow = 0
    while flow < 2:
        prev = {src: None}
        queue = [src]
        for x in queue:
            if x == snk:
                break
            for y in nbr.get(x, []):
                if y not in prev and cap[(x, y)] > 0:
                    prev[y] = x
                    queue.append(y)
        if snk not in prev:
            return False
        y = snk
        while prev[y] is not None:
            x = prev[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        flow += 1
    return True


def _side_away(g: Multigraph, bridge: int, v: int) -> set[int]:
    comps = _components_without(g, set(), [bridge])
    return next(c for c in comps if v not in c)


def is_tie_fighter(g: Multigraph) -> bool:
    bridges = list(g.bridges)
    wings = []
    for b in bridges:
        for v in g.edges[b]:
            h = _side_away(g, b, v)
            if _genus_of(g, h) > 0:
                wings.append((b, v, h))
    for (b1, v1, h1), (b2, v2, h2) in itertools.combinations(wings, 2):
        if b1 == b2 or v1 == v2:
            continue
        if h1 & h2 or v1 in h2 or v2 in h1:
            continue
        rest = set(range(g.n)) - h1 - h2
        skip = {b1, b2}
        if not _two_disjoint_paths(g, rest, skip, v1, v2):
            continue
        inner = rest - {v1, v2}
        comps = _components_without(g, set(range(g.n)) - inner, skip)
        if len(comps) == 2 and all(_genus_of(g, c, skip) > 0 for c in comps):
            return True
    return False


def has_triple_loop_path(g: Multigraph) -> bool:
    adj = g.adjacency
    looped = {v for v in range(g.n) if g.loops(v)}
    marked = {v for v in range(g.n) if any(w != v and w in looped for w in adj[v])}
    for v2 in marked:
        nb = [w for w in adj[v2] if w != v2 and w in marked]
        if len(nb) >= 2:
            return True
    return False


# -- bridge surgeries ----------------------------------------------------

def _require_bridge(g: Multigraph, b: int) -> None:
    if b not in g.bridges:
        raise GraphError(f"edge {b} = {g.edges[b]} is not a bridge")


def bridge_split(g: Multigraph, b: int) -> tuple[Multigraph, Multigraph]:
    """Components of g minus the bridge, 2-valent endpoints smoothed."""
    _require_bridge(g, b)
    u, v = g.edges[b]
    h = g.remove_edges([b])
    out = []
    for end in (u, v):
        comp = next(c for c in h.components() if end in c)
        sub, _ = h.induced(comp)
        out.append(suppress_degree_two(sub)[0])
    return out[0], out[1]


def _ends(g: Multigraph, v: int, skip: int) -> list[int]:
    """Darts at v other than those of edge ``skip``."""
    out = []
    for i, (a, c) in enumerate(g.edges):
        if i == skip:
            continue
        if a == v:
            out.append(2 * i)
        if c == v:
            out.append(2 * i + 1)
    return out


def _swap_ends(g: Multigraph, d1: int, d2: int) -> tuple[Multigraph, list[list[int]]]:
    """Exchange the vertices carrying darts d1 and d2; returns raw edge list too."""
    ends = [list(e) for e in g.edges]
    x = ends[d1 >> 1][d1 & 1]
    y = ends[d2 >> 1][d2 & 1]
    ends[d1 >> 1][d1 & 1] = y
    ends[d2 >> 1][d2 & 1] = x
    return Multigraph(g.n, tuple((a, c) for a, c in ends)), ends


def bridge_reductions(g: Multigraph, b: int) -> list[Multigraph]:
    """Both re-pairings of the bridge reduction, deduplicated up to isomorphism."""
    _require_bridge(g, b)
    v, w = g.edges[b]
    e = _ends(g, v, b)
    f = _ends(g, w, b)
    out: dict[str, Multigraph] = {}
    for fi in f:
        h, _ = _swap_ends(g, e[1], fi)
        out.setdefault(h.certificate, h)
    return [out[c] for c in sorted(out)]


class _RawGraph:
    """Edge list kept in insertion order so dart numbering is stable."""

    def __init__(self, n: int, ends: Sequence[Sequence[int]]):
        self.n = n
        self.ends = [list(e) for e in ends]

    @property
    def graph(self) -> Multigraph:
        return Multigraph(self.n, tuple(tuple(e) for e in self.ends))

    def bridges(self) -> list[int]:
        """Bridge indices in this edge order."""
        g = self.graph
        # map sorted-edge bridges back to raw indices by matching multiset entries
        order = sorted(range(len(self.ends)), key=lambda i: (min(self.ends[i]), max(self.ends[i]), i))
        return sorted(order[k] for k in g.bridges)

    def darts_at(self, v: int) -> list[int]:
        out = []
        for i, (a, c) in enumerate(self.ends):
            if a == v:
                out.append(2 * i)
            if c == v:
                out.append(2 * i + 1)
        return out


def _reduce_raw(raw: _RawGraph, rot: list[list[int]], b: int) -> tuple[_RawGraph, list[list[int]]]:
    v, w = raw.ends[b]
    bv, bw = 2 * b, 2 * b + 1

    def after(r: list[int], d: int) -> tuple[int, int]:
        k = r.index(d)
        return r[(k + 1) % 3], r[(k + 2) % 3]

    x, y = after(rot[v], bv)
    z, t = after(rot[w], bw)
    ends = [list(e) for e in raw.ends]
    ends[y >> 1][y & 1] = w
    ends[t >> 1][t & 1] = v
    new_rot = [list(r) for r in rot]
    new_rot[v] = [bv, t, x]
    new_rot[w] = [bw, y, z]
    return _RawGraph(raw.n, ends), new_rot


def _initial_rotation(g: Multigraph) -> list[list[int]]:
    rot = first_planar_rotation(g)
    if rot is None:
        rot = tuple(tuple(ds) for ds in _darts_at(g))
    return [list(r) for r in rot]


def bridge_reduce(g: Multigraph, b: int, rotation: Optional[Sequence[Sequence[int]]] = None) -> Multigraph:
    """Bridge reduction with the end pairing read off a rotation system.

    Without a rotation a planar one is chosen (any one if ``g`` is not
    planar).  :func:`bridge_reductions` returns both pairings instead.
    """
    _require_bridge(g, b)
    if not g.is_trivalent():
        raise GraphError("bridge reduction needs a trivalent graph")
    rot = [list(r) for r in rotation] if rotation is not None else _initial_rotation(g)
    raw, _ = _reduce_raw(_RawGraph(g.n, g.edges), rot, b)
    return raw.graph


def reduce_to_2ec(
    g: Multigraph,
    rotation: Optional[Sequence[Sequence[int]]] = None,
    order: Optional[Callable[[list[int]], int]] = None,
    rng: Optional[random.Random] = None,
) -> Multigraph:
    """Reduce bridges until none is left.

    The end pairing of every step follows one fixed rotation system, carried
    along through the surgeries.  ``order`` (or ``rng``) chooses which bridge
    to reduce next; the default takes the first.
    """
    if not g.is_trivalent():
        raise GraphError("reduce_to_2ec needs a trivalent graph")
    rot = [list(r) for r in rotation] if rotation is not None else _initial_rotation(g)
    raw = _RawGraph(g.n, g.edges)
    while True:
        bs = raw.bridges()
        if not bs:
            return raw.graph
        if order is not None:
            b = order(bs)
        elif rng is not None:
            b = rng.choice(bs)
        else:
            b = bs[0]
        raw, rot = _reduce_raw(raw, rot, b)


# -- bridge deletion filter ------------------------------------------------

def fails_bridge_deletion(g: Multigraph, is_troplanar: Callable[[Multigraph], Optional[bool]]) -> bool:
    """True if deleting some bridge leaves a part known not to be troplanar.

    ``is_troplanar`` answers for smaller genus (None when unknown); a bare
    loop counts as troplanar.
    """
    for b in g.bridges:
        for part in bridge_split(g, b):
            if part.genus <= 1:
                continue
            if is_troplanar(part) is False:
                return True
    return False


def classify(g: Multigraph, bounded_only: bool = True) -> dict:
    planar = is_planar(g)
    return {
        "certificate": g.certificate,
        "genus": g.genus,
        "planar": planar,
        "sprawling": is_sprawling(g),
        "crowded": is_crowded(g, bounded_only) if planar else False,
        "tie_fighter": is_tie_fighter(g),
        "triple_loop": has_triple_loop_path(g),
        "bridges": len(g.bridges),
    }
