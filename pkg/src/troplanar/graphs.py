"""Finite multigraphs with loops and parallel edges.

A :class:`Multigraph` is an immutable vertex count plus a sorted tuple of
edges ``(u, v)`` with ``u <= v``; a loop is ``(v, v)`` and counts twice
toward the degree of ``v``.  Isomorphism classes are identified by
:func:`certificate`, a canonical byte string found by colour refinement and
an exhaustive search over the refinement tree.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for {self.n} vertices")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    # -- construction and exchange -----------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Multigraph":
        return cls(n, tuple((e[0], e[1]) for e in edges))

    @classmethod
    def from_line(cls, line: str) -> "Multigraph":
        """Parse ``"n m : u-v u-v ..."``."""
        head, _, body = line.partition(":")
        parts = head.split()
        if len(parts) != 2:
            raise GraphError(f"bad graph header: {head!r}")
        n, m = int(parts[0]), int(parts[1])
        edges = []
        for tok in body.split():
            u, _, v = tok.partition("-")
            edges.append((int(u), int(v)))
        if len(edges) != m:
            raise GraphError(f"header says {m} edges, found {len(edges)}")
        return cls(n, tuple(edges))

    def to_line(self) -> str:
        body = " ".join(f"{u}-{v}" for u, v in self.edges)
        return f"{self.n} {len(self.edges)} : {body}".rstrip()

    def __str__(self) -> str:
        return self.to_line()

    # -- basic structure ---------------------------------------------------
    @cached_property
    def adjacency(self) -> tuple[dict[int, int], ...]:
        """adjacency[u][v] = number of edges u-v (loops counted once)."""
        adj: list[dict[int, int]] = [dict() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u][v] = adj[u].get(v, 0) + 1
            if u != v:
                adj[v][u] = adj[v].get(u, 0) + 1
        return tuple(adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def loops(self, v: int) -> int:
        return self.adjacency[v].get(v, 0)

    @property
    def m(self) -> int:
        return len(self.edges)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [], [s]
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    @property
    def genus(self) -> int:
        """First Betti number |E| - |V| + (number of components)."""
        return self.m - self.n + len(self.components())

    def is_trivalent(self) -> bool:
        return all(d == 3 for d in self.degrees)

    # -- bridges -----------------------------------------------------------
    @cached_property
    def bridges(self) -> tuple[int, ...]:
        """Indices into ``edges`` of the bridges (loops never are)."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            if u != v:
                inc[u].append((v, i))
                inc[v].append((u, i))
        disc = [-1] * self.n
        low = [0] * self.n
        out = []
        timer = 0
        for root in range(self.n):
            if disc[root] >= 0:
                continue
            disc[root] = low[root] = timer
            timer += 1
            # iterative DFS: (vertex, edge id used to enter, iterator position)
            stack = [(root, -1, 0)]
            while stack:
                u, pe, k = stack[-1]
                if k < len(inc[u]):
                    stack[-1] = (u, pe, k + 1)
                    w, ei = inc[u][k]
                    if ei == pe:
                        continue
                    if disc[w] < 0:
                        disc[w] = low[w] = timer
                        timer += 1
                        stack.append((w, ei, 0))
                    else:
                        low[u] = min(low[u], disc[w])
                else:
                    stack.pop()
                    if stack:
                        p = stack[-1][0]
                        low[p] = min(low[p], low[u])
                        if low[u] > disc[p]:
                            out.append(pe)
        return tuple(sorted(out))

    def bridge_edges(self) -> list[Edge]:
        return [self.edges[i] for i in self.bridges]

    def two_edge_components(self) -> list[list[int]]:
        """Vertex classes of the graph with all bridges deleted."""
        return self.remove_edges(self.bridges).components()

    def is_two_edge_connected(self) -> bool:
        return self.is_connected() and not self.bridges

    # -- derived graphs ----------------------------------------------------
    def remove_edges(self, indices: Iterable[int]) -> "Multigraph":
        drop = set(indices)
        return Multigraph(self.n, tuple(e for i, e in enumerate(self.edges) if i not in drop))

    def induced(self, vertices: Iterable[int]) -> tuple["Multigraph", dict[int, int]]:
        """Induced subgraph on ``vertices``; returns it and old -> new labels."""
        vs = sorted(set(vertices))
        new = {v: i for i, v in enumerate(vs)}
        edges = tuple((new[u], new[v]) for u, v in self.edges if u in new and v in new)
        return Multigraph(len(vs), edges), new

    def relabel(self, perm: Sequence[int]) -> "Multigraph":
        """Vertex v becomes perm[v]."""
        return Multigraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def add_edges(self, extra: Iterable[Edge], new_vertices: int = 0) -> "Multigraph":
        return Multigraph(self.n + new_vertices, self.edges + tuple(extra))

    # -- isomorphism -------------------------------------------------------
    @cached_property
    def certificate(self) -> str:
        return certificate(self)

    def to_dot(self, name: str = "G") -> str:
        from .export import graph_to_dot

        return graph_to_dot(self, name)


@dataclass(frozen=True)
class MarkedGraph:
    """A multigraph with left and right attachment vertices."""

    graph: Multigraph
    left: int
    right: int

    def __post_init__(self) -> None:
        if self.left == self.right and self.graph.n > 1:
            raise GraphError("left and right marks must differ")

    @cached_property
    def certificate(self) -> str:
        return marked_certificate(self)


# -- canonical labelling ----------------------------------------------------

def _refine(n: int, adj: Sequence[dict[int, int]], col: list[int]) -> list[int]:
    """Equitable refinement; new colours are ranks of label-free signatures."""
    ncls = len(set(col))
    while True:
        sig = [
            (col[v], tuple(sorted((col[u], m) for u, m in adj[v].items())))
            for v in range(n)
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        col = [rank[s] for s in sig]
        if len(rank) == ncls:
            return col
        ncls = len(rank)


def _code(n: int, edges: Sequence[Edge], pos: Sequence[int]) -> tuple[int, ...]:
    mat = Counter()
    for u, v in edges:
        a, b = pos[u], pos[v]
        if a > b:
            a, b = b, a
        mat[(a, b)] += 1
    return tuple(mat.get((i, j), 0) for i in range(n) for j in range(i, n))


def canonical_labelling(
    g: Multigraph, colours: Optional[Sequence[int]] = None
) -> tuple[tuple[int, ...], list[int]]:
    """Return (code, pos) where pos[v] is v's canonical position.

    The search tree individualises, at each node, every vertex of the first
    non-singleton cell in turn; the least adjacency code over all leaves is
    canonical because the tree itself does not depend on vertex names.
    """
    n = g.n
    adj = g.adjacency
    start = list(colours) if colours is not None else [0] * n
    start = [(start[v], g.loops(v)) for v in range(n)]
    rank = {s: i for i, s in enumerate(sorted(set(start)))}
    col = _refine(n, adj, [rank[s] for s in start])
    best: Optional[tuple[int, ...]] = None
    best_pos: list[int] = []

    def search(col: list[int]) -> None:
        nonlocal best, best_pos
        size = Counter(col)
        target = next((c for c in sorted(size) if size[c] > 1), None)
        if target is None:
            code = _code(n, g.edges, col)
            if best is None or code < best:
                best, best_pos = code, col
            return
        cell = [v for v in range(n) if col[v] == target]
        for v in cell:
            nxt = [2 * c + (1 if (c == target and u != v) else 0) for u, c in enumerate(col)]
            search(_refine(n, adj, nxt))

    if n:
        search(col)
    assert best is not None or n == 0
    return (best or ()), best_pos


def certificate(g: Multigraph, colours: Optional[Sequence[int]] = None) -> str:
    """Opaque hex string; equal iff the (coloured) multigraphs are isomorphic."""
    code, pos = canonical_labelling(g, colours)
    if colours is not None:
        by_pos = [0] * g.n
        for v in range(g.n):
            by_pos[pos[v]] = colours[v]
        head = [g.n, 255] + by_pos
    else:
        head = [g.n]
    return bytes(head + [254] + list(code)).hex()


def marked_certificate(m: MarkedGraph) -> str:
    colours = [0] * m.graph.n
    colours[m.left] = 1
    colours[m.right] = 2 if m.right != m.left else 3
    return certificate(m.graph, colours)


def isomorphic(a: Multigraph, b: Multigraph) -> bool:
    return a.n == b.n and a.m == b.m and a.certificate == b.certificate


def isomorphic_bruteforce(a: Multigraph, b: Multigraph) -> bool:
    """Reference test over all vertex permutations (small graphs only)."""
    if a.n != b.n or a.m != b.m or sorted(a.degrees) != sorted(b.degrees):
        return False
    target = Counter(b.edges)
    for perm in itertools.permutations(range(a.n)):
        if Counter(a.relabel(perm).edges) == target:
            return True
    return False


# -- retraction -------------------------------------------------------------

def prune_leaves(g: Multigraph) -> Multigraph:
    """Iteratively delete vertices of degree at most one."""
    return prune_leaves_map(g)[0]


def prune_leaves_map(g: Multigraph) -> tuple[Multigraph, dict[int, int]]:
    """:func:`prune_leaves` plus the old -> new map of surviving vertices."""
    alive = [True] * g.n
    edges = list(g.edges)
    deg = list(g.degrees)
    inc: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(edges):
        inc[u].append(i)
        if u != v:
            inc[v].append(i)
    dead_edge = [False] * len(edges)
    stack = [v for v in range(g.n) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v] or deg[v] > 1:
            continue
        alive[v] = False
        for i in inc[v]:
            if dead_edge[i]:
                continue
            dead_edge[i] = True
            u, w = edges[i]
            other = w if u == v else u
            deg[other] -= 1
            if alive[other] and deg[other] <= 1:
                stack.append(other)
    keep = [v for v in range(g.n) if alive[v]]
    return g.induced(keep)


def suppress_degree_two(g: Multigraph, keep: Iterable[int] = ()) -> tuple[Multigraph, dict[int, int]]:
    """Smooth over 2-valent vertices (except those in ``keep``).

    A 2-valent vertex whose two edges reach the same neighbour becomes a
    loop there; a lone cycle ends as one vertex with a loop.  Returns the
    new graph and the old -> new label map of surviving vertices.
    """
    protect = set(keep)
    edges: dict[int, Edge] = dict(enumerate(g.edges))
    inc: list[set[int]] = [set() for _ in range(g.n)]
    for i, (u, v) in edges.items():
        inc[u].add(i)
        inc[v].add(i)
    alive = [True] * g.n
    nxt = len(edges)

    def degree(v: int) -> int:
        return sum(2 if edges[i][0] == edges[i][1] else 1 for i in inc[v])

    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            if not alive[v] or v in protect or degree(v) != 2:
                continue
            ids = list(inc[v])
            if len(ids) == 1:
                continue  # a vertex carrying only a loop
            i1, i2 = ids
            a = edges[i1][0] if edges[i1][1] == v else edges[i1][1]
            b = edges[i2][0] if edges[i2][1] == v else edges[i2][1]
            for i in ids:
                u, w = edges.pop(i)
                inc[u].discard(i)
                inc[w].discard(i)
            alive[v] = False
            edges[nxt] = (a, b) if a <= b else (b, a)
            inc[a].add(nxt)
            inc[b].add(nxt)
            nxt += 1
            changed = True
    keepers = [v for v in range(g.n) if alive[v]]
    new = {v: i for i, v in enumerate(keepers)}
    out = Multigraph(len(keepers), tuple((new[u], new[v]) for u, v in edges.values()))
    return out, new


def smooth(g: Multigraph) -> Multigraph:
    return suppress_degree_two(g)[0]


# -- small named graphs -----------------------------------------------------

def loop_graph() -> Multigraph:
    """The genus-1 skeleton: one vertex with one loop."""
    return Multigraph(1, ((0, 0),))


def theta() -> Multigraph:
    return Multigraph(2, ((0, 1), (0, 1), (0, 1)))


def dumbbell() -> Multigraph:
    return Multigraph(2, ((0, 0), (0, 1), (1, 1)))


def complete_graph(k: int) -> Multigraph:
    return Multigraph(k, tuple(itertools.combinations(range(k), 2)))


def k33() -> Multigraph:
    return Multigraph(6, tuple((i, j) for i in range(3) for j in range(3, 6)))


# -- chains -----------------------------------------------------------------

def chain(bits: str) -> Multigraph:
    """Chain of len(bits)+1 cycles; '0' = shared edge, '1' = bridge."""
    if any(b not in "01" for b in bits):
        raise GraphError(f"chain string must be binary: {bits!r}")
    edges: list[Edge] = []
    n = 0

    def new() -> int:
        nonlocal n
        n += 1
        return n - 1

    left_top = left_bottom = new()
    for b in bits:
        if b == "0":
            t, u = new(), new()
            edges += [(left_top, t), (left_bottom, u), (t, u)]
            left_top, left_bottom = t, u
        else:
            x, y = new(), new()
            edges += [(left_top, x), (left_bottom, x), (x, y)]
            left_top = left_bottom = y
    r = new()
    edges += [(left_top, r), (left_bottom, r)]
    return smooth(Multigraph(n, tuple(edges)))


def chain_strings(g: int) -> list[str]:
    """Binary strings of length g-1, one per class under reversal."""
    out = []
    for t in itertools.product("01", repeat=g - 1):
        s = "".join(t)
        if s <= s[::-1]:
            out.append(s)
    return out


def chain_count(g: int) -> int:
    """Closed form 2^(g-2) + 2^floor((g-2)/2) for g >= 2."""
    return 2 ** (g - 2) + 2 ** ((g - 2) // 2)


# -- trivalent generation ---------------------------------------------------

def _subdivide(edges: list[Edge], i: int, x: int) -> None:
    u, v = edges[i]
    edges[i] = (u, x)
    edges.append((x, v))


def _augmentations(g: Multigraph) -> Iterable[Multigraph]:
    n, m = g.n, g.m
    x, y = n, n + 1
    for i in range(m):
        # pendant loop hung from the middle of edge i
        e = list(g.edges)
        _subdivide(e, i, x)
        yield Multigraph(n + 2, tuple(e + [(x, y), (y, y)]))
        for j in range(i, m):
            e = list(g.edges)
            _subdivide(e, i, x)
            if j == i:
                # both new vertices on the same edge: x sits on (u, x), put y on (x, v)
                _subdivide(e, len(e) - 1, y)
            else:
                _subdivide(e, j, y)
            yield Multigraph(n + 2, tuple(e + [(x, y)]))


@lru_cache(maxsize=None)
def _trivalent(g: int) -> tuple[Multigraph, ...]:
    if g == 2:
        return tuple(sorted((theta(), dumbbell()), key=lambda h: h.certificate))
    seen: dict[str, Multigraph] = {}
    for h in _trivalent(g - 1):
        for cand in _augmentations(h):
            c = cand.certificate
            if c not in seen:
                seen[c] = cand
    return tuple(seen[c] for c in sorted(seen))


MAX_TRIVALENT_GENUS = 8


def enumerate_trivalent(g: int) -> list[Multigraph]:
    """All connected trivalent multigraphs of genus g, one per class."""
    if not 2 <= g <= MAX_TRIVALENT_GENUS:
        raise GraphError(f"enumerate_trivalent supports 2 <= g <= {MAX_TRIVALENT_GENUS}")
    out = list(_trivalent(g))
    for h in out:
        assert h.n == 2 * g - 2 and h.is_trivalent() and h.is_connected()
    return out
