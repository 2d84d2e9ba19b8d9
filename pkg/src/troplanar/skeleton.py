"""Dual graphs and skeletons of unimodular triangulations.

Two routes lead to a skeleton: the generic one here (dual graph, prune
leaves, smooth 2-valent vertices) and the embedded code produced by the
enumeration kernels, which :func:`decode_code` turns back into a
:class:`~troplanar.graphs.Multigraph` together with its planar rotation.
"""

from __future__ import annotations

from typing import Optional

from .graphs import GraphError, Multigraph, loop_graph, prune_leaves, smooth
from .triangulation import Tri, Triangulation


def dual_graph(t: Triangulation) -> tuple[Multigraph, list[Tri]]:
    """One vertex per triangle, one edge per interior edge of ``t``."""
    tris = sorted(t.triangles)
    index = {tri: i for i, tri in enumerate(tris)}
    edges = [(index[ts[0]], index[ts[1]]) for s, ts in sorted(t.edges.items()) if len(ts) == 2]
    return Multigraph(len(tris), tuple(edges)), tris


def skeleton(t: Triangulation) -> Multigraph:
    if t.polygon.genus == 0:
        raise GraphError("a genus-0 polygon has an empty skeleton")
    g = smooth(prune_leaves(dual_graph(t)[0]))
    if g.n == 0:
        return loop_graph()
    return g


def decode_code(code: bytes) -> tuple[Optional[Multigraph], list[list[int]]]:
    """Multigraph and rotation system encoded by a kernel skeleton code.

    The rotation lists, for every vertex, the indices of its three incident
    edges in cyclic order (a loop appears twice).  Genus 0 decodes to
    ``(None, [])``.
    """
    if code == b"":
        return None, []
    if code == b"\x00":
        return loop_graph(), [[0, 0]]
    nv = code[0]
    body = code[1:]
    edge_of: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int]] = []
    for v in range(nv):
        for i in range(3):
            w, pos = body[6 * v + 2 * i], body[6 * v + 2 * i + 1]
            here, there = (v, i), (w, pos)
            if here in edge_of:
                continue
            edge_of[here] = edge_of[there] = len(edges)
            edges.append((v, w))
    rotation = [[edge_of[(v, i)] for i in range(3)] for v in range(nv)]
    # Multigraph sorts its edges; remap the rotation accordingly
    g = Multigraph(nv, tuple(edges))
    order = sorted(range(len(edges)), key=lambda k: (min(edges[k]), max(edges[k]), k))
    new_index = {old: new for new, old in enumerate(order)}
    return g, [[new_index[e] for e in rot] for rot in rotation]


def code_to_graph(code: bytes) -> Optional[Multigraph]:
    return decode_code(code)[0]
