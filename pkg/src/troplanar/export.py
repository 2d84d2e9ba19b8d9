"""Deterministic DOT output for graphs and triangulations."""

from __future__ import annotations

from typing import Union

from .graphs import MarkedGraph, Multigraph
from .triangulation import Triangulation


def graph_to_dot(g: Multigraph, name: str = "G", marks: dict[int, str] | None = None) -> str:
    """Loops and parallel edges are written once per occurrence."""
    marks = marks or {}
    lines = [f"graph {name} {{", "  node [shape=circle, label=\"\"];"]
    for v in range(g.n):
        if v in marks:
            lines.append(f"  {v} [label=\"{marks[v]}\"];")
        else:
            lines.append(f"  {v};")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def triangulation_to_dot(t: Triangulation, name: str = "T") -> str:
    """Straight-line drawing with nodes pinned at their lattice coordinates."""
    pts = t.polygon.lattice_points
    index = {p: i for i, p in enumerate(pts)}
    lines = [f"graph {name} {{", "  node [shape=point, width=0.08];"]
    for p in pts:
        lines.append(f"  {index[p]} [pos=\"{p[0]},{p[1]}!\", xlabel=\"{p[0]},{p[1]}\"];")
    for a, b in sorted(t.edges):
        style = "" if len(t.edges[(a, b)]) == 2 else " [penwidth=2]"
        lines.append(f"  {index[a]} -- {index[b]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj: Union[Multigraph, MarkedGraph, Triangulation], name: str = "G") -> str:
    if isinstance(obj, Triangulation):
        return triangulation_to_dot(obj, name)
    if isinstance(obj, MarkedGraph):
        return graph_to_dot(obj.graph, name, {obj.left: "L", obj.right: "R"})
    return graph_to_dot(obj, name)
