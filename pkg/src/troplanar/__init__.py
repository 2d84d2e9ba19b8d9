"""Enumeration of tropically planar graphs.

The package computes, genus by genus, which trivalent graphs arise as
skeletons of smooth tropical plane curves: it enumerates maximal lattice
polygons and their regular unimodular triangulations, extracts skeletons,
and deduplicates them by isomorphism certificate.  It also implements the
known obstructions to troplanarity and a tiling construction giving an
exponential lower bound.
"""

from ._kernels import BACKEND
from .census import CensusDatabase, CensusRecord, breakdown_report, bound_report, run_census, stratify_by_lattice_width
from .criteria import (
    bridge_reduce,
    bridge_split,
    is_crowded,
    is_planar,
    is_sprawling,
    is_tie_fighter,
    has_triple_loop_path,
    planar_embeddings,
    reduce_to_2ec,
)
from .graphs import MarkedGraph, Multigraph, certificate, chain, enumerate_trivalent, marked_certificate
from .lattice import (
    LatticePolygon,
    canonical_form,
    enumerate_maximal_nonhyperelliptic,
    interior_polygon,
    lattice_width,
    move_out,
)
from .skeleton import dual_graph, skeleton
from .triangulation import (
    HeightFunction,
    Triangulation,
    bistellar_flip,
    enumerate_unimodular_triangulations,
    induce_subdivision,
    is_regular,
    splits,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CensusDatabase", "CensusRecord", "HeightFunction", "LatticePolygon", "MarkedGraph",
    "Multigraph", "Triangulation", "bistellar_flip", "bound_report", "breakdown_report", "bridge_reduce",
    "bridge_split", "canonical_form", "certificate", "chain", "dual_graph", "enumerate_maximal_nonhyperelliptic",
    "enumerate_trivalent", "enumerate_unimodular_triangulations", "has_triple_loop_path", "induce_subdivision",
    "interior_polygon", "is_crowded", "is_planar", "is_regular", "is_sprawling", "is_tie_fighter",
    "lattice_width", "marked_certificate", "move_out", "planar_embeddings", "reduce_to_2ec", "run_census",
    "skeleton", "splits", "stratify_by_lattice_width",
]
