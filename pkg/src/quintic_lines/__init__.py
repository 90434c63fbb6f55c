"""Exact census of rigid tropical lines on the degenerate quintic.

The pipeline: perturbed convex heights on the boundary lattice points of
the dilated 4-simplex induce unimodular regular triangulations; each of
the ten 2-faces dualizes to a plane tropical quintic curve seen from two
facet frames; per facet, all rigid tropical lines whose four legs meet the
four curves at infinity are enumerated exactly; each line's multiplicity
is the cokernel torsion of a 10x10 lattice map, labelling the topology of
its mirror Lagrangian (1 -> S3, 2 -> RP3); the pairwise intersection graph
of the census supports rank and disjoint-family analyses.
"""

__version__ = "1.0.0"

from .polytope import (HeightFunction, make_heights, phi0, phi1,
                       induced_subdivision, is_unimodular, dual_polytope,
                       SIMPLEX, DegenerateHeights, NotATriangulation,
                       Unbounded)
from .curves import FacetFrame, TropicalPlaneCurve, QuinticCurveSet, \
    build_curve_set, RAYS
from .search import (TropicalLine, LINE_TYPES, solve_line, enumerate_facet,
                     check_tropical_axioms)
from .multiplicity import (ConstraintPlane, constraint_plane, Multiplicity,
                           build_cech_matrix, is_admissible, line_planes,
                           NotRigid, PlaneMissingLegDirection)
from .multiplicity import multiplicity as line_multiplicity
from .arrangement import (ConflictGraph, build_conflict_graph,
                          same_facet_intersect, cross_facet_intersect,
                          adjacency_rank, independent_set, LimitExceeded)
from . import linalg

__all__ = [
    "HeightFunction", "make_heights", "phi0", "phi1",
    "induced_subdivision", "is_unimodular", "dual_polytope", "SIMPLEX",
    "DegenerateHeights", "NotATriangulation", "Unbounded",
    "FacetFrame", "TropicalPlaneCurve", "QuinticCurveSet",
    "build_curve_set", "RAYS",
    "TropicalLine", "LINE_TYPES", "solve_line", "enumerate_facet",
    "check_tropical_axioms",
    "ConstraintPlane", "constraint_plane", "Multiplicity",
    "build_cech_matrix", "line_multiplicity", "line_planes",
    "is_admissible", "NotRigid", "PlaneMissingLegDirection",
    "ConflictGraph", "build_conflict_graph", "same_facet_intersect",
    "cross_facet_intersect", "adjacency_rank", "independent_set",
    "LimitExceeded",
    "linalg",
]
