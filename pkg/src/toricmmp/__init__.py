"""Exact toric geometry for minimal models of pairs (V, X).

V is a complete toric variety given by a fan, X a Delta-regular divisor given
by its class.  The package computes the adjoint polytope Box_h of K + X, builds
a minimal model by puffing that polytope up, runs the toric MMP with
divisorial contractions and flips, and checks nefness and terminality along
the way.  It also reports the Kodaira dimension of K + X.  All arithmetic is exact.
"""
from .corpus import example_fan, example_pair, octant_fan, projective_space_fan
from .divisors import (DivisorClassOfX, SupportFunction, ToricDivisor, adjoint_support, box_of,
                       discrepancies, is_ample, is_nef, is_terminal_pair, kappa_adjoint,
                       nef_certificate, nef_status, proper_transform_class, terminality_report)
from .errors import (ChamberSearchError, ClaimFailure, DocumentError, EmptyAdjointPolytope,
                     FanValidationError, MaxStepsExceeded, NotQCartierError, ToricError,
                     UnboundedPolytopeError)
from .fan import (Cone, Fan, common_refinement, desingularize, dual_fan, is_complete, is_simplicial,
                  is_smooth, make_simplicial, star_subdivide, validate_fan)
from .lattice import MPoint, NPoint, pairing
from .mmp import (CurveClass, MMPOutcome, MMPStep, Wall, classify_and_contract, curve_class,
                  extremal_rays, flip, mmp_run, wall_degree, walls)
from .polytope import Halfspace, Polytope, count_lattice_points, intersect, support_value
from .puffing import (ChamberCertificate, EpsilonAssignment, MinimalModelReport, construct_minimal_model,
                      contributing_halfspaces, puffed_polytope, sample_epsilon_in_chamber)

__all__ = [
    "ChamberCertificate",
    "ChamberSearchError",
    "ClaimFailure",
    "Cone",
    "CurveClass",
    "DivisorClassOfX",
    "DocumentError",
    "EmptyAdjointPolytope",
    "EpsilonAssignment",
    "Fan",
    "FanValidationError",
    "Halfspace",
    "MMPOutcome",
    "MMPStep",
    "MPoint",
    "MaxStepsExceeded",
    "MinimalModelReport",
    "NPoint",
    "NotQCartierError",
    "Polytope",
    "SupportFunction",
    "ToricDivisor",
    "ToricError",
    "UnboundedPolytopeError",
    "Wall",
    "adjoint_support",
    "box_of",
    "classify_and_contract",
    "common_refinement",
    "construct_minimal_model",
    "contributing_halfspaces",
    "count_lattice_points",
    "curve_class",
    "desingularize",
    "discrepancies",
    "dual_fan",
    "example_fan",
    "example_pair",
    "extremal_rays",
    "flip",
    "intersect",
    "is_ample",
    "is_complete",
    "is_nef",
    "is_simplicial",
    "is_smooth",
    "is_terminal_pair",
    "kappa_adjoint",
    "make_simplicial",
    "mmp_run",
    "nef_certificate",
    "nef_status",
    "octant_fan",
    "pairing",
    "projective_space_fan",
    "proper_transform_class",
    "puffed_polytope",
    "sample_epsilon_in_chamber",
    "star_subdivide",
    "support_value",
    "terminality_report",
    "validate_fan",
    "wall_degree",
    "walls",
]

__version__ = "0.1.0"
