"""Free lines and rational curves on hypersurfaces over finite fields.

Exact finite-field tools for splitting types of vector bundles on P^1,
normal bundles of lines on hypersurfaces, kernel bundles of base-point-free
linear systems, and exhaustive line censuses.
"""
from .galois import FieldCtx, FieldElement, make_field
from .polyalg import BinaryForm, LinearSubspace, MultiPoly
from .p1split import SplittingType, TwistedMap, splitting_type
from .linegeom import Hypersurface, line_is_free, normal_bundle_line
from .kersys import LinearSystem, RationalCurve, is_basepoint_free, restricted_splitting
from .fermatlab import audit_free_curve, audit_no_free_lines, fermat
from .census import enumerate_planes, fano_point_count, run_census

__all__ = [
    "FieldCtx", "FieldElement", "make_field",
    "BinaryForm", "LinearSubspace", "MultiPoly",
    "SplittingType", "TwistedMap", "splitting_type",
    "Hypersurface", "line_is_free", "normal_bundle_line",
    "LinearSystem", "RationalCurve", "is_basepoint_free", "restricted_splitting",
    "audit_free_curve", "audit_no_free_lines", "fermat",
    "enumerate_planes", "fano_point_count", "run_census",
]
__version__ = "0.1.0"
