"""Invariant symplectic half-flat structures on SU(2,1)/T^2 and SO(4,1)/U(2)."""

from .families import (build, build_so41, build_su21, compare_with_shipped, isomorphism_check,
                       load_algebra, write_data)
from .regions import (classify_region, critical_point_check, fundamental_domain_map,
                      normalize_to_slice, replay, scal_formula, scal_homogeneous)
from .roots import FAMILIES, regenerate

__all__ = [
    "FAMILIES", "build", "build_so41", "build_su21", "classify_region", "compare_with_shipped",
    "critical_point_check", "fundamental_domain_map", "isomorphism_check", "load_algebra",
    "normalize_to_slice", "regenerate", "replay", "scal_formula", "scal_homogeneous", "write_data",
]
