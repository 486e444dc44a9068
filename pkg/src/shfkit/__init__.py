"""Symplectic half-flat SU(3)-structures: forms on R^6, stable 3-forms, invariant forms on
reductive homogeneous spaces, intrinsic torsion and the homogeneous catalog."""

from .errors import ShfError
from .forms6 import KForm, hodge_star, pullback, wedge
from .su3 import SU3Structure, validate
from .torsion import TorsionReport, ricci_report

__version__ = "0.1.0"

__all__ = ["KForm", "SU3Structure", "ShfError", "TorsionReport", "hodge_star", "pullback",
           "ricci_report", "validate", "wedge", "__version__"]
