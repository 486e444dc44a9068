"""Stable 3-forms in six dimensions.

For a 3-form ``rho`` and a volume form ``Omega`` the endomorphism ``S`` is
defined by ``iota_v rho ^ rho ^ eta = eta(S v) Omega``. It squares to a
multiple ``P(rho)`` of the identity; ``P < 0`` singles out the orbit whose
stabilizer is SL(3, C), and there ``J = S / sqrt(-P)`` is a complex
structure.
"""

from enum import Enum

import numpy as np

from .errors import DegreeError, InternalInconsistency, NotComplexStructure, NotNegativeOrbit, \
    VolumeError
from .forms6 import DIM, KForm, contract_coeffs, derivation, pullback, wedge_coeffs

STABILITY_TOL = 1e-10


class StabilityClass(Enum):
    POSITIVE = "PositiveOrbit"
    NEGATIVE = "NegativeOrbit"
    NONSTABLE = "NonStable"


def _check_inputs(rho, Omega):
    if rho.degree != 3:
        raise DegreeError(f"expected a 3-form, got degree {rho.degree}")
    if Omega.degree != DIM:
        raise DegreeError("Omega must be a 6-form")
    if Omega.top == 0.0:
        raise VolumeError("zero volume form", residual=0.0)


def s_endo(rho, Omega):
    """Matrix ``S`` with ``S[j, i]`` the coefficient of ``iota_{e_i} rho ^ rho ^ e^j`` over Omega."""
    _check_inputs(rho, Omega)
    S = np.zeros((DIM, DIM))
    eye = np.eye(DIM)
    for i in range(DIM):
        five = wedge_coeffs(contract_coeffs(eye[i], rho.coeffs, 3), 2, rho.coeffs, 3)
        for j in range(DIM):
            S[j, i] = wedge_coeffs(five, 5, eye[j], 1)[0]
    return S / Omega.top


def quartic_invariant(rho, Omega, *, S=None):
    """Hitchin's quartic invariant ``P`` with ``S^2 = P Id``."""
    if S is None:
        S = s_endo(rho, Omega)
    S2 = S @ S
    P = float(np.trace(S2)) / DIM
    dev = float(np.abs(S2 - P * np.eye(DIM)).max())
    if dev > 1e-10 * max(1.0, float(np.abs(S).max()) ** 2):
        raise InternalInconsistency("S^2 is not a multiple of the identity", residual=dev)
    return P


def stability_scale(rho, Omega):
    return float(np.abs(rho.coeffs).sum()) ** 4 / float(np.abs(Omega.coeffs).sum()) ** 2


def classify(rho, Omega, tol=STABILITY_TOL):
    P = quartic_invariant(rho, Omega)
    thresh = tol * stability_scale(rho, Omega)
    if P < -thresh:
        return StabilityClass.NEGATIVE
    if P > thresh:
        return StabilityClass.POSITIVE
    return StabilityClass.NONSTABLE


def complex_structure(rho, Omega, tol=STABILITY_TOL):
    """``J = S / sqrt(-P)``; requires ``rho`` in the negative orbit."""
    S = s_endo(rho, Omega)
    P = quartic_invariant(rho, Omega, S=S)
    if P >= -tol * stability_scale(rho, Omega):
        raise NotNegativeOrbit(f"P(rho) = {P:.6g} is not negative", residual=P)
    return S / np.sqrt(-P)


def hat(rho, J, tol=1e-9):
    """``rho(J., J., J.)``, the imaginary partner of ``rho``."""
    J = np.asarray(J, dtype=float)
    dev = float(np.abs(J @ J + np.eye(DIM)).max())
    if dev > tol * max(1.0, float(np.abs(J).max()) ** 2):
        raise NotComplexStructure("J^2 != -Id", residual=dev)
    return pullback(J, rho)


def hat_via_first_slot(rho, J):
    """``-rho(J., ., .)``; agrees with :func:`hat` for negative-orbit ``rho``."""
    # rho(J.,.,.) summed over slots is 3x the first-slot version for J-type (3,0)+(0,3) forms
    return KForm(3, -derivation(J, rho).coeffs / 3.0)
