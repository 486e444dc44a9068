"""Invariant SHF structures on SU(2,1)/T^2 and SO(4,1)/U(2).

Forms are first written in the basis dual to the root vectors
``(E_a, E_-a, E_b, E_-b, E_{a+b}, E_{-a-b})`` and then pulled back to the
real basis ``(v_a, w_a, v_b, w_b, v_{a+b}, w_{a+b})`` of m.
"""

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .. import invlie
from ..errors import LieDataError, NotAdmissible
from ..forms6 import KForm, pullback, pullback_coeffs, two_form_from_matrix
from ..su3 import validate
from . import roots
from .regions import RegionFlags, classify_region, constraint, require_Q

PACKAGE_DATA = Path(__file__).resolve().parent.parent / "data"
DATA_ENV = "SHFKIT_DATA_DIR"
SHIPPED_TOL = 1e-12


def data_dir():
    return Path(os.environ.get(DATA_ENV) or PACKAGE_DATA)


def data_path(family):
    return data_dir() / f"{family}.json"


@lru_cache(maxsize=None)
def _load_cached(path, mtime):
    return invlie.load(path)


def load_algebra(family):
    """Shipped (or ``$SHFKIT_DATA_DIR``) structure constants for ``family``, verified on load."""
    if family not in roots.FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    path = data_path(family)
    if not path.exists():
        raise LieDataError(f"missing structure-constant file {path}")
    return _load_cached(str(path), path.stat().st_mtime_ns)


def write_data(family, directory=None):
    """Regenerate ``family`` and write its JSON file; returns the written path."""
    directory = Path(directory) if directory is not None else data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{family}.json"
    invlie.dump(roots.regenerate(family), path)
    return path


def compare_with_shipped(family, path=None):
    """Largest absolute difference between regenerated and on-disk data."""
    fresh = roots.regenerate(family)
    path = Path(path) if path is not None else data_path(family)
    with open(path) as fh:
        shipped = invlie.from_json_dict(json.load(fh))
    if shipped.dim != fresh.dim or shipped.k_indices != fresh.k_indices \
            or shipped.m_indices != fresh.m_indices:
        return float("inf")
    diffs = [np.abs(shipped.bracket - fresh.bracket).max(),
             np.abs(shipped.killing - fresh.killing).max(),
             abs(float(shipped.meta.get("N2", "nan")) - fresh.meta["N2"])]
    return float(max(diffs))


@dataclass(frozen=True)
class FamilyPoint:
    family: str
    a: float
    b: float
    q: float
    delta: float
    region: RegionFlags = None

    def as_dict(self):
        out = {"family": self.family, "a": self.a, "b": self.b, "q": self.q, "delta": self.delta}
        if self.region is not None:
            out["region"] = self.region.as_dict()
        return out


def _complex_basis(idx, value):
    return KForm.basis(idx).coeffs.astype(complex) * value


def real_form(family, coeffs, degree, tol=1e-12):
    """Pull a form on m^C (E-dual basis) back to the real basis of m; must come out real."""
    out = pullback_coeffs(roots.m_to_complex(family), np.asarray(coeffs, dtype=complex), degree)
    scale = max(1.0, float(np.abs(out).max()))
    if np.abs(out.imag).max() > tol * scale:
        raise LieDataError("form on m^C is not real on m", residual=float(np.abs(out.imag).max()))
    return KForm(degree, out.real)


def root_values(family, a, b=None):
    """``gamma(z)`` for gamma in (alpha, beta, alpha+beta)."""
    if family == "su21":
        return 1j * (a - b), 1j * (a + 2 * b), 1j * (2 * a + b)
    return 1j * a, -0.5j * a, 0.5j * a


def omega_complex(family, a, b=None):
    ga, gb, gab = root_values(family, a, b)
    return _complex_basis((0, 1), ga) + _complex_basis((2, 3), gb) + _complex_basis((4, 5), gab)


def psi_complex(q, p=0.0):
    """Invariant 3-form with ``psi(E_a, E_b, E_-a-b) = p + iq``."""
    return _complex_basis((0, 2, 5), p + 1j * q) + _complex_basis((1, 3, 4), -p + 1j * q)


def psihat_complex(q, delta):
    return _complex_basis((0, 2, 5), -delta * q) + _complex_basis((1, 3, 4), delta * q)


def reference_volume(family):
    """Real volume form ``i E^a ^ E^-a ^ E^b ^ E^-b ^ E^{a+b} ^ E^{-a-b}`` on m."""
    return real_form(family, _complex_basis(tuple(range(6)), 1j), 6)


def z_element(family, a, b=None):
    """Coordinates of z (the symplectic form is B([z, .], .)) in the basis of k."""
    if family == "su21":
        # diag(ia, ib, -i(a+b)) = a t1 + (a+b) t2
        return np.array([a, a + b])
    # z = (a/2)(h1 - h2) in the center of u(2)
    return np.array([a / 2, -a / 2, 0.0, 0.0])


def omega_from_killing(alg, z):
    """``omega(X, Y) = B([z, X], Y)`` on m, computed from structure constants only."""
    k = np.array(alg.k_indices)
    m = np.array(alg.m_indices)
    ad_z = np.tensordot(z, alg.bracket[k], axes=1)      # ad_z[j, l] = [z, X_j]_l
    W = ad_z[m] @ alg.killing[:, m]
    return two_form_from_matrix(W)


def su21_params(a, b):
    require_Q(a, b)
    c = constraint(a, b)
    return float(np.sign(c)), float(np.sqrt(2.0 * abs(c)))


def build_su21(a, b, tol=1e-9):
    """Invariant SHF structure on su(2,1)/t^2 for ``(a, b)`` in Q."""
    a, b = float(a), float(b)
    delta, q = su21_params(a, b)
    alg = load_algebra("su21")
    omega = real_form("su21", omega_complex("su21", a, b), 2)
    psi = real_form("su21", psi_complex(q), 3)
    s = validate(omega, psi, tol=tol)
    point = FamilyPoint("su21", a, b, q, delta, classify_region(a, b))
    return alg, s, point


def build_so41(a, tol=1e-9):
    """Invariant SHF structure on so(4,1)/u(2) for ``a != 0``."""
    a = float(a)
    if a == 0.0 or not np.isfinite(a):
        raise NotAdmissible("so41 family needs a nonzero real a", failed=["a != 0"])
    delta = float(np.sign(a))
    q = float(np.sqrt(0.5 * delta * a ** 3))
    alg = load_algebra("so41")
    omega = real_form("so41", omega_complex("so41", a), 2)
    psi = real_form("so41", psi_complex(q), 3)
    s = validate(omega, psi, tol=tol)
    return alg, s, FamilyPoint("so41", a, float("nan"), q, delta, None)


def build(family, a, b=None, tol=1e-9):
    if family == "su21":
        if b is None:
            raise NotAdmissible("su21 needs both a and b")
        return build_su21(a, b, tol=tol)
    if family == "so41":
        return build_so41(a, tol=tol)
    raise ValueError(f"unknown family {family!r}")


def theta_matrix():
    """Conjugation w.r.t. sl(3, R) restricted to m, in the real basis."""
    return roots.m_isomorphism("su21", np.conj)


def swap_matrix():
    """``Ad(u)`` on m for u = [[0,1,0],[1,0,0],[0,0,-1]] in S(U(2) x U(1))."""
    u = np.array([[0, 1, 0], [1, 0, 0], [0, 0, -1]], dtype=complex)
    return roots.m_isomorphism("su21", lambda X: u @ X @ np.linalg.inv(u))


def _rel(x, y):
    return x.norm() if y.norm() == 0 else (x - y).norm() / y.norm()


def isomorphism_check(move, a, b):
    """Residuals comparing the pullback of the structure at the image point with the one at (a, b).

    ``theta``: image (-a, -b); ``swap`` (Ad u): image (b, a), needs (a, b) in A;
    ``swap_theta`` (theta after Ad u): image (-b, -a), needs (a, b) in A.
    ``psi`` compares against the image psi, ``psi_negated`` against minus it.
    """
    region = classify_region(a, b)
    if move == "theta":
        if not region.in_Q:
            raise NotAdmissible("theta needs (a, b) in Q")
        L, image = theta_matrix(), (-a, -b)
    elif move == "swap":
        if not region.in_A:
            raise NotAdmissible("swap needs (a, b) in A")
        L, image = swap_matrix(), (b, a)
    elif move == "swap_theta":
        if not region.in_A:
            raise NotAdmissible("swap_theta needs (a, b) in A")
        # pullback by L pulls the structure at the image back to (a, b)
        L, image = swap_matrix() @ theta_matrix(), (-b, -a)
    else:
        raise ValueError(f"unknown move {move!r}")
    _, s, _ = build_su21(a, b)
    _, t, _ = build_su21(*image)
    res = {
        "omega": _rel(pullback(L, t.omega), s.omega),
        "psi": _rel(pullback(L, t.psi), s.psi),
        "psi_negated": _rel(pullback(L, t.psi), -s.psi),
        "metric": float(np.abs(L.T @ t.g @ L - s.g).max() / np.abs(s.g).max()),
    }
    if move == "theta":
        res["omega_sign_flip"] = _rel(pullback(L, s.omega), -s.omega)
        res["involution"] = float(np.abs(L @ L - np.eye(6)).max())
    return res
