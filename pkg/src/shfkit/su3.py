"""SU(3)-structures (omega, psi) and the type decompositions of 3- and 4-forms.

The decompositions are computed as g-orthogonal projections onto explicitly
spanned summands; the primitive (2,1)+(1,2) part of a 3-form is whatever is
left over after removing the other three.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from . import stable3
from .errors import (CompatibilityError, DegenerateOmega, DegreeError, MetricError,
                     NormalizationError, NotNegativeOrbit, ShfError)
from .forms6 import (DIM, KForm, form_gram, from_json, multi_indices, one_form, power, pullback,
                     to_json, two_form_matrix, wedge)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SU3Structure:
    omega: KForm
    psi: KForm
    psihat: KForm
    J: np.ndarray
    g: np.ndarray
    vol: KForm
    P: float = float("nan")
    residuals: dict = field(default_factory=dict)

    def scaled(self, c):
        """Homothetic structure ``(c^2 omega, c^3 psi)``."""
        return validate(c ** 2 * self.omega, c ** 3 * self.psi)


@dataclass(frozen=True, eq=False)
class Decomp3:
    f1: float
    f2: float
    primitive21: KForm
    oneform_wedge_omega: KForm
    psi_part: KForm
    psihat_part: KForm

    def total(self):
        return self.psi_part + self.psihat_part + self.primitive21 + self.oneform_wedge_omega


@dataclass(frozen=True, eq=False)
class Decomp4:
    f0: float
    omega2_part: KForm
    primitive11_wedge_omega: KForm
    oneform_wedge_psi: KForm

    def total(self):
        return self.omega2_part + self.primitive11_wedge_omega + self.oneform_wedge_psi


def _rel(res, scale):
    return res / max(scale, 1e-300)


def validate(omega, psi, tol=DEFAULT_TOL):
    """Check the SU(3) conditions on ``(omega, psi)`` and assemble the structure.

    Residuals are measured relative to the natural magnitude of each side
    (``|omega|^3`` for top-degree quantities, ``|omega|^2`` for ``omega ^ psi``
    scaled by ``|psi|``), so the test is homothety invariant.
    """
    if omega.degree != 2 or psi.degree != 3:
        raise DegreeError("validate expects a 2-form and a 3-form")
    residuals = {}
    om_scale = omega.norm()
    omega3 = power(omega, 3)
    residuals["nondegeneracy"] = _rel(abs(omega3.top), om_scale ** 3)
    if residuals["nondegeneracy"] <= tol:
        raise DegenerateOmega("omega^3 vanishes", residual=residuals["nondegeneracy"])
    vol = omega3 / 6.0

    S = stable3.s_endo(psi, vol)
    P = stable3.quartic_invariant(psi, vol, S=S)
    if P >= -stable3.STABILITY_TOL * stable3.stability_scale(psi, vol):
        raise NotNegativeOrbit(f"P(psi) = {P:.6g} is not negative", residual=P, P=P)
    J = S / np.sqrt(-P)
    psihat = stable3.hat(psi, J)

    compat = wedge(omega, psi)
    residuals["compatibility"] = _rel(compat.norm(), om_scale * psi.norm())
    if residuals["compatibility"] > tol:
        raise CompatibilityError("omega ^ psi != 0", residual=residuals["compatibility"])

    lhs = wedge(psi, psihat).top
    rhs = 2.0 / 3.0 * omega3.top
    residuals["normalization"] = _rel(abs(lhs - rhs), abs(rhs))
    if residuals["normalization"] > tol:
        raise NormalizationError("psi ^ psihat != (2/3) omega^3",
                                 residual=residuals["normalization"], ratio=lhs / rhs)

    W = two_form_matrix(omega)
    g = W @ J
    gscale = float(np.abs(g).max())
    residuals["metric_symmetry"] = _rel(float(np.abs(g - g.T).max()), gscale)
    g = 0.5 * (g + g.T)
    eig = np.linalg.eigvalsh(g)
    residuals["metric_min_eigenvalue"] = float(eig[0])
    if residuals["metric_symmetry"] > tol or eig[0] <= tol * gscale:
        raise MetricError("omega(., J.) is not symmetric positive definite",
                          residual=residuals["metric_symmetry"], min_eigenvalue=float(eig[0]))
    residuals["J_squared"] = float(np.abs(J @ J + np.eye(DIM)).max())
    residuals["omega_J_invariance"] = _rel(float(np.abs(J.T @ W @ J - W).max()), float(np.abs(W).max()))
    return SU3Structure(omega=omega, psi=psi, psihat=psihat, J=J, g=g, vol=vol, P=P,
                        residuals=residuals)


def validation_report(omega, psi, tol=DEFAULT_TOL):
    """JSON-ready ``{valid, residuals, P, signature, error}`` dictionary."""
    report = {"valid": False, "residuals": {}, "P": None, "signature": None, "error": None}
    try:
        s = validate(omega, psi, tol=tol)
    except ShfError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc),
                           "residual": exc.residual, **{k: v for k, v in exc.details.items()}}
        return report, None
    eig = np.linalg.eigvalsh(s.g)
    report.update(valid=True, residuals=dict(s.residuals), P=s.P,
                  signature=[int((eig > 0).sum()), int((eig < 0).sum())])
    return report, s


def _orthonormalize(vectors, G):
    """G-orthonormal basis of the span of the columns of ``vectors``."""
    if vectors.shape[1] == 0:
        return vectors
    M = vectors.T @ G @ vectors
    w, U = np.linalg.eigh(0.5 * (M + M.T))
    keep = w > 1e-9 * max(w.max(), 1e-300)
    return vectors @ U[:, keep] / np.sqrt(w[keep])


def _j_action_matrix(J, k):
    n = len(multi_indices(k))
    return np.column_stack([pullback(J, KForm(k, np.eye(n)[i])).coeffs for i in range(n)])


def primitive11_basis(s):
    """g-orthonormal basis (8 forms) of the primitive (1,1)-forms of ``s``."""
    omega2 = power(s.omega, 2)
    wedge_rows = np.array([[wedge(KForm(2, np.eye(15)[i]), omega2).top for i in range(15)]])
    j_rows = _j_action_matrix(s.J, 2) - np.eye(15)
    A = np.vstack([wedge_rows / max(omega2.norm(), 1e-300), j_rows])
    N = null_space(A, rcond=1e-9)
    B = _orthonormalize(N, form_gram(s.g, 2))
    return [KForm(2, B[:, i]) for i in range(B.shape[1])]


def _span_matrix(forms):
    return np.column_stack([f.coeffs for f in forms])


def _project(x, basis, G):
    """Projection of coefficient vector ``x`` onto span of G-orthonormal ``basis`` columns."""
    return basis @ (basis.T @ G @ x)


def _subspaces3(s):
    G = form_gram(s.g, 3)
    e = np.eye(DIM)
    oneforms = _orthonormalize(_span_matrix([wedge(one_form(e[i]), s.omega) for i in range(DIM)]), G)
    psi_n = s.psi.coeffs / np.sqrt(s.psi.coeffs @ G @ s.psi.coeffs)
    psihat_n = s.psihat.coeffs / np.sqrt(s.psihat.coeffs @ G @ s.psihat.coeffs)
    taken = np.column_stack([psi_n, psihat_n, oneforms])
    # g-orthogonal complement of the three explicit summands
    comp = null_space(taken.T @ G, rcond=1e-9)
    prim = _orthonormalize(comp, G)
    return G, psi_n, psihat_n, oneforms, prim


def decompose3(phi, s):
    """Split a 3-form into its psi, psihat, primitive (2,1)+(1,2) and 1-form ^ omega parts."""
    if phi.degree != 3:
        raise DegreeError("decompose3 expects a 3-form")
    G, psi_n, psihat_n, oneforms, prim = _subspaces3(s)
    x = phi.coeffs
    psi2 = s.psi.coeffs @ G @ s.psi.coeffs
    psihat2 = s.psihat.coeffs @ G @ s.psihat.coeffs
    f1 = float(s.psi.coeffs @ G @ x / psi2)
    f2 = float(s.psihat.coeffs @ G @ x / psihat2)
    return Decomp3(f1=f1, f2=f2,
                   primitive21=KForm(3, _project(x, prim, G)),
                   oneform_wedge_omega=KForm(3, _project(x, oneforms, G)),
                   psi_part=f1 * s.psi, psihat_part=f2 * s.psihat)


def decompose4(Phi, s):
    """Split a 4-form into its omega^2, [primitive (1,1)] ^ omega and 1-form ^ psi parts."""
    if Phi.degree != 4:
        raise DegreeError("decompose4 expects a 4-form")
    G = form_gram(s.g, 4)
    e = np.eye(DIM)
    omega2 = power(s.omega, 2)
    kappas = _orthonormalize(_span_matrix([wedge(k, s.omega) for k in primitive11_basis(s)]), G)
    oneforms = _orthonormalize(_span_matrix([wedge(one_form(e[i]), s.psi) for i in range(DIM)]), G)
    x = Phi.coeffs
    f0 = float(omega2.coeffs @ G @ x / (omega2.coeffs @ G @ omega2.coeffs))
    return Decomp4(f0=f0, omega2_part=f0 * omega2,
                   primitive11_wedge_omega=KForm(4, _project(x, kappas, G)),
                   oneform_wedge_psi=KForm(4, _project(x, oneforms, G)))


def structure_to_json(omega, psi):
    return {"omega": to_json(omega), "psi": to_json(psi)}


def structure_from_json(data):
    try:
        omega, psi = from_json(data["omega"]), from_json(data["psi"])
    except (KeyError, TypeError) as exc:
        raise DegreeError(f"malformed structure JSON: missing {exc}") from exc
    if omega.degree != 2 or psi.degree != 3:
        raise DegreeError("structure JSON needs a 2-form omega and a 3-form psi")
    return omega, psi
