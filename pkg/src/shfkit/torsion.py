"""Intrinsic torsion of invariant SHF structures and the form-level Ricci data.

Everything here works on invariant forms of a reductive homogeneous space, so
``d`` is the Koszul differential from :mod:`shfkit.invlie`.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotSHFConsistent, TorsionDecompositionError
from .forms6 import KForm, hodge_star, metric_norm, wedge
from .invlie import ce_differential
from .su3 import decompose3, primitive11_basis

SHF_TOL = 1e-10
SOLVE_TOL = 1e-9
FLAG_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class TorsionReport:
    sigma: KForm
    sigma_norm2: float
    nu: KForm
    scal: float
    ric0_plus_rep: KForm
    ric0_minus_rep: KForm
    torsion_free: bool
    j_hermitian_ricci: bool
    residuals: dict = field(default_factory=dict)
    dsigma_psi_coeff: float = 0.0


def check_shf(s, alg):
    """``(|d omega|, |d psi|)`` measured in the metric of ``s``."""
    return (metric_norm(ce_differential(s.omega, alg), s.g),
            metric_norm(ce_differential(s.psi, alg), s.g))


def _solve_torsion(s, alg):
    target = ce_differential(s.psihat, alg)
    basis = primitive11_basis(s)
    A = np.column_stack([wedge(k, s.omega).coeffs for k in basis])
    coef, *_ = np.linalg.lstsq(A, target.coeffs, rcond=None)
    sigma = KForm(2, np.column_stack([k.coeffs for k in basis]) @ coef)
    resid = metric_norm(wedge(sigma, s.omega) - target, s.g)
    return sigma, target, resid


def torsion_form(s, alg, tol=SOLVE_TOL):
    """Primitive (1,1)-form sigma with ``d psihat = sigma ^ omega``."""
    sigma, target, resid = _solve_torsion(s, alg)
    scale = max(1.0, metric_norm(target, s.g))
    if resid > tol * scale:
        raise NotSHFConsistent("d psihat has components outside [Lambda^{1,1}_0] ^ omega",
                               residual=resid)
    return sigma


def dsigma_split(sigma, s, alg, tol=SOLVE_TOL):
    """``d sigma = f1 psi + nu``; returns ``(f1, nu)`` after checking the forbidden parts vanish."""
    dsigma = ce_differential(sigma, alg)
    parts = decompose3(dsigma, s)
    scale = max(1.0, metric_norm(dsigma, s.g))
    psihat_res = metric_norm(parts.psihat_part, s.g)
    oneform_res = metric_norm(parts.oneform_wedge_omega, s.g)
    if max(psihat_res, oneform_res) > tol * scale:
        raise TorsionDecompositionError("d sigma has psihat or 1-form ^ omega components",
                                        residual=max(psihat_res, oneform_res),
                                        psihat=psihat_res, oneform_wedge_omega=oneform_res)
    return parts.f1, parts.primitive21


def ricci_report(s, alg, tol=SOLVE_TOL):
    """Assemble sigma, |sigma|^2, nu, Scal and the Ric^0 form representatives."""
    sigma, target, resid = _solve_torsion(s, alg)
    scale = max(1.0, metric_norm(target, s.g))
    if resid > tol * scale:
        raise NotSHFConsistent("d psihat has components outside [Lambda^{1,1}_0] ^ omega",
                               residual=resid)
    norm2 = metric_norm(sigma, s.g) ** 2
    f1, nu = dsigma_split(sigma, s, alg, tol=tol)
    flag_tol = FLAG_TOL * (1.0 + metric_norm(target, s.g))
    sigma_norm = np.sqrt(norm2)
    nu_norm = metric_norm(nu, s.g)
    plus = 0.25 * hodge_star(wedge(sigma, sigma), s.g, s.vol) + (norm2 / 12.0) * s.omega
    dom, dpsi = check_shf(s, alg)
    residuals = {
        "d_omega": dom,
        "d_psi": dpsi,
        "sigma_solve": resid,
        "sigma_coclosed": metric_norm(hodge_star(sigma, s.g, s.vol) + wedge(sigma, s.omega), s.g),
        "d_star_sigma": metric_norm(ce_differential(hodge_star(sigma, s.g, s.vol), alg), s.g),
        "dsigma_psi_coeff": abs(4.0 * f1 - norm2),
        "nu_norm": nu_norm,
    }
    return TorsionReport(sigma=sigma, sigma_norm2=norm2, nu=nu, scal=-0.5 * norm2,
                         ric0_plus_rep=plus, ric0_minus_rep=2.0 * nu,
                         torsion_free=bool(sigma_norm <= flag_tol),
                         j_hermitian_ricci=bool(nu_norm <= flag_tol),
                         residuals=residuals, dsigma_psi_coeff=f1)
