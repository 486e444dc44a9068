"""Acceptance suite: numbered end-to-end checks shared by the tests and ``shfkit selftest``.

Each check returns a :class:`CheckResult`. Checks tagged ``literal`` test a
published claim exactly as stated; ``3b`` and ``8b`` test the corrected
statements for the two claims that do not hold as written.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import stable3
from .catalog import families, regions, roots
from .errors import ShfError
from .forms6 import DIM, KForm, hodge_star, metric_norm, multi_indices, pullback, volume_form, wedge
from .invlie import abelian, closed_subspace, invariant_forms
from .su3 import decompose3, decompose4, validate
from .torsion import check_shf, ricci_report

SEED = 20240611


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        worst = ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.detail.items()))
        return f"[{status}] {self.key}: {self.title} ({self.seconds:.2f}s) {worst}"


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v) + 0.0:.3g}"
    return str(v)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - t0
        return result
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def random_A_points(n, rng):
    """``n`` points of A away from its boundary rays."""
    pts = []
    while len(pts) < n:
        a = -rng.uniform(0.3, 2.0)
        b = rng.uniform(-a / 2, -2 * a)
        if regions.in_A(a, b) and min(b + a / 2, -2 * a - b) > 0.05 * abs(a):
            pts.append((a, b))
    return pts


def random_Q_points(n, rng):
    return [(a, b) if rng.random() < 0.5 else (-a, -b) for a, b in random_A_points(n, rng)]


def so41_values(n, rng):
    mags = rng.uniform(0.2, 5.0, size=n)
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return [float(x) for x in mags * signs]


def random_negative_form(rng):
    """Random element of the negative orbit: a random linear image of Re of dz1 dz2 dz3."""
    base = KForm.from_dict({"135": 1, "146": -1, "236": -1, "245": -1})
    while True:
        A = rng.normal(size=(DIM, DIM))
        if abs(np.linalg.det(A)) > 0.1:
            return pullback(A, base)


# 1 -------------------------------------------------------------------------

@_timed
def check_stable_engine(n_forms=1000, seed=SEED):
    """S^2 = P Id on random 3-forms and the (c, lambda) scaling law."""
    rng = np.random.default_rng(seed)
    Omega = volume_form()
    worst_sq = 0.0
    for _ in range(n_forms):
        rho = KForm(3, rng.normal(size=20))
        S = stable3.s_endo(rho, Omega)
        S2 = S @ S
        P = np.trace(S2) / DIM
        worst_sq = max(worst_sq, float(np.linalg.norm(S2 - P * np.eye(DIM)) /
                                       max(1.0, np.linalg.norm(S) ** 2)))
    rho = random_negative_form(rng)
    S0 = stable3.s_endo(rho, Omega)
    P0 = stable3.quartic_invariant(rho, Omega, S=S0)
    J0 = stable3.complex_structure(rho, Omega)
    worst_scale = 0.0
    for c in (1.0, -1.0, 2.0, -2.0, 0.5, -0.5):
        for lam in (1.0, -1.0, 3.0, -3.0):
            S = stable3.s_endo(c * rho, lam * Omega)
            P = stable3.quartic_invariant(c * rho, lam * Omega, S=S)
            J = stable3.complex_structure(c * rho, lam * Omega)
            worst_scale = max(worst_scale,
                              np.abs(S - c * c / lam * S0).max() / np.abs(S0).max(),
                              abs(P - c ** 4 / lam ** 2 * P0) / abs(P0),
                              np.abs(J - np.sign(lam) * J0).max())
    passed = worst_sq <= 1e-10 and worst_scale <= 1e-10
    return CheckResult("1", "stable-form engine", passed,
                       {"S2_minus_P": worst_sq, "scaling": float(worst_scale)})


# 2 -------------------------------------------------------------------------

def _su21_rows(points):
    alg = families.load_algebra("su21")
    ref = families.reference_volume("su21")
    rows = []
    for a, b in points:
        _, s, point = families.build_su21(a, b)
        rep = ricci_report(s, alg)
        P_ref = stable3.quartic_invariant(s.psi, ref)
        rows.append((a, b, point, s, rep, P_ref))
    return alg, rows


@_timed
def check_su21_family(n_points=50, seed=SEED):
    """Validation, SHF, sigma extraction, nu = 0 and P(psi) = -q^4 on random A points."""
    rng = np.random.default_rng(seed)
    _, rows = _su21_rows(random_A_points(n_points, rng))
    worst = {"validation": 0.0, "d_omega": 0.0, "d_psi": 0.0, "sigma_solve": 0.0,
             "nu_norm": 0.0, "P_rel": 0.0}
    for a, b, point, s, rep, P_ref in rows:
        worst["validation"] = max(worst["validation"], s.residuals["compatibility"],
                                  s.residuals["normalization"], s.residuals["metric_symmetry"])
        for key in ("d_omega", "d_psi", "sigma_solve", "nu_norm"):
            worst[key] = max(worst[key], rep.residuals[key])
        worst["P_rel"] = max(worst["P_rel"], abs(P_ref + point.q ** 4) / point.q ** 4)
    passed = (worst["validation"] <= 1e-9 and worst["d_omega"] <= 1e-10
              and worst["d_psi"] <= 1e-10 and worst["sigma_solve"] <= 1e-9
              and worst["nu_norm"] <= 1e-9 and worst["P_rel"] <= 1e-9)
    return CheckResult("2", "SU(2,1)/T^2 family", passed, worst)


# 3 -------------------------------------------------------------------------

@_timed
def check_scal_formula_literal(n_points=50, seed=SEED):
    """Scal = -24 N2 (a^2 + ab + b^2) at the raw A points, as stated."""
    N2 = roots.regenerate("su21").meta["N2"]
    rng = np.random.default_rng(seed)
    _, rows = _su21_rows(random_A_points(n_points, rng))
    worst = max(abs(rep.scal - regions.scal_formula(a, b, N2)) / abs(regions.scal_formula(a, b, N2))
                for a, b, _, _, rep, _ in rows)
    return CheckResult("3", "Scal formula at raw A points (literal)", worst <= 1e-8,
                       {"rel_err": worst, "N2": N2})


@_timed
def check_scal_formula_slice(n_points=50, seed=SEED):
    """Scal formula on the V-normalized points, and its degree -1 extension on the raw points."""
    N2 = roots.regenerate("su21").meta["N2"]
    rng = np.random.default_rng(seed)
    pts = random_A_points(n_points, rng)
    _, rows = _su21_rows(pts)
    ext = max(abs(rep.scal - regions.scal_homogeneous(a, b, N2)) / abs(rep.scal)
              for a, b, _, _, rep, _ in rows)
    _, vrows = _su21_rows([regions.normalize_to_slice(a, b)[:2] for a, b in pts])
    on_v = max(abs(rep.scal - regions.scal_formula(a, b, N2)) / abs(rep.scal)
               for a, b, _, _, rep, _ in vrows)
    N2_ok = abs(N2 - 1.0 / 6.0) <= 1e-12
    return CheckResult("3b", "Scal formula on V and homogeneous extension",
                       ext <= 1e-8 and on_v <= 1e-8,
                       {"rel_err_on_V": on_v, "rel_err_extension": ext, "N2_is_1/6": N2_ok})


# 4 -------------------------------------------------------------------------

@_timed
def check_critical_point(n_samples=200):
    N2 = roots.regenerate("su21").meta["N2"]
    a, b, gn = regions.critical_point_check(N2)
    dist = float(np.hypot(a - regions.CRITICAL_POINT[0], b - regions.CRITICAL_POINT[1]))
    cval = abs(regions.constraint(a, b) + 1.0)
    # V_SHF starts at C (t = 1); Scal must fall monotonically along it
    ts = np.linspace(1.0, regions.T_MAX, n_samples)
    scal = np.array([regions.scal_formula(*regions.v_shf_point(t), N2) for t in ts])
    violations = int(np.sum(np.diff(scal) >= 0))
    passed = dist <= 1e-6 and cval <= 1e-9 and violations == 0
    return CheckResult("4", "critical point C", passed,
                       {"distance_to_C": dist, "constraint_residual": cval,
                        "grad_norm": gn, "monotonicity_violations": violations})


# 5 -------------------------------------------------------------------------

@_timed
def check_so41_family(n_values=20, seed=SEED):
    rng = np.random.default_rng(seed)
    values = so41_values(n_values, rng)
    alg = families.load_algebra("so41")
    worst = {"shf": 0.0, "nu_norm": 0.0, "metric_pattern": 0.0, "q2": 0.0, "homothety": 0.0}
    a0 = values[0]
    _, s0, _ = families.build_so41(a0)
    scal0 = ricci_report(s0, alg).scal
    for a in values:
        _, s, point = families.build_so41(a)
        rep = ricci_report(s, alg)
        worst["shf"] = max(worst["shf"], *check_shf(s, alg))
        worst["nu_norm"] = max(worst["nu_norm"], rep.residuals["nu_norm"])
        d = point.delta
        target = np.diag([2 * d * a, 2 * d * a, d * a, d * a, d * a, d * a])
        worst["metric_pattern"] = max(worst["metric_pattern"],
                                      float(np.abs(s.g - target).max()) / abs(a))
        worst["q2"] = max(worst["q2"], abs(point.q ** 2 - d * a ** 3 / 2) / abs(a) ** 3)
        c2 = abs(a) / abs(a0)
        same = np.sign(a) == np.sign(a0)
        res = [float(np.abs(s.g - c2 * s0.g).max()) / np.abs(s.g).max(),
               (s.omega - (1 if same else -1) * c2 * s0.omega).norm() / s.omega.norm(),
               (s.psi - c2 ** 1.5 * s0.psi).norm() / s.psi.norm(),
               abs(rep.scal - scal0 / c2) / abs(rep.scal)]
        worst["homothety"] = max(worst["homothety"], *res)
    passed = (worst["shf"] <= 1e-10 and worst["nu_norm"] <= 1e-9
              and worst["metric_pattern"] <= 1e-10 and worst["q2"] <= 1e-10
              and worst["homothety"] <= 1e-9)
    return CheckResult("5", "SO(4,1)/U(2) family", passed, worst)


# 6 -------------------------------------------------------------------------

def _parallel_residual(x, y):
    x, y = x / np.linalg.norm(x), y / np.linalg.norm(y)
    return float(min(np.linalg.norm(x - y), np.linalg.norm(x + y)))


@_timed
def check_invariant_three_forms():
    detail = {}
    passed = True
    for family, build_args in (("su21", (-1.0, 1.3)), ("so41", (2.0,))):
        alg = families.load_algebra(family)
        inv3 = invariant_forms(alg, 3)
        closed = closed_subspace(inv3, alg)
        _, s, _ = families.build(family, *build_args)
        par = _parallel_residual(closed[0].coeffs, s.psi.coeffs) if len(closed) == 1 else np.inf
        detail[f"{family}_dim3"] = len(inv3)
        detail[f"{family}_closed_dim"] = len(closed)
        detail[f"{family}_psi_direction"] = par
        passed &= len(inv3) == 2 and len(closed) == 1 and par <= 1e-10
    dim1 = len(invariant_forms(families.load_algebra("su21"), 1))
    detail["su21_dim1"] = dim1
    return CheckResult("6", "invariant 3-forms and their closed line", bool(passed and dim1 == 0),
                       detail)


# 7 -------------------------------------------------------------------------

def _catalog_structures(seed=SEED, n_su21=50, n_so41=20):
    rng = np.random.default_rng(seed)
    out = []
    for a, b in random_A_points(n_su21, rng):
        alg, s, _ = families.build_su21(a, b)
        out.append((alg, s))
    for a in so41_values(n_so41, rng):
        alg, s, _ = families.build_so41(a)
        out.append((alg, s))
    return out


@_timed
def check_hodge_and_decompositions(seed=SEED):
    rng = np.random.default_rng(seed)
    structures = _catalog_structures(seed)
    star2 = 0.0
    for _, s in structures[::7]:
        for k in range(DIM + 1):
            phi = KForm(k, rng.normal(size=len(multi_indices(k))))
            back = hodge_star(hodge_star(phi, s.g, s.vol), s.g, s.vol)
            star2 = max(star2, (back - (-1) ** (k * (DIM - k)) * phi).norm() / phi.norm())
    roundtrip = 0.0
    for _, s in structures[::7]:
        phi3 = KForm(3, rng.normal(size=20))
        phi4 = KForm(4, rng.normal(size=15))
        roundtrip = max(roundtrip,
                        metric_norm(decompose3(phi3, s).total() - phi3, s.g) / metric_norm(phi3, s.g),
                        metric_norm(decompose4(phi4, s).total() - phi4, s.g) / metric_norm(phi4, s.g))
    sigma_star = 0.0
    for alg, s in structures:
        sigma = ricci_report(s, alg).sigma
        sigma_star = max(sigma_star,
                         metric_norm(hodge_star(sigma, s.g, s.vol) + wedge(sigma, s.omega), s.g)
                         / max(1.0, metric_norm(sigma, s.g)))
    passed = star2 <= 1e-10 and roundtrip <= 1e-10 and sigma_star <= 1e-10
    return CheckResult("7", "Hodge star and decompositions", passed,
                       {"star_star": star2, "decomposition_roundtrip": roundtrip,
                        "star_sigma": sigma_star})


# 8 -------------------------------------------------------------------------

def _test_points(n, seed):
    return random_A_points(n, np.random.default_rng(seed + 8))


@_timed
def check_isomorphisms_literal(n_points=10, seed=SEED):
    """theta and Ad(u) pull the image structure back onto (omega, psi), as stated."""
    worst = {"omega": 0.0, "psi": 0.0, "metric": 0.0}
    for a, b in _test_points(n_points, seed):
        for move in ("theta", "swap"):
            res = families.isomorphism_check(move, a, b)
            for key in worst:
                worst[key] = max(worst[key], res[key])
    return CheckResult("8", "theta / u-swap isomorphism certificates (literal)",
                       max(worst.values()) <= 1e-10, worst)


@_timed
def check_isomorphisms_corrected(n_points=10, n_domain=200, seed=SEED):
    """theta and Ad(u) negate psi; their composite is an isomorphism; domain map lands in V_SHF."""
    worst = {"theta_u_negate_psi": 0.0, "composite": 0.0}
    for a, b in _test_points(n_points, seed):
        for move in ("theta", "swap"):
            res = families.isomorphism_check(move, a, b)
            worst["theta_u_negate_psi"] = max(worst["theta_u_negate_psi"], res["omega"],
                                              res["psi_negated"], res["metric"])
        res = families.isomorphism_check("swap_theta", a, b)
        worst["composite"] = max(worst["composite"], res["omega"], res["psi"], res["metric"])
    rng = np.random.default_rng(seed + 88)
    misses = 0
    replay_err = 0.0
    for a, b in random_Q_points(n_domain, rng):
        x, y, path = regions.fundamental_domain_map(a, b)
        misses += not regions.classify_region(x, y).in_V_SHF
        rx, ry = regions.replay(a, b, path)
        replay_err = max(replay_err, abs(rx - x) + abs(ry - y))
    passed = max(worst.values()) <= 1e-10 and misses == 0 and replay_err <= 1e-12
    return CheckResult("8b", "corrected isomorphisms and fundamental domain map", passed,
                       {**worst, "domain_misses": misses, "replay_error": replay_err})


# 9 -------------------------------------------------------------------------

@_timed
def check_negative_controls():
    alg = families.load_algebra("su21")
    a, b = -1.0, 1.3
    _, s, point = families.build_su21(a, b)
    t = 0.3
    omega = families.real_form("su21", families.omega_complex("su21", a, b), 2)
    psi = families.real_form("su21", families.psi_complex(point.q * np.cos(t), point.q * np.sin(t)), 3)
    perturbed = validate(omega, psi)
    d_psi = check_shf(perturbed, alg)[1]
    omega0 = KForm.from_dict({"12": 1, "34": 1, "56": 1})
    psi0 = KForm.from_dict({"135": 1, "146": -1, "236": -1, "245": -1})
    flat = validate(omega0, psi0)
    rep = ricci_report(flat, abelian())
    passed = d_psi > 1e-6 and rep.torsion_free and abs(rep.scal) <= 1e-12
    return CheckResult("9", "negative controls", passed,
                       {"perturbed_d_psi": d_psi, "flat_torsion_free": rep.torsion_free,
                        "flat_scal": rep.scal})


# data integrity -------------------------------------------------------------

@_timed
def check_shipped_data():
    diffs = {f: families.compare_with_shipped(f) for f in roots.FAMILIES}
    return CheckResult("data", "shipped structure constants match regeneration",
                       max(diffs.values()) <= families.SHIPPED_TOL, diffs)


CHECKS = {
    "1": check_stable_engine,
    "2": check_su21_family,
    "3": check_scal_formula_literal,
    "3b": check_scal_formula_slice,
    "4": check_critical_point,
    "5": check_so41_family,
    "6": check_invariant_three_forms,
    "7": check_hodge_and_decompositions,
    "8": check_isomorphisms_literal,
    "8b": check_isomorphisms_corrected,
    "9": check_negative_controls,
    "data": check_shipped_data,
}


def run(keys=None):
    """Run the selected checks (all by default) in a fixed order."""
    keys = list(CHECKS) if keys is None else list(keys)
    unknown = [k for k in keys if k not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks {unknown}; available {list(CHECKS)}")
    results = []
    for k in keys:
        try:
            results.append(CHECKS[k]())
        except (ShfError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            results.append(CheckResult(k, CHECKS[k].__name__, False,
                                       {"error": f"{type(exc).__name__}: {exc}"}))
    return results
