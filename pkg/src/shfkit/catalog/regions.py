"""Parameter regions of the SU(2,1)/T^2 family and the scalar-curvature landscape.

With ``c(a, b) = (b - a)(a + 2b)(2a + b)``:

* A       = {0 < -a/2 < b < -2a}; admissible parameters are Q = A u (-A);
* V       = {(a, b) in A : c(a, b) = -1} (volume-normalized slice);
* V_SHF   = {(a, b) in V : 0 < -a <= b < -2a} (fundamental domain).
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import root

from ..errors import ConvergenceError, NotAdmissible

ON_V_TOL = 1e-10
CBRT2 = 2.0 ** (1.0 / 3.0)
CRITICAL_POINT = (-1.0 / CBRT2, 1.0 / CBRT2)


def constraint(a, b):
    return (b - a) * (a + 2 * b) * (2 * a + b)


def constraint_grad(a, b):
    # d/da and d/db of (b - a)(a + 2b)(2a + b)
    u, v, w = b - a, a + 2 * b, 2 * a + b
    return np.array([-v * w + u * w + 2 * u * v, v * w + 2 * u * w + u * v])


def delta(a, b):
    """Sign of ``c(a, b)``."""
    return float(np.sign(constraint(a, b)))


def in_A(a, b):
    return 0 < -a / 2 < b < -2 * a


@dataclass(frozen=True)
class RegionFlags:
    in_Q: bool
    in_A: bool
    in_minus_A: bool
    on_V: bool
    in_V_SHF: bool

    def as_dict(self):
        return asdict(self)


def classify_region(a, b, tol=ON_V_TOL):
    A = in_A(a, b)
    mA = in_A(-a, -b)
    on_V = A and abs(constraint(a, b) + 1.0) <= tol
    return RegionFlags(in_Q=A or mA, in_A=A, in_minus_A=mA, on_V=on_V,
                       in_V_SHF=on_V and 0 < -a <= b < -2 * a)


def admissibility_failure(a, b):
    """Human-readable list of the inequalities of A (and -A) that fail."""
    def fails(x, y):
        out = []
        if not 0 < -x / 2:
            out.append("0 < -a/2")
        if not -x / 2 < y:
            out.append("-a/2 < b")
        if not y < -2 * x:
            out.append("b < -2a")
        return out
    return {"A": fails(a, b), "-A": fails(-a, -b)}


def require_Q(a, b):
    if not classify_region(a, b).in_Q:
        raise NotAdmissible(f"(a, b) = ({a}, {b}) is not in Q = A u (-A)",
                            failed=admissibility_failure(a, b))


def normalize_to_slice(a, b):
    """Rescale a point of A onto V: returns ``(lam a, lam b, lam)``."""
    if not in_A(a, b):
        raise NotAdmissible(f"(a, b) = ({a}, {b}) is not in A", failed=admissibility_failure(a, b)["A"])
    lam = abs(constraint(a, b)) ** (-1.0 / 3.0)
    return lam * a, lam * b, lam


def _move(name, before, after, **extra):
    return {"move": name, "from": [float(before[0]), float(before[1])],
            "to": [float(after[0]), float(after[1])], **extra}


def fundamental_domain_map(a, b):
    """Map a point of Q into V_SHF; returns ``(a'', b'', path)``.

    Moves: ``theta`` (a, b) -> (-a, -b); ``scale`` (a, b) -> (lam a, lam b);
    ``swap`` (a, b) -> (b, a). Points of V with ``-a > b`` need ``swap`` followed
    by ``theta``, since the swap alone lands in -A.
    """
    require_Q(a, b)
    path = []
    p = (float(a), float(b))
    if not in_A(*p):
        q = (-p[0], -p[1])
        path.append(_move("theta", p, q))
        p = q
    if abs(constraint(*p) + 1.0) > ON_V_TOL:
        x, y, lam = normalize_to_slice(*p)
        path.append(_move("scale", p, (x, y), factor=float(lam)))
        p = (x, y)
    if -p[0] > p[1]:
        q = (p[1], p[0])
        path.append(_move("swap", p, q))
        r = (-q[0], -q[1])
        path.append(_move("theta", q, r))
        p = r
    return p[0], p[1], path


def replay(a, b, path):
    """Re-apply a move list from :func:`fundamental_domain_map`."""
    p = (float(a), float(b))
    for step in path:
        if step["move"] == "theta":
            p = (-p[0], -p[1])
        elif step["move"] == "swap":
            p = (p[1], p[0])
        elif step["move"] == "scale":
            p = (step["factor"] * p[0], step["factor"] * p[1])
        else:
            raise ValueError(f"unknown move {step['move']!r}")
    return p


def scal_formula(a, b, N2):
    """Closed-form scalar curvature ``-24 N2 (a^2 + ab + b^2)``.

    Valid on the slice V. Scal is homogeneous of degree -1 in (a, b), so off V
    use :func:`scal_homogeneous`.
    """
    return -24.0 * N2 * (a * a + a * b + b * b)


def scal_homogeneous(a, b, N2):
    """Degree -1 extension of :func:`scal_formula` to all of Q: divide by ``|c(a, b)|``."""
    return scal_formula(a, b, N2) / abs(constraint(a, b))


# ray parameter bound for plotting/scanning; V_SHF is unbounded as t -> 2
T_MAX = 1.954


def v_shf_point(t):
    """Point of V_SHF on the ray through (-1, t), ``1 <= t < 2``."""
    x, y, _ = normalize_to_slice(-1.0, t)
    return x, y


def v_shf_bounding_box(t_max=T_MAX):
    """``(a_min, a_max, b_min, b_max)`` of V_SHF truncated at ray parameter ``t_max``."""
    pts = np.array([v_shf_point(t) for t in np.linspace(1.0, t_max, 401)])
    return (float(pts[:, 0].min()), float(pts[:, 0].max()),
            float(pts[:, 1].min()), float(pts[:, 1].max()))


def _lagrange_system(x, N2):
    a, b, mu = x
    grad_scal = -24.0 * N2 * np.array([2 * a + b, a + 2 * b])
    return np.concatenate([grad_scal - mu * constraint_grad(a, b), [constraint(a, b) + 1.0]])


def critical_point_check(N2, starts=None, tol=1e-12):
    """Stationary points of Scal on ``c(a, b) = -1`` within the closure of V_SHF.

    Solves the Lagrange system from several starting points on V_SHF and
    returns ``(a*, b*, gradient_norm)``; the projected gradient norm is the
    norm of ``grad Scal - mu grad c`` at the solution.
    """
    if starts is None:
        starts = [v_shf_point(t) for t in np.linspace(1.0, 1.95, 8)]
    found, best = [], None
    for a0, b0 in starts:
        g = -24.0 * N2 * np.array([2 * a0 + b0, a0 + 2 * b0])
        dc = constraint_grad(a0, b0)
        mu0 = float(g @ dc / (dc @ dc))
        sol = root(_lagrange_system, [a0, b0, mu0], args=(N2,), method="hybr", tol=tol)
        resid = float(np.linalg.norm(_lagrange_system(sol.x, N2)))
        if best is None or resid < best[1]:
            best = (sol.x, resid)
        a, b = sol.x[:2]
        closure = 0 < -a <= b * (1 + 1e-9) and b <= -2 * a and abs(constraint(a, b) + 1) < 1e-9
        if sol.success and resid < 1e-8 and closure:
            found.append((a, b, float(np.linalg.norm(_lagrange_system(sol.x, N2)[:2]))))
    if not found:
        raise ConvergenceError("Lagrange system did not converge inside V_SHF",
                               best=None if best is None else best[0].tolist(),
                               residual=None if best is None else best[1])
    found.sort(key=lambda r: r[2])
    a, b, gn = found[0]
    spread = max(abs(r[0] - a) + abs(r[1] - b) for r in found)
    if spread > 1e-6:
        raise ConvergenceError("several distinct stationary points found", best=[a, b],
                               residual=spread)
    return float(a), float(b), gn
