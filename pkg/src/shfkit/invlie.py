"""Structure constants, reductive splits g = k + m, and invariant forms on m.

Forms on m use the ordered basis given by ``m_indices``; a 6-vector is a
vector of m in that basis.
"""

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np
from scipy.linalg import null_space

from .errors import DegreeError, LieDataError
from .forms6 import DIM, KForm, derivation, derivation_matrix, multi_indices

NULL_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """Real Lie algebra with ``[X_i, X_j] = sum_k bracket[i, j, k] X_k``."""

    dim: int
    bracket: np.ndarray
    killing: np.ndarray
    k_indices: tuple
    m_indices: tuple
    basis_labels: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.bracket, dtype=float)
        if c.shape != (self.dim,) * 3:
            raise LieDataError(f"bracket must have shape {(self.dim,) * 3}, got {c.shape}")
        if len(self.m_indices) != DIM:
            raise LieDataError(f"m must be {DIM}-dimensional, got {len(self.m_indices)}")
        if sorted(tuple(self.k_indices) + tuple(self.m_indices)) != list(range(self.dim)):
            raise LieDataError("k_indices and m_indices must partition the basis")
        c.setflags(write=False)
        B = np.array(self.killing, dtype=float)
        B.setflags(write=False)
        object.__setattr__(self, "bracket", c)
        object.__setattr__(self, "killing", B)
        object.__setattr__(self, "k_indices", tuple(int(i) for i in self.k_indices))
        object.__setattr__(self, "m_indices", tuple(int(i) for i in self.m_indices))
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    def ad(self, i):
        """Matrix of ``ad X_i`` (column j holds the coordinates of ``[X_i, X_j]``)."""
        return self.bracket[i].T

    def m_structure(self):
        """``Cm[a, b, :]``: m-component of ``[X_{m_a}, X_{m_b}]`` in the m basis."""
        m = np.array(self.m_indices)
        return self.bracket[np.ix_(m, m, m)]

    def isotropy_matrices(self):
        """``ad Z`` restricted to m for each basis element Z of k."""
        m = np.array(self.m_indices)
        return [self.bracket[z][np.ix_(m, m)].T for z in self.k_indices]

    def checks(self):
        """Residuals of the structural invariants."""
        c = self.bracket
        scale = max(1.0, float(np.abs(c).max()))
        ads = [self.ad(i) for i in range(self.dim)]
        jac = 0.0
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                lhs = np.tensordot(c[i, j], np.array(ads), axes=1)
                jac = max(jac, float(np.abs(lhs - (ads[i] @ ads[j] - ads[j] @ ads[i])).max()))
        k = np.array(self.k_indices, dtype=int)
        m = np.array(self.m_indices, dtype=int)
        red = float(np.abs(c[np.ix_(k, m, k)]).max()) if len(k) else 0.0
        return {
            "antisymmetry": float(np.abs(c + c.transpose(1, 0, 2)).max()) / scale,
            "jacobi": jac / scale ** 2,
            "reductivity": red / scale,
            "killing": float(np.abs(killing_form(c) - self.killing).max())
            / max(1.0, float(np.abs(self.killing).max())),
        }

    def verify(self, tol_structure=1e-10, tol_killing=1e-9):
        res = self.checks()
        limits = {"antisymmetry": tol_structure, "jacobi": tol_structure,
                  "reductivity": tol_structure, "killing": tol_killing}
        bad = {k: v for k, v in res.items() if v > limits[k]}
        if bad:
            raise LieDataError(f"structure constants fail checks: {sorted(bad)}",
                               residual=max(bad.values()), **bad)
        return res


def killing_form(bracket):
    c = np.asarray(bracket, dtype=float)
    # ad_i[k, j] = c[i, j, k];  B_ij = tr(ad_i ad_j) = sum_{k,l} c[i,l,k] c[j,k,l]
    return np.einsum("ilk,jkl->ij", c, c)


def abelian(dim=DIM):
    """Abelian algebra on m = R^6 with trivial isotropy; every d vanishes."""
    return LieAlgebraData(dim=dim, bracket=np.zeros((dim,) * 3), killing=np.zeros((dim, dim)),
                          k_indices=(), m_indices=tuple(range(dim)),
                          basis_labels=tuple(f"X{i + 1}" for i in range(dim)),
                          meta={"family": "abelian"})


def _num(v):
    return format(float(v), ".17g")


def to_json_dict(alg):
    c = alg.bracket
    entries = [[i, j, k, _num(c[i, j, k])]
               for i in range(alg.dim) for j in range(alg.dim) for k in range(alg.dim)
               if c[i, j, k] != 0.0]
    out = {"dim": alg.dim, "bracket": entries, "k_indices": list(alg.k_indices),
           "m_indices": list(alg.m_indices), "basis_labels": list(alg.basis_labels),
           "killing": [[_num(x) for x in row] for row in alg.killing]}
    for key, val in alg.meta.items():
        out[key] = _num(val) if isinstance(val, float) else val
    return out


def from_json_dict(data):
    try:
        n = int(data["dim"])
        c = np.zeros((n, n, n))
        for i, j, k, v in data["bracket"]:
            c[int(i), int(j), int(k)] = float(v)
        killing = data.get("killing")
        killing = killing_form(c) if killing is None else np.array(killing, dtype=float)
        meta = {k: v for k, v in data.items()
                if k not in {"dim", "bracket", "k_indices", "m_indices", "basis_labels", "killing"}}
        return LieAlgebraData(dim=n, bracket=c, killing=killing,
                              k_indices=tuple(data["k_indices"]),
                              m_indices=tuple(data["m_indices"]),
                              basis_labels=tuple(data.get("basis_labels", ())), meta=meta)
    except (KeyError, TypeError, ValueError) as exc:
        raise LieDataError(f"malformed structure-constant JSON: {exc}") from exc


def load(path, verify=True):
    with open(path) as fh:
        alg = from_json_dict(json.load(fh))
    if verify:
        alg.verify()
    return alg


def dump(alg, path):
    with open(path, "w") as fh:
        json.dump(to_json_dict(alg), fh, indent=1, sort_keys=True)
        fh.write("\n")


def bracket_m(x, y, alg):
    """m-component of ``[x, y]`` for x, y in m."""
    return np.einsum("a,b,abc->c", np.asarray(x, float), np.asarray(y, float), alg.m_structure())


def _eval_basis(phi, head, rest):
    """``phi(e_head, e_rest...)`` for basis vectors; ``rest`` sorted."""
    if head in rest:
        return 0.0
    idx = (head,) + tuple(rest)
    order = sorted(range(len(idx)), key=lambda n: idx[n])
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    pos = multi_indices(phi.degree).index(tuple(idx[n] for n in order))
    return (-1.0 if inversions % 2 else 1.0) * phi.coeffs[pos]


def ce_differential(phi, alg):
    """Koszul differential of a form on m.

    ``(d phi)(X_0..X_k) = sum_{i<j} (-1)^{i+j} phi([X_i, X_j]_m, X_0, ..^i..^j.., X_k)``.
    Only Ad(K)-invariant inputs give the geometric exterior derivative.
    """
    k = phi.degree
    if k == DIM:
        return KForm.zero(DIM)
    Cm = alg.m_structure()
    out = np.zeros(comb(DIM, k + 1))
    for n, I in enumerate(multi_indices(k + 1)):
        total = 0.0
        for p, q in combinations(range(k + 1), 2):
            rest = I[:p] + I[p + 1:q] + I[q + 1:]
            vec = Cm[I[p], I[q]]
            for a in np.flatnonzero(vec):
                total += (-1) ** (p + q) * vec[a] * _eval_basis(phi, int(a), rest)
        out[n] = total
    return KForm(k + 1, out)


def check_invariance(phi, alg):
    """Largest coefficient of the isotropy action on ``phi``; ~0 means Ad(K)-invariant."""
    worst = 0.0
    for A in alg.isotropy_matrices():
        worst = max(worst, float(np.abs(derivation(A, phi).coeffs).max(initial=0.0)))
    return worst


def invariant_forms(alg, k):
    """Orthonormal coefficient basis of the Ad(K)-invariant k-forms on m."""
    if not 0 <= k <= DIM:
        raise DegreeError(f"degree {k} outside 0..{DIM}")
    n = comb(DIM, k)
    mats = [derivation_matrix(A, k) for A in alg.isotropy_matrices()]
    if not mats or k == 0:
        basis = np.eye(n)
    else:
        basis = null_space(np.vstack(mats), rcond=NULL_RTOL)
    return [KForm(k, basis[:, i]) for i in range(basis.shape[1])]


def closed_subspace(forms, alg):
    """Orthonormal basis (as KForms) of the kernel of d restricted to span(forms)."""
    if not forms:
        return []
    k = forms[0].degree
    X = np.column_stack([f.coeffs for f in forms])
    D = np.column_stack([ce_differential(f, alg).coeffs for f in forms])
    if not np.any(D):
        ker = np.eye(len(forms))
    else:
        ker = null_space(D, rcond=NULL_RTOL)
    Y = X @ ker
    return [KForm(k, Y[:, i]) for i in range(Y.shape[1])]
