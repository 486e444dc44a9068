"""Root data for su(2,1) and so(4,1) from their defining matrix representations.

Root vectors are real positive multiples of elementary matrices, normalized by
``B(E_g, E_-g) = 1``, with ``E_-g = -tau(E_g)`` for compact roots and
``E_-g = tau(E_g)`` for noncompact ones (``tau`` the conjugation fixing the
real form). The real basis of m is ``v_g = E_g + conj(E_g)``,
``w_g = i (E_g - conj(E_g))`` for ``g`` in ``(alpha, beta, alpha+beta)``.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import LieDataError, RootNormalizationError
from ..invlie import LieAlgebraData, killing_form

FAMILIES = ("su21", "so41")
M_ROOTS = ("alpha", "beta", "alpha+beta")
# complex basis of m^C in this order; forms on m^C are written in the dual basis
COMPLEX_ORDER = ("alpha", "-alpha", "beta", "-beta", "alpha+beta", "-alpha-beta")
COMPACT = {"su21": {"alpha"}, "so41": {"alpha", "alpha+2beta"}}


def _unit(n, i, j):
    X = np.zeros((n, n), dtype=complex)
    X[i, j] = 1.0
    return X


def _wedge_matrix(u, v):
    return np.outer(u, v) - np.outer(v, u)


@dataclass(frozen=True)
class MatrixFamily:
    name: str
    size: int
    killing_factor: float
    cartan: tuple            # real basis of t as matrices
    cartan_labels: tuple
    root_matrices: dict      # positive-side root label -> unnormalized matrix in that root space
    isotropy_roots: tuple    # root labels whose real vectors join k

    def tau(self, X):
        """Conjugation of the complexification with respect to the real form."""
        if self.name == "su21":
            I = np.diag([1.0, 1.0, -1.0])
            return -I @ X.conj().T @ I
        D = np.diag([1.0, 1.0, 1.0, 1.0, -1.0])
        return D @ X.conj() @ D

    def killing(self, X, Y):
        return self.killing_factor * np.trace(X @ Y)

    def compact(self, label):
        return label in COMPACT[self.name]


def matrix_family(name):
    if name == "su21":
        cartan = (1j * np.diag([1.0, -1.0, 0.0]), 1j * np.diag([0.0, 1.0, -1.0]))
        roots = {"alpha": _unit(3, 0, 1), "beta": _unit(3, 1, 2), "alpha+beta": _unit(3, 0, 2)}
        return MatrixFamily("su21", 3, 6.0, cartan, ("t1", "t2"), roots, ())
    if name == "so41":
        e = np.eye(5)
        f1, f2 = e[0] + 1j * e[1], e[2] + 1j * e[3]
        # h1 f1 = i f1, h2 f2 = i f2
        h1 = _wedge_matrix(e[0], e[1]).astype(complex)
        h2 = _wedge_matrix(e[2], e[3]).astype(complex)
        roots = {"alpha": _wedge_matrix(f1, f2.conj()),
                 "beta": _wedge_matrix(f2, e[4]),
                 "alpha+beta": _wedge_matrix(f1, e[4]),
                 "alpha+2beta": _wedge_matrix(f1, f2)}
        return MatrixFamily("so41", 5, 3.0, (h1, h2), ("h1", "h2"), roots, ("alpha+2beta",))
    raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")


def root_vectors(fam):
    """Normalized ``{label: E}`` for both signs of every root in ``fam``."""
    out = {}
    for label, X in fam.root_matrices.items():
        sign = -1.0 if fam.compact(label) else 1.0
        pairing = (sign * fam.killing(X, fam.tau(X))).real
        if pairing <= 0:
            raise RootNormalizationError(
                f"B(E_{label}, E_-{label}) = {pairing:.3g} <= 0 under the "
                f"{'compact' if sign < 0 else 'noncompact'} convention", residual=pairing)
        E = X / np.sqrt(pairing)
        out[label] = E
        out["-" + label.replace("+", "-")] = sign * fam.tau(E)
    return out


def real_pair(fam, E, label):
    Ebar = fam.tau(E)
    return E + Ebar, 1j * (E - Ebar)


def real_basis(fam):
    """``(labels, matrices, k_indices, m_indices)`` for the real basis k + m."""
    E = root_vectors(fam)
    labels, mats = list(fam.cartan_labels), list(fam.cartan)
    for r in fam.isotropy_roots:
        v, w = real_pair(fam, E[r], r)
        labels += [f"v_{r}", f"w_{r}"]
        mats += [v, w]
    k_indices = tuple(range(len(mats)))
    for r in M_ROOTS:
        v, w = real_pair(fam, E[r], r)
        labels += [f"v_{r}", f"w_{r}"]
        mats += [v, w]
    m_indices = tuple(range(len(k_indices), len(mats)))
    return labels, mats, k_indices, m_indices


def coordinates(X, basis):
    """Real coordinates of matrix ``X`` in a list of real-form basis matrices."""
    A = np.column_stack([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis])
    y = np.concatenate([X.real.ravel(), X.imag.ravel()])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.abs(A @ coef - y).max())
    if resid > 1e-12:
        raise LieDataError("matrix is not in the span of the basis", residual=resid)
    return coef


def complex_coordinates(X, basis):
    """Complex coordinates of ``X`` in a list of complex matrices."""
    A = np.column_stack([b.ravel() for b in basis])
    coef, *_ = np.linalg.lstsq(A, X.ravel(), rcond=None)
    resid = float(np.abs(A @ coef - X.ravel()).max())
    if resid > 1e-12:
        raise LieDataError("matrix is not in the complex span of the basis", residual=resid)
    return coef


def structure_constants(mats):
    n = len(mats)
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                c[i, j] = coordinates(mats[i] @ mats[j] - mats[j] @ mats[i], mats)
    c[np.abs(c) < 1e-15] = 0.0
    return c


def n_alpha_beta(fam):
    """``N`` in ``[E_alpha, E_beta] = N E_{alpha+beta}``; real under our phase choice."""
    E = root_vectors(fam)
    br = E["alpha"] @ E["beta"] - E["beta"] @ E["alpha"]
    N = complex_coordinates(br, [E["alpha+beta"]])[0]
    if abs(N.imag) > 1e-12:
        raise RootNormalizationError("N_{alpha,beta} is not real", residual=abs(N.imag))
    return float(N.real)


def regenerate(family):
    """Structure-constant data (as :class:`LieAlgebraData`) for ``family`` with ``N2`` in meta."""
    fam = matrix_family(family)
    labels, mats, k_indices, m_indices = real_basis(fam)
    c = structure_constants(mats)
    B = killing_form(c)
    trace_form = np.array([[fam.killing(X, Y).real for Y in mats] for X in mats])
    if np.abs(B - trace_form).max() > 1e-10 * max(1.0, np.abs(B).max()):
        raise LieDataError(f"Killing form of {family} is not {fam.killing_factor} tr(XY)",
                           residual=float(np.abs(B - trace_form).max()))
    N = n_alpha_beta(fam)
    alg = LieAlgebraData(dim=len(mats), bracket=c, killing=B, k_indices=k_indices,
                         m_indices=m_indices, basis_labels=tuple(labels),
                         meta={"family": family, "N2": N * N})
    alg.verify()
    return alg


def m_to_complex(family):
    """Columns: E-coordinates (in :data:`COMPLEX_ORDER`) of the real m basis vectors."""
    P = np.zeros((6, 6), dtype=complex)
    for n, r in enumerate(M_ROOTS):
        plus, minus = 2 * n, 2 * n + 1
        if r in COMPACT[family]:
            # conj(E) = -E_-: v = E - E_-, w = i (E + E_-)
            P[plus, plus], P[minus, plus] = 1.0, -1.0
            P[plus, minus], P[minus, minus] = 1j, 1j
        else:
            P[plus, plus], P[minus, plus] = 1.0, 1.0
            P[plus, minus], P[minus, minus] = 1j, -1j
    return P


def m_isomorphism(family, g_map):
    """Real matrix of a Lie algebra automorphism restricted to m.

    ``g_map`` acts on matrices of the defining representation; the image of m
    must lie in m.
    """
    fam = matrix_family(family)
    labels, mats, k_indices, m_indices = real_basis(fam)
    cols = []
    for i in m_indices:
        coef = coordinates(g_map(mats[i]), mats)
        if np.abs(coef[list(k_indices)]).max(initial=0.0) > 1e-12:
            raise LieDataError("map does not preserve m")
        cols.append(coef[list(m_indices)])
    return np.column_stack(cols)
