"""Exterior algebra on a fixed oriented 6-dimensional real vector space.

A k-form is stored densely as ``sum(coeffs[I] * e^I)`` over the strictly
increasing multi-indices ``I`` in lexicographic order, with no ``1/k!``
factor, so ``e^I(e_I) = 1``. Linear maps and Gram matrices are plain
``(6, 6)`` numpy arrays.

Most of the helpers operating on raw coefficient arrays are dtype-agnostic so
the catalog code can push complex root-space expressions through them.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import DegreeError, MetricError, VolumeError

DIM = 6
RTOL = 1e-9
ATOL = 1e-12


@lru_cache(maxsize=None)
def multi_indices(k):
    """Lexicographically ordered strictly increasing k-tuples over ``range(6)``."""
    if not 0 <= k <= DIM:
        raise DegreeError(f"degree {k} outside 0..{DIM}")
    return tuple(combinations(range(DIM), k))


@lru_cache(maxsize=None)
def _position(k):
    return {idx: n for n, idx in enumerate(multi_indices(k))}


def _merge_sign(left, right):
    """Sign of the permutation sorting ``left + right``; 0 on overlap."""
    if set(left) & set(right):
        return 0
    inversions = sum(1 for x in left for y in right if x > y)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _wedge_table(p, q):
    rows, cols, out, signs = [], [], [], []
    pos = _position(p + q)
    for i, left in enumerate(multi_indices(p)):
        for j, right in enumerate(multi_indices(q)):
            s = _merge_sign(left, right)
            if s:
                rows.append(i)
                cols.append(j)
                out.append(pos[tuple(sorted(left + right))])
                signs.append(s)
    return (np.array(rows, dtype=int), np.array(cols, dtype=int),
            np.array(out, dtype=int), np.array(signs, dtype=float))


@lru_cache(maxsize=None)
def _contract_table(k):
    # iota_{e_v} e^I = sum_p (-1)^p [i_p == v] e^{I minus i_p}
    src, vec, dst, signs = [], [], [], []
    pos = _position(k - 1)
    for n, idx in enumerate(multi_indices(k)):
        for p, v in enumerate(idx):
            src.append(n)
            vec.append(v)
            dst.append(pos[idx[:p] + idx[p + 1:]])
            signs.append(-1.0 if p % 2 else 1.0)
    return (np.array(src, dtype=int), np.array(vec, dtype=int),
            np.array(dst, dtype=int), np.array(signs, dtype=float))


def compound(A, k):
    """k-th compound matrix: ``C[J, I] = det(A[J, I])`` over k-subsets."""
    A = np.asarray(A)
    idx = multi_indices(k)
    if k == 0:
        return np.ones((1, 1), dtype=A.dtype)
    rows = np.array(idx)
    sub = A[rows[:, None, :, None], rows[None, :, None, :]]
    return np.linalg.det(sub)


def wedge_coeffs(a, p, b, q):
    if p + q > DIM:
        raise DegreeError(f"wedge of degrees {p} and {q} exceeds {DIM}")
    rows, cols, out, signs = _wedge_table(p, q)
    dtype = np.result_type(a, b, float)
    res = np.zeros(comb(DIM, p + q), dtype=dtype)
    np.add.at(res, out, signs * a[rows] * b[cols])
    return res


def contract_coeffs(v, phi, k):
    if k == 0:
        raise DegreeError("cannot contract a 0-form")
    src, vec, dst, signs = _contract_table(k)
    dtype = np.result_type(v, phi, float)
    res = np.zeros(comb(DIM, k - 1), dtype=dtype)
    np.add.at(res, dst, signs * np.asarray(v)[vec] * phi[src])
    return res


def pullback_coeffs(A, phi, k):
    """Coefficients of ``A^* phi``; ``(A^*phi)(v_1..v_k) = phi(A v_1, .., A v_k)``."""
    return compound(A, k).T @ phi


@dataclass(frozen=True, eq=False)
class KForm:
    """Real k-form on R^6 with dense coefficients."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        if not isinstance(self.degree, (int, np.integer)) or not 0 <= self.degree <= DIM:
            raise DegreeError(f"degree {self.degree!r} outside 0..{DIM}")
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape != (comb(DIM, self.degree),):
            raise DegreeError(
                f"degree {self.degree} needs {comb(DIM, self.degree)} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, k):
        return cls(k, np.zeros(comb(DIM, k)))

    @classmethod
    def basis(cls, idx, value=1.0):
        """``value * e^{idx}`` for a 0-based index tuple (any order, sign applied)."""
        idx = tuple(idx)
        k = len(idx)
        if len(set(idx)) < k:
            return cls.zero(k)
        order = sorted(range(k), key=lambda n: idx[n])
        sign = _perm_sign(order)
        c = np.zeros(comb(DIM, k))
        c[_position(k)[tuple(sorted(idx))]] = sign * value
        return cls(k, c)

    @classmethod
    def from_dict(cls, terms, degree=None):
        """Build from ``{"135": c, ...}`` with 1-based ascending digit keys."""
        if degree is None:
            if not terms:
                raise DegreeError("degree required for an empty term map")
            degree = len(next(iter(terms)))
        c = np.zeros(comb(DIM, degree))
        pos = _position(degree)
        for key, val in terms.items():
            idx = tuple(int(ch) - 1 for ch in str(key))
            if len(idx) != degree or list(idx) != sorted(set(idx)) or min(idx, default=0) < 0 \
                    or max(idx, default=0) >= DIM:
                raise DegreeError(f"bad multi-index key {key!r} for degree {degree}")
            c[pos[idx]] = float(val)
        return cls(degree, c)

    def to_dict(self, tol=0.0):
        return {"".join(str(i + 1) for i in idx): float(v)
                for idx, v in zip(multi_indices(self.degree), self.coeffs) if abs(v) > tol}

    def __add__(self, other):
        _same_degree(self, other)
        return KForm(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _same_degree(self, other)
        return KForm(self.degree, self.coeffs - other.coeffs)

    def __neg__(self):
        return KForm(self.degree, -self.coeffs)

    def __mul__(self, scalar):
        return KForm(self.degree, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return KForm(self.degree, self.coeffs / float(scalar))

    def __xor__(self, other):
        return wedge(self, other)

    def __repr__(self):
        terms = ", ".join(f"{k}: {v:.6g}" for k, v in self.to_dict(tol=1e-15).items())
        return f"KForm({self.degree}, {{{terms}}})"

    def norm(self):
        """Euclidean norm of the coefficient vector (not a metric norm)."""
        return float(np.linalg.norm(self.coeffs))

    def allclose(self, other, rtol=RTOL, atol=ATOL):
        _same_degree(self, other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol))

    def __call__(self, *vectors):
        return evaluate(self, *vectors)

    @property
    def top(self):
        """Coefficient of ``e^{123456}``; only meaningful for 6-forms."""
        if self.degree != DIM:
            raise DegreeError("top coefficient requested from a non-top form")
        return float(self.coeffs[0])


def _perm_sign(order):
    seen, sign = set(), 1
    for start in range(len(order)):
        if start in seen:
            continue
        n, j = 0, start
        while j not in seen:
            seen.add(j)
            j = order[j]
            n += 1
        if n % 2 == 0:
            sign = -sign
    return sign


def _same_degree(a, b):
    if a.degree != b.degree:
        raise DegreeError(f"degree mismatch: {a.degree} vs {b.degree}")


def one_form(v):
    return KForm(1, np.asarray(v, dtype=float))


def volume_form(scale=1.0):
    return KForm(DIM, np.array([scale]))


def wedge(*forms):
    """Wedge product of one or more forms, left to right."""
    out = forms[0]
    for f in forms[1:]:
        if out.degree + f.degree > DIM:
            raise DegreeError(f"wedge of degrees {out.degree} and {f.degree} exceeds {DIM}")
        out = KForm(out.degree + f.degree, wedge_coeffs(out.coeffs, out.degree, f.coeffs, f.degree))
    return out


def power(form, n):
    out = KForm(0, [1.0])
    for _ in range(n):
        out = wedge(out, form)
    return out


def contract(v, phi):
    """Interior product ``iota_v phi``."""
    if phi.degree == 0:
        raise DegreeError("cannot contract a 0-form")
    return KForm(phi.degree - 1, contract_coeffs(np.asarray(v, dtype=float), phi.coeffs, phi.degree))


def pullback(A, phi):
    return KForm(phi.degree, pullback_coeffs(np.asarray(A, dtype=float), phi.coeffs, phi.degree))


def evaluate(phi, *vectors):
    """``phi(v_1, ..., v_k)``."""
    if len(vectors) != phi.degree:
        raise DegreeError(f"{phi.degree}-form evaluated on {len(vectors)} vectors")
    if phi.degree == 0:
        return float(phi.coeffs[0])
    V = np.column_stack(vectors)
    rows = np.array(multi_indices(phi.degree))
    return float(phi.coeffs @ np.linalg.det(V[rows]))


def derivation(A, phi):
    """Infinitesimal action ``sum_i phi(.., A v_i, ..)`` of an endomorphism.

    Computed as ``sum_j (e^j o A) ^ iota_{e_j} phi``.
    """
    A = np.asarray(A, dtype=float)
    if phi.degree == 0:
        return KForm.zero(0)
    out = np.zeros(comb(DIM, phi.degree))
    for j in range(DIM):
        ej = np.zeros(DIM)
        ej[j] = 1.0
        inner_j = contract_coeffs(ej, phi.coeffs, phi.degree)
        out += wedge_coeffs(A[j], 1, inner_j, phi.degree - 1)
    return KForm(phi.degree, out)


def derivation_matrix(A, k):
    """Matrix of ``phi -> derivation(A, phi)`` on the coefficient space of k-forms."""
    n = comb(DIM, k)
    cols = [derivation(A, KForm(k, np.eye(n)[i])).coeffs for i in range(n)]
    return np.column_stack(cols) if cols else np.zeros((0, 0))


def two_form_matrix(omega):
    """Skew matrix ``W[i, j] = omega(e_i, e_j)``."""
    if omega.degree != 2:
        raise DegreeError("expected a 2-form")
    W = np.zeros((DIM, DIM))
    for (i, j), c in zip(multi_indices(2), omega.coeffs):
        W[i, j] = c
        W[j, i] = -c
    return W


def two_form_from_matrix(W):
    W = np.asarray(W, dtype=float)
    return KForm(2, np.array([W[i, j] for i, j in multi_indices(2)]))


def _check_metric(g):
    g = np.asarray(g, dtype=float)
    if g.shape != (DIM, DIM):
        raise MetricError(f"Gram matrix must be {DIM}x{DIM}")
    scale = max(1.0, float(np.abs(g).max()))
    asym = float(np.abs(g - g.T).max())
    if asym > 1e-9 * scale:
        raise MetricError("Gram matrix is not symmetric", residual=asym)
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))
    if eig[0] <= 1e-12 * scale:
        raise MetricError("Gram matrix is not positive definite", residual=float(eig[0]))
    return g


def form_gram(g, k):
    """Gram matrix of the basis ``e^I`` under the metric induced by ``g`` on k-forms."""
    g = _check_metric(g)
    return compound(np.linalg.inv(g), k)


def inner(phi, chi, g):
    """Metric inner product of two forms of equal degree."""
    _same_degree(phi, chi)
    return float(phi.coeffs @ form_gram(g, phi.degree) @ chi.coeffs)


def metric_norm(phi, g):
    return float(np.sqrt(max(inner(phi, phi, g), 0.0)))


def hodge_star(phi, g, vol):
    """Hodge star with respect to ``g`` and the oriented volume form ``vol``.

    Characterized by ``alpha ^ *phi = <alpha, phi>_g vol`` for all ``alpha``.
    """
    if vol.degree != DIM:
        raise DegreeError("volume form must be a 6-form")
    if abs(vol.top) == 0.0:
        raise VolumeError("zero volume form", residual=0.0)
    G = form_gram(g, phi.degree)
    k = phi.degree
    rows, cols, out, signs = _wedge_table(k, DIM - k)
    W = np.zeros((comb(DIM, k), comb(DIM, DIM - k)))
    W[rows, cols] = signs
    rhs = vol.top * (G @ phi.coeffs)
    return KForm(DIM - k, np.linalg.solve(W, rhs))


def euclidean():
    return np.eye(DIM)


def to_json(phi):
    return {"degree": phi.degree, "coeffs": phi.to_dict()}


def from_json(data):
    try:
        degree = int(data["degree"])
        terms = data.get("coeffs", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise DegreeError(f"malformed form JSON: {exc}") from exc
    return KForm.from_dict(terms, degree=degree)
