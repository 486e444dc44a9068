import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shfkit.errors import DegreeError, MetricError
from shfkit.forms6 import (KForm, compound, contract, derivation, derivation_matrix, evaluate,
                           from_json, hodge_star, inner, metric_norm, multi_indices, one_form,
                           power, pullback, to_json, two_form_from_matrix, two_form_matrix,
                           volume_form, wedge)

from conftest import random_form, random_spd

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def coeffs(k):
    return arrays(np.float64, comb(6, k), elements=finite)


def test_multi_index_counts():
    assert [len(multi_indices(k)) for k in range(7)] == [1, 6, 15, 20, 15, 6, 1]
    assert [tuple(i) for i in multi_indices(2)[:3]] == [(0, 1), (0, 2), (0, 3)]


def test_basis_sign_and_dict_roundtrip():
    assert KForm.basis((1, 0)).to_dict() == {"12": -1.0}
    phi = KForm.from_dict({"135": 2.0, "246": -1.0})
    assert KForm.from_dict(phi.to_dict(), degree=3).allclose(phi)
    with pytest.raises(DegreeError):
        KForm.from_dict({"31": 1.0})
    with pytest.raises(DegreeError):
        KForm(2, np.zeros(5))


def test_symplectic_cube_is_six_volume():
    omega = KForm.from_dict({"12": 1, "34": 1, "56": 1})
    assert power(omega, 3).top == pytest.approx(6.0)


def test_wedge_graded_commutativity(rng):
    for p, q in [(1, 1), (1, 2), (2, 3), (3, 3), (1, 5)]:
        a, b = random_form(rng, p), random_form(rng, q)
        np.testing.assert_allclose(wedge(a, b).coeffs, (-1) ** (p * q) * wedge(b, a).coeffs,
                                   atol=1e-12)


def test_wedge_degree_overflow():
    with pytest.raises(DegreeError):
        wedge(KForm.zero(4), KForm.zero(3))


def test_evaluate_matches_determinant_definition(rng):
    # (e^1 ^ e^2)(u, v) = u1 v2 - u2 v1
    u, v = rng.normal(size=6), rng.normal(size=6)
    assert evaluate(KForm.basis((0, 1)), u, v) == pytest.approx(u[0] * v[1] - u[1] * v[0])


def test_contract_is_first_slot_evaluation(rng):
    phi = random_form(rng, 3)
    v, x, y = rng.normal(size=(3, 6))
    assert contract(v, phi)(x, y) == pytest.approx(phi(v, x, y))


@settings(max_examples=40, deadline=None)
@given(coeffs(2), coeffs(1), arrays(np.float64, 6, elements=finite))
def test_contract_is_antiderivation(a, b, v):
    alpha, beta = KForm(2, a), KForm(1, b)
    lhs = contract(v, wedge(alpha, beta))
    rhs = wedge(contract(v, alpha), beta) + wedge(alpha, contract(v, beta))
    np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(coeffs(2), coeffs(3))
def test_pullback_is_multiplicative(a, b):
    A = np.random.default_rng(7).normal(size=(6, 6))
    alpha, beta = KForm(2, a), KForm(3, b)
    np.testing.assert_allclose(pullback(A, wedge(alpha, beta)).coeffs,
                               wedge(pullback(A, alpha), pullback(A, beta)).coeffs, atol=1e-8)


def test_pullback_functorial_and_top_degree(rng):
    A, B = rng.normal(size=(2, 6, 6))
    phi = random_form(rng, 3)
    np.testing.assert_allclose(pullback(A @ B, phi).coeffs, pullback(B, pullback(A, phi)).coeffs,
                               atol=1e-10)
    assert pullback(A, volume_form()).top == pytest.approx(np.linalg.det(A))


def test_pullback_evaluation(rng):
    A = rng.normal(size=(6, 6))
    phi = random_form(rng, 3)
    vs = rng.normal(size=(3, 6))
    assert pullback(A, phi)(*vs) == pytest.approx(phi(*(A @ v for v in vs)))


def test_compound_of_identity_and_products(rng):
    A, B = rng.normal(size=(2, 6, 6))
    for k in range(7):
        np.testing.assert_allclose(compound(np.eye(6), k), np.eye(comb(6, k)))
        np.testing.assert_allclose(compound(A @ B, k), compound(A, k) @ compound(B, k), atol=1e-9)


def test_derivation_is_derivative_of_pullback(rng):
    X = rng.normal(size=(6, 6))
    phi = random_form(rng, 3)
    h = 1e-6
    fd = (pullback(np.eye(6) + h * X, phi) - pullback(np.eye(6) - h * X, phi)) / (2 * h)
    np.testing.assert_allclose(derivation(X, phi).coeffs, fd.coeffs, atol=1e-7)
    np.testing.assert_allclose(derivation_matrix(X, 3) @ phi.coeffs, derivation(X, phi).coeffs,
                               atol=1e-12)


def test_two_form_matrix_roundtrip(rng):
    omega = random_form(rng, 2)
    W = two_form_matrix(omega)
    np.testing.assert_allclose(W, -W.T)
    u, v = rng.normal(size=(2, 6))
    assert u @ W @ v == pytest.approx(omega(u, v))
    assert two_form_from_matrix(W).allclose(omega)


@pytest.mark.parametrize("k", range(7))
def test_star_star_sign_random_metric(rng, k):
    g = random_spd(rng)
    vol = volume_form(np.sqrt(np.linalg.det(g)))
    phi = random_form(rng, k)
    back = hodge_star(hodge_star(phi, g, vol), g, vol)
    np.testing.assert_allclose(back.coeffs, (-1) ** (k * (6 - k)) * phi.coeffs, atol=1e-9)


def test_hodge_defining_identity(rng):
    g = random_spd(rng)
    vol = volume_form(np.sqrt(np.linalg.det(g)))
    phi, alpha = random_form(rng, 2), random_form(rng, 2)
    assert wedge(alpha, hodge_star(phi, g, vol)).top == pytest.approx(inner(alpha, phi, g) * vol.top)


def test_hodge_isometry(rng):
    g = random_spd(rng)
    vol = volume_form(np.sqrt(np.linalg.det(g)))
    phi = random_form(rng, 3)
    assert metric_norm(hodge_star(phi, g, vol), g) == pytest.approx(metric_norm(phi, g))


def test_euclidean_star_examples():
    vol = volume_form()
    g = np.eye(6)
    assert hodge_star(KForm.basis((0,)), g, vol).to_dict(1e-14) == {"23456": 1.0}
    assert hodge_star(KForm.basis((0, 1)), g, vol).to_dict(1e-14) == {"3456": 1.0}


def test_inner_product_on_basis_and_rejects_bad_metric():
    g = np.diag([1, 2, 3, 4, 5, 6.0])
    assert inner(KForm.basis((0, 1)), KForm.basis((0, 1)), g) == pytest.approx(1 / 2)
    with pytest.raises(MetricError):
        inner(KForm.basis((0,)), KForm.basis((0,)), -np.eye(6))


def test_json_roundtrip(rng):
    phi = random_form(rng, 4)
    assert from_json(to_json(phi)).allclose(phi, rtol=0, atol=0)


def test_one_form_wedge_square_vanishes(rng):
    v = one_form(rng.normal(size=6))
    assert np.abs(wedge(v, v).coeffs).max() == 0.0


def test_evaluation_is_alternating(rng):
    phi = random_form(rng, 3)
    vs = list(rng.normal(size=(3, 6)))
    base = phi(*vs)
    for perm in itertools.permutations(range(3)):
        sign = np.linalg.det(np.eye(3)[list(perm)])
        assert phi(*(vs[i] for i in perm)) == pytest.approx(sign * base)
