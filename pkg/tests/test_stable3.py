import numpy as np
import pytest

from shfkit import stable3
from shfkit.errors import DegreeError, InternalInconsistency, NotComplexStructure, \
    NotNegativeOrbit, VolumeError
from shfkit.forms6 import KForm, pullback, volume_form

from conftest import FLAT_PSI, random_form

PSI = KForm.from_dict(FLAT_PSI)
OMEGA = volume_form()


def test_flat_model_values():
    S = stable3.s_endo(PSI, OMEGA)
    assert stable3.quartic_invariant(PSI, OMEGA) == pytest.approx(-4.0)
    J = stable3.complex_structure(PSI, OMEGA)
    np.testing.assert_allclose(J @ J, -np.eye(6), atol=1e-14)
    np.testing.assert_allclose(J[:, 0], [0, 1, 0, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(S, 2 * J, atol=1e-14)


def test_hat_of_flat_model_is_imaginary_part():
    J = stable3.complex_structure(PSI, OMEGA)
    expected = KForm.from_dict({"136": 1, "145": 1, "235": 1, "246": -1})
    assert stable3.hat(PSI, J).allclose(expected)
    assert stable3.hat_via_first_slot(PSI, J).allclose(expected)


def test_positive_orbit_example():
    rho = KForm.from_dict({"123": 1, "456": 1})
    assert stable3.quartic_invariant(rho, OMEGA) > 0
    assert stable3.classify(rho, OMEGA) is stable3.StabilityClass.POSITIVE
    with pytest.raises(NotNegativeOrbit):
        stable3.complex_structure(rho, OMEGA)


def test_nonstable_example():
    rho = KForm.from_dict({"123": 1})
    assert stable3.classify(rho, OMEGA) is stable3.StabilityClass.NONSTABLE


def test_square_is_scalar_on_random_forms(rng):
    for _ in range(50):
        rho = random_form(rng, 3)
        S = stable3.s_endo(rho, OMEGA)
        P = stable3.quartic_invariant(rho, OMEGA, S=S)
        np.testing.assert_allclose(S @ S, P * np.eye(6), atol=1e-10 * max(1, np.abs(S).max() ** 2))
        assert abs(np.trace(S)) < 1e-10 * max(1, np.abs(S).max())


def test_equivariance_under_gl(rng):
    A = rng.normal(size=(6, 6))
    rho = random_form(rng, 3)
    Omega_A = pullback(A, OMEGA)
    P = stable3.quartic_invariant(rho, OMEGA)
    assert stable3.quartic_invariant(pullback(A, rho), Omega_A) == pytest.approx(P, rel=1e-9)
    S = stable3.s_endo(rho, OMEGA)
    S_A = stable3.s_endo(pullback(A, rho), Omega_A)
    np.testing.assert_allclose(A @ S_A, S @ A, atol=1e-9 * np.abs(S).max())


@pytest.mark.parametrize("c", [1.0, -1.0, 2.0, -2.0, 0.5, -0.5])
@pytest.mark.parametrize("lam", [1.0, -1.0, 3.0, -3.0])
def test_scaling_law(c, lam):
    S0 = stable3.s_endo(PSI, OMEGA)
    P0 = stable3.quartic_invariant(PSI, OMEGA)
    J0 = stable3.complex_structure(PSI, OMEGA)
    np.testing.assert_allclose(stable3.s_endo(c * PSI, lam * OMEGA), c * c / lam * S0, atol=1e-12)
    assert stable3.quartic_invariant(c * PSI, lam * OMEGA) == pytest.approx(c ** 4 / lam ** 2 * P0)
    np.testing.assert_allclose(stable3.complex_structure(c * PSI, lam * OMEGA), np.sign(lam) * J0,
                               atol=1e-12)


def test_internal_inconsistency_on_bad_s():
    with pytest.raises(InternalInconsistency):
        stable3.quartic_invariant(PSI, OMEGA, S=np.diag([1, 2, 3, 4, 5, 6.0]))


def test_input_errors():
    with pytest.raises(DegreeError):
        stable3.s_endo(KForm.zero(2), OMEGA)
    with pytest.raises(VolumeError):
        stable3.s_endo(PSI, volume_form(0.0))
    with pytest.raises(NotComplexStructure):
        stable3.hat(PSI, np.eye(6))
