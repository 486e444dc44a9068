import json

import numpy as np
import pytest

from shfkit.catalog import families, roots
from shfkit.errors import LieDataError
from shfkit.forms6 import KForm, wedge
from shfkit.invlie import (LieAlgebraData, abelian, bracket_m, ce_differential, check_invariance,
                           closed_subspace, dump, from_json_dict, invariant_forms, killing_form,
                           load, to_json_dict)

from conftest import random_form


def su2_plus_su2():
    c = np.zeros((6, 6, 6))
    for off in (0, 3):
        for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
            c[off + i, off + j, off + k] = 1.0
            c[off + j, off + i, off + k] = -1.0
    return LieAlgebraData(dim=6, bracket=c, killing=killing_form(c), k_indices=(),
                          m_indices=tuple(range(6)))


def test_su2_killing_is_minus_two_identity():
    np.testing.assert_allclose(su2_plus_su2().killing, -2 * np.eye(6))
    su2_plus_su2().verify()


def test_maurer_cartan_equation():
    alg = su2_plus_su2()
    # d e^3 = -e^1 ^ e^2 since [e1, e2] = e3
    d = ce_differential(KForm.basis((2,)), alg)
    assert d.allclose(KForm.basis((0, 1), -1.0))


def test_d_squared_vanishes_on_lie_algebra(rng):
    alg = su2_plus_su2()
    for k in range(1, 5):
        phi = random_form(rng, k)
        assert np.abs(ce_differential(ce_differential(phi, alg), alg).coeffs).max() < 1e-12


def test_leibniz_rule(rng):
    alg = su2_plus_su2()
    a, b = random_form(rng, 1), random_form(rng, 2)
    lhs = ce_differential(wedge(a, b), alg)
    rhs = wedge(ce_differential(a, alg), b) - wedge(a, ce_differential(b, alg))
    assert lhs.allclose(rhs, atol=1e-12)


def test_abelian_differential_is_zero(rng):
    assert np.abs(ce_differential(random_form(rng, 3), abelian()).coeffs).max() == 0.0


@pytest.mark.parametrize("family", roots.FAMILIES)
def test_shipped_algebra_checks(family):
    alg = families.load_algebra(family)
    res = alg.verify()
    assert max(res.values()) < 1e-12
    assert alg.dim == (8 if family == "su21" else 10)


@pytest.mark.parametrize("family,factor", [("su21", 6.0), ("so41", 3.0)])
def test_killing_form_matches_trace_form(family, factor):
    fam = roots.matrix_family(family)
    _, mats, _, _ = roots.real_basis(fam)
    trace = np.array([[factor * np.trace(X @ Y).real for Y in mats] for X in mats])
    np.testing.assert_allclose(families.load_algebra(family).killing, trace, atol=1e-12)


def test_n_squared_by_hand_su21():
    # E_a = E12 / sqrt6, E_b = E23 / sqrt6, E_{a+b} = E13 / sqrt6, so N = 1 / sqrt6
    E = roots.root_vectors(roots.matrix_family("su21"))
    unit = np.zeros((3, 3))
    unit[0, 1] = 1 / np.sqrt(6)
    np.testing.assert_allclose(E["alpha"], unit, atol=1e-15)
    assert roots.n_alpha_beta(roots.matrix_family("su21")) ** 2 == pytest.approx(1 / 6)


@pytest.mark.parametrize("family", roots.FAMILIES)
def test_root_normalization(family):
    fam = roots.matrix_family(family)
    E = roots.root_vectors(fam)
    for r in ("alpha", "beta", "alpha+beta"):
        minus = E["-" + r.replace("+", "-")]
        assert fam.killing(E[r], minus) == pytest.approx(1.0)
    assert roots.regenerate(family).meta["N2"] == pytest.approx(1 / 6, abs=1e-14)


def test_bracket_m_drops_isotropy_part():
    alg = families.load_algebra("su21")
    Cm = alg.m_structure()
    x, y = np.eye(6)[0], np.eye(6)[1]
    np.testing.assert_allclose(bracket_m(x, y, alg), Cm[0, 1])
    # [v_alpha, w_alpha] lies in t, so its m-part vanishes
    assert np.abs(bracket_m(x, y, alg)).max() < 1e-14


@pytest.mark.parametrize("family,dims", [("su21", [1, 0, 3, 2, 3, 0, 1]),
                                         ("so41", [1, 0, 2, 2, 2, 0, 1])])
def test_invariant_form_dimensions(family, dims):
    alg = families.load_algebra(family)
    found = [len(invariant_forms(alg, k)) for k in range(7)]
    assert found == dims
    for phi in invariant_forms(alg, 3):
        assert check_invariance(phi, alg) < 1e-12


@pytest.mark.parametrize("family", roots.FAMILIES)
def test_invariant_three_forms_have_one_closed_direction(family):
    alg = families.load_algebra(family)
    closed = closed_subspace(invariant_forms(alg, 3), alg)
    assert len(closed) == 1
    assert np.abs(ce_differential(closed[0], alg).coeffs).max() < 1e-12


@pytest.mark.parametrize("family", roots.FAMILIES)
def test_d_squared_on_invariant_forms(family):
    alg = families.load_algebra(family)
    for k in range(6):
        for phi in invariant_forms(alg, k):
            assert np.abs(ce_differential(ce_differential(phi, alg), alg).coeffs).max() < 1e-12


def test_json_roundtrip(tmp_path):
    alg = families.load_algebra("so41")
    path = tmp_path / "so41.json"
    dump(alg, path)
    back = load(path)
    np.testing.assert_array_equal(back.bracket, alg.bracket)
    assert back.m_indices == alg.m_indices
    assert from_json_dict(json.loads(json.dumps(to_json_dict(alg)))).dim == 10


def test_load_rejects_perturbed_constants(tmp_path):
    data = to_json_dict(families.load_algebra("su21"))
    data["bracket"][0][3] = str(float(data["bracket"][0][3]) + 1e-6)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(LieDataError):
        load(path)


def test_rejects_wrong_m_dimension():
    with pytest.raises(LieDataError):
        LieAlgebraData(dim=4, bracket=np.zeros((4, 4, 4)), killing=np.zeros((4, 4)),
                       k_indices=(), m_indices=(0, 1, 2, 3))
