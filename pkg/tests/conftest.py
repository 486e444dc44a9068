import numpy as np
import pytest

from shfkit.forms6 import KForm
from shfkit.su3 import validate

FLAT_OMEGA = {"12": 1.0, "34": 1.0, "56": 1.0}
# Re (e1 + i e2)(e3 + i e4)(e5 + i e6)
FLAT_PSI = {"135": 1.0, "146": -1.0, "236": -1.0, "245": -1.0}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def flat():
    return validate(KForm.from_dict(FLAT_OMEGA), KForm.from_dict(FLAT_PSI))


def random_form(rng, k):
    from math import comb
    return KForm(k, rng.normal(size=comb(6, k)))


def random_spd(rng):
    A = rng.normal(size=(6, 6))
    return A @ A.T + 0.5 * np.eye(6)
