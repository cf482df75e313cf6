import numpy as np
import pytest

from pinvperturb import Tolerances


@pytest.fixture
def tol():
    return Tolerances()


def random_complex(rng, rows, cols):
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)
