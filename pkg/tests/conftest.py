from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from bfcalc import functions as fn
from bfcalc import semigroup as sg

settings.register_profile("bfcalc", max_examples=40, deadline=None)
settings.load_profile("bfcalc")


@pytest.fixture(scope="session")
def catalog_psis():
    return fn.default_psis()


@pytest.fixture(scope="session")
def laplacian64():
    return sg.dirichlet_laplacian(64)


@pytest.fixture(scope="session")
def laplacian16():
    return sg.dirichlet_laplacian(16)


@pytest.fixture(scope="session")
def diag10():
    return sg.diag(np.arange(1.0, 11.0))


@pytest.fixture(scope="session")
def sim20():
    return sg.random_similarity(8, 20.0, seed=3)


@pytest.fixture(scope="session")
def sim10():
    return sg.random_similarity(8, 10.0, seed=0)
