"""Shared fixtures: deterministic pairs drawn through the verify generators."""

import numpy as np
import pytest

from qrd.verify import rand_density


@pytest.fixture
def rng():
    return np.random.default_rng(2026)


@pytest.fixture
def qubit_pair(rng):
    return rand_density(rng, 2, floor=0.05), rand_density(rng, 2, floor=0.05)


@pytest.fixture
def qutrit_pair(rng):
    return rand_density(rng, 3, floor=0.05), rand_density(rng, 3, floor=0.05)
