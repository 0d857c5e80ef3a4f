"""Measured divergence lower bounds and the two-outcome test variant."""

import math

import numpy as np
import pytest

from qrd.classical import classical_renyi
from qrd.divergences import DivergenceParams, d_alpha_z, d_max
from qrd.measured import (
    POVM,
    apply_povm,
    measured_renyi_lower,
    regularized_measured_estimate,
    test_measured as measured_by_test,
)
from qrd.opcore import HermitianOperator
from qrd.verify import rand_density


def test_povm_completeness_enforced():
    half = HermitianOperator(0.5 * np.eye(2))
    POVM((half, half))
    with pytest.raises(ValueError):
        POVM((half,))


def test_povm_rejects_negative_element():
    bad = HermitianOperator(np.diag([1.5, 1.0]))
    comp = HermitianOperator(np.diag([-0.5, 0.0]))
    with pytest.raises(ValueError):
        POVM((bad, comp))


def test_apply_povm_outcome_statistics():
    povm = POVM(
        (HermitianOperator(np.diag([1.0, 0.0])), HermitianOperator(np.diag([0.0, 1.0])))
    )
    rho = HermitianOperator(np.array([[0.7, 0.2], [0.2, 0.3]]))
    w = apply_povm(povm, rho)
    np.testing.assert_allclose(w.values, [0.7, 0.3], atol=1e-12)


def test_commuting_pair_reaches_classical_value():
    p = np.array([0.5, 0.3, 0.2])
    q = np.array([0.2, 0.3, 0.5])
    rho, sigma = HermitianOperator(np.diag(p)), HermitianOperator(np.diag(q))
    got = measured_renyi_lower(rho, sigma, 1.8, restarts=2, seed=0).value
    assert got == pytest.approx(classical_renyi(p, q, 1.8), abs=1e-6)


def test_structural_infinity_certified(rng):
    rho = rand_density(rng, 3)
    sigma = rand_density(rng, 3, rank=2)
    res = measured_renyi_lower(rho, sigma, 2.0, restarts=1, seed=0)
    assert res.value == math.inf
    assert res.converged


def test_value_is_a_lower_bound_for_sandwiched(rng):
    rho = rand_density(rng, 2, floor=0.05)
    sigma = rand_density(rng, 2, floor=0.05)
    for alpha in (0.6, 1.5, 2.5):
        sand = d_alpha_z(rho, sigma, DivergenceParams(alpha, alpha)).d_value
        got = measured_renyi_lower(rho, sigma, alpha, restarts=2, seed=1).value
        assert got <= sand + 1e-9


def test_test_variant_below_full_measured(rng):
    rho = rand_density(rng, 2, floor=0.05)
    sigma = rand_density(rng, 2, floor=0.05)
    mv = measured_renyi_lower(rho, sigma, 2.0, restarts=2, seed=2).value
    tv = measured_by_test(rho, sigma, 2.0, restarts=2, seed=2).value
    assert tv <= mv + 1e-6


def test_large_alpha_test_tracks_dmax_commuting():
    p = np.array([0.7, 0.3])
    q = np.array([0.4, 0.6])
    rho, sigma = HermitianOperator(np.diag(p)), HermitianOperator(np.diag(q))
    tv = measured_by_test(rho, sigma, 64.0, restarts=2, seed=0).value
    assert abs(tv - d_max(rho, sigma)) <= 5e-2


def test_regularized_estimate_monotone_in_tensor_power(rng):
    rho = rand_density(rng, 2, floor=0.1)
    sigma = rand_density(rng, 2, floor=0.1)
    # measured value per copy never drops when more copies are allowed
    curve = regularized_measured_estimate(rho, sigma, 1.5, max_n=2, restarts=2, seed=3)
    assert len(curve) == 2
    (n1, v1), (n2, v2) = curve
    assert (n1, n2) == (1, 2)
    assert v2 >= v1 - 1e-6
    sand = d_alpha_z(rho, sigma, DivergenceParams(1.5, 1.5)).d_value
    assert v2 <= sand + 1e-9
