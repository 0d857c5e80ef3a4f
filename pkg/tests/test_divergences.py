"""Core divergence family: special cases, orderings, support behavior."""

import math

import numpy as np
import pytest

from qrd.classical import classical_q, classical_renyi
from qrd.divergences import (
    DivergenceParams,
    alt_chain,
    d_alpha_z,
    d_hat_alpha,
    d_max,
    nussbaum_szkola,
    q_alpha_z,
    umegaki,
)
from qrd.errors import BadAlphaError, BadParamsError
from qrd.opcore import HermitianOperator, as_operator, pinch_exp
from qrd.verify import rand_density, rand_pure


def diag_pair():
    rho = HermitianOperator(np.diag([0.55, 0.3, 0.15]))
    sigma = HermitianOperator(np.diag([0.25, 0.35, 0.4]))
    return rho, sigma


def test_params_validation():
    with pytest.raises(BadAlphaError):
        DivergenceParams(-0.5, 1.0)
    with pytest.raises(BadParamsError):
        DivergenceParams(2.0, -1.0)
    with pytest.raises(BadParamsError):
        DivergenceParams(1.0, 0.0)


@pytest.mark.parametrize("alpha,z", [(0.5, 1.0), (0.5, 0.7), (2.0, 1.0), (2.0, 2.0), (3.0, 1.5)])
def test_commuting_reduces_to_classical(alpha, z):
    rho, sigma = diag_pair()
    p = np.diag(rho.entries).real
    q = np.diag(sigma.entries).real
    dv = d_alpha_z(rho, sigma, DivergenceParams(alpha, z)).d_value
    assert dv == pytest.approx(classical_renyi(p, q, alpha), abs=1e-11)


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0, math.inf])
def test_alpha_one_is_umegaki_for_every_z(z, qutrit_pair):
    rho, sigma = qutrit_pair
    dv = d_alpha_z(rho, sigma, DivergenceParams(1.0, z)).d_value
    assert dv == pytest.approx(umegaki(rho, sigma), abs=1e-10)


def test_z_infinity_uses_pinched_exponential(qutrit_pair):
    rho, sigma = qutrit_pair
    got = d_alpha_z(rho, sigma, DivergenceParams(2.0, math.inf)).q_value
    assert got == pytest.approx(pinch_exp(rho, sigma, 2.0), rel=1e-10)


def test_self_divergence_zero(qutrit_pair):
    rho, _ = qutrit_pair
    for alpha, z in ((0.5, 1.0), (2.0, 2.0), (1.0, 1.0)):
        assert abs(d_alpha_z(rho, rho, DivergenceParams(alpha, z)).d_value) <= 1e-10


def test_support_failure_is_infinite_for_large_alpha(rng):
    rho = rand_density(rng, 3)
    sigma = rand_density(rng, 3, rank=2)
    assert d_alpha_z(rho, sigma, DivergenceParams(2.0, 1.0)).d_value == math.inf
    assert d_max(rho, sigma) == math.inf


def test_small_alpha_survives_support_failure(rng):
    rho = rand_density(rng, 3)
    sigma = rand_density(rng, 3, rank=2)
    dv = d_alpha_z(rho, sigma, DivergenceParams(0.5, 1.0)).d_value
    assert math.isfinite(dv)


def test_disjoint_supports_infinite_even_below_one():
    rho = HermitianOperator(np.diag([1.0, 0.0]))
    sigma = HermitianOperator(np.diag([0.0, 1.0]))
    res = d_alpha_z(rho, sigma, DivergenceParams(0.5, 1.0))
    assert res.d_value == math.inf
    assert res.q_value == 0.0


def test_unnormalized_scaling_shifts_by_log(qutrit_pair):
    rho, sigma = qutrit_pair
    lam, eta = 1.7, 0.6
    params = DivergenceParams(2.0, 1.5)
    base = d_alpha_z(rho, sigma, params).d_value
    scaled = d_alpha_z(
        as_operator(lam * rho.entries), as_operator(eta * sigma.entries), params
    ).d_value
    assert scaled == pytest.approx(base + math.log(lam / eta), abs=1e-10)


def test_dmax_closed_form_qubit():
    rho = HermitianOperator(np.diag([0.9, 0.1]))
    sigma = HermitianOperator(np.diag([0.5, 0.5]))
    assert d_max(rho, sigma) == pytest.approx(math.log(1.8), rel=1e-12)


def test_d_hat_two_is_max_over_z_at_alpha_two(qutrit_pair):
    """At alpha = 2 the closed form coincides with the z = 1 member."""
    rho, sigma = qutrit_pair
    hat = d_hat_alpha(rho, sigma, 2.0)
    petz = d_alpha_z(rho, sigma, DivergenceParams(2.0, 1.0)).d_value
    assert hat == pytest.approx(petz, abs=1e-10)


def test_alt_chain_detail_fields(qubit_pair):
    rho, sigma = qubit_pair
    res = alt_chain(rho, sigma, 1.5, 0.7, 1.4)
    assert res.ok_lower and res.ok_upper


def test_nussbaum_szkola_matches_petz_q(qutrit_pair):
    rho, sigma = qutrit_pair
    p, q = nussbaum_szkola(rho, sigma)
    for alpha in (0.4, 1.8):
        lhs = q_alpha_z(rho, sigma, DivergenceParams(alpha, 1.0))
        assert lhs == pytest.approx(classical_q(p, q, alpha), rel=1e-11)


def test_pure_state_sandwiched_equals_dmax_scaling(rng):
    psi = rand_pure(rng, 3)
    sigma = rand_density(rng, 3, floor=0.05)
    dm = d_max(psi, sigma)
    for alpha in (1.5, 2.0, 3.0):
        dv = d_alpha_z(psi, sigma, DivergenceParams(alpha, alpha - 1.0)).d_value
        assert dv == pytest.approx(dm, abs=1e-9)


def test_z_monotonicity_of_q(qutrit_pair):
    rho, sigma = qutrit_pair
    alpha = 2.5
    values = [
        d_alpha_z(rho, sigma, DivergenceParams(alpha, z)).d_value
        for z in (0.5, 1.0, 2.0, 4.0)
    ]
    for a, b in zip(values, values[1:]):
        assert b <= a + 1e-10
