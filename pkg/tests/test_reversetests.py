"""Reverse tests, hull reduction, and the maximal divergence bracket."""

import numpy as np
import pytest

from qrd.classical import power_spec
from qrd.divergences import DivergenceParams, d_alpha_z, d_hat_alpha
from qrd.errors import BadParamsError, DimMismatchError, NoConvexWitnessError
from qrd.reversetests import (
    ReverseTest,
    caratheodory_fixpoint,
    caratheodory_reduce,
    maximal_divergence_upper,
    realized_pair,
    rt_renyi,
    spectral_reverse_test,
    split_eigen_reverse_test,
    validate_reverse_test,
)
from qrd.verify import anchors_and_mixtures_rt, rand_density, rand_pure


def test_reverse_test_coerces_arrays(rng):
    omegas = (rand_pure(rng, 2).entries, rand_pure(rng, 2).entries)
    rt = ReverseTest(omegas=omegas, p=np.array([0.5, 0.5]), q=np.array([0.4, 0.6]))
    assert rt.n_columns == 2 and rt.dim == 2


def test_weight_length_mismatch(rng):
    with pytest.raises(DimMismatchError):
        ReverseTest(
            omegas=(rand_pure(rng, 2),),
            p=np.array([0.5, 0.5]),
            q=np.array([1.0]),
        )


def test_spectral_reverse_test_realizes_the_pair(rng):
    rho = rand_density(rng, 3, floor=0.05)
    sigma = rand_density(rng, 3, floor=0.05)
    rt = spectral_reverse_test(rho, sigma)
    assert validate_reverse_test(rt, rho, sigma)
    r2, s2 = realized_pair(rt)
    np.testing.assert_allclose(r2.entries, rho.entries, atol=1e-9)
    np.testing.assert_allclose(s2.entries, sigma.entries, atol=1e-9)


def test_spectral_test_value_equals_closed_form(rng):
    rho = rand_density(rng, 3, floor=0.05)
    sigma = rand_density(rng, 3, floor=0.05)
    rt = spectral_reverse_test(rho, sigma)
    for alpha in (0.7, 1.5, 2.0):
        assert rt_renyi(rt, alpha) == pytest.approx(
            d_hat_alpha(rho, sigma, alpha), abs=1e-9
        )


def test_split_eigen_variant_also_valid(rng):
    rho = rand_density(rng, 2, floor=0.05)
    sigma = rand_density(rng, 2, floor=0.05)
    rt = split_eigen_reverse_test(rho, sigma)
    assert validate_reverse_test(rt, rho, sigma)


def test_reduce_refuses_at_the_floor(rng):
    rho = rand_density(rng, 2, floor=0.05)
    sigma = rand_density(rng, 2, floor=0.05)
    rt = spectral_reverse_test(rho, sigma)
    assert rt.n_columns <= 5
    with pytest.raises(BadParamsError):
        caratheodory_reduce(rt)


def test_strictly_convex_position_has_no_witness(rng):
    # six distinct pure columns: none lies in the hull of the others
    omegas = tuple(rand_pure(rng, 2) for _ in range(6))
    p = np.full(6, 1.0 / 6.0)
    q = np.array([0.1, 0.15, 0.2, 0.2, 0.15, 0.2])
    rt = ReverseTest(omegas=omegas, p=p, q=q)
    with pytest.raises(NoConvexWitnessError):
        caratheodory_reduce(rt)


def test_fixpoint_reaches_floor_with_interior_columns(rng):
    rt = anchors_and_mixtures_rt(rng)
    r0, s0 = realized_pair(rt)
    reduced = caratheodory_fixpoint(rt, f=power_spec(2.0))
    assert reduced.n_columns <= 5
    assert validate_reverse_test(reduced, r0, s0)


def test_maximal_divergence_bracket(rng):
    rho = rand_density(rng, 2, floor=0.05)
    sigma = rand_density(rng, 2, floor=0.05)
    alpha = 3.0
    res = maximal_divergence_upper(rho, sigma, alpha, restarts=2, seed=5)
    hat = d_hat_alpha(rho, sigma, alpha)
    sand = d_alpha_z(rho, sigma, DivergenceParams(alpha, alpha)).d_value
    assert res.value <= hat + 1e-9
    assert res.value >= sand - 1e-9
    assert validate_reverse_test(res.rt, rho, sigma, atol=1e-8)


def test_maximal_divergence_exact_below_two(rng):
    rho = rand_density(rng, 2, floor=0.05)
    sigma = rand_density(rng, 2, floor=0.05)
    res = maximal_divergence_upper(rho, sigma, 1.5, restarts=1, seed=0)
    assert res.exact
    assert res.value == pytest.approx(d_hat_alpha(rho, sigma, 1.5), abs=1e-9)
