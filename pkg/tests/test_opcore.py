"""Operator layer: construction guards, powers, supports, orderings."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrd.errors import DimTooLargeError, MalformedInputError, NotPSDError
from qrd.opcore import (
    HermitianOperator,
    Projection,
    as_operator,
    commutator_spectral_norm,
    logn,
    pinch_exp,
    projection_meet,
    psd_leq,
    support_leq,
    support_projection,
    supported_power,
    trace_power,
)
from qrd.verify import rand_density, rand_pure


def test_rejects_non_square():
    with pytest.raises(MalformedInputError):
        HermitianOperator(np.ones((2, 3)))


def test_rejects_non_hermitian():
    with pytest.raises(MalformedInputError):
        HermitianOperator(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_rejects_oversized():
    with pytest.raises(DimTooLargeError):
        HermitianOperator(np.eye(65))


def test_symmetrizes_rounding_noise():
    m = np.array([[1.0, 0.5 + 1e-14], [0.5 - 1e-14, 2.0]])
    op = HermitianOperator(m)
    np.testing.assert_allclose(op.entries, op.entries.conj().T)


def test_eigendecomposition_descending(rng):
    op = rand_density(rng, 4)
    w = op.eigenvalues
    assert all(a >= b for a, b in zip(w, w[1:]))
    v = op.eigenvectors
    np.testing.assert_allclose((v * w) @ v.conj().T, op.entries, atol=1e-12)


def test_projection_rejects_non_idempotent():
    with pytest.raises(MalformedInputError):
        Projection(np.array([[0.5, 0.0], [0.0, 1.0]]))


def test_supported_power_inverse_on_support(rng):
    a = rand_density(rng, 3, rank=2)
    inv = supported_power(a, -1.0)
    p = support_projection(a).entries
    np.testing.assert_allclose(inv.entries @ a.entries, p, atol=1e-10)


def test_supported_power_zero_is_support(rng):
    a = rand_density(rng, 3, rank=2)
    np.testing.assert_allclose(
        supported_power(a, 0.0).entries, support_projection(a).entries, atol=1e-12
    )


@given(x=st.sampled_from([0.5, 1.0, 2.0, 1.7]), seed=st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_supported_power_matches_dense_power(x, seed):
    rng = np.random.default_rng(seed)
    a = rand_density(rng, 3, floor=0.05)
    w, v = np.linalg.eigh(a.entries)
    dense = (v * w**x) @ v.conj().T
    np.testing.assert_allclose(supported_power(a, x).entries, dense, atol=1e-11)


def test_trace_power_agrees_with_spectrum(rng):
    a = rand_density(rng, 4, floor=0.01)
    assert trace_power(a, 1.5) == pytest.approx(np.sum(a.eigenvalues**1.5))


def test_projection_meet_of_orthogonal_ranges():
    p = Projection(np.diag([1.0, 0.0, 0.0]))
    q = Projection(np.diag([0.0, 1.0, 0.0]))
    meet = projection_meet(p, q)
    np.testing.assert_allclose(meet.entries, np.zeros((3, 3)), atol=1e-12)


def test_projection_meet_shared_direction():
    p = Projection(np.diag([1.0, 1.0, 0.0]))
    q = Projection(np.diag([0.0, 1.0, 1.0]))
    meet = projection_meet(p, q)
    np.testing.assert_allclose(meet.entries, np.diag([0.0, 1.0, 0.0]), atol=1e-10)


def test_psd_leq_scaling(rng):
    a = rand_density(rng, 3)
    assert psd_leq(a, as_operator(1.5 * a.entries))
    assert not psd_leq(as_operator(1.5 * a.entries), a)


def test_support_leq_strict_rank():
    small = HermitianOperator(np.diag([1.0, 0.0]))
    big = HermitianOperator(np.diag([0.3, 0.7]))
    assert support_leq(small, big)
    assert not support_leq(big, small)


def test_logn_inverts_exp(rng):
    a = rand_density(rng, 3, floor=0.05)
    w, v = np.linalg.eigh(a.entries)
    np.testing.assert_allclose(
        logn(a).entries, (v * np.log(w)) @ v.conj().T, atol=1e-11
    )


def test_pinch_exp_commuting_closed_form():
    rho = HermitianOperator(np.diag([0.6, 0.4]))
    sigma = HermitianOperator(np.diag([0.3, 0.7]))
    expect = 0.6 ** 2.0 * 0.3 ** (-1.0) + 0.4 ** 2.0 * 0.7 ** (-1.0)
    assert pinch_exp(rho, sigma, 2.0) == pytest.approx(expect, rel=1e-12)


def test_commutator_norm_flags_noncommuting(rng):
    d = HermitianOperator(np.diag([0.2, 0.8]))
    assert commutator_spectral_norm(d, d) <= 1e-14
    psi = rand_pure(rng, 2)
    assert commutator_spectral_norm(d, psi) > 1e-3


def test_negative_eigenvalue_matrix_accepted_but_not_psd_ops():
    op = HermitianOperator(np.diag([1.0, -0.5]))
    with pytest.raises(NotPSDError):
        supported_power(op, 0.5)
