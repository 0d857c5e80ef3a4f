"""Named operator families and their closed-form anchors."""

import math

import numpy as np
import pytest

from qrd.divergences import d_max
from qrd.errors import BadParamsError
from qrd.families import (
    FamilySpec,
    a2_overlap_gap,
    congruence_norm,
    default_schedule,
    family_pair,
    gen_a2,
    gen_congruence,
    gen_kappa,
    gen_pure,
    parse_family,
    pure_family_dmax,
)


def test_default_schedule_monotone():
    values = [default_schedule(n) for n in range(1, 20)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] < 1.0


def test_pure_family_states():
    rho, sigma = gen_pure(0.8, 0.1)
    assert rho.trace == pytest.approx(1.0)
    assert sigma.trace == pytest.approx(1.0)
    w = rho.eigenvalues
    assert w[0] == pytest.approx(1.0) and abs(w[1]) <= 1e-12


def test_pure_family_dmax_formula():
    for c, eps in ((0.5, 0.2), (1.0, 0.3), (1.5, 0.1)):
        rho, sigma = gen_pure(c, eps)
        assert d_max(rho, sigma) == pytest.approx(pure_family_dmax(c, eps), abs=1e-9)


def test_a2_overlap_identity():
    for n in (3, 8, 15):
        assert a2_overlap_gap(1.0, n) <= 1e-10


def test_a2_degenerates_when_gap_hits_machine_precision():
    # the two states collapse onto each other once the schedule's offset
    # falls below the floating point spacing at c
    rho, sigma = gen_a2(1.0, 40)
    np.testing.assert_allclose(rho.entries, sigma.entries, atol=1e-15)


def test_congruence_norm_closed_form():
    gamma = 0.5
    expect = (1.0 + gamma + math.sqrt(1.0 - 2.0 * gamma + 5.0 * gamma**2)) / 2.0
    assert congruence_norm(gamma) == pytest.approx(expect, rel=1e-12)


def test_congruence_unnormalized_identity():
    rho, sigma = gen_congruence(0.7, 1e-3, normalized=False)
    assert d_max(rho, sigma) == pytest.approx(math.log(congruence_norm(0.7)), abs=1e-9)


def test_kappa_family_dimension():
    rho, sigma = gen_kappa(0.5, 2.0, 0.01, dim=3)
    assert rho.dim == 3 and sigma.dim == 3


def test_parse_family_round_trip():
    spec = parse_family("pure:c=0.8,eps=0.1")
    assert spec.tag == "pure"
    assert spec.params == {"c": 0.8, "eps": 0.1}
    rho, sigma = family_pair(spec)
    r2, s2 = gen_pure(0.8, 0.1)
    np.testing.assert_allclose(rho.entries, r2.entries)
    np.testing.assert_allclose(sigma.entries, s2.entries)


def test_parse_family_rejects_unknown_tag():
    with pytest.raises(BadParamsError):
        parse_family("bogus:c=1")


def test_parse_family_rejects_bad_payload():
    with pytest.raises(BadParamsError):
        parse_family("pure:c")


def test_family_pair_rejects_unknown_key():
    with pytest.raises(BadParamsError):
        family_pair(FamilySpec("pure", {"c": 1.0, "nope": 2.0}))


def test_knife_tag_builds_diagonal_operators():
    rho, sigma = family_pair(parse_family("knife:c=1,d=1,beta=1,gamma=2,n=1000"))
    assert rho.dim == 2
    np.testing.assert_allclose(rho.entries, np.diag(np.diag(rho.entries)))
