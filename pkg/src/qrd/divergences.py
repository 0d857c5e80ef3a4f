"""Quantum Renyi divergence families on operator pairs.

Covers the two-parameter (alpha, z) family including its z -> infinity
and z -> 0 endpoints, Umegaki relative entropy, max-relative entropy,
the perspective-based upper family, Nussbaum-Szkola distributions, the
variational formula for alpha in (1, 2], the Araki-Lieb-Thirring chain,
the max-relative-entropy domination check, and epsilon-smoothing curves.

Conventions: all values are in nats; divergences are normalized by Tr rho
so subnormalized first arguments obey the scaling law; +inf is IEEE inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import WeightVector
from .errors import (
    BadAlphaError,
    BadParamsError,
    DimMismatchError,
    SupportViolationError,
    ZeroOperatorError,
)
from .opcore import (
    DEFAULT_CUTOFF,
    SUPPORT_TEST_SLACK,
    HermitianOperator,
    SupportCutoff,
    as_operator,
    logn,
    pinch_exp,
    psd_leq,
    support_leq,
    support_projection,
    supported_power,
)

#: relative slack for the self-check inequalities (ALT chain, domination)
REL_SLACK = 1e-9

#: eigenvalues of the inner product matrix below this (relative) are treated
#: as exact zeros; deliberately at machine level, not the input support
#: cutoff, because ratio^(1/z) eigenvalues are data rather than noise
INNER_FLOOR_RTOL = 1e-15

#: support-inclusion defects between the strict cutoff and the test slack
#: mark a borderline branch choice
BORDERLINE_BAND = (1e-12, SUPPORT_TEST_SLACK)


@dataclass(frozen=True)
class DivergenceParams:
    """Order pair (alpha, z); z = 0.0 means the z -> 0 limit, inf allowed.

    Optional kappa and lam ride along for the kappa-scaled sweeps and
    scaling-law experiments; they do not affect evaluation here.
    """

    alpha: float
    z: float
    kappa: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise BadAlphaError(f"alpha must be positive, got {self.alpha}")
        if self.z < 0.0 or math.isnan(self.z):
            raise BadParamsError(f"z must be in [0, inf], got {self.z}")
        if self.alpha == 1.0 and self.z == 0.0:
            raise BadParamsError("the (alpha, z) = (1, 0) corner has no defined value")


@dataclass(frozen=True)
class DivergenceValue:
    """Q, D and psi = (alpha - 1) D + log Tr rho for one evaluation."""

    q_value: float
    d_value: float
    psi_value: float
    notes: tuple[str, ...] = ()


def _checked_pair(rho, sigma) -> tuple[HermitianOperator, HermitianOperator]:
    rho = as_operator(rho)
    sigma = as_operator(sigma)
    if rho.dim != sigma.dim:
        raise DimMismatchError(f"dim {rho.dim} vs {sigma.dim}")
    if support_projection(rho).rank == 0:
        raise ZeroOperatorError("rho is (numerically) zero")
    if support_projection(sigma).rank == 0:
        raise ZeroOperatorError("sigma is (numerically) zero")
    return rho, sigma


def _support_status(rho, sigma) -> tuple[bool, bool]:
    """(included, borderline) for the rho-support inside sigma-support test.

    Uses the relative mass of rho outside the sigma support rather than
    a projector eigenvalue gap: for low-rank rho the latter scales like
    an amplitude and misreads harmless perturbations as violations.
    """
    p_sigma = support_projection(sigma).entries
    leak = rho.trace - float(np.real(np.trace(p_sigma @ rho.entries @ p_sigma)))
    defect = max(leak, 0.0) / rho.trace
    included = defect <= SUPPORT_TEST_SLACK
    borderline = included and defect > BORDERLINE_BAND[0]
    return included, borderline


def _sum_powers(matrix: np.ndarray, expo: float) -> float:
    """Sum of expo-th powers of the nonnegligible eigenvalues of a PSD matrix."""
    w = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))
    floor = INNER_FLOOR_RTOL * max(float(w[-1]), 0.0)
    kept = w > floor
    if not np.any(kept):
        return 0.0
    return float(np.sum(w[kept] ** float(expo)))


def q_alpha_z(rho, sigma, params: DivergenceParams) -> float:
    """Trace functional Q_{alpha,z} = Tr (rho^{a/2z} sigma^{(1-a)/z} rho^{a/2z})^z.

    Finite z only; +inf when alpha > 1 and the support of rho leaks out
    of the support of sigma.
    """
    alpha, z = params.alpha, params.z
    if not (z > 0.0 and math.isfinite(z)):
        raise BadParamsError(f"q_alpha_z needs finite z > 0, got {z}")
    rho, sigma = _checked_pair(rho, sigma)
    if alpha > 1.0:
        included, _ = _support_status(rho, sigma)
        if not included:
            return math.inf
    rh = supported_power(rho, alpha / (2.0 * z))
    sp = supported_power(sigma, (1.0 - alpha) / z)
    inner = rh.entries @ sp.entries @ rh.entries
    return _sum_powers(inner, z)


def q_alpha_z_symmetric(rho, sigma, params: DivergenceParams) -> float:
    """Same functional with the roles swapped inside the trace.

    Tr (sigma^{(1-a)/2z} rho^{a/z} sigma^{(1-a)/2z})^z; agrees with
    q_alpha_z up to numerical error and exists for cross-checking.
    """
    alpha, z = params.alpha, params.z
    if not (z > 0.0 and math.isfinite(z)):
        raise BadParamsError(f"q_alpha_z needs finite z > 0, got {z}")
    rho, sigma = _checked_pair(rho, sigma)
    if alpha > 1.0:
        included, _ = _support_status(rho, sigma)
        if not included:
            return math.inf
    sp = supported_power(sigma, (1.0 - alpha) / (2.0 * z))
    rh = supported_power(rho, alpha / z)
    inner = sp.entries @ rh.entries @ sp.entries
    return _sum_powers(inner, z)


def _value_from_q(alpha: float, tr_rho: float, q: float, notes=()) -> DivergenceValue:
    log_tr = math.log(tr_rho)
    if math.isinf(q):
        return DivergenceValue(math.inf, math.inf, math.inf, tuple(notes))
    if q == 0.0:
        # alpha < 1 here: log Q = -inf over a negative denominator
        return DivergenceValue(0.0, math.inf, -math.inf, tuple(notes))
    psi = math.log(q)
    d = (psi - log_tr) / (alpha - 1.0)
    return DivergenceValue(q, d, psi, tuple(notes))


def _value_from_d(alpha: float, tr_rho: float, d: float, notes=()) -> DivergenceValue:
    log_tr = math.log(tr_rho)
    if alpha == 1.0:
        # (alpha - 1) * d = 0 even when d = +inf, by the 0 * inf = 0 convention
        return DivergenceValue(tr_rho, d, log_tr, tuple(notes))
    if math.isinf(d):
        if alpha > 1.0:
            return DivergenceValue(math.inf, math.inf, math.inf, tuple(notes))
        return DivergenceValue(0.0, math.inf, -math.inf, tuple(notes))
    psi = (alpha - 1.0) * d + log_tr
    return DivergenceValue(math.exp(psi), d, psi, tuple(notes))


def d_alpha_z(rho, sigma, params: DivergenceParams) -> DivergenceValue:
    """Renyi (alpha, z)-divergence with its Q and psi companions.

    alpha = 1 is Umegaki relative entropy for every z; z = inf uses the
    pinched exponential; z = 0 uses the spectral limit with extrapolation
    fallback.
    """
    alpha = params.alpha
    rho, sigma = _checked_pair(rho, sigma)
    tr_rho = rho.trace
    notes: list[str] = []
    _, borderline = _support_status(rho, sigma)
    if borderline:
        notes.append("support_borderline")

    if alpha == 1.0:
        return _value_from_d(alpha, tr_rho, umegaki(rho, sigma), notes)
    if math.isinf(params.z):
        q = pinch_exp(rho, sigma, alpha)
        if q == 0.0:
            notes.append("degenerate_support")
        return _value_from_q(alpha, tr_rho, q, notes)
    if params.z == 0.0:
        from . import zlimits  # deferred: zlimits depends on this module

        rec = zlimits.zero_z_divergence(rho, sigma, alpha)
        if rec.used_fallback:
            notes.append("zero_z_extrapolated")
        return _value_from_d(alpha, tr_rho, rec.value, notes)
    q = q_alpha_z(rho, sigma, params)
    return _value_from_q(alpha, tr_rho, q, notes)


def umegaki(rho, sigma) -> float:
    """Umegaki relative entropy Tr rho (log rho - log sigma) / Tr rho."""
    rho, sigma = _checked_pair(rho, sigma)
    included, _ = _support_status(rho, sigma)
    if not included:
        return math.inf
    diff = logn(rho).entries - logn(sigma).entries
    val = float(np.real(np.trace(rho.entries @ diff)))
    return val / rho.trace


def d_max(rho, sigma) -> float:
    """Max-relative entropy log || sigma^-1/2 rho sigma^-1/2 ||_inf.

    Normalization by Tr rho is deliberately absent: this is the optimal
    log lambda with rho <= lambda sigma, matching the divergence family
    at its z = alpha - 1, alpha -> inf corner.
    """
    rho, sigma = _checked_pair(rho, sigma)
    included, _ = _support_status(rho, sigma)
    if not included:
        return math.inf
    s_inv = supported_power(sigma, -0.5)
    x = s_inv.entries @ rho.entries @ s_inv.entries
    top = float(np.linalg.eigvalsh(0.5 * (x + x.conj().T))[-1])
    return math.log(top) if top > 0.0 else -math.inf


def d_max_bisection(rho, sigma, tol: float = 1e-10) -> float:
    """Cross-check for d_max: bisection on log lambda with the PSD order test."""
    rho, sigma = _checked_pair(rho, sigma)
    included, _ = _support_status(rho, sigma)
    if not included:
        return math.inf
    lo, hi = -60.0, 60.0
    if not psd_leq(rho, math.exp(hi) * sigma.entries, 1e-14):
        raise BadParamsError("pair outside the bisection bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if psd_leq(rho, math.exp(mid) * sigma.entries, 1e-14):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def d_hat_alpha(rho, sigma, alpha: float) -> float:
    """Perspective-based divergence log Tr sigma^1/2 (sigma^-1/2 rho sigma^-1/2)^alpha sigma^1/2.

    Equals the maximal Renyi divergence for alpha in (0,1) union (1,2];
    for alpha > 2 it is only an upper bound on it.
    """
    if not alpha > 0.0 or alpha == 1.0:
        raise BadAlphaError(f"alpha must be in (0,1) or (1,inf), got {alpha}")
    rho, sigma = _checked_pair(rho, sigma)
    if alpha > 1.0:
        included, _ = _support_status(rho, sigma)
        if not included:
            return math.inf
    s_half = supported_power(sigma, 0.5)
    s_inv = supported_power(sigma, -0.5)
    x = s_inv.entries @ rho.entries @ s_inv.entries
    xa = supported_power(HermitianOperator(0.5 * (x + x.conj().T)), alpha)
    tr = float(np.real(np.trace(s_half.entries @ xa.entries @ s_half.entries)))
    if tr <= 0.0:
        return math.inf
    return (math.log(tr) - math.log(rho.trace)) / (alpha - 1.0)


def d_alpha_zero(rho, sigma, alpha: float) -> float:
    """z -> 0 limit divergence; see zlimits for the spectral machinery."""
    from . import zlimits

    return zlimits.zero_z_divergence(rho, sigma, alpha).value


def nussbaum_szkola(rho, sigma) -> tuple[WeightVector, WeightVector]:
    """Classical pair p(i,j) = a_i |<v_i|w_j>|^2, q(i,j) = b_j |<v_i|w_j>|^2.

    Reproduces Q_{alpha,1} of the operator pair exactly, which makes it
    the bridge between quantum z = 1 divergences and classical ones.
    """
    rho, sigma = _checked_pair(rho, sigma)
    a, v = rho.eig
    b, w = sigma.eig
    # eigenvalue and overlap dust below the support cutoff must become an
    # exact zero, or the two sides would disagree about infinities: the
    # quantum Q tests support inclusion, the classical one exact zeros
    a = np.where(a > DEFAULT_CUTOFF.threshold(a), a, 0.0)
    b = np.where(b > DEFAULT_CUTOFF.threshold(b), b, 0.0)
    overlap = np.abs(v.conj().T @ w) ** 2
    overlap[overlap <= DEFAULT_CUTOFF.relative_tau**2] = 0.0
    p = a[:, None] * overlap
    q = b[None, :] * overlap
    return WeightVector(p.ravel()), WeightVector(q.ravel())


def _variational_guard(rho, sigma, params: DivergenceParams):
    alpha, z = params.alpha, params.z
    if not (1.0 < alpha <= 2.0):
        raise BadAlphaError(f"variational formula needs alpha in (1, 2], got {alpha}")
    if not (z > 0.0 and math.isfinite(z)):
        raise BadParamsError(f"variational formula needs finite z > 0, got {z}")
    rho, sigma = _checked_pair(rho, sigma)
    included, _ = _support_status(rho, sigma)
    if not included:
        raise SupportViolationError(
            "rho^{a/z} <= lambda sigma^{a/z} fails for every finite lambda"
        )
    return rho, sigma


def variational_objective(rho, sigma, params: DivergenceParams, H) -> float:
    """Lower-bound objective whose sup over PSD H equals Q_{alpha,z}.

    alpha Tr(rho^{a/2z} H rho^{a/2z})^{z/a}
    + (1 - alpha) Tr(sigma^{(a-1)/2z} H sigma^{(a-1)/2z})^{z/(a-1)}.
    """
    rho, sigma = _variational_guard(rho, sigma, params)
    alpha, z = params.alpha, params.z
    H = as_operator(H)
    rh = supported_power(rho, alpha / (2.0 * z))
    sh = supported_power(sigma, (alpha - 1.0) / (2.0 * z))
    t1 = _sum_powers(rh.entries @ H.entries @ rh.entries, z / alpha)
    t2 = _sum_powers(sh.entries @ H.entries @ sh.entries, z / (alpha - 1.0))
    return alpha * t1 + (1.0 - alpha) * t2


def variational_optimizer_H(rho, sigma, params: DivergenceParams) -> HermitianOperator:
    """The maximizer sigma^{(1-a)/2z} (sigma^{(1-a)/2z} rho^{a/z} sigma^{(1-a)/2z})^{a-1} sigma^{(1-a)/2z}."""
    rho, sigma = _variational_guard(rho, sigma, params)
    alpha, z = params.alpha, params.z
    s_out = supported_power(sigma, (1.0 - alpha) / (2.0 * z))
    r_mid = supported_power(rho, alpha / z)
    inner = s_out.entries @ r_mid.entries @ s_out.entries
    powered = supported_power(
        HermitianOperator(0.5 * (inner + inner.conj().T)), alpha - 1.0
    )
    h = s_out.entries @ powered.entries @ s_out.entries
    return HermitianOperator(0.5 * (h + h.conj().T))


def _le_rel(a: float, b: float, rel: float = REL_SLACK) -> bool:
    """a <= b up to relative slack, with +inf handled as absorbing."""
    if math.isinf(b):
        return True
    if math.isinf(a):
        return False
    return a <= b + rel * max(abs(a), abs(b), 1.0)


@dataclass(frozen=True)
class AltChainResult:
    q_z2: float
    q_z1: float
    upper: float
    ok_lower: bool
    ok_upper: bool


def alt_chain(rho, sigma, alpha: float, z1: float, z2: float) -> AltChainResult:
    """Araki-Lieb-Thirring chain Q_{a,z2} <= Q_{a,z1} <= upper for z1 <= z2.

    upper = Q_{a,z2}^{z1/z2} ||rho||_inf^{a (1 - z1/z2)} (Tr sigma^{1-a})^{1 - z1/z2}.
    The two ok flags report whether each inequality holds within relative
    slack; callers assert them.
    """
    if not (0.0 < z1 <= z2 and math.isfinite(z2)):
        raise BadParamsError(f"need 0 < z1 <= z2 finite, got ({z1}, {z2})")
    if not alpha > 0.0:
        raise BadAlphaError(f"alpha must be positive, got {alpha}")
    rho, sigma = _checked_pair(rho, sigma)
    qz1 = q_alpha_z(rho, sigma, DivergenceParams(alpha, z1))
    qz2 = q_alpha_z(rho, sigma, DivergenceParams(alpha, z2))
    ratio = z1 / z2
    rho_norm = float(np.clip(rho.eigenvalues[0], 0.0, None))
    if alpha == 1.0:
        tr_sig_pow = float(support_projection(sigma).rank)
    else:
        b = sigma.eigenvalues
        kept = b > DEFAULT_CUTOFF.threshold(b)
        tr_sig_pow = float(np.sum(b[kept] ** (1.0 - alpha)))
    if math.isinf(qz2):
        upper = math.inf
    else:
        upper = (
            qz2 ** ratio
            * rho_norm ** (alpha * (1.0 - ratio))
            * tr_sig_pow ** (1.0 - ratio)
        )
    return AltChainResult(
        q_z2=qz2,
        q_z1=qz1,
        upper=upper,
        ok_lower=_le_rel(qz2, qz1),
        ok_upper=_le_rel(qz1, upper),
    )


@dataclass(frozen=True)
class DmaxDominationResult:
    d_az: float
    d_max: float
    dominated: bool


def dmax_domination_check(rho, sigma, params: DivergenceParams) -> DmaxDominationResult:
    """Compare D_{alpha,z} against D_max; dominated within relative slack.

    Domination is guaranteed for alpha < 1 (any z), alpha = 1, and
    alpha > 1 with z >= alpha - 1; it fails strictly for pure rho whose
    vector is not a sigma-eigenvector once z < alpha - 1.
    """
    val = d_alpha_z(rho, sigma, params).d_value
    dm = d_max(rho, sigma)
    if math.isinf(val):
        dominated = math.isinf(dm)
    else:
        dominated = _le_rel(val, dm)
    return DmaxDominationResult(d_az=val, d_max=dm, dominated=dominated)


def epsilon_smoothing_curve(rho, sigma, params: DivergenceParams, eps_grid) -> list[float]:
    """D_{alpha,z}(rho || sigma + eps I) along a positive descending grid.

    Monotone nonincreasing in eps; converges to the unsmoothed value when
    that is finite and diverges when the support condition fails.
    """
    eps = [float(e) for e in eps_grid]
    if any(e <= 0.0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise BadParamsError("eps_grid must be positive and strictly descending")
    rho = as_operator(rho)
    sigma = as_operator(sigma)
    eye = np.eye(sigma.dim)
    out = []
    for e in eps:
        smoothed = HermitianOperator(sigma.entries + e * eye)
        out.append(d_alpha_z(rho, smoothed, params).d_value)
    return out
