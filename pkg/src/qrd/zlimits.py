"""Small-z limit of the (alpha, z) family: spectral formula and checks.

The z -> 0 limit of Q_{alpha,z} has eigenvalues a_i^alpha b_i^(1-alpha)
(alpha < 1) or a_i^alpha b_(d+1-i)^(1-alpha) (alpha > 1) whenever a
determinant genericity condition on the eigenvector overlap matrix holds.
This module tests those conditions by exhaustive minor search, evaluates
the closed form, and falls back to Richardson extrapolation of Q_{alpha,z}
over a small z-grid in arbitrary precision when genericity fails.  It also
hosts the equality-case checker for the one-sided alpha -> 1 limits and
the reducing-subspace test used in its proof.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import (
    BadAlphaError,
    GenericityFailsError,
    GenericityUndeterminedError,
    SingularSigmaError,
)
from .opcore import (
    DEFAULT_CUTOFF,
    HermitianOperator,
    Projection,
    as_operator,
    commutator_spectral_norm,
    logn,
)

#: a minor certifies genericity when its magnitude exceeds this
MINOR_OK = 1e-10

#: below this the best minor counts as an exact zero (definite failure)
MINOR_DEAD = 1e-12

#: adjacent-eigenvalue gaps between these relative thresholds make the
#: block clustering ambiguous
CLUSTER_TOL = 1e-10
CLUSTER_AMBIGUOUS = 1e-8

#: geometric z-grid for the extrapolation oracle
ORACLE_Z_NODES = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True)
class SpectralProfile:
    """Eigen-data of a pair with eigenvalues clustered into equal blocks.

    Boundaries are cumulative counts: bounds (0, k1, ..., d) mean the
    first block covers indices [0, k1) and so on, eigenvalues descending.
    """

    a: np.ndarray
    b: np.ndarray
    v: np.ndarray
    w: np.ndarray
    i_bounds: tuple[int, ...]
    j_bounds: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.a)

    @property
    def overlap(self) -> np.ndarray:
        return self.v.conj().T @ self.w


def _cluster_bounds(values: np.ndarray) -> tuple[int, ...]:
    scale = max(float(np.max(np.abs(values))), 1e-300)
    bounds = [0]
    for k in range(1, len(values)):
        gap = abs(float(values[k - 1] - values[k]))
        if CLUSTER_TOL * scale < gap < CLUSTER_AMBIGUOUS * scale:
            raise GenericityUndeterminedError(
                f"near-degenerate spectrum: gap {gap:.3e} at position {k}"
            )
        if gap >= CLUSTER_AMBIGUOUS * scale:
            bounds.append(k)
    bounds.append(len(values))
    return tuple(bounds)


def spectral_profile(rho, sigma) -> SpectralProfile:
    rho = as_operator(rho)
    sigma = as_operator(sigma)
    a, v = rho.eig
    b, w = sigma.eig
    return SpectralProfile(
        a=np.clip(a, 0.0, None),
        b=np.clip(b, 0.0, None),
        v=v,
        w=w,
        i_bounds=_cluster_bounds(a),
        j_bounds=_cluster_bounds(b),
    )


@dataclass(frozen=True)
class MinorWitness:
    k: int
    best_abs_det: float
    rows: tuple[int, ...]
    cols: tuple[int, ...]


@dataclass(frozen=True)
class GenericityResult:
    holds: bool
    undetermined: bool
    witnesses: tuple[MinorWitness, ...]


def _prefix_sets(bounds: tuple[int, ...], k: int):
    """All index sets of size k squeezed between consecutive prefix blocks."""
    out = set()
    for r in range(1, len(bounds)):
        lo, hi = bounds[r - 1], bounds[r]
        if lo <= k <= hi:
            for combo in itertools.combinations(range(lo, hi), k - lo):
                out.add(tuple(range(lo)) + combo)
    return sorted(out)


def _suffix_sets(bounds: tuple[int, ...], k: int, d: int):
    """All index sets of size k squeezed between consecutive suffix blocks."""
    out = set()
    for s in range(1, len(bounds)):
        lo, hi = bounds[s - 1], bounds[s]
        # suffix {hi..d-1} is mandatory, the rest comes from block [lo, hi)
        need = k - (d - hi)
        if 0 <= need <= hi - lo:
            for combo in itertools.combinations(range(lo, hi), need):
                out.add(tuple(sorted(combo + tuple(range(hi, d)))))
    return sorted(out)


def _best_minor(overlap: np.ndarray, row_sets, col_sets, k: int) -> MinorWitness:
    best = MinorWitness(k, -1.0, (), ())
    for rows in row_sets:
        sub_rows = overlap[list(rows), :]
        for cols in col_sets:
            val = abs(np.linalg.det(sub_rows[:, list(cols)]))
            if val > best.best_abs_det:
                best = MinorWitness(k, float(val), tuple(rows), tuple(cols))
    return best


def _genericity(profile: SpectralProfile, required, col_sets_for) -> GenericityResult:
    ov = profile.overlap
    witnesses = []
    for k in sorted(required):
        rows = _prefix_sets(profile.i_bounds, k)
        cols = col_sets_for(k)
        witnesses.append(_best_minor(ov, rows, cols, k))
    holds = all(wit.best_abs_det > MINOR_OK for wit in witnesses)
    undetermined = (not holds) and all(
        wit.best_abs_det > MINOR_DEAD for wit in witnesses
    )
    return GenericityResult(holds, undetermined, tuple(witnesses))


def genericity_condition_b(profile: SpectralProfile) -> GenericityResult:
    """Prefix-minor genericity used by the alpha < 1 spectral formula."""
    required = set(profile.i_bounds[1:-1]) | set(profile.j_bounds[1:-1])
    return _genericity(
        profile, required, lambda k: _prefix_sets(profile.j_bounds, k)
    )


def genericity_condition_b_prime(profile: SpectralProfile) -> GenericityResult:
    """Suffix-minor variant used by the alpha > 1 branch (sigma invertible)."""
    d = profile.dim
    if profile.b[-1] <= DEFAULT_CUTOFF.relative_tau * max(profile.b[0], 0.0):
        raise SingularSigmaError("suffix genericity needs invertible sigma")
    required = set(profile.i_bounds[1:-1]) | {d - j for j in profile.j_bounds[1:-1]}
    return _genericity(
        profile, required, lambda k: _suffix_sets(profile.j_bounds, k, d)
    )


def z_alpha_eigenvalues(profile: SpectralProfile, alpha: float) -> np.ndarray:
    """Limit eigenvalues a_i^alpha b_i^(1-alpha) (or anti-paired for alpha > 1).

    Requires the matching genericity condition; raises when it fails or
    cannot be decided.
    """
    if not alpha > 0.0 or alpha == 1.0:
        raise BadAlphaError(f"alpha must be in (0,1) or (1,inf), got {alpha}")
    if alpha < 1.0:
        gen = genericity_condition_b(profile)
    else:
        gen = genericity_condition_b_prime(profile)
    if not gen.holds:
        if gen.undetermined:
            raise GenericityUndeterminedError(
                "overlap minors too close to zero to certify the spectral formula"
            )
        raise GenericityFailsError("genericity condition fails for this pair")
    a = profile.a
    b = profile.b if alpha < 1.0 else profile.b[::-1]
    thr_a = DEFAULT_CUTOFF.relative_tau * max(float(a[0]), 0.0)
    thr_b = DEFAULT_CUTOFF.relative_tau * max(float(np.max(b)), 0.0)
    out = np.zeros_like(a)
    for i in range(len(a)):
        if a[i] <= thr_a:
            continue
        if b[i] <= thr_b:
            # alpha < 1 only: positive power of a zero sigma-eigenvalue
            continue
        out[i] = a[i] ** alpha * b[i] ** (1.0 - alpha)
    return out


def _mp_q_alpha_z(a, b, overlap, alpha: float, z: float, tr_rho: float) -> float:
    """D_{alpha,z} in arbitrary precision via singular values of D_b O D_a.

    The inner matrix spans exp(range/z) orders of magnitude, far past
    float64; mpf exponents are unbounded so the computation stays exact
    to working precision.
    """
    thr_a = DEFAULT_CUTOFF.relative_tau * max(float(a[0]), 0.0)
    thr_b = DEFAULT_CUTOFF.relative_tau * max(float(b[0]), 0.0)
    ia = [i for i in range(len(a)) if a[i] > thr_a]
    ib = [j for j in range(len(b)) if b[j] > thr_b]
    span_a = math.log(a[ia[0]] / a[ia[-1]]) if len(ia) > 1 else 0.0
    span_b = math.log(b[ib[0]] / b[ib[-1]]) if len(ib) > 1 else 0.0
    gamma = alpha / (2.0 * z)
    beta = (1.0 - alpha) / (2.0 * z)
    range_nats = 2.0 * gamma * span_a + 2.0 * abs(beta) * span_b
    dps = int(range_nats / math.log(10.0)) + 50
    with mp.workdps(dps):
        da = [mp.mpf(a[i]) ** gamma for i in ia]
        db = [mp.mpf(b[j]) ** beta for j in ib]
        y = mp.matrix(len(ib), len(ia))
        for r, j in enumerate(ib):
            for c, i in enumerate(ia):
                o = overlap[i, j]  # overlap is <v_i|w_j>, row i, col j
                y[r, c] = mp.mpc(o.real, o.imag).conjugate() * db[r] * da[c]
        m = y.H * y
        m = (m + m.H) / 2
        eigs = mp.eighe(m, eigvals_only=True)
        q = mp.mpf(0)
        for mu in eigs:
            if mu > 0:
                q += mu ** z
        d_val = (mp.log(q) - mp.log(tr_rho)) / (alpha - 1.0)
        return float(d_val)


def zero_z_oracle(rho, sigma, alpha: float, z_nodes=ORACLE_Z_NODES) -> float:
    """Richardson extrapolation of D_{alpha,z} to z = 0 over a halving grid."""
    rho = as_operator(rho)
    sigma = as_operator(sigma)
    a, v = rho.eig
    b, w = sigma.eig
    overlap = v.conj().T @ w
    tr_rho = rho.trace
    d0, d1, d2 = (
        _mp_q_alpha_z(np.clip(a, 0.0, None), np.clip(b, 0.0, None), overlap, alpha, z, tr_rho)
        for z in z_nodes
    )
    r01 = 2.0 * d1 - d0
    r12 = 2.0 * d2 - d1
    return (4.0 * r12 - r01) / 3.0


@dataclass(frozen=True)
class ZeroZResult:
    value: float
    used_fallback: bool
    genericity: GenericityResult


def zero_z_divergence(rho, sigma, alpha: float) -> ZeroZResult:
    """D_{alpha,0} via the spectral formula, oracle fallback when non-generic."""
    if not alpha > 0.0 or alpha == 1.0:
        raise BadAlphaError(f"alpha must be in (0,1) or (1,inf), got {alpha}")
    rho = as_operator(rho)
    sigma = as_operator(sigma)
    profile = spectral_profile(rho, sigma)
    if alpha > 1.0:
        gen = genericity_condition_b_prime(profile)
    else:
        gen = genericity_condition_b(profile)
    if gen.holds:
        lam = z_alpha_eigenvalues(profile, alpha)
        q0 = float(np.sum(lam))
        if q0 <= 0.0:
            return ZeroZResult(math.inf, False, gen)
        d_val = (math.log(q0) - math.log(rho.trace)) / (alpha - 1.0)
        return ZeroZResult(d_val, False, gen)
    if gen.undetermined:
        raise GenericityUndeterminedError(
            "overlap minors in the dead band; cannot choose formula vs fallback"
        )
    return ZeroZResult(zero_z_oracle(rho, sigma, alpha), True, gen)


@dataclass(frozen=True)
class EqualityCaseResult:
    gap: float
    commuting_aligned: bool


def _joint_eigenvalue_pairs(rho: HermitianOperator, sigma: HermitianOperator):
    """Eigenvalue pairs (a_k, b_k) over a common eigenbasis of a commuting pair."""
    a, v = rho.eig
    pairs = []
    k = 0
    while k < rho.dim:
        # extend over the rho-eigenvalue cluster starting at k
        scale = max(abs(float(a[0])), 1e-300)
        kk = k + 1
        while kk < rho.dim and abs(float(a[kk - 1] - a[kk])) <= CLUSTER_AMBIGUOUS * scale:
            kk += 1
        block = v[:, k:kk]
        comp = block.conj().T @ sigma.entries @ block
        bvals = np.linalg.eigvalsh(0.5 * (comp + comp.conj().T))
        for bv in bvals:
            pairs.append((float(a[k]), float(bv)))
        k = kk
    return pairs


def equality_case_check(rho, sigma, direction: str) -> EqualityCaseResult:
    """Gap of the one-sided alpha -> 1 limit of D_{alpha,0} against Umegaki.

    direction="below": gap = D_Umegaki - lim_{alpha up to 1} D_{alpha,0},
    closed form (sum a_i ln b_i - Tr rho ln sigma) / Tr rho.
    direction="above": the mirrored gap with the anti-aligned pairing.
    The gap vanishes exactly when the pair commutes with the corresponding
    eigenvalue alignment, which the boolean reports independently.
    """
    if direction not in ("below", "above"):
        raise ValueError(f"direction must be 'below' or 'above', got {direction!r}")
    rho = as_operator(rho)
    sigma = as_operator(sigma)
    profile = spectral_profile(rho, sigma)
    if profile.b[-1] <= DEFAULT_CUTOFF.relative_tau * max(profile.b[0], 0.0):
        raise SingularSigmaError("equality-case analysis needs invertible sigma")
    gen = (
        genericity_condition_b(profile)
        if direction == "below"
        else genericity_condition_b_prime(profile)
    )
    if not gen.holds:
        if gen.undetermined:
            raise GenericityUndeterminedError("cannot certify the limit closed form")
        raise GenericityFailsError(f"genericity fails for direction={direction}")
    a = profile.a
    b = profile.b if direction == "below" else profile.b[::-1]
    tr_rho = float(np.sum(a))
    paired = float(np.sum(a * np.log(b)))
    tr_rho_log_sigma = float(
        np.real(np.trace(rho.entries @ logn(sigma).entries))
    )
    if direction == "below":
        gap = (paired - tr_rho_log_sigma) / tr_rho
    else:
        gap = (tr_rho_log_sigma - paired) / tr_rho
    scale = max(rho.spectral_norm * sigma.spectral_norm, 1e-300)
    aligned = False
    if commutator_spectral_norm(rho, sigma) <= 1e-10 * scale:
        pairs = _joint_eigenvalue_pairs(rho, sigma)
        sign = 1.0 if direction == "below" else -1.0
        aligned = all(
            sign * (p1[0] - p2[0]) * (p1[1] - p2[1]) >= -1e-8 * scale
            for p1, p2 in itertools.combinations(pairs, 2)
        )
    return EqualityCaseResult(gap=gap, commuting_aligned=aligned)


@dataclass(frozen=True)
class ReducingSubspaceResult:
    trace_attains_topk: bool
    reduces: bool


def reducing_subspace_check(A, P: Projection) -> ReducingSubspaceResult:
    """Does Tr AP attain the top-k eigenvalue sum, and does P reduce A?

    The rigidity statement under test: attaining the top-k sum forces
    AP = PAP, so the first flag implies the second.
    """
    A = as_operator(A)
    k = P.rank
    w = A.eigenvalues
    top_k = float(np.sum(w[:k])) if k > 0 else 0.0
    tr_ap = float(np.real(np.trace(A.entries @ P.entries)))
    attains = abs(tr_ap - top_k) <= 1e-8
    ap = A.entries @ P.entries
    pap = P.entries @ ap
    reduces = float(np.linalg.norm(ap - pap, 2)) <= 1e-8
    return ReducingSubspaceResult(trace_attains_topk=attains, reduces=reduces)
