"""Hermitian operator algebra at desk scale.

Supported real powers, support projections, projection meet, PSD order
checks, logs on the support, and the pinched exponential needed by the
large-z divergence limit.  Everything runs on exact eigendecompositions
of d x d Hermitian matrices with a relative cutoff standing in for exact
spectral projections.  All logs are natural, so values are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    BadParamsError,
    DimMismatchError,
    DimTooLargeError,
    MalformedInputError,
    NotPSDError,
    ZeroOperatorError,
)

#: absolute tolerance for the hermiticity check on construction
HERMITICITY_ATOL = 1e-10

#: a matrix is rejected as not PSD when min eig < -PSD_REJECT_RTOL * max eig
PSD_REJECT_RTOL = 1e-8

#: slack used by support-inclusion tests (rho^0 <= sigma^0 and friends)
SUPPORT_TEST_SLACK = 1e-8

#: eigenvalues of P+Q within this distance of 2 span the meet of P and Q
MEET_EIGENVALUE_TOL = 1e-8

MAX_DIM = 64


@dataclass(frozen=True)
class SupportCutoff:
    """Relative threshold below which eigenvalues count as exact zeros."""

    relative_tau: float = 1e-12

    def threshold(self, eigenvalues: np.ndarray) -> float:
        lam_max = float(np.max(eigenvalues)) if eigenvalues.size else 0.0
        return self.relative_tau * max(lam_max, 0.0)


DEFAULT_CUTOFF = SupportCutoff()


class HermitianOperator:
    """A square complex Hermitian matrix with a cached eigendecomposition.

    Eigenvalues are stored descending; the decomposition is computed once
    and reused by every operation, which keeps repeated divergence
    evaluations on the same pair cheap and reproducible.
    """

    def __init__(self, entries) -> None:
        m = np.asarray(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise MalformedInputError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] > MAX_DIM:
            raise DimTooLargeError(
                f"dimension {m.shape[0]} exceeds the supported maximum {MAX_DIM}"
            )
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITICITY_ATOL):
            gap = float(np.max(np.abs(m - m.conj().T)))
            raise MalformedInputError(f"matrix is not Hermitian (deviation {gap:.3e})")
        # symmetrize away the sub-tolerance residue so eigh sees an exact input
        self.entries = 0.5 * (m + m.conj().T)
        self.dim = int(m.shape[0])

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        w, v = np.linalg.eigh(self.entries)
        return np.ascontiguousarray(w[::-1]), np.ascontiguousarray(v[:, ::-1])

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eig[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.eig[1]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    @property
    def spectral_norm(self) -> float:
        w = self.eigenvalues
        return float(max(abs(w[0]), abs(w[-1]))) if w.size else 0.0

    def __repr__(self) -> str:  # pragma: no cover
        return f"HermitianOperator(dim={self.dim}, trace={self.trace:.6g})"


class Projection(HermitianOperator):
    """Hermitian idempotent; rank counts eigenvalues at 1."""

    def __init__(self, entries, rank: int | None = None) -> None:
        super().__init__(entries)
        p = self.entries
        if not np.allclose(p @ p, p, rtol=0.0, atol=1e-10):
            raise MalformedInputError("matrix is not idempotent within 1e-10")
        self.rank = int(round(self.trace)) if rank is None else int(rank)


def as_operator(x) -> HermitianOperator:
    """Coerce a matrix-like into a HermitianOperator (no-op if it is one)."""
    return x if isinstance(x, HermitianOperator) else HermitianOperator(x)


def _psd_eigensystem(A: HermitianOperator, clamp: bool = True):
    """Eigensystem of A with the PSD precondition enforced.

    Rejects when the most negative eigenvalue is below -PSD_REJECT_RTOL
    relative to the largest one; smaller negative dust is clamped to 0.
    """
    w, v = A.eig
    lam_max = max(float(w[0]), 0.0)
    if float(w[-1]) < -PSD_REJECT_RTOL * lam_max:
        raise NotPSDError(
            f"min eigenvalue {w[-1]:.3e} below -{PSD_REJECT_RTOL:g} * {lam_max:.3e}"
        )
    if clamp:
        w = np.maximum(w, 0.0)
    return w, v


def supported_power(A, x: float, cutoff: SupportCutoff = DEFAULT_CUTOFF) -> HermitianOperator:
    """Real power taken on the support only: sum of s^x P_s over s > cutoff.

    For x = 0 this is the support projection; negative powers invert on the
    support and vanish on the kernel, so A^-x A^x equals the support
    projection rather than the identity.
    """
    A = as_operator(A)
    w, v = _psd_eigensystem(A)
    thr = cutoff.threshold(w)
    kept = w > thr
    powered = np.zeros_like(w)
    if x == 0.0:
        powered[kept] = 1.0
    else:
        powered[kept] = w[kept] ** float(x)
    m = (v * powered) @ v.conj().T
    return HermitianOperator(0.5 * (m + m.conj().T))


def support_projection(A, cutoff: SupportCutoff = DEFAULT_CUTOFF) -> Projection:
    """Projection onto the span of eigenvectors above the cutoff."""
    A = as_operator(A)
    w, v = _psd_eigensystem(A)
    kept = w > cutoff.threshold(w)
    vk = v[:, kept]
    p = vk @ vk.conj().T
    return Projection(0.5 * (p + p.conj().T), rank=int(np.count_nonzero(kept)))


def projection_meet(P: Projection, Q: Projection) -> Projection:
    """Projection onto range(P) intersect range(Q).

    Computed as the eigenspace of P+Q with eigenvalue within
    MEET_EIGENVALUE_TOL of 2.
    """
    if P.dim != Q.dim:
        raise DimMismatchError(f"dim {P.dim} vs {Q.dim}")
    w, v = np.linalg.eigh(P.entries + Q.entries)
    kept = np.abs(w - 2.0) <= MEET_EIGENVALUE_TOL
    vk = v[:, kept]
    m = vk @ vk.conj().T
    return Projection(0.5 * (m + m.conj().T), rank=int(np.count_nonzero(kept)))


def psd_leq(A, B, slack: float | None = None) -> bool:
    """PSD-order test A <= B, true when min eig of B-A >= -slack."""
    A = as_operator(A)
    B = as_operator(B)
    if A.dim != B.dim:
        raise DimMismatchError(f"dim {A.dim} vs {B.dim}")
    if slack is None:
        slack = 1e-10 * B.spectral_norm
    w = np.linalg.eigvalsh(B.entries - A.entries)
    return bool(w[0] >= -slack)


def support_leq(A, B, cutoff: SupportCutoff = DEFAULT_CUTOFF) -> bool:
    """Support inclusion A^0 <= B^0 with the standard slack."""
    return psd_leq(
        support_projection(A, cutoff), support_projection(B, cutoff), SUPPORT_TEST_SLACK
    )


def logn(A, cutoff: SupportCutoff = DEFAULT_CUTOFF) -> HermitianOperator:
    """Natural log on the support, zero on the kernel."""
    A = as_operator(A)
    w, v = _psd_eigensystem(A)
    kept = w > cutoff.threshold(w)
    vals = np.zeros_like(w)
    vals[kept] = np.log(w[kept])
    m = (v * vals) @ v.conj().T
    return HermitianOperator(0.5 * (m + m.conj().T))


def pinch_exp(rho, sigma, alpha: float, cutoff: SupportCutoff = DEFAULT_CUTOFF) -> float:
    """Large-z limit kernel: Tr P exp(alpha P L_rho P + (1-alpha) P L_sigma P).

    P is the meet of the two supports and L denotes the log on the support.
    Returns +inf when alpha > 1 and the support of rho is not contained in
    that of sigma.  When the supports are disjoint (P = 0, possible only for
    alpha < 1 here) the trace is empty and the value is 0.
    """
    rho = as_operator(rho)
    sigma = as_operator(sigma)
    if rho.dim != sigma.dim:
        raise DimMismatchError(f"dim {rho.dim} vs {sigma.dim}")
    p_rho = support_projection(rho, cutoff)
    p_sigma = support_projection(sigma, cutoff)
    if p_rho.rank == 0 or p_sigma.rank == 0:
        raise ZeroOperatorError("pinch_exp needs nonzero rho and sigma")
    if alpha > 1.0 and not psd_leq(p_rho, p_sigma, SUPPORT_TEST_SLACK):
        return math.inf
    P = projection_meet(p_rho, p_sigma)
    if P.rank == 0:
        return 0.0
    pm = P.entries
    m = alpha * (pm @ logn(rho, cutoff).entries @ pm)
    m += (1.0 - alpha) * (pm @ logn(sigma, cutoff).entries @ pm)
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    weights = np.real(np.einsum("ij,jk,ki->i", v.conj().T, pm, v))
    return float(np.sum(np.exp(w) * np.clip(weights, 0.0, None)))


def trace_power(A, z: float, cutoff: SupportCutoff = DEFAULT_CUTOFF) -> float:
    """Sum of z-th powers of the above-cutoff eigenvalues."""
    if not z > 0.0:
        raise BadParamsError(f"trace_power needs z > 0, got {z}")
    A = as_operator(A)
    w, _ = _psd_eigensystem(A)
    kept = w > cutoff.threshold(w)
    return float(np.sum(w[kept] ** float(z)))


def commutator_spectral_norm(A, B) -> float:
    """Spectral norm of [A, B]; zero exactly when the pair commutes."""
    A = as_operator(A)
    B = as_operator(B)
    c = A.entries @ B.entries - B.entries @ A.entries
    return float(np.linalg.norm(c, 2))
