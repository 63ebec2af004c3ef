"""Scrambling measure and its Maligranda-derived lower/upper bounds.

For a reference state rho, a time-evolved local operator W(t) and a static
one V, the scrambling measure is the rho-weighted Hilbert-Schmidt norm of
their commutator,

    C(t) = ||[W(t), V]||_2^2,      ||O||_2^2 = Tr[rho O^dag O].

Setting A = V W(t) and B = W(t) V, the same quantity expands into second
moments,

    C = <A^dag A> + <B^dag B> - <A^dag B> - <B^dag A>,

which is the basis of the dual-path consistency check: both routes are
always computed and must agree.

The Maligranda inequality for nonzero vectors x, y in a normed space,

    (||x-y|| - | ||x||-||y|| |) / min(||x||,||y||)
        <= || x/||x|| - y/||y|| ||
        <= (||x-y|| + | ||x||-||y|| |) / max(||x||,||y||),

applied to x = (A - <A>)|psi> and y = (B - <B>)|psi> in the rho-weighted
operator inner product <X, Y> = Tr[rho X^dag Y], sandwiches C between

    L = dA dB (J^2 - 2) + ||A||_2^2 + ||B||_2^2 - 2 Re[<B^dag><A>]
    U = dA dB (K^2 - 2) + ||A||_2^2 + ||B||_2^2 - 2 Re[<B^dag><A>]

with dO = sqrt(<O^dag O> - |<O>|^2) and the bound factors

    J = (d(A-B) - |dA - dB|) / min(dA, dB)
    K = (d(A-B) + |dA - dB|) / max(dA, dB).

For a singular rho the weighted norm is only a seminorm; points where
min(dA, dB) falls below DEFINED_EPS are flagged undefined instead of
divided through.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvariantViolation
from .states import DensityState
from .tensor_core import CMatrix, max_abs

# Variances below this count as zero: the bounds are then undefined.
DEFINED_EPS = 1e-12
# Max allowed |commutator-path C - moment-path C| before a run aborts.
DUAL_PATH_TOL = 1e-9
# C may dip this far below zero from roundoff; anything worse is a bug.
NEGATIVE_C_TOL = 1e-12
# Tolerances used by the verification suites.
SANDWICH_TOL = 1e-9
COINCIDENCE_TOL = 1e-8
CEILING_TOL = 1e-9
OTOC_TOL = 1e-9
UNITARY_HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of A = V W(t), B = W(t) V under rho."""

    mean_a: complex
    mean_b: complex
    norm2_a: float
    norm2_b: float
    cross: complex          # <A^dag B>
    delta_a: float
    delta_b: float
    delta_amb: float        # variance of A - B = -[W(t), V]


@dataclass(frozen=True)
class ScramblingRecord:
    """Everything reported for one time point."""

    t: float
    c: float
    lower: float
    upper: float
    j_factor: float
    k_factor: float
    delta_a: float
    delta_b: float
    bounds_defined: bool


def _check_dims(rho_mat: np.ndarray, o: np.ndarray) -> None:
    if o.shape != rho_mat.shape:
        raise DimensionMismatch(
            f"operator shape {o.shape} does not match state shape {rho_mat.shape}"
        )


def _trace_product(x: np.ndarray, y: np.ndarray) -> complex:
    """Tr[x y] without forming the product matrix."""
    return complex(np.einsum("ij,ji->", x, y))


def expectation(rho: DensityState, o: CMatrix) -> complex:
    """<O> = Tr[rho O]. Real up to roundoff when O is Hermitian."""
    _check_dims(rho.rho, o)
    return _trace_product(rho.rho, o)


def weighted_norm_sq(rho: DensityState, o: CMatrix) -> float:
    """||O||_2^2 = Tr[rho O^dag O] >= 0, clamping roundoff-negative values."""
    _check_dims(rho.rho, o)
    # Tr[rho O^dag O] = Tr[O rho O^dag] = sum (O rho) * conj(O)
    val = float(np.einsum("ij,ij->", o @ rho.rho, o.conj()).real)
    return _clamp_nonneg(val, "weighted norm")


def _clamp_nonneg(val: float, label: str, tol: float = NEGATIVE_C_TOL) -> float:
    if val < -tol:
        raise InvariantViolation(f"{label} is negative beyond roundoff: {val:.3e}")
    return max(val, 0.0)


def _delta_from(norm2: float, mean: complex) -> float:
    return math.sqrt(max(norm2 - abs(mean) ** 2, 0.0))


def variance(rho: DensityState, o: CMatrix) -> float:
    """dO = sqrt(<O^dag O> - |<O>|^2), the rho-weighted spread of O.

    Uses the conjugated second moment so it is well defined for
    non-Hermitian operators; zero exactly when (O - <O>) annihilates the
    support of rho.
    """
    return _delta_from(weighted_norm_sq(rho, o), expectation(rho, o))


def compute_moments(rho: DensityState, w_t: CMatrix, v0: CMatrix) -> MomentSet:
    """All moments of A = V W(t), B = W(t) V needed for the bounds."""
    _check_dims(rho.rho, w_t)
    _check_dims(rho.rho, v0)
    a = v0 @ w_t
    b = w_t @ v0
    mean_a = expectation(rho, a)
    mean_b = expectation(rho, b)
    norm2_a = weighted_norm_sq(rho, a)
    norm2_b = weighted_norm_sq(rho, b)
    # <A^dag B> = Tr[B rho A^dag] = sum (B rho) * conj(A)
    cross = complex(np.einsum("ij,ij->", b @ rho.rho, a.conj()))
    d = a - b
    delta_amb = _delta_from(weighted_norm_sq(rho, d), expectation(rho, d))
    return MomentSet(
        mean_a=mean_a,
        mean_b=mean_b,
        norm2_a=norm2_a,
        norm2_b=norm2_b,
        cross=cross,
        delta_a=_delta_from(norm2_a, mean_a),
        delta_b=_delta_from(norm2_b, mean_b),
        delta_amb=delta_amb,
    )


def scrambling_commutator(rho: DensityState, w_t: CMatrix, v0: CMatrix) -> float:
    """C from the explicit commutator: Tr[rho K^dag K], K = W(t)V - VW(t)."""
    _check_dims(rho.rho, w_t)
    _check_dims(rho.rho, v0)
    k = w_t @ v0 - v0 @ w_t
    val = float(np.einsum("ij,ij->", k @ rho.rho, k.conj()).real)
    return _clamp_nonneg(val, "scrambling measure")


def scrambling_moments(m: MomentSet) -> float:
    """C from the moment expansion <A^dag A> + <B^dag B> - 2 Re<A^dag B>."""
    return m.norm2_a + m.norm2_b - 2.0 * m.cross.real


def maligranda_factors(m: MomentSet) -> tuple[float, float, bool]:
    """Bound factors (J, K, defined).

    Undefined (min variance below DEFINED_EPS) is a value, not an error:
    J and K come back as NaN with the flag False.
    """
    lo = min(m.delta_a, m.delta_b)
    hi = max(m.delta_a, m.delta_b)
    if lo <= DEFINED_EPS:
        return math.nan, math.nan, False
    gap = abs(m.delta_a - m.delta_b)
    j = (m.delta_amb - gap) / lo
    k = (m.delta_amb + gap) / hi
    return j, k, True


def scrambling_bounds(m: MomentSet) -> tuple[float, float, bool]:
    """Lower/upper bounds (L, U, defined) sandwiching the scrambling measure."""
    j, k, defined = maligranda_factors(m)
    if not defined:
        return math.nan, math.nan, False
    base = m.norm2_a + m.norm2_b - 2.0 * (m.mean_b.conjugate() * m.mean_a).real
    prod = m.delta_a * m.delta_b
    return prod * (j * j - 2.0) + base, prod * (k * k - 2.0) + base, True


def is_unitary_hermitian(o: CMatrix, tol: float = UNITARY_HERMITIAN_TOL) -> bool:
    """True iff O = O^dag and O^2 = I within tolerance."""
    o = np.asarray(o)
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {o.shape}")
    if max_abs(o - o.conj().T) > tol:
        return False
    return max_abs(o @ o - np.eye(o.shape[0])) <= tol


def block_max_bound(m_terms: int, n_terms: int, pairwise_max: float) -> float:
    """Ceiling n^2 m^2 M for block operators with m and n single-site terms,
    where M is the largest scrambling among the single-term pairs."""
    if m_terms < 1 or n_terms < 1:
        raise ValueError("term counts must be >= 1")
    if pairwise_max < 0:
        raise ValueError("pairwise maximum must be >= 0")
    return float(n_terms**2 * m_terms**2 * pairwise_max)


def assemble_record(t: float, m: MomentSet, c_commutator: float) -> ScramblingRecord:
    """Combine both C routes plus the bounds into one record.

    Raises :class:`InvariantViolation` if the two routes disagree beyond
    DUAL_PATH_TOL or the bounds fail to sandwich C; either indicates a bug,
    not an interesting data point.
    """
    c_mom = scrambling_moments(m)
    if abs(c_commutator - c_mom) > DUAL_PATH_TOL:
        raise InvariantViolation(
            f"dual-path disagreement at t={t}: commutator route {c_commutator!r}"
            f" vs moment route {c_mom!r}"
        )
    c = _clamp_nonneg(c_commutator, "scrambling measure")
    j, k, defined = maligranda_factors(m)
    lower, upper, _ = scrambling_bounds(m)
    if defined and not (lower - SANDWICH_TOL <= c <= upper + SANDWICH_TOL):
        raise InvariantViolation(
            f"bounds fail to sandwich C at t={t}: L={lower!r} C={c!r} U={upper!r}"
        )
    return ScramblingRecord(
        t=float(t),
        c=c,
        lower=lower,
        upper=upper,
        j_factor=j,
        k_factor=k,
        delta_a=m.delta_a,
        delta_b=m.delta_b,
        bounds_defined=defined,
    )


def record_at(rho: DensityState, cache, w0: CMatrix, v0: CMatrix, t: float) -> ScramblingRecord:
    """Reference-path record: evolve W explicitly, then apply the formulas.

    Cubic in the dimension per call; the scenario runner uses the
    eigenbasis engine instead, which this path cross-validates in tests.
    """
    from .dynamics import heisenberg_evolve  # local import; dynamics is a peer

    w_t = heisenberg_evolve(cache, w0, t)
    m = compute_moments(rho, w_t, v0)
    return assemble_record(t, m, scrambling_commutator(rho, w_t, v0))
