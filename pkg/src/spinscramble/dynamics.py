"""Heisenberg-picture evolution from a cached Hamiltonian eigendecomposition.

One O(D^3) factorization of H buys arbitrarily many time points: the
propagator is U(t) = Q exp(-i lambda t) Q^dag, and conjugating an operator
in the eigenbasis is an elementwise phase twist, so stepping an already
transformed operator costs O(D^2).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .tensor_core import CMatrix, HermitianEigen, hermitian_eigendecompose, spectral_function

WORKERS_ENV = "SPINSCRAMBLE_WORKERS"


def worker_count() -> int:
    """Parallelism cap: SPINSCRAMBLE_WORKERS if set, else the CPU count."""
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            n = int(raw)
        except ValueError as exc:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """Map preserving input order; thread-parallel when workers > 1.

    Every item is computed by a pure function, so the result is bitwise
    independent of the scheduling.
    """
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid (units of 1/omega_0 with hbar = 1)."""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ValueError("grid bounds must be finite")
        if self.start < 0:
            raise ValueError(f"grid start must be >= 0, got {self.start}")
        if self.stop <= self.start:
            raise ValueError(f"grid stop must exceed start ({self.start} .. {self.stop})")
        if self.points < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.points}")

    def times(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class EvolutionCache:
    """Shared, immutable eigendecomposition of the model Hamiltonian."""

    h_eigen: HermitianEigen
    dim: int

    @classmethod
    def from_hamiltonian(cls, h: CMatrix) -> "EvolutionCache":
        eig = hermitian_eigendecompose(h)
        return cls(h_eigen=eig, dim=eig.dim)

    def phases(self, t: float) -> np.ndarray:
        """exp(+i lambda t) per eigenvalue."""
        return np.exp(1j * self.h_eigen.eigenvalues * t)

    def to_eigenbasis(self, op: CMatrix) -> CMatrix:
        q = self.h_eigen.eigenvectors
        return q.conj().T @ op @ q

    def from_eigenbasis(self, op: CMatrix) -> CMatrix:
        q = self.h_eigen.eigenvectors
        return q @ op @ q.conj().T


def propagator(cache: EvolutionCache, t: float) -> CMatrix:
    """Unitary U(t) = exp(-i H t)."""
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return spectral_function(cache.h_eigen, lambda lam: np.exp(-1j * lam * t))


def _twist(w_eig: CMatrix, phases: np.ndarray) -> CMatrix:
    """Heisenberg step in the eigenbasis: entry (j,k) picks up phase_j * conj(phase_k)."""
    return (phases[:, None] * w_eig) * phases.conj()[None, :]


def heisenberg_evolve(cache: EvolutionCache, w0: CMatrix, t: float) -> CMatrix:
    """W(t) = U^dag(t) W(0) U(t); unitary conjugation preserves the spectrum."""
    if w0.shape != (cache.dim, cache.dim):
        raise DimensionMismatch(
            f"operator shape {w0.shape} does not match cache dimension {cache.dim}"
        )
    return cache.from_eigenbasis(_twist(cache.to_eigenbasis(w0), cache.phases(t)))


def evolve_series(cache: EvolutionCache, w0: CMatrix, grid: TimeGrid) -> list[tuple[float, CMatrix]]:
    """W(t) on every grid point, in grid order.

    The operator is transformed to the eigenbasis once; points are then
    independent and evaluated in parallel subject to the worker cap.
    """
    if w0.shape != (cache.dim, cache.dim):
        raise DimensionMismatch(
            f"operator shape {w0.shape} does not match cache dimension {cache.dim}"
        )
    w_eig = cache.to_eigenbasis(w0)

    def at(t: float) -> tuple[float, CMatrix]:
        return float(t), cache.from_eigenbasis(_twist(w_eig, cache.phases(t)))

    return parallel_map(at, list(grid.times()))
