"""Reference states: the polarized pure product state and Gibbs thermal states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_core import CMatrix, HermitianEigen, max_abs

# Eigenvalues of rho in [-PSD_TOL, 0) count as roundoff, not negativity.
PSD_TOL = 1e-10


@dataclass(frozen=True)
class StatePrep:
    """Which reference state to prepare: 'pure' or 'thermal' (with beta > 0)."""

    kind: str
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in ("pure", "thermal"):
            raise ValueError(f"kind must be 'pure' or 'thermal', got {self.kind!r}")
        if self.kind == "thermal":
            beta = self.beta
            if (isinstance(beta, bool) or not isinstance(beta, (int, float))
                    or not np.isfinite(beta) or beta <= 0):
                raise ValueError(f"thermal preparation needs finite beta > 0, got {beta!r}")

    @classmethod
    def pure(cls) -> "StatePrep":
        return cls(kind="pure")

    @classmethod
    def thermal(cls, beta: float) -> "StatePrep":
        return cls(kind="thermal", beta=beta)


@dataclass(frozen=True)
class DensityState:
    """A density matrix: trace one, Hermitian, positive semidefinite.

    Trace and Hermiticity are checked at construction; the (cubic-cost)
    eigenvalue positivity check is deferred to :meth:`validate`.
    """

    rho: CMatrix

    def __post_init__(self):
        tr = np.trace(self.rho)
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"density matrix trace {tr} is not 1")
        herm = max_abs(self.rho - self.rho.conj().T)
        if herm > 1e-10:
            raise ValueError(f"density matrix not Hermitian (residual {herm:.3e})")

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def validate(self) -> None:
        """Full invariant check including positive semidefiniteness."""
        smallest = float(np.linalg.eigvalsh(self.rho)[0])
        if smallest < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {smallest:.3e}")


def pure_state_index(n_outer: int) -> int:
    """Basis index of |up>_a (x) |down>^N: all outer bits set."""
    return 2**n_outer - 1


def pure_product_state(n_outer: int) -> DensityState:
    """Rank-1 projector onto the ancilla-up, outers-down product state."""
    dim = 2 ** (n_outer + 1)
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[pure_state_index(n_outer), pure_state_index(n_outer)] = 1.0
    return DensityState(rho=rho)


def gibbs_weights(eigenvalues: np.ndarray, beta: float) -> np.ndarray:
    """Normalized Boltzmann weights exp(-beta (E - E_min)) / Z.

    The ground-state shift makes the exponentials overflow-free for any
    beta > 0; underflow of high-energy weights to zero is harmless.
    """
    if not np.isfinite(beta) or beta <= 0:
        raise ValueError("beta must be finite and > 0")
    w = np.exp(-beta * (eigenvalues - eigenvalues[0]))
    return w / w.sum()


def gibbs_state(h_eigen: HermitianEigen, beta: float) -> DensityState:
    """Thermal state exp(-beta H)/Tr[exp(-beta H)] from the H eigenbasis."""
    w = gibbs_weights(h_eigen.eigenvalues, beta)
    q = h_eigen.eigenvectors
    rho = (q * w) @ q.conj().T
    # symmetrize away the matmul roundoff so downstream Hermiticity checks
    # see an exactly Hermitian state
    rho = (rho + rho.conj().T) / 2
    return DensityState(rho=rho)
