"""Dense complex linear-algebra kernel.

All operators in the package are square complex matrices in row-major
(C-contiguous) ``numpy.ndarray`` form, ``complex128`` throughout. This
module wraps the handful of primitives everything else is built from:
Kronecker products, adjoints, Hermitian eigendecomposition and spectral
functions f(H) = Q f(diag) Q^dag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NotHermitian

# Alias documenting intent; all operators are square complex matrices.
CMatrix = np.ndarray

# Max-norm tolerance below which a matrix counts as Hermitian.
HERMITICITY_TOL = 1e-10


def as_cmatrix(a) -> CMatrix:
    """Coerce to a square complex128 matrix, validating shape and finiteness."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains non-finite entries")
    return m


def kron(a: CMatrix, b: CMatrix) -> CMatrix:
    """Kronecker product a (x) b.

    Entry ((i*n + k), (j*n + l)) equals a[i, j] * b[k, l] with n = dim(b).
    """
    return np.kron(np.asarray(a, dtype=np.complex128),
                   np.asarray(b, dtype=np.complex128))


def adjoint(a: CMatrix) -> CMatrix:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def max_abs(a) -> float:
    """Max-norm ||A||_max; 0 for empty input."""
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition A = Q diag(eigenvalues) Q^dag of a Hermitian matrix.

    ``eigenvalues`` is real and ascending; the columns of ``eigenvectors``
    are orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def hermitian_eigendecompose(a: CMatrix, tol: float = HERMITICITY_TOL) -> HermitianEigen:
    """Eigendecompose a Hermitian matrix.

    The input is symmetrized as (A + A^dag)/2 before factorization to absorb
    roundoff; anything farther than ``tol`` from Hermitian raises
    :class:`NotHermitian` since that indicates a construction bug upstream.
    """
    m = as_cmatrix(a)
    resid = max_abs(m - m.conj().T)
    if resid > tol:
        raise NotHermitian(
            f"matrix is not Hermitian: max |A - A^dag| = {resid:.3e} > {tol:.1e}"
        )
    m = (m + m.conj().T) / 2
    vals, vecs = np.linalg.eigh(m)
    return HermitianEigen(eigenvalues=vals, eigenvectors=vecs)


def spectral_function(e: HermitianEigen, f: Callable[[np.ndarray], np.ndarray]) -> CMatrix:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Returns Q diag(f(eigenvalues)) Q^dag. ``f`` is applied to the whole
    eigenvalue vector and must return finite values for each eigenvalue.
    """
    vals = np.asarray(f(e.eigenvalues), dtype=np.complex128)
    if vals.shape != e.eigenvalues.shape:
        raise ValueError("spectral function must map the eigenvalue vector elementwise")
    if not np.isfinite(vals).all():
        raise ValueError("spectral function produced non-finite values")
    q = e.eigenvectors
    return (q * vals) @ q.conj().T
