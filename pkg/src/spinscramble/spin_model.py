"""Spin-star model construction: Pauli operators, site embeddings, Hamiltonian.

Conventions, fixed so emitted data is bit-exact reproducible:

* Spin operators are full Pauli matrices (unitary, Hermitian, squaring to
  the identity), not spin-1/2 halves.
* Site 0 is the central ancilla and occupies the leftmost Kronecker
  factor; outer qubits are sites 1..N left to right. Basis index
  b = sum_k q_k 2^(N-k) with q = 0 meaning spin-up (sigma_z eigenvalue +1).
* hbar = 1; frequencies and couplings are dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SiteOutOfRange
from .tensor_core import CMatrix, kron

AXES = ("x", "y", "z")

# Hard cap on the Hilbert-space dimension 2^(N+1); guards against runaway
# memory from a typo'd qubit count.
MAX_DIM = 4096

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
_ID2 = np.eye(2, dtype=np.complex128)


def pauli(axis: str) -> CMatrix:
    """The 2x2 Pauli matrix for axis 'x', 'y' or 'z'."""
    if axis not in _PAULI:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected one of {AXES}")
    return _PAULI[axis].copy()


@dataclass(frozen=True)
class SpinStarParams:
    """Model definition: N outer qubits around one ancilla.

    omega_a / omega_s are the ancilla / outer-qubit frequencies, j1 the
    isotropic ancilla-outer coupling and j2 the Heisenberg ring coupling
    between neighbouring outer qubits (periodic).
    """

    n_outer: int
    omega_a: float = 1.0
    omega_s: float = 1.0
    j1: float = 1.0
    j2: float = 0.5

    def __post_init__(self):
        if self.n_outer < 1:
            raise ValueError(f"n_outer must be >= 1, got {self.n_outer}")
        if self.dim > MAX_DIM:
            raise ValueError(
                f"Hilbert dimension 2^{self.n_outer + 1} exceeds the {MAX_DIM} cap"
            )
        for field in ("omega_a", "omega_s", "j1", "j2"):
            if not np.isfinite(getattr(self, field)):
                raise ValueError(f"{field} must be finite")

    @property
    def n_sites(self) -> int:
        return self.n_outer + 1

    @property
    def dim(self) -> int:
        return 2 ** (self.n_outer + 1)


@dataclass(frozen=True)
class SiteAxis:
    """One single-site Pauli term: site index (0 = ancilla) and axis."""

    site: int
    axis: str

    def __post_init__(self):
        if self.site < 0:
            raise ValueError(f"site must be >= 0, got {self.site}")
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")


@dataclass(frozen=True)
class OperatorSpec:
    """A local operator given as a unit-weight sum of single-site Paulis.

    A single-term spec realizes to a unitary-Hermitian matrix; multi-term
    specs are Hermitian but generally not unitary.
    """

    terms: tuple[SiteAxis, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("operator spec needs at least one term")
        seen = set()
        for t in self.terms:
            key = (t.site, t.axis)
            if key in seen:
                raise ValueError(f"duplicate term (site={t.site}, axis={t.axis})")
            seen.add(key)

    @classmethod
    def from_pairs(cls, pairs) -> "OperatorSpec":
        return cls(terms=tuple(SiteAxis(site=s, axis=a) for s, a in pairs))

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def single_term(self) -> bool:
        return len(self.terms) == 1

    @property
    def sites(self) -> frozenset[int]:
        return frozenset(t.site for t in self.terms)

    def max_site(self) -> int:
        return max(t.site for t in self.terms)


def _embed(placed: dict[int, np.ndarray], n_outer: int) -> CMatrix:
    """Kron chain over the N+1 sites with 2x2 blocks at the given sites."""
    out = np.ones((1, 1), dtype=np.complex128)
    for k in range(n_outer + 1):
        out = kron(out, placed.get(k, _ID2))
    return out


def embed_site(sa: SiteAxis, n_outer: int) -> CMatrix:
    """Single-site Pauli acting on the full 2^(N+1)-dimensional space."""
    if sa.site > n_outer:
        raise SiteOutOfRange(
            f"site {sa.site} does not exist in a model with {n_outer} outer qubits"
        )
    return _embed({sa.site: _PAULI[sa.axis]}, n_outer)


def realize_operator(spec: OperatorSpec, n_outer: int) -> CMatrix:
    """Sum of embedded Pauli terms. Always Hermitian; unitary iff single-term."""
    out = embed_site(spec.terms[0], n_outer)
    for t in spec.terms[1:]:
        out += embed_site(t, n_outer)
    return out


def total_spin(axis: str, n_outer: int) -> CMatrix:
    """Total-spin component over all sites including the ancilla."""
    spec = OperatorSpec.from_pairs((k, axis) for k in range(n_outer + 1))
    return realize_operator(spec, n_outer)


def build_hamiltonian(p: SpinStarParams) -> CMatrix:
    """Dense spin-star Hamiltonian.

    H = omega_a S_z^a + omega_s sum_i S_z^i
        + j1 sum_i (S_x^a S_x^i + S_y^a S_y^i + S_z^a S_z^i)
        + j2 sum_{i=1..N} vec(S)^i . vec(S)^{i+1}     (site N+1 == site 1)

    The ring sum is taken literally, so N=2 counts its single bond twice
    (effective coupling 2*j2). For N=1 the ring term would be the constant
    3*j2*I and is omitted entirely.
    """
    n = p.n_outer
    h = p.omega_a * _embed({0: _PAULI["z"]}, n)
    for i in range(1, n + 1):
        h += p.omega_s * _embed({i: _PAULI["z"]}, n)
    for i in range(1, n + 1):
        for ax in AXES:
            h += p.j1 * _embed({0: _PAULI[ax], i: _PAULI[ax]}, n)
    if n >= 2:
        for i in range(1, n + 1):
            j = 1 if i == n else i + 1
            for ax in AXES:
                h += p.j2 * _embed({i: _PAULI[ax], j: _PAULI[ax]}, n)
    return h
