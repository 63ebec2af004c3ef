"""Eigenbasis fast path for per-time-point scrambling records.

Traces are basis independent, so every moment entering the bounds can be
evaluated in the Hamiltonian eigenbasis, where both the time evolution and
the reference state are cheap:

* the Heisenberg step is an elementwise phase twist of the transformed
  operator (never materialized for pure states),
* a Gibbs state is the diagonal matrix of Boltzmann weights,
* the pure product state is one conjugated row of the eigenvector matrix.

With W and V Hermitian, A = V W(t) and B = W(t) V satisfy A = B^dag, so a
thermal point needs a single matrix product B = W(t) V; every reduction
over it is quadratic. A pure point needs only matrix-vector products.

This module is an optimization of the reference operations in
:mod:`spinscramble.scrambling`; the test suite pins the two paths against
each other.
"""

from __future__ import annotations

import numpy as np

from .dynamics import EvolutionCache, parallel_map
from .errors import DimensionMismatch, NotHermitian
from .scrambling import MomentSet, ScramblingRecord, assemble_record, _delta_from
from .states import StatePrep, gibbs_weights, pure_state_index
from .tensor_core import CMatrix, max_abs

_HERM_INPUT_TOL = 1e-12


class ScramblingEngine:
    """Per-time-point moments for one (state, W, V) combination."""

    def __init__(self, cache: EvolutionCache, prep: StatePrep, w0: CMatrix, v0: CMatrix):
        dim = cache.dim
        for name, op in (("W", w0), ("V", v0)):
            if op.shape != (dim, dim):
                raise DimensionMismatch(
                    f"{name} shape {op.shape} does not match dimension {dim}"
                )
            resid = max_abs(op - op.conj().T)
            if resid > _HERM_INPUT_TOL:
                raise NotHermitian(f"{name} is not Hermitian (residual {resid:.3e})")
        self.cache = cache
        self.prep = prep
        q = cache.h_eigen.eigenvectors
        # x/z-axis operators and the spin-star H are exactly real, in which
        # case all heavy products run in real arithmetic at half the flops
        self._real = (max_abs(q.imag) == 0.0 and max_abs(np.imag(w0)) == 0.0
                      and max_abs(np.imag(v0)) == 0.0)
        if prep.kind == "pure":
            # psi in the eigenbasis: Q^dag e_idx is a conjugated row of Q
            idx = pure_state_index(dim.bit_length() - 2)
            self._w = cache.to_eigenbasis(w0)
            self._v = cache.to_eigenbasis(v0)
            self._psi = q[idx, :].conj()
            self._v_psi = self._v @ self._psi
        else:
            self._weights = gibbs_weights(cache.h_eigen.eigenvalues, prep.beta)
            if self._real:
                qr = np.ascontiguousarray(q.real)
                self._wr = qr.T @ np.ascontiguousarray(w0.real) @ qr
                self._vr = qr.T @ np.ascontiguousarray(v0.real) @ qr
            else:
                self._w = cache.to_eigenbasis(w0)
                self._v = cache.to_eigenbasis(v0)

    def point(self, t: float) -> tuple[MomentSet, float]:
        """Moments plus the commutator-route C at one time."""
        phases = self.cache.phases(t)
        if self.prep.kind == "pure":
            return self._point_pure(phases)
        return self._point_thermal(phases)

    def record(self, t: float) -> ScramblingRecord:
        m, c_comm = self.point(t)
        return assemble_record(t, m, c_comm)

    def records(self, times) -> list[ScramblingRecord]:
        """Records for every time, in order.

        Points are independent and evaluate in parallel subject to the
        worker cap, except for large thermal problems where the matrix
        product inside each point already saturates the cores through BLAS.
        """
        ts = [float(t) for t in np.asarray(times)]
        if self.prep.kind != "pure" and self.cache.dim > 512:
            return [self.record(t) for t in ts]
        return parallel_map(self.record, ts)

    def _point_pure(self, phases: np.ndarray) -> tuple[MomentSet, float]:
        # W(t) x = p * (W (conj(p) * x)) without forming W(t)
        psi = self._psi
        b_psi = phases * (self._w @ (phases.conj() * self._v_psi))      # B|psi>
        a_psi = self._v @ (phases * (self._w @ (phases.conj() * psi)))  # A|psi>
        mean_a = complex(np.vdot(psi, a_psi))
        mean_b = complex(np.vdot(psi, b_psi))
        norm2_a = float(np.vdot(a_psi, a_psi).real)
        norm2_b = float(np.vdot(b_psi, b_psi).real)
        cross = complex(np.vdot(a_psi, b_psi))
        k_psi = b_psi - a_psi                                           # [W(t), V]|psi>
        c_comm = float(np.vdot(k_psi, k_psi).real)
        delta_amb = _delta_from(c_comm, mean_a - mean_b)
        m = MomentSet(
            mean_a=mean_a, mean_b=mean_b,
            norm2_a=norm2_a, norm2_b=norm2_b, cross=cross,
            delta_a=_delta_from(norm2_a, mean_a),
            delta_b=_delta_from(norm2_b, mean_b),
            delta_amb=delta_amb,
        )
        return m, c_comm

    def _point_thermal(self, phases: np.ndarray) -> tuple[MomentSet, float]:
        if self._real:
            b_re, b_im = self._twisted_product_real(phases)
            diag_b = np.einsum("kk->k", b_re) + 1j * np.einsum("kk->k", b_im)
            sq = b_re * b_re
            sq += b_im * b_im
            cross_re = (np.einsum("kj,jk->k", b_re, b_re)
                        - np.einsum("kj,jk->k", b_im, b_im))
            cross_im = (np.einsum("kj,jk->k", b_re, b_im)
                        + np.einsum("kj,jk->k", b_im, b_re))
            cross_diag = cross_re + 1j * cross_im
            # K = B - B^dag: real part antisymmetrized, imaginary symmetrized
            k_re = b_re - b_re.T
            k_im = b_im + b_im.T
            k_col_sq = (np.einsum("jk,jk->k", k_re, k_re)
                        + np.einsum("jk,jk->k", k_im, k_im))
        else:
            # B = W(t) V = diag(p) W diag(conj(p)) V; A = B^dag is implicit
            b = phases[:, None] * (self._w @ (phases.conj()[:, None] * self._v))
            diag_b = np.einsum("kk->k", b)
            sq = (b * b.conj()).real
            cross_diag = np.einsum("kj,jk->k", b, b)
            k = b - b.conj().T
            k_col_sq = np.einsum("jk,jk->k", k, k.conj()).real

        w = self._weights
        mean_b = complex(np.dot(w, diag_b))
        mean_a = mean_b.conjugate()
        norm2_a = float(np.dot(w, sq.sum(axis=1)))   # Tr[rho B B^dag]
        norm2_b = float(np.dot(w, sq.sum(axis=0)))   # Tr[rho B^dag B]
        cross = complex(np.dot(w, cross_diag))       # Tr[rho B^2] = <A^dag B>
        c_comm = float(np.dot(w, k_col_sq))
        delta_amb = _delta_from(c_comm, mean_a - mean_b)
        m = MomentSet(
            mean_a=mean_a, mean_b=mean_b,
            norm2_a=norm2_a, norm2_b=norm2_b, cross=cross,
            delta_a=_delta_from(norm2_a, mean_a),
            delta_b=_delta_from(norm2_b, mean_b),
            delta_amb=delta_amb,
        )
        return m, c_comm

    def _twisted_product_real(self, phases: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Real/imaginary parts of B = diag(p) W diag(conj(p)) V for a real
        model, using one fused real matrix product instead of a complex one."""
        dim = self.cache.dim
        cos_t = phases.real
        sin_t = phases.imag
        # conj(p) V stacked as [Re | -Im] so both halves share one product
        stacked = np.empty((dim, 2 * dim))
        np.multiply(cos_t[:, None], self._vr, out=stacked[:, :dim])
        np.multiply(sin_t[:, None], self._vr, out=stacked[:, dim:])
        out = self._wr @ stacked
        r0 = out[:, :dim]          # Re(W conj(p) V)
        t0 = out[:, dim:]          # -Im(W conj(p) V)
        b_re = cos_t[:, None] * r0
        b_re += sin_t[:, None] * t0
        b_im = sin_t[:, None] * r0
        b_im -= cos_t[:, None] * t0
        return b_re, b_im
