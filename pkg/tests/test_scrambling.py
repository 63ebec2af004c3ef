import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinscramble import (DensityState, DimensionMismatch, InvariantViolation,
                          MomentSet, OperatorSpec, ScramblingEngine,
                          SpinStarParams, StatePrep, block_max_bound,
                          compute_moments, evolution_cache_for, expectation,
                          gibbs_state, heisenberg_evolve, is_unitary_hermitian,
                          maligranda_factors, pure_product_state, realize_operator,
                          record_at, scrambling_bounds, scrambling_commutator,
                          scrambling_moments, variance, weighted_norm_sq)
from spinscramble.scrambling import assemble_record

from conftest import random_density, random_hermitian

# Golden values from the standalone brute-force script
# (tools/brute_force_goldens.py): explicit dense products, scipy expm, no
# shared code with this package.
FIG2A_C_AT_HALF_PI = 3.950617283950615
FIG3B_AT_T1 = {
    "C": 7.062666998286137,
    "L": 6.749135882359969,
    "U": 7.397244714737984,
    "J": 1.293293568465440,
    "K": 1.380109299712755,
}
FIG3B_JK_GAP_AT_T1 = 8.681573124731523e-2
FIG3C_COINCIDENT_AT_T1 = 4.170878485175582


def op(pairs, n):
    return realize_operator(OperatorSpec.from_pairs(pairs), n)


@pytest.fixture(scope="module")
def fig2a_setup(n2_params, n2_cache):
    rho = pure_product_state(2)
    w0 = op([(1, "z")], 2)
    v0 = op([(0, "z")], 2)
    return rho, n2_cache, w0, v0


class TestExpectation:
    def test_identity_gives_one(self, fig2a_setup):
        rho = fig2a_setup[0]
        assert expectation(rho, np.eye(8, dtype=complex)) == pytest.approx(1.0)

    def test_pure_state_eigenvalue(self, fig2a_setup):
        rho, _, _, v0 = fig2a_setup
        assert expectation(rho, v0).real == pytest.approx(1.0, abs=1e-12)

    def test_hermitian_gives_real(self, n2_cache):
        rho = gibbs_state(n2_cache.h_eigen, 10.0)
        sz_a = op([(0, "z")], 2)
        val = expectation(rho, sz_a)
        assert abs(val.imag) <= 1e-10

    def test_thermal_against_spectral_sum(self, n2_cache):
        # independent route: Boltzmann-weighted eigenbasis diagonal
        rho = gibbs_state(n2_cache.h_eigen, 10.0)
        sz_a = op([(0, "z")], 2)
        lam = n2_cache.h_eigen.eigenvalues
        q = n2_cache.h_eigen.eigenvectors
        w = np.exp(-10.0 * (lam - lam[0]))
        w /= w.sum()
        want = float(np.sum(w * np.real(np.diag(q.conj().T @ sz_a @ q))))
        assert expectation(rho, sz_a).real == pytest.approx(want, abs=1e-12)

    def test_dimension_mismatch(self, fig2a_setup):
        with pytest.raises(DimensionMismatch):
            expectation(fig2a_setup[0], np.eye(4, dtype=complex))


class TestWeightedNormSq:
    def test_unitary_operator_gives_one(self, fig2a_setup, n2_cache):
        _, _, w0, _ = fig2a_setup
        for rho in (fig2a_setup[0], gibbs_state(n2_cache.h_eigen, 1.0)):
            assert weighted_norm_sq(rho, w0) == pytest.approx(1.0, abs=1e-12)

    def test_zero_operator(self, fig2a_setup):
        assert weighted_norm_sq(fig2a_setup[0], np.zeros((8, 8), dtype=complex)) == 0.0

    def test_z_block_on_polarized_state(self):
        # both outer spins point down: (sum of their S_z)^2 averages to 4
        rho = pure_product_state(2)
        block = op([(1, "z"), (2, "z")], 2)
        assert weighted_norm_sq(rho, block) == pytest.approx(4.0, abs=1e-12)


class TestVariance:
    def test_identity_operator(self, fig2a_setup):
        assert variance(fig2a_setup[0], np.eye(8, dtype=complex)) == 0.0

    def test_eigenstate_has_zero_spread(self):
        rho = DensityState(rho=np.diag([1.0, 0.0]).astype(complex))
        sz = np.diag([1.0, -1.0]).astype(complex)
        assert variance(rho, sz) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_axis_has_unit_spread(self):
        rho = DensityState(rho=np.diag([1.0, 0.0]).astype(complex))
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        assert variance(rho, sx) == pytest.approx(1.0, abs=1e-12)


class TestComputeMoments:
    def test_commuting_start(self, fig2a_setup):
        rho, cache, w0, v0 = fig2a_setup
        m = compute_moments(rho, w0, v0)
        assert m.cross.real == pytest.approx(m.norm2_a, abs=1e-12)
        assert m.delta_amb == pytest.approx(0.0, abs=1e-12)

    def test_unitary_hermitian_unit_norms(self, fig2a_setup):
        rho, cache, w0, v0 = fig2a_setup
        for t in np.linspace(0.1, 6.0, 7):
            m = compute_moments(rho, heisenberg_evolve(cache, w0, t), v0)
            assert m.norm2_a == pytest.approx(1.0, abs=1e-12)
            assert m.norm2_b == pytest.approx(1.0, abs=1e-12)

    def test_unitary_hermitian_equal_spreads(self, fig2a_setup, rng):
        rho, cache, w0, v0 = fig2a_setup
        for t in rng.uniform(0.05, 6.2, size=10):
            m = compute_moments(rho, heisenberg_evolve(cache, w0, t), v0)
            assert abs(m.delta_a - m.delta_b) <= 1e-10
            assert abs(m.mean_b - m.mean_a.conjugate()) <= 1e-12

    def test_spread_consistency(self, n2_cache, rng):
        rho = gibbs_state(n2_cache.h_eigen, 1.0)
        w0 = op([(1, "x")], 2)
        v0 = op([(0, "z")], 2)
        for t in rng.uniform(0.0, 6.2, size=5):
            m = compute_moments(rho, heisenberg_evolve(n2_cache, w0, t), v0)
            assert m.delta_a**2 == pytest.approx(m.norm2_a - abs(m.mean_a) ** 2,
                                                 abs=1e-9)


class TestScramblingCommutator:
    def test_commuting_start_is_zero(self, fig2a_setup):
        rho, _, w0, v0 = fig2a_setup
        assert scrambling_commutator(rho, w0, v0) <= 1e-12

    def test_single_site_pairs_stay_below_four(self, fig2a_setup, rng):
        rho, cache, w0, v0 = fig2a_setup
        for t in rng.uniform(0.0, 6.3, size=12):
            c = scrambling_commutator(rho, heisenberg_evolve(cache, w0, t), v0)
            assert c <= 4.0 + 1e-9

    def test_golden_fig2a_at_half_pi(self, fig2a_setup):
        rho, cache, w0, v0 = fig2a_setup
        c = scrambling_commutator(rho, heisenberg_evolve(cache, w0, np.pi / 2), v0)
        assert c == pytest.approx(FIG2A_C_AT_HALF_PI, abs=1e-9)

    def test_swap_symmetry(self, fig2a_setup, rng):
        rho, cache, w0, v0 = fig2a_setup
        for t in rng.uniform(0.0, 6.3, size=5):
            w_t = heisenberg_evolve(cache, w0, t)
            assert abs(scrambling_commutator(rho, w_t, v0)
                       - scrambling_commutator(rho, v0, w_t)) <= 1e-10


class TestScramblingMoments:
    def test_equal_operators_give_zero(self, fig2a_setup):
        rho, _, w0, v0 = fig2a_setup
        m = compute_moments(rho, w0, v0)
        assert abs(scrambling_moments(m)) <= 1e-12

    def test_dual_path_agreement(self, n2_cache, rng):
        rho = gibbs_state(n2_cache.h_eigen, 10.0)
        w0 = op([(1, "x")], 2)
        v0 = op([(0, "x")], 2)
        for t in rng.uniform(0.0, 6.3, size=10):
            w_t = heisenberg_evolve(n2_cache, w0, t)
            m = compute_moments(rho, w_t, v0)
            assert abs(scrambling_moments(m)
                       - scrambling_commutator(rho, w_t, v0)) <= 1e-9

    def test_unitary_hermitian_otoc_identity(self, fig2a_setup, rng):
        rho, cache, w0, v0 = fig2a_setup
        for t in rng.uniform(0.0, 6.3, size=8):
            w_t = heisenberg_evolve(cache, w0, t)
            m = compute_moments(rho, w_t, v0)
            a = v0 @ w_t
            otoc = expectation(rho, a @ a).real
            assert abs(scrambling_moments(m) - 2.0 * (1.0 - otoc)) <= 1e-9


class TestMaligrandaFactors:
    def test_equal_operators_give_zero_factors(self, n2_cache):
        # thermal state keeps the variances finite at t=0
        rho = gibbs_state(n2_cache.h_eigen, 10.0)
        w0 = op([(1, "z")], 2)
        v0 = op([(0, "z")], 2)
        m = compute_moments(rho, w0, v0)
        j, k, defined = maligranda_factors(m)
        assert defined
        assert j == pytest.approx(0.0, abs=1e-9)
        assert k == pytest.approx(0.0, abs=1e-9)

    def test_unitary_hermitian_factors_coincide(self, fig2a_setup, rng):
        rho, cache, w0, v0 = fig2a_setup
        for t in rng.uniform(0.3, 2.8, size=6):
            m = compute_moments(rho, heisenberg_evolve(cache, w0, t), v0)
            j, k, defined = maligranda_factors(m)
            assert defined
            assert abs(j - k) <= 1e-10
            assert j == pytest.approx(m.delta_amb / m.delta_a, abs=1e-9)

    def test_factor_ordering_and_range(self, n7_cache, rng):
        rho = gibbs_state(n7_cache.h_eigen, 10.0)
        w0 = op([(i, "x") for i in (1, 2, 3)], 7)
        v0 = op([(0, "x")], 7)
        for t in rng.uniform(0.2, 6.2, size=6):
            m = compute_moments(rho, heisenberg_evolve(n7_cache, w0, t), v0)
            j, k, defined = maligranda_factors(m)
            assert defined
            assert -1e-9 <= j <= k <= 2.0 + 1e-9

    def test_exactly_degenerate_point_is_undefined(self, fig2a_setup):
        # the polarized pure state is a joint eigenstate of z-axis W and V,
        # so at t=0 both variances vanish identically (exact arithmetic)
        rho, _, w0, v0 = fig2a_setup
        m = compute_moments(rho, w0, v0)
        assert m.delta_a == 0.0
        j, k, defined = maligranda_factors(m)
        assert not defined
        assert math.isnan(j) and math.isnan(k)

    def test_strict_gap_golden_fig3b(self, n7_cache):
        rho = pure_product_state(7)
        w0 = op([(i, "x") for i in (1, 2, 3)], 7)
        v0 = op([(0, "x")], 7)
        m = compute_moments(rho, heisenberg_evolve(n7_cache, w0, 1.0), v0)
        j, k, defined = maligranda_factors(m)
        assert defined
        assert j == pytest.approx(FIG3B_AT_T1["J"], abs=1e-9)
        assert k == pytest.approx(FIG3B_AT_T1["K"], abs=1e-9)
        assert k - j == pytest.approx(FIG3B_JK_GAP_AT_T1, abs=1e-9)


class TestScramblingBounds:
    def test_unitary_hermitian_bounds_coincide(self, fig2a_setup, rng):
        rho, cache, w0, v0 = fig2a_setup
        for t in rng.uniform(0.3, 2.8, size=8):
            w_t = heisenberg_evolve(cache, w0, t)
            m = compute_moments(rho, w_t, v0)
            lower, upper, defined = scrambling_bounds(m)
            assert defined
            c = scrambling_commutator(rho, w_t, v0)
            assert lower == pytest.approx(c, abs=1e-9)
            assert upper == pytest.approx(c, abs=1e-9)

    def test_commuting_start_sandwiches_zero(self, fig2a_setup):
        # x-axis pair: variances stay finite at t=0 and C(0) = 0
        rho, _, _, _ = fig2a_setup
        w0 = op([(1, "x")], 2)
        v0 = op([(0, "x")], 2)
        m = compute_moments(rho, w0, v0)
        lower, upper, defined = scrambling_bounds(m)
        assert defined
        assert lower <= 1e-9 and upper >= -1e-9

    def test_golden_fig3b_triple(self, n7_cache):
        rho = pure_product_state(7)
        w0 = op([(i, "x") for i in (1, 2, 3)], 7)
        v0 = op([(0, "x")], 7)
        w_t = heisenberg_evolve(n7_cache, w0, 1.0)
        m = compute_moments(rho, w_t, v0)
        lower, upper, _ = scrambling_bounds(m)
        c = scrambling_commutator(rho, w_t, v0)
        assert c == pytest.approx(FIG3B_AT_T1["C"], abs=1e-9)
        assert lower == pytest.approx(FIG3B_AT_T1["L"], abs=1e-9)
        assert upper == pytest.approx(FIG3B_AT_T1["U"], abs=1e-9)
        assert lower < c < upper

    def test_eigenstate_of_static_operator_coincides(self, n7_cache):
        # the polarized state is an eigenstate of S_z on the ancilla, which
        # also collapses the bounds onto C even for a non-unitary W block
        rho = pure_product_state(7)
        w0 = op([(i, "x") for i in (1, 2, 3)], 7)
        v0 = op([(0, "z")], 7)
        w_t = heisenberg_evolve(n7_cache, w0, 1.0)
        m = compute_moments(rho, w_t, v0)
        lower, upper, defined = scrambling_bounds(m)
        c = scrambling_commutator(rho, w_t, v0)
        assert defined
        assert c == pytest.approx(FIG3C_COINCIDENT_AT_T1, abs=1e-9)
        assert lower == pytest.approx(c, abs=1e-9)
        assert upper == pytest.approx(c, abs=1e-9)

    def test_undefined_returns_nan_sentinels(self, fig2a_setup):
        rho, _, w0, v0 = fig2a_setup
        m = compute_moments(rho, w0, v0)
        lower, upper, defined = scrambling_bounds(m)
        assert not defined
        assert math.isnan(lower) and math.isnan(upper)


class TestIsUnitaryHermitian:
    def test_single_site_embedding(self):
        assert is_unitary_hermitian(op([(2, "y")], 3))

    def test_block_operator_is_not(self):
        assert not is_unitary_hermitian(op([(1, "z"), (2, "z")], 2))

    def test_zero_matrix_is_not(self):
        assert not is_unitary_hermitian(np.zeros((4, 4), dtype=complex))

    def test_non_hermitian_unitary_is_not(self):
        u = np.diag([1.0, 1j]).astype(complex)
        assert not is_unitary_hermitian(u)


class TestBlockMaxBound:
    def test_single_pair_passthrough(self):
        assert block_max_bound(1, 1, 2.5) == 2.5

    def test_three_by_one_unitary_ceiling(self):
        assert block_max_bound(3, 1, 4.0) == 36.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            block_max_bound(0, 1, 1.0)
        with pytest.raises(ValueError):
            block_max_bound(1, 1, -0.5)

    def test_caps_block_scrambling_on_samples(self, n7_cache, rng):
        rho = pure_product_state(7)
        w_terms = [(i, "x") for i in (1, 2, 3)]
        v0 = op([(0, "x")], 7)
        for t in rng.uniform(0.1, 6.2, size=4):
            singles = [scrambling_commutator(
                rho, heisenberg_evolve(n7_cache, op([term], 7), t), v0)
                for term in w_terms]
            block_c = scrambling_commutator(
                rho, heisenberg_evolve(n7_cache, op(w_terms, 7), t), v0)
            assert block_c <= block_max_bound(3, 1, max(singles)) + 1e-9


class TestAssembleRecord:
    def test_dual_path_disagreement_raises(self):
        m = MomentSet(mean_a=0j, mean_b=0j, norm2_a=1.0, norm2_b=1.0,
                      cross=0.5 + 0j, delta_a=1.0, delta_b=1.0, delta_amb=1.0)
        with pytest.raises(InvariantViolation):
            assemble_record(0.0, m, c_commutator=1.0 + 1e-6)

    def test_negative_c_beyond_roundoff_raises(self):
        m = MomentSet(mean_a=0j, mean_b=0j, norm2_a=0.0, norm2_b=0.0,
                      cross=0j, delta_a=0.0, delta_b=0.0, delta_amb=0.0)
        with pytest.raises(InvariantViolation):
            assemble_record(0.0, m, c_commutator=-1e-6)

    def test_record_fields(self, fig2a_setup):
        rho, cache, w0, v0 = fig2a_setup
        rec = record_at(rho, cache, w0, v0, 0.9)
        assert rec.t == 0.9
        assert rec.bounds_defined
        assert rec.c >= 0.0
        assert rec.lower - 1e-9 <= rec.c <= rec.upper + 1e-9


# -- whole-layer property test -------------------------------------------

@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_bounds_sandwich_on_random_systems(data):
    seed = data.draw(st.integers(min_value=0, max_value=2**32 - 1))
    rng = np.random.default_rng(seed)
    dim = data.draw(st.sampled_from([2, 4, 8]))
    rho = DensityState(rho=random_density(rng, dim))
    w_t = random_hermitian(rng, dim)
    v0 = random_hermitian(rng, dim)
    m = compute_moments(rho, w_t, v0)
    c_comm = scrambling_commutator(rho, w_t, v0)
    c_mom = scrambling_moments(m)
    assert abs(c_comm - c_mom) <= 1e-9 * (1 + abs(c_comm))
    assert c_comm >= 0.0
    general_cap = (math.sqrt(m.norm2_a) + math.sqrt(m.norm2_b)) ** 2
    assert c_comm <= general_cap + 1e-9 * (1 + general_cap)
    lower, upper, defined = scrambling_bounds(m)
    if defined:
        scale = 1 + abs(c_comm)
        assert lower - 1e-9 * scale <= c_comm <= upper + 1e-9 * scale
        j, k, _ = maligranda_factors(m)
        assert -1e-9 <= j <= k + 1e-12 <= 2.0 + 1e-9


# -- engine vs reference cross-validation ---------------------------------

def _compare_records(eng_rec, ref_rec, tol=1e-10):
    assert abs(eng_rec.c - ref_rec.c) <= tol
    assert abs(eng_rec.delta_a - ref_rec.delta_a) <= tol
    assert abs(eng_rec.delta_b - ref_rec.delta_b) <= tol
    if eng_rec.bounds_defined and ref_rec.bounds_defined:
        assert abs(eng_rec.lower - ref_rec.lower) <= tol
        assert abs(eng_rec.upper - ref_rec.upper) <= tol
        assert abs(eng_rec.j_factor - ref_rec.j_factor) <= 1e-8
        assert abs(eng_rec.k_factor - ref_rec.k_factor) <= 1e-8


class TestEngineMatchesReference:
    def test_pure_small_star(self, n2_cache):
        rho = pure_product_state(2)
        w0 = op([(1, "z")], 2)
        v0 = op([(0, "z")], 2)
        engine = ScramblingEngine(n2_cache, StatePrep.pure(), w0, v0)
        for t in np.linspace(0.0, 2 * np.pi, 41):
            _compare_records(engine.record(t), record_at(rho, n2_cache, w0, v0, t))

    def test_thermal_small_star(self, n2_cache):
        rho = gibbs_state(n2_cache.h_eigen, 10.0)
        w0 = op([(1, "x")], 2)
        v0 = op([(0, "x")], 2)
        engine = ScramblingEngine(n2_cache, StatePrep.thermal(10.0), w0, v0)
        for t in np.linspace(0.0, 2 * np.pi, 41):
            _compare_records(engine.record(t), record_at(rho, n2_cache, w0, v0, t))

    def test_pure_block_operators(self, n7_cache):
        rho = pure_product_state(7)
        w0 = op([(i, "x") for i in (1, 2, 3)], 7)
        v0 = op([(0, "x")], 7)
        engine = ScramblingEngine(n7_cache, StatePrep.pure(), w0, v0)
        for t in (0.0, 0.5, 1.0, 2.9, 5.8):
            _compare_records(engine.record(t), record_at(rho, n7_cache, w0, v0, t))

    def test_thermal_block_operators_real_path(self, n7_cache):
        rho = gibbs_state(n7_cache.h_eigen, 10.0)
        w0 = op([(i, "x") for i in (1, 2, 3)], 7)
        v0 = op([(0, "x")], 7)
        engine = ScramblingEngine(n7_cache, StatePrep.thermal(10.0), w0, v0)
        assert engine._real
        for t in (0.0, 0.5, 1.0, 2.9, 5.8):
            _compare_records(engine.record(t), record_at(rho, n7_cache, w0, v0, t))

    def test_thermal_y_axis_complex_path(self):
        params = SpinStarParams(n_outer=3)
        cache = evolution_cache_for(params)
        rho = gibbs_state(cache.h_eigen, 2.0)
        w0 = op([(1, "y"), (2, "y")], 3)
        v0 = op([(0, "y")], 3)
        engine = ScramblingEngine(cache, StatePrep.thermal(2.0), w0, v0)
        assert not engine._real
        for t in (0.0, 0.4, 1.7, 4.1):
            _compare_records(engine.record(t), record_at(rho, cache, w0, v0, t))

    def test_engine_rejects_non_hermitian(self, n2_cache):
        from spinscramble import NotHermitian
        bad = np.zeros((8, 8), dtype=complex)
        bad[0, 1] = 1.0
        with pytest.raises(NotHermitian):
            ScramblingEngine(n2_cache, StatePrep.pure(), bad, op([(0, "z")], 2))
