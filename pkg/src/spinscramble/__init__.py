"""Scrambling measure and Maligranda-type bounds for spin-star models."""

__version__ = "0.1.0"

from .dynamics import (EvolutionCache, TimeGrid, evolve_series,
                       heisenberg_evolve, propagator, worker_count)
from .engine import ScramblingEngine
from .errors import (ConfigError, DimensionMismatch, InvariantViolation,
                     NotHermitian, SiteOutOfRange, SpinScrambleError)
from .scenarios import (ResultTable, Scatter, ScenarioConfig, SiteSweep,
                        SizeSweep, builtin_scenarios, evolution_cache_for,
                        hamiltonian_for, run_contour, run_scatter,
                        run_scenario, run_time_series)
from .scrambling import (MomentSet, ScramblingRecord, block_max_bound,
                         compute_moments, expectation, is_unitary_hermitian,
                         maligranda_factors, record_at, scrambling_bounds,
                         scrambling_commutator, scrambling_moments, variance,
                         weighted_norm_sq)
from .spin_model import (OperatorSpec, SiteAxis, SpinStarParams,
                         build_hamiltonian, embed_site, pauli,
                         realize_operator, total_spin)
from .states import (DensityState, StatePrep, gibbs_state, gibbs_weights,
                     pure_product_state, pure_state_index)
from .tensor_core import (CMatrix, HermitianEigen, adjoint,
                          hermitian_eigendecompose, kron, spectral_function)

__all__ = [
    "__version__",
    "CMatrix", "HermitianEigen", "adjoint", "hermitian_eigendecompose",
    "kron", "spectral_function",
    "OperatorSpec", "SiteAxis", "SpinStarParams", "build_hamiltonian",
    "embed_site", "pauli", "realize_operator", "total_spin",
    "DensityState", "StatePrep", "gibbs_state", "gibbs_weights",
    "pure_product_state", "pure_state_index",
    "EvolutionCache", "TimeGrid", "evolve_series", "heisenberg_evolve",
    "propagator", "worker_count",
    "MomentSet", "ScramblingRecord", "block_max_bound", "compute_moments",
    "expectation", "is_unitary_hermitian", "maligranda_factors", "record_at",
    "scrambling_bounds", "scrambling_commutator", "scrambling_moments",
    "variance", "weighted_norm_sq",
    "ScramblingEngine",
    "ResultTable", "Scatter", "ScenarioConfig", "SiteSweep", "SizeSweep",
    "builtin_scenarios", "evolution_cache_for", "hamiltonian_for",
    "run_contour", "run_scatter", "run_scenario", "run_time_series",
    "SpinScrambleError", "NotHermitian", "SiteOutOfRange",
    "DimensionMismatch", "InvariantViolation", "ConfigError",
]
