"""Named, reproducible experiment configurations and sweep drivers.

The built-in catalog (``builtin_scenarios``) pins every preset the
verification suite runs: star size, state preparation, operator placement
and time grid. Preset names follow the figure layout of the emitted
dataset (fig2a..fig6f plus contour variants).

All presets share omega_a = omega_s = 1, j1 = 1, j2 = 0.5 and a 401-point
grid on t in [0, 2pi] (scatter presets drop t = 0, where the bounds are
degenerate by construction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import EvolutionCache, TimeGrid
from .engine import ScramblingEngine
from .errors import SiteOutOfRange
from .scrambling import ScramblingRecord
from .spin_model import OperatorSpec, SpinStarParams, build_hamiltonian
from .states import StatePrep
from .tensor_core import CMatrix


@dataclass(frozen=True)
class SiteSweep:
    """Vary the outer-site index of a single-term W operator."""

    sites: tuple[int, ...]


@dataclass(frozen=True)
class SizeSweep:
    """Rebuild the model for each outer-qubit count."""

    sizes: tuple[int, ...]


@dataclass(frozen=True)
class Scatter:
    """Time-sweep scatter of (C, L, U) triples; one grid point is tagged
    as the reference time."""

    tag_time: float = math.pi / 4


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    params: SpinStarParams
    prep: StatePrep
    w_spec: OperatorSpec
    v_spec: OperatorSpec
    grid: TimeGrid
    sweep: SiteSweep | SizeSweep | Scatter | None = None
    description: str = ""

    def __post_init__(self):
        for label, spec in (("w", self.w_spec), ("v", self.v_spec)):
            if spec.max_site() > self.params.n_outer:
                raise SiteOutOfRange(
                    f"{label}_terms site {spec.max_site()} does not exist in a model "
                    f"with {self.params.n_outer} outer qubits"
                )
        overlap = self.w_spec.sites & self.v_spec.sites
        if overlap:
            raise ValueError(
                f"w_terms and v_terms overlap on sites {sorted(overlap)}; "
                "supports must be disjoint so that C(0) = 0"
            )
        if isinstance(self.sweep, SiteSweep):
            if not self.sweep.sites:
                raise ValueError("site sweep must list at least one site")
            if not self.w_spec.single_term:
                raise ValueError("site sweep requires a single-term w operator")
            for s in self.sweep.sites:
                if not 1 <= s <= self.params.n_outer:
                    raise SiteOutOfRange(f"swept site {s} is not an outer site")
                if s in self.v_spec.sites:
                    raise ValueError(f"swept site {s} collides with the v support")
        elif isinstance(self.sweep, SizeSweep):
            if not self.sweep.sizes:
                raise ValueError("size sweep must list at least one size")
            needed = max(self.w_spec.max_site(), self.v_spec.max_site())
            for n in self.sweep.sizes:
                if n < max(1, needed):
                    raise ValueError(
                        f"swept size {n} too small for operators on sites up to {needed}"
                    )
        elif isinstance(self.sweep, Scatter):
            if not (np.isfinite(self.sweep.tag_time) and self.sweep.tag_time >= 0):
                raise ValueError("scatter tag time must be finite and >= 0")


@dataclass
class ResultTable:
    """Ordered records of one scenario run, plus sweep coordinates when
    the scenario sweeps a model parameter."""

    scenario_name: str
    records: list[ScramblingRecord]
    sweep_label: str | None = None
    sweep_coords: list[float] | None = None
    tagged_index: int | None = None

    def __post_init__(self):
        if not self.records:
            raise ValueError("a result table cannot be empty")
        if self.sweep_coords is not None and len(self.sweep_coords) != len(self.records):
            raise ValueError("sweep coordinates must align with records")


# Eigendecompositions are expensive and shared by many presets (same model
# parameters => same Hamiltonian), so both are memoized per process.
_HAMILTONIANS: dict[SpinStarParams, CMatrix] = {}
_CACHES: dict[SpinStarParams, EvolutionCache] = {}


def hamiltonian_for(params: SpinStarParams) -> CMatrix:
    if params not in _HAMILTONIANS:
        _HAMILTONIANS[params] = build_hamiltonian(params)
    return _HAMILTONIANS[params]


def evolution_cache_for(params: SpinStarParams) -> EvolutionCache:
    if params not in _CACHES:
        _CACHES[params] = EvolutionCache.from_hamiltonian(hamiltonian_for(params))
    return _CACHES[params]


def clear_model_cache() -> None:
    _HAMILTONIANS.clear()
    _CACHES.clear()


def make_engine(params: SpinStarParams, prep: StatePrep,
                w_spec: OperatorSpec, v_spec: OperatorSpec) -> ScramblingEngine:
    from .spin_model import realize_operator

    return ScramblingEngine(
        evolution_cache_for(params),
        prep,
        realize_operator(w_spec, params.n_outer),
        realize_operator(v_spec, params.n_outer),
    )


def run_time_series(cfg: ScenarioConfig) -> ResultTable:
    """One record per grid point for a plain (non-sweeping) scenario."""
    if cfg.sweep is not None:
        raise ValueError(f"scenario {cfg.name} has a sweep; use run_contour/run_scatter")
    engine = make_engine(cfg.params, cfg.prep, cfg.w_spec, cfg.v_spec)
    return ResultTable(cfg.name, engine.records(cfg.grid.times()))


def run_contour(cfg: ScenarioConfig) -> ResultTable:
    """Grid of records over (t, sweep coordinate)."""
    if isinstance(cfg.sweep, SiteSweep):
        slices = []
        for s in cfg.sweep.sites:
            w = OperatorSpec.from_pairs([(s, cfg.w_spec.terms[0].axis)])
            slices.append((float(s), cfg.params, w))
        label = "site"
    elif isinstance(cfg.sweep, SizeSweep):
        slices = [(float(n), replace(cfg.params, n_outer=n), cfg.w_spec)
                  for n in cfg.sweep.sizes]
        label = "n_outer"
    else:
        raise ValueError(f"scenario {cfg.name} does not define a site or size sweep")

    records: list[ScramblingRecord] = []
    coords: list[float] = []
    for coord, params, w_spec in slices:
        engine = make_engine(params, cfg.prep, w_spec, cfg.v_spec)
        rs = engine.records(cfg.grid.times())
        records.extend(rs)
        coords.extend([coord] * len(rs))
    return ResultTable(cfg.name, records, sweep_label=label, sweep_coords=coords)


def run_scatter(cfg: ScenarioConfig) -> ResultTable:
    """(C, L, U) triples over the time sweep, tagging the reference time."""
    if not isinstance(cfg.sweep, Scatter):
        raise ValueError(f"scenario {cfg.name} does not define a scatter sweep")
    engine = make_engine(cfg.params, cfg.prep, cfg.w_spec, cfg.v_spec)
    times = cfg.grid.times()
    records = engine.records(times)
    tagged = int(np.argmin(np.abs(times - cfg.sweep.tag_time)))
    return ResultTable(cfg.name, records, tagged_index=tagged)


def run_scenario(cfg: ScenarioConfig) -> ResultTable:
    if cfg.sweep is None:
        return run_time_series(cfg)
    if isinstance(cfg.sweep, Scatter):
        return run_scatter(cfg)
    return run_contour(cfg)


_SERIES_GRID = TimeGrid(start=0.0, stop=2 * math.pi, points=401)
# 400 points at the same pi/200 spacing, starting one step after t = 0 so
# the degenerate commuting point is excluded and t = pi/4 lands on-grid.
_SCATTER_GRID = TimeGrid(start=math.pi / 200, stop=2 * math.pi, points=400)

_PURE = StatePrep.pure()


def _cfg(name, n, prep, w_pairs, v_pairs, grid=_SERIES_GRID, sweep=None, desc=""):
    return ScenarioConfig(
        name=name,
        params=SpinStarParams(n_outer=n),
        prep=prep,
        w_spec=OperatorSpec.from_pairs(w_pairs),
        v_spec=OperatorSpec.from_pairs(v_pairs),
        grid=grid,
        sweep=sweep,
        description=desc,
    )


def builtin_scenarios() -> dict[str, ScenarioConfig]:
    """The preset catalog, in stable order."""
    th10 = StatePrep.thermal(10.0)
    th1 = StatePrep.thermal(1.0)
    cat: dict[str, ScenarioConfig] = {}

    def add(cfg: ScenarioConfig) -> None:
        cat[cfg.name] = cfg

    # -- single-site pairs on the N=2 star ------------------------------
    add(_cfg("fig2a", 2, _PURE, [(1, "z")], [(0, "z")],
             desc="N=2, z-z single-site pair, pure state"))
    add(_cfg("fig2b", 2, _PURE, [(1, "x")], [(0, "x")],
             desc="N=2, x-x single-site pair, pure state"))
    add(_cfg("fig2c", 2, th10, [(1, "z")], [(0, "z")],
             desc="N=2, z-z single-site pair, thermal beta=10"))
    add(_cfg("fig2d", 2, th10, [(1, "x")], [(0, "x")],
             desc="N=2, x-x single-site pair, thermal beta=10"))

    # -- three-site blocks against the ancilla on the N=7 star ----------
    for name, prep, wax, vax, desc in (
        ("fig3a", _PURE, "z", "z", "N=7, W=sum S_z(1..3), V=S_z ancilla, pure"),
        ("fig3b", _PURE, "x", "x", "N=7, W=sum S_x(1..3), V=S_x ancilla, pure"),
        ("fig3c", _PURE, "x", "z", "N=7, W=sum S_x(1..3), V=S_z ancilla, pure"),
        ("fig3d", th10, "z", "z", "N=7, W=sum S_z(1..3), V=S_z ancilla, thermal beta=10"),
        ("fig3e", th10, "x", "x", "N=7, W=sum S_x(1..3), V=S_x ancilla, thermal beta=10"),
        ("fig3f", th10, "x", "z", "N=7, W=sum S_x(1..3), V=S_z ancilla, thermal beta=10"),
    ):
        add(_cfg(name, 7, prep, [(i, wax) for i in (1, 2, 3)], [(0, vax)], desc=desc))

    # -- contours over time and model size / operator site --------------
    sz = SizeSweep(sizes=(2, 3, 4, 5, 6))
    sz_blk = SizeSweep(sizes=(3, 4, 5, 6))
    for name, prep, desc in (("fig4a_pure", _PURE, "z-z pair contour over N=2..6, pure"),
                             ("fig4a_thermal", th1, "z-z pair contour over N=2..6, thermal beta=1")):
        add(_cfg(name, 6, prep, [(1, "z")], [(0, "z")], sweep=sz, desc=desc))
    for name, prep, desc in (("fig4b_pure", _PURE, "x-x pair contour over N=2..6, pure"),
                             ("fig4b_thermal", th1, "x-x pair contour over N=2..6, thermal beta=1")):
        add(_cfg(name, 6, prep, [(1, "x")], [(0, "x")], sweep=sz, desc=desc))
    for name, prep, desc in (("fig4c_pure", _PURE, "W=sum S_z(1..3) contour over N=3..6, pure"),
                             ("fig4c_thermal", th1, "W=sum S_z(1..3) contour over N=3..6, thermal beta=1")):
        add(_cfg(name, 6, prep, [(i, "z") for i in (1, 2, 3)], [(0, "z")],
                 sweep=sz_blk, desc=desc))
    for name, n, prep, desc in (
        ("fig4a_site_pure", 6, _PURE, "z-z pair contour over W site 1..6, N=6, pure"),
        ("fig4a_site_thermal", 6, th1, "z-z pair contour over W site 1..6, N=6, thermal beta=1"),
        ("fig4a_site_n7_pure", 7, _PURE, "z-z pair contour over W site 1..7, N=7, pure"),
        ("fig4a_site_n7_thermal", 7, th1, "z-z pair contour over W site 1..7, N=7, thermal beta=1"),
    ):
        add(_cfg(name, n, prep, [(1, "z")], [(0, "z")],
                 sweep=SiteSweep(sites=tuple(range(1, n + 1))), desc=desc))

    # -- outer-outer blocks, ancilla excluded ----------------------------
    add(_cfg("fig5a", 5, _PURE, [(i, "z") for i in (2, 3, 4, 5)], [(1, "z")],
             desc="N=5, V=S_z(1), W=sum S_z(2..5), pure"))
    add(_cfg("fig5b", 5, _PURE, [(i, "x") for i in (2, 3, 4, 5)], [(1, "x")],
             desc="N=5, V=S_x(1), W=sum S_x(2..5), pure"))
    add(_cfg("fig5c", 10, _PURE, [(i, "x") for i in range(3, 11)],
             [(1, "x"), (2, "x")],
             desc="N=10, V=sum S_x(1..2), W=sum S_x(3..10), pure"))
    add(_cfg("fig5d", 5, th1, [(i, "z") for i in (2, 3, 4, 5)], [(1, "z")],
             desc="N=5, V=S_z(1), W=sum S_z(2..5), thermal beta=1"))
    add(_cfg("fig5e", 5, th1, [(i, "x") for i in (2, 3, 4, 5)], [(1, "x")],
             desc="N=5, V=S_x(1), W=sum S_x(2..5), thermal beta=1"))
    add(_cfg("fig5f", 10, th1, [(i, "x") for i in range(3, 11)],
             [(1, "x"), (2, "x")],
             desc="N=10, V=sum S_x(1..2), W=sum S_x(3..10), thermal beta=1"))

    # -- bound-vs-measure scatters ---------------------------------------
    sc = Scatter()
    add(_cfg("fig6a", 5, _PURE, [(i, "z") for i in (1, 2, 3, 4)], [(0, "z")],
             grid=_SCATTER_GRID, sweep=sc,
             desc="N=5, W=sum S_z(1..4), V=S_z ancilla, pure, scatter"))
    add(_cfg("fig6b", 5, _PURE, [(i, "x") for i in (1, 2, 3, 4)], [(0, "x")],
             grid=_SCATTER_GRID, sweep=sc,
             desc="N=5, W=sum S_x(1..4), V=S_x ancilla, pure, scatter"))
    add(_cfg("fig6c", 7, _PURE, [(i, "z") for i in (1, 2, 3, 4)], [(0, "x")],
             grid=_SCATTER_GRID, sweep=sc,
             desc="N=7, W=sum S_z(1..4), V=S_x ancilla, pure, scatter"))
    add(_cfg("fig6d", 5, th1, [(i, "z") for i in (1, 2, 3, 4)], [(0, "z")],
             grid=_SCATTER_GRID, sweep=sc,
             desc="N=5, W=sum S_z(1..4), V=S_z ancilla, thermal beta=1, scatter"))
    add(_cfg("fig6e", 5, th1, [(i, "x") for i in (1, 2, 3, 4)], [(0, "x")],
             grid=_SCATTER_GRID, sweep=sc,
             desc="N=5, W=sum S_x(1..4), V=S_x ancilla, thermal beta=1, scatter"))
    add(_cfg("fig6f", 7, th1, [(i, "z") for i in (1, 2, 3, 4)], [(0, "x")],
             grid=_SCATTER_GRID, sweep=sc,
             desc="N=7, W=sum S_z(1..4), V=S_x ancilla, thermal beta=1, scatter"))
    return cat
