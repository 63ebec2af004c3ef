"""Command-line interface: run scenarios to CSV, verify invariants, list presets.

Exit codes: 0 success, 1 configuration or I/O error, 2 scientific-invariant
violation.

The config file is YAML with either a preset reference::

    scenario: fig2a
    output: fig2a.csv

or an inline scenario::

    n_outer: 3
    omega: 1.0
    j1: 1.0
    j2: 0.5
    prep: {kind: thermal, beta: 10.0}
    w_terms: [{site: 1, axis: z}, {site: 2, axis: z}]
    v_terms: [{site: 0, axis: z}]
    grid: {start: 0.0, stop: 6.283185307179586, points: 401}
    output: run.csv

plus an optional ``sweep`` block (``{kind: site, sites: [...]}``,
``{kind: size, sizes: [...]}`` or ``{kind: scatter, tag_time: 0.785}``)
and ``format: csv`` (the only supported format).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np
import yaml

from . import __version__
from .dynamics import TimeGrid, propagator
from .errors import ConfigError, InvariantViolation, SiteOutOfRange, SpinScrambleError
from .scrambling import (CEILING_TOL, COINCIDENCE_TOL, SANDWICH_TOL,
                         block_max_bound, is_unitary_hermitian)
from .scenarios import (ResultTable, Scatter, ScenarioConfig, SiteSweep, SizeSweep,
                        builtin_scenarios, evolution_cache_for, hamiltonian_for,
                        make_engine, run_scenario)
from .spin_model import OperatorSpec, SpinStarParams, realize_operator, total_spin
from .states import StatePrep
from .tensor_core import max_abs

CSV_HEADER = ["t", "C", "L", "U", "J", "K", "deltaA", "deltaB", "bounds_defined"]

# Test-only hook: overrides the sandwich tolerance used by `verify` so the
# failure path (exit code 2) can be exercised deterministically.
SANDWICH_TOL_ENV = "SPINSCRAMBLE_SANDWICH_TOL"


@dataclass(frozen=True)
class RunConfig:
    scenario: str | None
    inline: ScenarioConfig | None
    output: str
    format: str = "csv"


def _require(mapping: dict, key: str, kind, where: str):
    if key not in mapping:
        raise ConfigError(f"missing key '{key}' in {where}")
    val = mapping[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kind) or isinstance(val, bool):
        raise ConfigError(f"key '{key}' in {where} must be {kind.__name__}, got {val!r}")
    return val


def _reject_unknown(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown key '{sorted(unknown)[0]}' in {where}")


def _number(mapping: dict, key: str, default: float) -> float:
    val = mapping.get(key, default)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"key '{key}' must be a number, got {val!r}")
    return float(val)


def _int_list(raw, key: str) -> tuple[int, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"key '{key}' must be a non-empty list of integers")
    out = []
    for v in raw:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"key '{key}' must contain integers, got {v!r}")
        out.append(v)
    return tuple(out)


def _parse_terms(raw, key: str) -> OperatorSpec:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"key '{key}' must be a non-empty list of {{site, axis}}")
    pairs = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ConfigError(f"entry {i} of '{key}' must be a mapping with site and axis")
        _reject_unknown(item, {"site", "axis"}, f"{key}[{i}]")
        site = _require(item, "site", int, f"{key}[{i}]")
        axis = _require(item, "axis", str, f"{key}[{i}]")
        pairs.append((site, axis))
    try:
        return OperatorSpec.from_pairs(pairs)
    except ValueError as exc:
        raise ConfigError(f"invalid '{key}': {exc}") from exc


def _parse_sweep(raw) -> SiteSweep | SizeSweep | Scatter:
    if not isinstance(raw, dict):
        raise ConfigError("key 'sweep' must be a mapping with a 'kind'")
    kind = _require(raw, "kind", str, "sweep")
    if kind == "site":
        _reject_unknown(raw, {"kind", "sites"}, "sweep")
        return SiteSweep(sites=_int_list(raw.get("sites"), "sites"))
    if kind == "size":
        _reject_unknown(raw, {"kind", "sizes"}, "sweep")
        return SizeSweep(sizes=_int_list(raw.get("sizes"), "sizes"))
    if kind == "scatter":
        _reject_unknown(raw, {"kind", "tag_time"}, "sweep")
        return Scatter(tag_time=_number(raw, "tag_time", math.pi / 4))
    raise ConfigError(f"unknown sweep kind {kind!r}; expected site, size or scatter")


_INLINE_KEYS = {"n_outer", "omega", "j1", "j2", "prep", "w_terms", "v_terms",
                "grid", "sweep"}


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a YAML run configuration.

    Raises :class:`ConfigError` naming the offending key before any
    computation starts.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a key/value mapping")

    _reject_unknown(raw, {"scenario", "output", "format"} | _INLINE_KEYS, "config")
    output = _require(raw, "output", str, "config")
    fmt = raw.get("format", "csv")
    if fmt != "csv":
        raise ConfigError(f"key 'format' must be 'csv', got {fmt!r}")

    has_name = "scenario" in raw
    inline_present = sorted(set(raw) & _INLINE_KEYS)
    if has_name and inline_present:
        raise ConfigError(
            f"config mixes 'scenario' with inline key '{inline_present[0]}'; use one"
        )
    if has_name:
        name = _require(raw, "scenario", str, "config")
        if name not in builtin_scenarios():
            raise ConfigError(f"unknown scenario {name!r}; see the list command")
        return RunConfig(scenario=name, inline=None, output=output, format="csv")
    if not inline_present:
        raise ConfigError("config needs either 'scenario' or an inline scenario block")

    n_outer = _require(raw, "n_outer", int, "config")
    omega = _number(raw, "omega", 1.0)
    j1 = _number(raw, "j1", 1.0)
    j2 = _number(raw, "j2", 0.5)
    prep_raw = _require(raw, "prep", dict, "config")
    _reject_unknown(prep_raw, {"kind", "beta"}, "prep")
    kind = _require(prep_raw, "kind", str, "prep")
    grid_raw = _require(raw, "grid", dict, "config")
    _reject_unknown(grid_raw, {"start", "stop", "points"}, "grid")

    try:
        params = SpinStarParams(n_outer=n_outer, omega_a=omega, omega_s=omega,
                                j1=j1, j2=j2)
        prep = StatePrep(kind=kind, beta=prep_raw.get("beta"))
        grid = TimeGrid(start=_require(grid_raw, "start", float, "grid"),
                        stop=_require(grid_raw, "stop", float, "grid"),
                        points=_require(grid_raw, "points", int, "grid"))
        cfg = ScenarioConfig(
            name="inline",
            params=params,
            prep=prep,
            w_spec=_parse_terms(raw["w_terms"], "w_terms"),
            v_spec=_parse_terms(raw["v_terms"], "v_terms"),
            grid=grid,
            sweep=_parse_sweep(raw["sweep"]) if "sweep" in raw else None,
        )
    except ConfigError:
        raise
    except (ValueError, SiteOutOfRange) as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(scenario=None, inline=cfg, output=output, format="csv")


def resolve_scenario(rc: RunConfig) -> ScenarioConfig:
    if rc.scenario is not None:
        return builtin_scenarios()[rc.scenario]
    return rc.inline


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def table_rows(table: ResultTable) -> tuple[list[str], list[list[str]]]:
    """CSV header and formatted rows for a result table."""
    header = list(CSV_HEADER)
    sweeping = table.sweep_coords is not None
    if sweeping:
        header.append("sweep_coord")
    rows = []
    for i, r in enumerate(table.records):
        row = [_fmt(r.t), _fmt(r.c), _fmt(r.lower), _fmt(r.upper),
               _fmt(r.j_factor), _fmt(r.k_factor), _fmt(r.delta_a),
               _fmt(r.delta_b), "1" if r.bounds_defined else "0"]
        if sweeping:
            row.append(_fmt(table.sweep_coords[i]))
        rows.append(row)
    return header, rows


def write_csv(table: ResultTable, path: str) -> None:
    """Write the table atomically: temp file in the same directory + rename."""
    header, rows = table_rows(table)
    text = "\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    tmp = os.path.join(directory, f".{os.path.basename(path)}.tmp{os.getpid()}")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _scenario_metadata(cfg: ScenarioConfig) -> dict:
    meta = {
        "name": cfg.name,
        "n_outer": cfg.params.n_outer,
        "omega_a": cfg.params.omega_a,
        "omega_s": cfg.params.omega_s,
        "j1": cfg.params.j1,
        "j2": cfg.params.j2,
        "prep": {"kind": cfg.prep.kind, "beta": cfg.prep.beta},
        "w_terms": [{"site": t.site, "axis": t.axis} for t in cfg.w_spec.terms],
        "v_terms": [{"site": t.site, "axis": t.axis} for t in cfg.v_spec.terms],
        "grid": {"start": cfg.grid.start, "stop": cfg.grid.stop,
                 "points": cfg.grid.points},
    }
    if isinstance(cfg.sweep, SiteSweep):
        meta["sweep"] = {"kind": "site", "sites": list(cfg.sweep.sites)}
    elif isinstance(cfg.sweep, SizeSweep):
        meta["sweep"] = {"kind": "size", "sizes": list(cfg.sweep.sizes)}
    elif isinstance(cfg.sweep, Scatter):
        meta["sweep"] = {"kind": "scatter", "tag_time": cfg.sweep.tag_time}
    return meta


def command_run(rc: RunConfig) -> None:
    """Execute the configured scenario and emit CSV plus a metadata sidecar."""
    cfg = resolve_scenario(rc)
    started = time.perf_counter()
    table = run_scenario(cfg)
    wall = time.perf_counter() - started
    write_csv(table, rc.output)
    meta = {
        "tool": "spinscramble",
        "version": __version__,
        "scenario": _scenario_metadata(cfg),
        "rows": len(table.records),
        "tagged_index": table.tagged_index,
        "wall_time_s": wall,
    }
    with open(rc.output + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


class _CheckCounts:
    __slots__ = ("checked", "skipped", "failures")

    def __init__(self):
        self.checked = 0
        self.skipped = 0
        self.failures: list[str] = []

    def fail(self, msg: str) -> None:
        self.failures.append(msg)


def _sandwich_tol() -> float:
    raw = os.environ.get(SANDWICH_TOL_ENV)
    return float(raw) if raw else SANDWICH_TOL


def _pairwise_max_c(cfg: ScenarioConfig) -> np.ndarray:
    """Pointwise max scrambling over all single-term (w, v) pairs."""
    times = cfg.grid.times()
    best = np.full(len(times), -np.inf)
    for wt in cfg.w_spec.terms:
        for vt in cfg.v_spec.terms:
            engine = make_engine(cfg.params, cfg.prep,
                                 OperatorSpec.from_pairs([(wt.site, wt.axis)]),
                                 OperatorSpec.from_pairs([(vt.site, vt.axis)]))
            cs = np.array([r.c for r in engine.records(times)])
            best = np.maximum(best, cs)
    return best


def verify_scenarios(names: list[str], out=None) -> int:
    """Run the invariant suite over the given presets; return the exit code."""
    out = out if out is not None else sys.stdout
    catalog = builtin_scenarios()
    tol = _sandwich_tol()
    checks = {name: _CheckCounts() for name in
              ("dual-path", "sandwich", "coincidence", "ceiling-4",
               "block-bound", "conservation")}
    checked_params = set()

    for name in names:
        cfg = catalog[name]
        try:
            table = run_scenario(cfg)
        except InvariantViolation as exc:
            # dual-path agreement and the sandwich are enforced while the
            # records are produced
            checks["dual-path"].fail(f"scenario {name}: {exc}")
            break
        checks["dual-path"].checked += len(table.records)

        uh_pair = _is_unitary_hermitian_scenario(cfg)
        for rec in table.records:
            if not rec.bounds_defined:
                checks["sandwich"].skipped += 1
            else:
                checks["sandwich"].checked += 1
                if not (rec.lower - tol <= rec.c <= rec.upper + tol):
                    checks["sandwich"].fail(
                        f"scenario {name}, t={rec.t}: L={rec.lower!r} "
                        f"C={rec.c!r} U={rec.upper!r}")
            if uh_pair:
                checks["ceiling-4"].checked += 1
                if rec.c > 4.0 + CEILING_TOL:
                    checks["ceiling-4"].fail(
                        f"scenario {name}, t={rec.t}: C={rec.c!r} exceeds 4")
                if rec.bounds_defined:
                    checks["coincidence"].checked += 1
                    gap = max(abs(rec.upper - rec.c), abs(rec.c - rec.lower))
                    if gap > COINCIDENCE_TOL:
                        checks["coincidence"].fail(
                            f"scenario {name}, t={rec.t}: bound gap {gap:.3e}")
                else:
                    checks["coincidence"].skipped += 1

        if name.startswith("fig3"):
            best = _pairwise_max_c(cfg)
            cap = np.array([
                block_max_bound(cfg.w_spec.n_terms, cfg.v_spec.n_terms, b)
                for b in best])
            cs = np.array([r.c for r in table.records])
            checks["block-bound"].checked += len(cs)
            bad = np.nonzero(cs > cap + CEILING_TOL)[0]
            if bad.size:
                i = int(bad[0])
                checks["block-bound"].fail(
                    f"scenario {name}, t={table.records[i].t}: "
                    f"C={cs[i]!r} exceeds block cap {cap[i]!r}")

        for params in _scenario_params(cfg):
            if params in checked_params:
                continue
            checked_params.add(params)
            checks["conservation"].checked += 1
            h = hamiltonian_for(params)
            sz = total_spin("z", params.n_outer)
            resid = max_abs(h @ sz - sz @ h)
            if resid > 1e-11:
                checks["conservation"].fail(
                    f"scenario {name}: [H, Sz_total] residual {resid:.3e} (N={params.n_outer})")
            cache = evolution_cache_for(params)
            u = propagator(cache, 1.37)
            uni = max_abs(u.conj().T @ u - np.eye(cache.dim))
            if uni > 1e-10:
                checks["conservation"].fail(
                    f"scenario {name}: propagator unitarity residual {uni:.3e}")

    failed = False
    for label, cc in checks.items():
        status = "pass" if not cc.failures else "FAIL"
        line = f"{label}: {status} ({cc.checked} checked"
        if cc.skipped:
            line += f", {cc.skipped} skipped undefined"
        line += f", {len(cc.failures)} failed)"
        print(line, file=out)
        if cc.failures:
            failed = True
            print(f"  first failure: {cc.failures[0]}", file=out)
    return 2 if failed else 0


def _is_unitary_hermitian_scenario(cfg: ScenarioConfig) -> bool:
    """True when every realized operator the scenario touches is
    unitary-Hermitian (single-term specs stay single-term under sweeps)."""
    if not (cfg.w_spec.single_term and cfg.v_spec.single_term):
        return False
    n = cfg.params.n_outer
    return (is_unitary_hermitian(realize_operator(cfg.w_spec, n))
            and is_unitary_hermitian(realize_operator(cfg.v_spec, n)))


def _scenario_params(cfg: ScenarioConfig):
    if isinstance(cfg.sweep, SizeSweep):
        return [replace(cfg.params, n_outer=n) for n in cfg.sweep.sizes]
    return [cfg.params]


def command_verify(scenario: str | None, out=None) -> int:
    catalog = builtin_scenarios()
    if scenario is not None:
        if scenario not in catalog:
            raise ConfigError(f"unknown scenario {scenario!r}; see the list command")
        names = [scenario]
    else:
        names = list(catalog)
    return verify_scenarios(names, out=out)


def command_list(out=None) -> None:
    out = out if out is not None else sys.stdout
    for name, cfg in builtin_scenarios().items():
        prep = cfg.prep.kind if cfg.prep.kind == "pure" else f"thermal(beta={cfg.prep.beta:g})"
        w = "+".join(f"{t.axis}{t.site}" for t in cfg.w_spec.terms)
        v = "+".join(f"{t.axis}{t.site}" for t in cfg.v_spec.terms)
        sweep = ""
        if isinstance(cfg.sweep, SiteSweep):
            sweep = f" sweep=site{list(cfg.sweep.sites)}"
        elif isinstance(cfg.sweep, SizeSweep):
            sweep = f" sweep=size{list(cfg.sweep.sizes)}"
        elif isinstance(cfg.sweep, Scatter):
            sweep = f" sweep=scatter(tag={cfg.sweep.tag_time:.6g})"
        print(f"{name}: N={cfg.params.n_outer} {prep} W={w} V={v}{sweep}"
              f" -- {cfg.description}", file=out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinscramble",
        description="Spin-star scrambling measure and bound verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario from a config file")
    p_run.add_argument("--config", required=True, help="path to the YAML config")
    p_ver = sub.add_parser("verify", help="run the invariant suite over presets")
    p_ver.add_argument("--scenario", default=None, help="verify one preset only")
    sub.add_parser("list", help="list the built-in scenario presets")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            try:
                with open(args.config, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
            command_run(parse_config(text))
            return 0
        if args.command == "verify":
            return command_verify(args.scenario)
        command_list()
        return 0
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, SpinScrambleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
