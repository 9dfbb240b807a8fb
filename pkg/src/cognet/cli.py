"""Batch front-end: sweeps, threshold search and analytic-vs-MC validation.

Exit codes: 0 success, 1 numerical failure, 2 usage/config error,
3 validation z-score failure.  Output is CSV (17 significant digits,
fixed header per command, rows in grid order) or JSON for the threshold
search; given the same config and seed the bytes are identical across
runs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .access import SecondaryLink, activity_factor, activity_factor_sectorized, map_primary_frame
from .coverage_primary import coverage_primary_simplified
from .coverage_secondary import coverage_secondary, coverage_secondary_averaged
from .geometry import PolarPoint, PrimaryPlacement
from .montecarlo import (
    RngStream,
    estimate_af,
    estimate_coverage_primary,
    estimate_coverage_secondary,
    estimate_map,
)
from .numerics import QuadratureError
from .planner import QoSConstraint, find_rho_dagger
from .scenario import ConfigError, RunConfig, Scenario, db_to_linear, load_config, preset_type

COMMANDS = ("map-field", "af-sweep", "coverage-sweep", "find-rho", "validate")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])


@dataclass(frozen=True)
class SweepSpec:
    variable: str            # rho | tau | m_p | m_s | R | lambda_s
    scale: str               # log | linear | db
    lo: float
    hi: float
    count: int
    outputs: tuple

    def __post_init__(self):
        if self.variable not in ("rho", "tau", "m_p", "m_s", "R", "lambda_s"):
            raise ConfigError(f"[sweep] unknown variable {self.variable!r}")
        if self.scale not in ("log", "linear", "db"):
            raise ConfigError(f"[sweep] unknown scale {self.scale!r}")
        if self.count < 2:
            raise ConfigError("[sweep] grid count must be >= 2")
        if self.scale == "log" and (self.lo <= 0 or self.hi <= 0):
            raise ConfigError("[sweep] log grid needs positive bounds")
        bad = [o for o in self.outputs if o not in ("af", "p_cp", "p_cs", "p_c")]
        if bad:
            raise ConfigError(f"[sweep] unknown outputs {bad}")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.count)
        if self.scale == "db":
            return 10.0 ** (np.linspace(self.lo, self.hi, self.count) / 10.0)
        return np.linspace(self.lo, self.hi, self.count)


def _sweep_spec(sections: dict, default_outputs=("p_cp", "p_cs", "p_c")) -> SweepSpec:
    tbl = sections.get("sweep", {})
    return SweepSpec(
        variable=tbl.get("variable", "rho"),
        scale=tbl.get("scale", "log"),
        lo=float(tbl.get("lo", 1e-12)),
        hi=float(tbl.get("hi", 1e-6)),
        count=int(tbl.get("count", 25)),
        outputs=tuple(tbl.get("outputs", list(default_outputs))),
    )


def _apply_variable(sc: Scenario, variable: str, value: float) -> Scenario:
    from dataclasses import replace

    if variable == "rho":
        return sc.with_rho(value)
    if variable == "tau":
        return sc  # tau is not a scenario field; handled by the caller
    if variable == "m_p":
        return sc.with_ula(int(round(value)), _ula_ms(sc))
    if variable == "m_s":
        return sc.with_ula(_ula_mp(sc), int(round(value)))
    if variable == "R":
        return replace(sc, R=value)
    if variable == "lambda_s":
        return replace(sc, lambda_s=value)
    raise ConfigError(f"unsupported sweep variable {variable!r}")


def _ula_mp(sc: Scenario) -> int:
    g = sc.patterns.pt.boresight()
    return max(1, int(round(g)))


def _ula_ms(sc: Scenario) -> int:
    g = sc.patterns.st.boresight()
    return max(1, int(round(g)))


def _mc_settings(sections: dict) -> dict:
    tbl = dict(sections.get("mc", {}))
    tbl.setdefault("realizations", 2000)
    tbl.setdefault("n_placements", 2000)
    return tbl


def _scenario_for_mc(sc: Scenario, mc: dict) -> Scenario:
    from dataclasses import replace

    if "region_radius_m" in mc:
        sc = replace(sc, R=float(mc["region_radius_m"]))
    return sc


# --- commands --------------------------------------------------------------


def cmd_map_field(run: RunConfig, seed: int, out, threads: int) -> int:
    tbl = run.sections.get("map_field", {})
    resolution = int(tbl.get("resolution", 64))
    if resolution < 16:
        raise ConfigError("[map_field] resolution must be >= 16")
    extent = float(tbl.get("extent_m", 300.0))
    if extent <= 0:
        raise ConfigError("[map_field] extent_m must be > 0")
    omegas = [math.radians(float(v)) for v in tbl.get("omega_s_deg", [0.0])]
    if not omegas:
        raise ConfigError("[map_field] omega_s_deg must not be empty")
    axis = np.linspace(-extent, extent, resolution)
    rows = []
    for omega in omegas:
        for y in axis:
            for x in axis:
                link = SecondaryLink(tx=PolarPoint(math.hypot(x, y), math.atan2(y, x)), orientation=omega)
                rows.append((x, y, omega, map_primary_frame(link, run.scenario)))
    _write_csv(out, ["x_m", "y_m", "omega_s_rad", "map"], rows)
    return 0


def _af_point(args):
    sc, m_p, m_s, rho = args
    sc_i = sc.with_ula(m_p, m_s).with_rho(rho)
    if sc_i.patterns.all_sector_like():
        return activity_factor_sectorized(sc_i)
    return activity_factor(sc_i)


def cmd_af_sweep(run: RunConfig, seed: int, out, threads: int) -> int:
    spec = _sweep_spec(run.sections, default_outputs=("af",))
    tbl = run.sections.get("sweep", {})
    m_p_values = [int(v) for v in tbl.get("m_p_values", [1, 4])]
    m_s_values = [int(v) for v in tbl.get("m_s_values", [1, 4])]
    grid = spec.grid() if spec.variable == "rho" else _sweep_spec({"sweep": {**tbl, "variable": "rho"}}).grid()
    jobs = [(run.scenario, m_p, m_s, float(rho)) for m_p in m_p_values for m_s in m_s_values for rho in grid]
    values = _map_jobs(_af_point, jobs, threads)
    rows = [(rho, m_p, m_s, af) for (sc, m_p, m_s, rho), af in zip(jobs, values)]
    _write_csv(out, ["rho_w", "m_p", "m_s", "af"], rows)
    return 0


def _coverage_point(args):
    sc, variable, value, tau, outputs, n_placements, seed = args
    sc_v = _apply_variable(sc, variable, value) if variable != "tau" else sc
    tau_v = value if variable == "tau" else tau
    res = {}
    if "af" in outputs:
        res["af"] = activity_factor_sectorized(sc_v) if sc_v.patterns.all_sector_like() else activity_factor(sc_v)
    p_cp = coverage_primary_simplified(tau_v, sc_v) if {"p_cp", "p_c"} & set(outputs) else None
    if {"p_cs", "p_c"} & set(outputs):
        if sc_v.placement.mode == "random":
            p_cs = coverage_secondary_averaged(tau_v, sc_v, n_placements, seed=seed).mean
        else:
            p_cs, _ = coverage_secondary(tau_v, sc_v, fast=True)
    else:
        p_cs = None
    if "p_cp" in outputs:
        res["p_cp"] = p_cp
    if "p_cs" in outputs:
        res["p_cs"] = p_cs
    if "p_c" in outputs:
        res["p_c"] = p_cp + p_cs
    return res


def cmd_coverage_sweep(run: RunConfig, seed: int, out, threads: int) -> int:
    spec = _sweep_spec(run.sections)
    mc = _mc_settings(run.sections)
    tau = db_to_linear(float(run.sections.get("sweep", {}).get("tau_db", 0.0)))
    jobs = [
        (run.scenario, spec.variable, float(v), tau, spec.outputs, int(mc["n_placements"]), seed)
        for v in spec.grid()
    ]
    values = _map_jobs(_coverage_point, jobs, threads)
    header = [spec.variable] + list(spec.outputs)
    rows = [[job[2]] + [res[name] for name in spec.outputs] for job, res in zip(jobs, values)]
    _write_csv(out, header, rows)
    return 0


def cmd_find_rho(run: RunConfig, seed: int, out, threads: int) -> int:
    tbl = run.sections.get("qos", {})
    q_template = dict(
        p_star=float(tbl.get("p_star", 0.7)),
        s_star=float(tbl.get("s_star", 0.5)),
        tau_star=db_to_linear(float(tbl.get("tau_star_db", 0.0))),
    )
    setups = [int(v) for v in tbl.get("setups", [1, 2, 3, 4])]
    m_values = [int(v) for v in tbl.get("m_values", [1, 2, 4, 8])]
    n_placements = int(tbl.get("n_placements", _mc_settings(run.sections)["n_placements"]))
    q = QoSConstraint(**q_template)
    results = {}
    for setup in setups:
        sc_setup = run.scenario.with_placement(preset_type(setup, R=run.scenario.R))
        per_m = {}
        for m in m_values:
            res = find_rho_dagger(q, sc_setup.with_ula(m, m), n_placements=n_placements, seed=seed)
            per_m[f"M_{m}"] = {
                "status": res.status,
                "rho_dagger_w": res.rho_dagger,
                "p_cp": res.p_cp,
                "p_cs": res.p_cs,
            }
        results[f"setup_{setup}"] = per_m
    doc = {
        "p_star": q.p_star,
        "s_star": q.s_star,
        "tau_star": q.tau_star,
        "n_placements": n_placements,
        "seed": seed,
        "results": results,
    }
    json.dump(doc, out, indent=2, sort_keys=True)
    out.write("\n")
    return 0


def cmd_validate(run: RunConfig, seed: int, out, threads: int) -> int:
    mc = _mc_settings(run.sections)
    n = int(mc["realizations"])
    sc = _scenario_for_mc(run.scenario, mc)
    if sc.placement.mode == "random":
        sc = sc.with_placement(preset_type(1, R=sc.R))
    taus_db = [float(v) for v in mc.get("tau_db", [-5.0, 0.0, 5.0])]
    rows = []

    # medium-access probability at a fixed probe link, frames made coincident
    probe_pp = PrimaryPlacement(x_p=sc.r_p, delta_p=0.0, omega_p=math.pi)
    probe = SecondaryLink(tx=PolarPoint(sc.R / 8.0, math.pi / 4), orientation=math.pi / 3)
    analytic_map = map_primary_frame(probe, sc)
    est = estimate_map(probe, probe_pp, sc, max(n * 10, 10000), RngStream(seed, 1).generator())
    rows.append(("map_probe", analytic_map, est))

    analytic_af = (
        activity_factor_sectorized(sc) if sc.patterns.all_sector_like() else activity_factor(sc)
    )
    est = estimate_af(sc, n, RngStream(seed, 2))
    rows.append(("af", analytic_af, est))

    for i, tdb in enumerate(taus_db):
        tau = db_to_linear(tdb)
        analytic = coverage_primary_simplified(tau, sc)
        est = estimate_coverage_primary(tau, sc, n, RngStream(seed, 3 + i))
        rows.append((f"p_cp@{tdb:g}dB", analytic, est))
    for i, tdb in enumerate(taus_db):
        tau = db_to_linear(tdb)
        analytic, _ = coverage_secondary(tau, sc)
        est = estimate_coverage_secondary(tau, sc, n, RngStream(seed, 100 + i))
        rows.append((f"p_cs@{tdb:g}dB", analytic, est))

    table = [(name, analytic, e.mean, e.se, e.z_score(analytic)) for name, analytic, e in rows]
    _write_csv(out, ["quantity", "analytic", "mc_mean", "mc_se", "z"], table)
    worst = max(abs(r[4]) for r in table)
    return 3 if worst > 4.0 else 0


# --- driver ----------------------------------------------------------------


def _map_jobs(fn, jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cognet", description="cognitive-network coverage toolkit")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--config", required=True, help="TOML config file")
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("COGNET_THREADS", "1")),
        help="worker processes for grid evaluation (env COGNET_THREADS)",
    )
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = load_config(args.config)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    handler = {
        "map-field": cmd_map_field,
        "af-sweep": cmd_af_sweep,
        "coverage-sweep": cmd_coverage_sweep,
        "find-rho": cmd_find_rho,
        "validate": cmd_validate,
    }[args.command]
    try:
        if args.out is None:
            return handler(run, args.seed, sys.stdout, args.threads)
        with open(args.out, "w", newline="") as fh:
            return handler(run, args.seed, fh, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
