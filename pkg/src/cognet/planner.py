"""Cumulative performance and transmit-restriction-threshold selection.

The threshold search scans a logarithmic grid because the secondary
coverage need not be monotone in the threshold for general geometries:
the feasible set can be a union of intervals, and the search returns the
infimum of that union, refined by bisection.  Infeasibility is a result,
not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coverage_primary import coverage_primary_simplified
from .coverage_secondary import coverage_secondary, coverage_secondary_averaged
from .scenario import Scenario


@dataclass(frozen=True)
class QoSConstraint:
    p_star: float   # minimum primary coverage
    s_star: float   # minimum secondary coverage
    tau_star: float  # SINR threshold, linear

    def __post_init__(self):
        if not (0.0 <= self.p_star <= 1.0 and 0.0 <= self.s_star <= 1.0):
            raise ValueError("coverage targets must lie in [0, 1]")
        if self.tau_star <= 0:
            raise ValueError("tau_star must be > 0 (linear scale)")


@dataclass(frozen=True)
class RhoSearchResult:
    status: str                      # "feasible" | "infeasible"
    rho_dagger: float | None
    p_cp: float | None
    p_cs: float | None
    trace: tuple = field(default=())

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def rho_or_inf(self) -> float:
        """Infeasible maps to +inf, making thresholds comparable."""
        return self.rho_dagger if self.feasible else math.inf


def _p_cs(tau: float, rho: float, sc: Scenario, n_placements: int, seed: int,
          prune_below: float | None = None) -> float:
    """Secondary coverage at one operating point.

    ``prune_below``: when the interference-free upper bound already falls
    short of this target, return the bound without evaluating the costly
    interference integral (a constraint check cannot pass anyway).
    """
    sc_rho = sc.with_rho(rho)
    if sc.placement.mode == "random":
        if prune_below is not None:
            bound = coverage_secondary_averaged(
                tau, sc_rho, n_placements, seed=seed, with_term4=False
            ).mean
            if bound < prune_below:
                return bound
        return coverage_secondary_averaged(tau, sc_rho, n_placements, seed=seed).mean
    p, _ = coverage_secondary(tau, sc_rho, fast=True)
    return p


def cumulative_performance(
    tau: float, rho: float, sc: Scenario, n_placements: int = 10_000, seed: int = 0
) -> float:
    """Sum of primary and secondary coverage at one operating point."""
    sc_rho = sc.with_rho(rho)
    return coverage_primary_simplified(tau, sc_rho) + _p_cs(tau, rho, sc, n_placements, seed)


def default_rho_grid(lo: float = 1e-15, hi: float = 1e-3, per_decade: int = 25) -> np.ndarray:
    decades = math.log10(hi / lo)
    n = int(round(decades * per_decade)) + 1
    return np.logspace(math.log10(lo), math.log10(hi), n)


def find_rho_dagger(
    q: QoSConstraint,
    sc: Scenario,
    grid: np.ndarray | None = None,
    n_placements: int = 10_000,
    seed: int = 0,
    refine_rel_width: float = 0.01,
) -> RhoSearchResult:
    """Smallest threshold meeting both coverage constraints at tau_star.

    The primary constraint is cheap and screens the grid first; the
    secondary constraint is then evaluated scanning upward, so the first
    jointly feasible grid point is the infimum of the feasible set.  A
    final bisection against the previous grid point narrows the bracket
    to ``refine_rel_width`` and returns its feasible end.
    """
    rhos = default_rho_grid() if grid is None else np.asarray(grid, dtype=float)
    p_cp_grid = np.array([coverage_primary_simplified(q.tau_star, sc.with_rho(r)) for r in rhos])
    trace: list[tuple[float, float, float | None]] = []

    def feasible_at(rho: float, p_cp: float | None = None) -> tuple[bool, float, float | None]:
        cp = coverage_primary_simplified(q.tau_star, sc.with_rho(rho)) if p_cp is None else p_cp
        if cp < q.p_star:
            return False, cp, None
        cs = _p_cs(q.tau_star, rho, sc, n_placements, seed, prune_below=q.s_star)
        return cs >= q.s_star, cp, cs

    first = None
    for i, rho in enumerate(rhos):
        ok, cp, cs = feasible_at(float(rho), float(p_cp_grid[i]))
        trace.append((float(rho), cp, cs))
        if ok:
            first = i
            break
    if first is None:
        return RhoSearchResult("infeasible", None, None, None, tuple(trace))

    hi = float(rhos[first])
    if first == 0:
        ok, cp, cs = True, trace[-1][1], trace[-1][2]
        return RhoSearchResult("feasible", hi, cp, cs, tuple(trace))
    lo = float(rhos[first - 1])
    cp_hi, cs_hi = trace[-1][1], trace[-1][2]
    while hi - lo > refine_rel_width * hi:
        mid = math.sqrt(lo * hi)
        ok, cp, cs = feasible_at(mid)
        trace.append((mid, cp, cs))
        if ok:
            hi, cp_hi, cs_hi = mid, cp, cs
        else:
            lo = mid
    return RhoSearchResult("feasible", hi, cp_hi, cs_hi, tuple(trace))


def feasible_tau_ceiling(
    p_star: float,
    s_star: float,
    sc: Scenario,
    rho: float,
    tau_grid_db: np.ndarray | None = None,
    n_placements: int = 10_000,
    seed: int = 0,
) -> float | None:
    """Largest SINR threshold (linear) on a dB grid satisfying both
    constraints at fixed rho; None when even the smallest grid point
    fails.  Both coverages are nonincreasing in the threshold, so the
    feasible set is a down-set and binary search applies.
    """
    if tau_grid_db is None:
        tau_grid_db = np.arange(-40.0, 40.0 + 1e-9, 0.25)
    taus = 10.0 ** (np.asarray(tau_grid_db) / 10.0)
    sc_rho = sc.with_rho(rho)

    def ok(tau: float) -> bool:
        if coverage_primary_simplified(tau, sc_rho) < p_star:
            return False
        return _p_cs(tau, rho, sc, n_placements, seed) >= s_star

    lo, hi = 0, len(taus) - 1
    if not ok(float(taus[lo])):
        return None
    if ok(float(taus[hi])):
        return float(taus[hi])
    # invariant: ok(taus[lo]) and not ok(taus[hi])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(float(taus[mid])):
            lo = mid
        else:
            hi = mid
    return float(taus[lo])
