"""Independent simulation oracle for MAP, activity factor and coverage.

Everything here works directly from the model primitives (point samples,
exponential fades, indicator tests) and never calls the analytic modules,
so the two sides can legitimately cross-validate each other.

Determinism: every estimator derives its draws from an RngStream, and one
realization <-> one child stream, so results are independent of how work
is partitioned across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PrimaryPlacement, TWO_PI, primary_rx_position
from .scenario import Scenario


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream) pair naming one reproducible draw sequence."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,)))

    def child(self, i: int) -> "RngStream":
        return RngStream(seed=self.seed, stream=self.stream * 1_000_003 + i + 1)


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    se: float
    ci_low: float
    ci_high: float
    n: int

    def overlaps(self, other: "EstimateWithCI") -> bool:
        return self.ci_low <= other.ci_high and other.ci_low <= self.ci_high

    def z_score(self, reference: float) -> float:
        if self.se == 0.0:
            return 0.0 if self.mean == reference else math.inf
        return (self.mean - reference) / self.se


_Z95 = 1.959963984540054


def mean_estimate(samples: np.ndarray) -> EstimateWithCI:
    """Normal-approximation CI for the mean of real-valued samples."""
    n = len(samples)
    m = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return EstimateWithCI(m, se, m - _Z95 * se, m + _Z95 * se, n)


def proportion_estimate(successes: int, n: int) -> EstimateWithCI:
    """CI for a binomial proportion; Wilson near the {0,1} edges."""
    p = successes / n
    if p < 5.0 / n or p > 1.0 - 5.0 / n:
        z2 = _Z95 * _Z95
        denom = 1.0 + z2 / n
        centre = (p + z2 / (2 * n)) / denom
        half = _Z95 * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
        lo, hi = centre - half, centre + half
    else:
        half = _Z95 * math.sqrt(p * (1 - p) / n)
        lo, hi = p - half, p + half
    if 0 < p < 1:
        se = math.sqrt(p * (1 - p) / n)
    else:
        # smoothed SE so edge estimates keep a usable z-score
        p_eff = (successes + 0.5) / (n + 1)
        se = math.sqrt(p_eff * (1 - p_eff) / n)
    return EstimateWithCI(p, se, max(lo, 0.0), min(hi, 1.0), n)


@dataclass
class NetworkRealization:
    """One sampled secondary network with all fades drawn.

    Positions are relative to the frame origin (the receiver the disk is
    centred on); ``u`` holds the transmit indicators evaluated for that
    frame.  Co-link fades for the receiver under study ride along as
    scalars.
    """

    xy: np.ndarray        # (n, 2) transmitter positions
    omega: np.ndarray     # (n,) transmit beam axes
    g_restrict: np.ndarray  # (n,) fades gating the transmit restriction
    g_interf: np.ndarray  # (n,) fades towards the receiver under study
    u: np.ndarray         # (n,) transmit indicators
    h_colink: float       # serving-link fade (H_p or F_s0)
    g_cross0: float       # cross fade onto the receiver under study (G'_0)

    @property
    def n(self) -> int:
        return len(self.omega)


def _disk_points(rng: np.random.Generator, lam: float, R: float):
    n = rng.poisson(lam * math.pi * R * R)
    r = R * np.sqrt(rng.uniform(size=n))
    th = rng.uniform(0.0, TWO_PI, size=n)
    return np.column_stack([r * np.cos(th), r * np.sin(th)]), r, th


def _restriction_indicator(sc: Scenario, g_fade, gains, dist) -> np.ndarray:
    """Strict transmit test: p_s * G * g * d^-alpha < rho.

    Zero gain deposits no power (allowed whenever rho > 0); zero distance
    with positive gain means infinite received power (always barred).
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        path = np.where(dist > 0, dist, 1.0) ** (-sc.alpha)
        path = np.where(dist > 0, path, np.inf)
        received = sc.p_s * g_fade * gains * path
    received = np.where(gains == 0.0, 0.0, received)
    return received < sc.rho


def sample_realization(sc: Scenario, rng: np.random.Generator) -> NetworkRealization:
    """Sample the secondary network in the primary frame (primary receiver
    at the origin, primary transmitter on the positive x-axis)."""
    xy, r, th = _disk_points(rng, sc.lambda_s, sc.R)
    omega = rng.uniform(0.0, TWO_PI, size=len(r))
    g_restrict = rng.exponential(size=len(r))
    g_interf = g_restrict  # same fade gates the restriction and interferes
    gains = sc.patterns.pr.gain(th) * sc.patterns.st.gain(th - math.pi - omega)
    u = _restriction_indicator(sc, g_restrict, gains, r)
    return NetworkRealization(
        xy=xy,
        omega=omega,
        g_restrict=g_restrict,
        g_interf=g_interf,
        u=u,
        h_colink=float(rng.exponential()),
        g_cross0=float(rng.exponential()),
    )


def estimate_map(
    link, pp: PrimaryPlacement, sc: Scenario, n: int, rng: np.random.Generator
) -> EstimateWithCI:
    """Empirical MAP of one fixed link: fraction of fades below threshold."""
    if n < 1:
        raise ValueError("need at least one draw")
    from .geometry import bearing_to_primary_rx, cross_distance_z  # local to avoid import churn

    d = bearing_to_primary_rx(link.tx, pp, sc.r_p)
    z = cross_distance_z(link.tx, pp, sc.r_p)
    g = sc.patterns.st.gain(d - link.orientation) * sc.patterns.pr.gain(d - pp.omega_p)
    fades = rng.exponential(size=n)
    ok = sc.p_s * fades * g * (z ** (-sc.alpha) if z > 0 else np.inf) < sc.rho
    if g == 0.0:
        ok = np.full(n, sc.rho > 0)
    return proportion_estimate(int(np.count_nonzero(ok)), n)


def estimate_af(sc: Scenario, n_realizations: int, rng_stream: RngStream) -> EstimateWithCI:
    """Mean active fraction, normalized by the mean point count."""
    if sc.lambda_s == 0.0:
        raise ValueError("activity factor undefined for lambda_s = 0 (no transmitters)")
    mean_count = sc.lambda_s * math.pi * sc.R ** 2
    ratios = np.empty(n_realizations)
    for i in range(n_realizations):
        real = sample_realization(sc, rng_stream.child(i).generator())
        ratios[i] = float(np.count_nonzero(real.u)) / mean_count
    return mean_estimate(ratios)


def estimate_coverage_primary(
    tau: float, sc: Scenario, n: int, rng_stream: RngStream
) -> EstimateWithCI:
    """Fraction of realizations whose primary-link SINR exceeds tau."""
    g0 = sc.patterns.pt.boresight() * sc.patterns.pr.boresight()
    signal_scale = sc.p_p * g0 * sc.r_p ** (-sc.alpha)
    hits = 0
    for i in range(n):
        rng = rng_stream.child(i).generator()
        real = sample_realization(sc, rng)
        r = np.hypot(real.xy[:, 0], real.xy[:, 1])
        th = np.arctan2(real.xy[:, 1], real.xy[:, 0])
        gains = sc.patterns.pr.gain(th) * sc.patterns.st.gain(th - math.pi - real.omega)
        active = real.u & (r > 0)
        interference = float(
            np.sum(sc.p_s * real.g_interf[active] * gains[active] * r[active] ** (-sc.alpha))
        )
        denom = sc.sigma2 + interference
        sinr = math.inf if denom == 0.0 else real.h_colink * signal_scale / denom
        hits += sinr > tau
    return proportion_estimate(hits, n)


def estimate_coverage_secondary(
    tau: float, sc: Scenario, n: int, rng_stream: RngStream
) -> EstimateWithCI:
    """Fraction of realizations whose typical-link SINR exceeds tau.

    The disk is centred on the typical receiver; realizations where the
    typical transmitter is barred count as outage.
    """
    pp = sc.placement
    if pp.mode != "fixed":
        raise ValueError("secondary coverage estimation needs a fixed placement")
    yp = primary_rx_position(pp, sc.r_p).to_xy()
    a0 = sc.p_s * sc.patterns.st.boresight() * sc.patterns.sr.boresight() * sc.r_s ** (-sc.alpha)
    # typical transmitter at (r_s, 0), beam axis pi
    d0 = math.atan2(yp[1], yp[0] - sc.r_s)
    z0 = math.hypot(yp[0] - sc.r_s, yp[1])
    g_typ = sc.patterns.st.gain(d0 - math.pi) * sc.patterns.pr.gain(d0 - pp.omega_p)
    # primary interference gains onto the typical receiver
    g_ip = sc.patterns.sr.gain(pp.delta_p) * sc.patterns.pt.gain(pp.delta_p - math.pi - pp.omega_p)
    hits = 0
    for i in range(n):
        rng = rng_stream.child(i).generator()
        xy, r, th = _disk_points(rng, sc.lambda_s, sc.R)
        omega = rng.uniform(0.0, TWO_PI, size=len(r))
        g_restrict = rng.exponential(size=len(r))
        dvec_x = yp[0] - xy[:, 0]
        dvec_y = yp[1] - xy[:, 1]
        z = np.hypot(dvec_x, dvec_y)
        d = np.arctan2(dvec_y, dvec_x)
        gains_p = sc.patterns.st.gain(d - omega) * sc.patterns.pr.gain(d - pp.omega_p)
        u = _restriction_indicator(sc, g_restrict, gains_p, z)
        g_interf = rng.exponential(size=len(r))
        gains_typ = sc.patterns.sr.gain(th) * sc.patterns.st.gain(th - math.pi - omega)
        active = u & (r > 0)
        i_s = float(np.sum(sc.p_s * g_interf[active] * gains_typ[active] * r[active] ** (-sc.alpha)))
        g0_fade = rng.exponential()  # gates the typical transmitter's restriction
        u0 = (sc.p_s * g0_fade * g_typ * (z0 ** (-sc.alpha) if z0 > 0 else np.inf)) < sc.rho
        if g_typ == 0.0:
            u0 = sc.rho > 0
        if not u0:
            continue
        f0 = rng.exponential()
        gp0 = rng.exponential()
        i_p = gp0 * sc.p_p * g_ip * (pp.x_p ** (-sc.alpha) if pp.x_p > 0 else (np.inf if g_ip > 0 else 0.0))
        denom = sc.sigma2 + i_p + i_s
        sinr = math.inf if denom == 0.0 else f0 * a0 / denom
        hits += sinr > tau
    return proportion_estimate(hits, n)
