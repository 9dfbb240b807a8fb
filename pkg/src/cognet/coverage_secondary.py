"""SINR coverage of the typical secondary link.

The coverage factorizes into four terms: a noise factor, the typical
link's own medium-access probability, a primary-interference factor, and
the exponential of the secondary-interference integral (term 4).  Term 4
is evaluated along several routes that check each other:

* ``term4_exact``: adaptive quadrature of the full (angle, radius,
  orientation) integral;
* ``term4_sectorized``: the event-decomposed route for sectorized beams,
  with orientation weights computed as exact arc-overlap measures;
* ``term4_near_primary`` / ``term4_far_primary``: the gamma-kernel
  approximations valid when the primary receiver is very close to /
  very far from the typical pair.

The near/far kernels use the *upper* incomplete gamma scaled by a growing
exponential; pairing the lower function (or a decaying exponential) fails
the zero-threshold limit and disagrees with direct quadrature, which is
how the convention was pinned down.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .access import typical_map
from .antenna import IDEAL, OMNI, SECTORIZED, BeamPattern, expected_gain_power
from .geometry import TWO_PI, primary_rx_position, wrap_angle
from .montecarlo import EstimateWithCI, RngStream, mean_estimate
from .numerics import QuadratureSpec, exp_scaled_upper_gamma, quad_checked
from .scenario import Scenario

# The interference integral carries inner-quadrature noise around 1e-8, so
# chasing tighter angular tolerances only burns subdivisions; 1e-7 is far
# below every consumer's needs (cross-route checks run at 1e-3).
TERM4_QUADRATURE = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-10, fail_rel=1e-4, fail_abs=1e-4)


def _radial_quad(fn, spec: QuadratureSpec, points=None) -> float:
    """Inner radial panel on the mapped unit interval; convergence of the
    enclosing angular quadrature is what gets checked."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            fn, 0.0, 1.0, points=points,
            epsabs=spec.abs_tol, epsrel=max(spec.rel_tol, 1e-8),
            limit=spec.max_subdivisions,
        )
    return val


@dataclass(frozen=True)
class SecondaryCoverageTerms:
    term1: float  # noise factor
    term2: float  # typical-link medium-access probability
    term3: float  # primary-interference factor
    term4: float  # secondary-interference integral (before the -lambda_s exp)

    def probability(self, lambda_s: float) -> float:
        return self.term1 * self.term2 * self.term3 * math.exp(-lambda_s * self.term4)


@dataclass(frozen=True)
class GainCombination:
    """One cell of the sectorized term-4 decomposition."""

    a_i: float      # interferer transmit gain towards the primary receiver
    b_i: float      # interferer transmit gain towards the typical receiver
    c_k: float      # primary-receiver gain towards the interferer
    d_k: float      # typical-receiver gain towards the interferer
    weight: float   # orientation measure q_i
    event: str      # receive-lobe event label


def gain_combinations(sc: Scenario, delta: float, in_e1: bool, in_e2: bool) -> list[GainCombination]:
    """The four orientation cells at one integration point, given the
    receive-lobe event outcomes (introspection/testing helper; the
    quadratures inline this)."""
    a_pr, b_pr, _ = _sector_params(sc.patterns.pr)
    a_sr, b_sr, _ = _sector_params(sc.patterns.sr)
    a_st, b_st, phi_st = _sector_params(sc.patterns.st)
    c_k = a_pr if in_e2 else b_pr
    d_k = a_sr if in_e1 else b_sr
    event = f"{'E1' if in_e1 else 'not-E1'}&{'E2' if in_e2 else 'not-E2'}"
    q1, q2, q4 = _combo_weights_scalar(phi_st, delta)
    pairs = ((a_st, a_st, q1), (a_st, b_st, q2), (b_st, a_st, q2), (b_st, b_st, q4))
    return [GainCombination(a, b, c_k, d_k, q, event) for a, b, q in pairs]


def _sector_params(p: BeamPattern) -> tuple[float, float, float]:
    """(main, side, beamwidth) with omni treated as a full-circle sector."""
    if p.kind == OMNI:
        return 1.0, 1.0, TWO_PI
    if p.kind in (SECTORIZED, IDEAL):
        return p.main_gain, p.side_gain, p.beamwidth
    raise ValueError("sector-like pattern required")


def _scalar_gain_fn(p: BeamPattern):
    """Scalar-fast gain closure (quadrature hot path avoids ndarray churn)."""
    if p.kind == OMNI:
        return lambda arg: 1.0
    if p.kind in (SECTORIZED, IDEAL):
        a, b, half = p.main_gain, p.side_gain, 0.5 * p.beamwidth
        return lambda arg: a if abs(math.remainder(arg, TWO_PI)) <= half else b
    samples, n = p.samples, len(p.samples)
    return lambda arg: float(samples[int(round((math.remainder(arg, TWO_PI) + math.pi) / TWO_PI * n)) % n])


def _combo_weights_scalar(phi: float, delta: float):
    """q1 (both arcs), q2 (first only) and q4 (neither) for arc width phi."""
    sep = abs(math.remainder(delta, TWO_PI))
    q = phi / TWO_PI
    q1 = (max(phi - sep, 0.0) + max(phi - (TWO_PI - sep), 0.0)) / TWO_PI
    return q1, q - q1, 1.0 - 2.0 * q + q1


def _arc_overlap_fraction(width: float, sep):
    """Fraction of orientations landing in both of two arcs of equal
    ``width`` whose centres are ``sep`` apart (|sep| <= pi)."""
    sep = np.abs(sep)
    return (np.maximum(width - sep, 0.0) + np.maximum(width - (TWO_PI - sep), 0.0)) / TWO_PI


def _st_combination_weights(st: BeamPattern, delta):
    """Joint law of the interferer's two transmit gains over its uniform
    orientation: [(gain_to_primary, gain_to_typical, weight), ...].

    ``delta`` is the separation between the two target bearings.  The
    weights are the exact overlap measures of the two main-lobe arcs.
    """
    a, b, phi = _sector_params(st)
    q = phi / TWO_PI
    q1 = _arc_overlap_fraction(phi, wrap_angle(delta))
    q2 = q - q1
    return ((a, a, q1), (a, b, q2), (b, a, q2), (b, b, 1.0 - 2.0 * q + q1))


@dataclass(frozen=True)
class _Frame:
    """Geometry of the fixed primary link in the secondary frame."""

    yp_x: float
    yp_y: float
    y_p: float
    b0: float      # bearing of the primary receiver from the origin
    a0: float      # typical-link serving power
    a2: float      # primary-to-typical interference power


def _frame(sc: Scenario) -> _Frame:
    pp = sc.placement
    if pp.mode != "fixed":
        raise ValueError("fixed placement required; use coverage_secondary_averaged for random laws")
    yp = primary_rx_position(pp, sc.r_p).to_xy()
    a0 = sc.p_s * sc.patterns.st.boresight() * sc.patterns.sr.boresight() * sc.r_s ** (-sc.alpha)
    g_ip = sc.patterns.sr.gain(pp.delta_p) * sc.patterns.pt.gain(pp.delta_p - math.pi - pp.omega_p)
    if g_ip == 0.0:
        a2 = 0.0
    elif pp.x_p == 0.0:
        a2 = math.inf
    else:
        a2 = sc.p_p * g_ip * pp.x_p ** (-sc.alpha)
    return _Frame(yp[0], yp[1], math.hypot(yp[0], yp[1]), math.atan2(yp[1], yp[0]), a0, a2)


def _sr_breakpoints(sc: Scenario) -> list[float] | None:
    sr = sc.patterns.sr
    if sr.kind in (SECTORIZED, IDEAL) and sr.beamwidth < TWO_PI:
        half = 0.5 * sr.beamwidth
        return [half, TWO_PI - half]
    return None


def _theta_integral(fn, points, spec: QuadratureSpec, what: str) -> float:
    return quad_checked(fn, 0.0, TWO_PI, spec, f"{what} angular quadrature", points=points)


def _radial_scale(tau: float, sc: Scenario, frame: _Frame) -> float:
    denom_radius = sc.r_s * max(tau, 1e-9) ** (1.0 / sc.alpha)
    return frame.y_p + denom_radius + sc.r_s


def _radial_breakpoints(theta: float, frame: _Frame, sc: Scenario, scale: float) -> list[float]:
    """Mapped radii where the integrand has lobe-edge jumps or weight kinks.

    Along the ray x*e(theta) the bearing d(x) of the primary receiver
    sweeps monotonically from its bearing at the origin to theta+pi, and
    ``d(x) = c`` is linear in x, so each critical bearing c contributes at
    most one breakpoint.
    """
    pr, st = sc.patterns.pr, sc.patterns.st
    targets: list[float] = []
    wp = sc.placement.omega_p
    if pr.kind in (SECTORIZED, IDEAL) and pr.beamwidth < TWO_PI:
        targets += [wp + 0.5 * pr.beamwidth, wp - 0.5 * pr.beamwidth]
    if st.kind in (SECTORIZED, IDEAL) and st.beamwidth < TWO_PI:
        phi = st.beamwidth
        base = theta - math.pi
        targets += [base + phi, base - phi, base + (TWO_PI - phi), base - (TWO_PI - phi)]
    pts = []
    sin_t, cos_t = math.sin(theta), math.cos(theta)
    for c in targets:
        den = math.sin(c - theta)
        if abs(den) < 1e-12:
            continue
        x_star = (frame.yp_x * math.sin(c) - frame.yp_y * math.cos(c)) / den
        if not 0.0 < x_star < math.inf:
            continue
        # keep only crossings where the bearing really points along c
        dot = (frame.yp_x - x_star * cos_t) * math.cos(c) + (frame.yp_y - x_star * sin_t) * math.sin(c)
        if dot <= 0.0:
            continue
        pts.append(x_star / (scale + x_star))
    return sorted(set(pts))


def term4_exact(tau: float, sc: Scenario, spec: QuadratureSpec = TERM4_QUADRATURE) -> float:
    """The secondary-interference integral, by nested adaptive quadrature.

    Integrand at radius x and bearing theta: the orientation expectation
    of (1 - exp(-z^alpha rho / cross-gain power)) / (1 + x^alpha /
    interference-gain power), with z and the bearings tied to the primary
    receiver's position.
    """
    if tau <= 0:
        raise ValueError("tau must be > 0")
    if sc.rho == 0.0:
        return 0.0
    frame = _frame(sc)
    pr, st, sr = sc.patterns.pr, sc.patterns.st, sc.patterns.sr
    scale = _radial_scale(tau, sc, frame)
    sector_like = st.kind in (OMNI, SECTORIZED, IDEAL)
    omega_nodes = None
    if not sector_like:
        omega_nodes = (np.arange(128) + 0.5) / 128 * TWO_PI - math.pi
    gpr_f, gsr_f = _scalar_gain_fn(pr), _scalar_gain_fn(sr)
    a_st, b_st, phi_st = _sector_params(st) if sector_like else (0.0, 0.0, 0.0)
    rho_ps = sc.rho / sc.p_s
    alpha, a0, wp = sc.alpha, frame.a0, sc.placement.omega_p

    def theta_integrand(theta: float) -> float:
        gsr = gsr_f(theta)
        if gsr == 0.0:
            return 0.0
        cos_t, sin_t = math.cos(theta), math.sin(theta)
        base = theta - math.pi
        k_den = a0 / (tau * sc.p_s * gsr)

        def mapped(t: float) -> float:
            if t >= 1.0:
                return 0.0
            x = scale * t / (1.0 - t)
            dx_ = frame.yp_x - x * cos_t
            dy_ = frame.yp_y - x * sin_t
            z = math.hypot(dx_, dy_)
            d = math.atan2(dy_, dx_)
            gpr = gpr_f(d - wp)
            za = z ** alpha
            xa = x ** alpha
            if sector_like:
                q1, q2, q4 = _combo_weights_scalar(phi_st, d - base)
                num_a = 1.0 if a_st * gpr == 0.0 else -math.expm1(-rho_ps * za / (a_st * gpr))
                num_b = 1.0 if b_st * gpr == 0.0 else -math.expm1(-rho_ps * za / (b_st * gpr))
                inv_a = 1.0 / (1.0 + k_den * xa / a_st) if a_st > 0.0 else 0.0
                inv_b = 1.0 / (1.0 + k_den * xa / b_st) if b_st > 0.0 else 0.0
                total = q1 * num_a * inv_a + q2 * (num_a * inv_b + num_b * inv_a) + q4 * num_b * inv_b
            else:
                g_to_p = st.gain(d - omega_nodes)
                g_to_o = st.gain(base - omega_nodes)
                with np.errstate(divide="ignore"):
                    num = np.where(
                        g_to_p * gpr > 0,
                        -np.expm1(-rho_ps * za / (g_to_p * gpr)),
                        1.0,
                    )
                    den = 1.0 + k_den * xa / g_to_o
                    total = float(np.mean(np.where(g_to_o > 0, num / den, 0.0)))
            return total * x * scale / (1.0 - t) ** 2

        return _radial_quad(mapped, spec, points=_radial_breakpoints(theta, frame, sc, scale))

    return _theta_integral(theta_integrand, _sr_breakpoints(sc), spec, "term-4")


def term4_sectorized(tau: float, sc: Scenario, spec: QuadratureSpec = TERM4_QUADRATURE) -> float:
    """Event-decomposed term 4 for sectorized beams.

    Receive gains enter through the two lobe events (typical receiver's
    lobe on theta; primary receiver's lobe on the cross bearing), transmit
    gains through the four-way orientation mixture.  Kept independent of
    term4_exact as a bookkeeping cross-check.
    """
    if tau <= 0:
        raise ValueError("tau must be > 0")
    for name in ("pr", "st", "sr"):
        if getattr(sc.patterns, name).kind not in (OMNI, SECTORIZED, IDEAL):
            raise ValueError(f"term4_sectorized needs sector-like {name} pattern")
    if sc.rho == 0.0:
        return 0.0
    frame = _frame(sc)
    a_pr, b_pr, phi_pr = _sector_params(sc.patterns.pr)
    a_sr, b_sr, phi_sr = _sector_params(sc.patterns.sr)
    a_st, b_st, phi_st = _sector_params(sc.patterns.st)
    scale = _radial_scale(tau, sc, frame)
    wp = sc.placement.omega_p
    rs_a = sc.r_s ** sc.alpha
    rho_ps = sc.rho / sc.p_s
    alpha = sc.alpha
    combos = ((a_st, a_st), (a_st, b_st), (b_st, a_st), (b_st, b_st))

    def theta_integrand(theta: float) -> float:
        in_e1 = abs(math.remainder(theta, TWO_PI)) <= 0.5 * phi_sr
        d_k = a_sr if in_e1 else b_sr
        cos_t, sin_t = math.cos(theta), math.sin(theta)
        base = theta - math.pi

        def mapped(t: float) -> float:
            if t >= 1.0:
                return 0.0
            x = scale * t / (1.0 - t)
            dx_ = frame.yp_x - x * cos_t
            dy_ = frame.yp_y - x * sin_t
            z = math.hypot(dx_, dy_)
            d = math.atan2(dy_, dx_)
            in_e2 = abs(math.remainder(d - wp, TWO_PI)) <= 0.5 * phi_pr
            c_k = a_pr if in_e2 else b_pr
            q1, q2, q4 = _combo_weights_scalar(phi_st, d - base)
            za, xa = z ** alpha, x ** alpha
            total = 0.0
            for (a_i, b_i), q in zip(combos, (q1, q2, q2, q4)):
                if q <= 0.0:
                    continue
                cross = a_i * c_k
                num = 1.0 if cross == 0.0 else -math.expm1(-rho_ps * za / cross)
                interf = b_i * d_k
                if interf == 0.0:
                    continue
                den = 1.0 + (xa / rs_a) * (a_st * a_sr) / (tau * interf)
                total += q * num / den
            return total * x * scale / (1.0 - t) ** 2

        return _radial_quad(mapped, spec, points=_radial_breakpoints(theta, frame, sc, scale))

    return _theta_integral(theta_integrand, _sr_breakpoints(sc), spec, "sectorized term-4")


def term4_near_primary(tau: float, sc: Scenario, spec: QuadratureSpec = TERM4_QUADRATURE) -> float:
    """Term 4 when the primary receiver sits within the typical pair's
    immediate neighbourhood (every interferer is far relative to it).

    The interferer-to-primary and interferer-to-typical distances and
    transmit gains then coincide, the radius integrates out, and what is
    left is a single angular integral over a gamma-function bracket.
    """
    if tau <= 0:
        raise ValueError("tau must be > 0")
    if sc.rho == 0.0:
        return 0.0
    frame = _frame(sc)
    s = 2.0 / sc.alpha
    gamma_s = math.gamma(s)
    gamma_1ms = math.gamma(1.0 - s)
    e_gst = expected_gain_power(sc.patterns.st, s)
    wp = sc.placement.omega_p
    pr, sr = sc.patterns.pr, sc.patterns.sr

    def theta_integrand(theta: float) -> float:
        gsr = sr.gain(theta)
        if gsr == 0.0:
            return 0.0
        gpr = pr.gain(theta + math.pi - wp)  # far-interferer bearing limit
        if gpr == 0.0:
            bracket = gamma_1ms
        else:
            k = sc.rho * tau * gsr / (frame.a0 * gpr)
            bracket = gamma_1ms - exp_scaled_upper_gamma(1.0 - s, k)
        return bracket * (tau * sc.p_s * gsr / frame.a0) ** s * e_gst

    points = set(_sr_breakpoints(sc) or [])
    if pr.kind in (SECTORIZED, IDEAL) and pr.beamwidth < TWO_PI:
        for sign in (1.0, -1.0):
            points.add(float(wrap_angle(wp - math.pi + sign * 0.5 * pr.beamwidth)) % TWO_PI)
    return gamma_s / sc.alpha * _theta_integral(theta_integrand, sorted(points) or None, spec, "near-field term-4")


def term4_far_primary(tau: float, sc: Scenario, spec: QuadratureSpec = TERM4_QUADRATURE) -> float:
    """Term 4 when the primary receiver is far from the typical pair: the
    dominant interferers are local, their distance to the primary receiver
    is essentially its distance from the origin, and the restriction
    factor decouples from the radial integral."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    if sc.rho == 0.0:
        return 0.0
    frame = _frame(sc)
    if frame.y_p == 0.0:
        raise ValueError("far-field approximation undefined with the primary receiver at the origin")
    s = 2.0 / sc.alpha
    prefactor = math.gamma(s) * math.gamma(1.0 - s) / sc.alpha
    gpr_fixed = sc.patterns.pr.gain(frame.b0 - sc.placement.omega_p)
    ya = frame.y_p ** sc.alpha
    st, sr = sc.patterns.st, sc.patterns.sr
    sector_like = st.kind in (OMNI, SECTORIZED, IDEAL)
    omega_nodes = None if sector_like else (np.arange(256) + 0.5) / 256 * TWO_PI - math.pi

    def theta_integrand(theta: float) -> float:
        gsr = sr.gain(theta)
        if gsr == 0.0:
            return 0.0
        total = 0.0
        if sector_like:
            for ga, gb, q in _st_combination_weights(st, frame.b0 - theta + math.pi):
                if q <= 0.0 or gb == 0.0:
                    continue
                cross = ga * gpr_fixed
                num = 1.0 if cross == 0.0 else -math.expm1(-sc.rho * ya / (sc.p_s * cross))
                total += q * num * (tau * sc.p_s * gb * gsr / frame.a0) ** s
        else:
            g_to_p = st.gain(frame.b0 - omega_nodes)
            g_to_o = st.gain(theta - math.pi - omega_nodes)
            with np.errstate(divide="ignore"):
                num = np.where(
                    g_to_p * gpr_fixed > 0,
                    -np.expm1(-sc.rho * ya / (sc.p_s * g_to_p * gpr_fixed)),
                    1.0,
                )
            total = float(np.mean(num * (tau * sc.p_s * g_to_o * gsr / frame.a0) ** s))
        return total

    return prefactor * _theta_integral(theta_integrand, _sr_breakpoints(sc), spec, "far-field term-4")


def coverage_secondary(
    tau: float,
    sc: Scenario,
    spec: QuadratureSpec = TERM4_QUADRATURE,
    term4: float | None = None,
    fast: bool = False,
) -> tuple[float, SecondaryCoverageTerms]:
    """Coverage probability of the typical secondary link plus its term
    decomposition.  ``fast=True`` swaps the adaptive term-4 quadrature for
    the fixed-grid evaluator (used by sweeps and the threshold planner).
    """
    if tau <= 0:
        raise ValueError("tau must be > 0")
    frame = _frame(sc)
    if frame.a0 == 0.0:
        terms = SecondaryCoverageTerms(0.0, 0.0, 0.0, 0.0)
        return 0.0, terms
    term1 = math.exp(-tau * sc.sigma2 / frame.a0)
    term2 = typical_map(sc)
    term3 = 0.0 if math.isinf(frame.a2) else 1.0 / (1.0 + tau * frame.a2 / frame.a0)
    if term4 is None:
        if sc.lambda_s == 0.0 or sc.rho == 0.0:
            term4 = 0.0
        elif fast:
            pp = sc.placement
            term4 = float(
                _term4_grid(tau, sc, np.array([pp.x_p]), np.array([pp.delta_p]), np.array([pp.omega_p]))[0]
            )
        else:
            term4 = term4_exact(tau, sc, spec=spec)
    terms = SecondaryCoverageTerms(term1=term1, term2=term2, term3=term3, term4=term4)
    return terms.probability(sc.lambda_s), terms


# ---------------------------------------------------------------------------
# Fixed-grid vectorized evaluation over batches of placements.  Used for
# placement averaging and threshold searches, where adaptive quadrature per
# placement would dominate the runtime.  Grid sizes give ~1e-3 relative
# accuracy for sector-like patterns (jump discontinuities limit the order).
# ---------------------------------------------------------------------------

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


def _term4_grid(
    tau: float,
    sc: Scenario,
    x_p: np.ndarray,
    delta_p: np.ndarray,
    omega_p: np.ndarray,
    n_theta: int = 192,
    n_x: int = 128,
) -> np.ndarray:
    """Term 4 for a batch of fixed placements on shared quadrature grids."""
    pr, st, sr = sc.patterns.pr, sc.patterns.st, sc.patterns.sr
    a_st, b_st, phi_st = _sector_params(st)
    yp_x = x_p * np.cos(delta_p) + sc.r_p * np.cos(omega_p)
    yp_y = x_p * np.sin(delta_p) + sc.r_p * np.sin(omega_p)
    y_p = np.hypot(yp_x, yp_y)
    a0 = sc.p_s * st.boresight() * sr.boresight() * sc.r_s ** (-sc.alpha)
    theta = (np.arange(n_theta) + 0.5) / n_theta * TWO_PI - math.pi
    tnod, tw = _gl_nodes(n_x)
    scale = y_p + sc.r_s * max(tau, 1e-9) ** (1.0 / sc.alpha) + sc.r_s  # (P,)
    x = scale[:, None] * tnod / (1.0 - tnod)                     # (P, X)
    w_rad = tw * scale[:, None] / (1.0 - tnod) ** 2 * x          # weight * x
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    gsr = sr.gain(theta)                                          # (T,)

    px = x[:, None, :] * cos_t[None, :, None]                     # (P, T, X)
    py = x[:, None, :] * sin_t[None, :, None]
    dvx = yp_x[:, None, None] - px
    dvy = yp_y[:, None, None] - py
    z = np.hypot(dvx, dvy)
    d = np.arctan2(dvy, dvx)
    gpr = pr.gain(d - omega_p[:, None, None])
    za = z ** sc.alpha
    xa = (x ** sc.alpha)[:, None, :]

    delta = wrap_angle(d - theta[None, :, None] + math.pi)
    q = phi_st / TWO_PI
    q1 = _arc_overlap_fraction(phi_st, delta)
    q2 = q - q1
    q4 = 1.0 - 2.0 * q + q1

    def num(g_cross):
        cg = g_cross * gpr
        with np.errstate(divide="ignore", invalid="ignore"):
            e = np.where(cg > 0, sc.rho * za / (sc.p_s * np.where(cg > 0, cg, 1.0)), np.inf)
        return -np.expm1(-e)

    def inv_den(g_int):
        ig = g_int * gsr[None, :, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            den = 1.0 + a0 * xa / (tau * sc.p_s * np.where(ig > 0, ig, 1.0))
        return np.where(ig > 0, 1.0 / den, 0.0)

    num_a, num_b = num(a_st), num(b_st)
    invden_a, invden_b = inv_den(a_st), inv_den(b_st)
    mix = q1 * num_a * invden_a + q2 * (num_a * invden_b + num_b * invden_a) + q4 * num_b * invden_b
    return TWO_PI / n_theta * np.einsum("ptx,px->p", mix, w_rad)


def _p_cs_batch(
    tau: float,
    sc: Scenario,
    x_p: np.ndarray,
    delta_p: np.ndarray,
    omega_p: np.ndarray,
    n_theta: int = 192,
    n_x: int = 128,
    chunk: int = 128,
    with_term4: bool = True,
) -> np.ndarray:
    """Vectorized coverage for arrays of fixed placements.

    ``with_term4=False`` drops the interference integral, which yields a
    cheap upper bound (term 4 only ever reduces coverage).
    """
    st = sc.patterns.st
    if st.kind not in (OMNI, SECTORIZED, IDEAL):
        raise ValueError("batch evaluation needs a sector-like secondary transmit pattern")
    pr, sr, pt = sc.patterns.pr, sc.patterns.sr, sc.patterns.pt
    a0 = sc.p_s * st.boresight() * sr.boresight() * sc.r_s ** (-sc.alpha)
    if a0 == 0.0:
        return np.zeros_like(x_p)
    yp_x = x_p * np.cos(delta_p) + sc.r_p * np.cos(omega_p)
    yp_y = x_p * np.sin(delta_p) + sc.r_p * np.sin(omega_p)
    term1 = math.exp(-tau * sc.sigma2 / a0)

    d0 = np.arctan2(yp_y, yp_x - sc.r_s)
    z0 = np.hypot(yp_x - sc.r_s, yp_y)
    g_typ = st.gain(d0 - math.pi) * pr.gain(d0 - omega_p)
    if sc.rho == 0.0:
        return np.zeros_like(x_p)
    with np.errstate(divide="ignore", invalid="ignore"):
        expo = np.where(g_typ > 0, sc.rho * z0 ** sc.alpha / (sc.p_s * np.where(g_typ > 0, g_typ, 1.0)), np.inf)
    term2 = -np.expm1(-expo)

    g_ip = sr.gain(delta_p) * pt.gain(delta_p - math.pi - omega_p)
    with np.errstate(divide="ignore", invalid="ignore"):
        a2 = np.where(x_p > 0, sc.p_p * g_ip * np.where(x_p > 0, x_p, 1.0) ** (-sc.alpha), np.inf)
    a2 = np.where(g_ip == 0.0, 0.0, a2)
    term3 = np.where(np.isinf(a2), 0.0, 1.0 / (1.0 + tau * a2 / a0))

    if sc.lambda_s == 0.0 or not with_term4:
        i4 = np.zeros_like(x_p)
    else:
        i4 = np.empty_like(x_p)
        for lo in range(0, len(x_p), chunk):
            hi = min(lo + chunk, len(x_p))
            i4[lo:hi] = _term4_grid(tau, sc, x_p[lo:hi], delta_p[lo:hi], omega_p[lo:hi], n_theta, n_x)
    return np.clip(term1 * term2 * term3 * np.exp(-sc.lambda_s * i4), 0.0, 1.0)


def coverage_secondary_averaged(
    tau: float,
    sc: Scenario,
    n_placements: int,
    seed: int = 0,
    n_theta: int = 96,
    n_x: int = 72,
    with_term4: bool = True,
) -> EstimateWithCI:
    """Coverage of the average typical link: Monte-Carlo mean over primary
    placements drawn from the scenario's random law, with a 95% interval.
    A fixed placement degenerates to the deterministic value.

    The per-placement integral runs on a coarser grid than the fixed-
    placement evaluator; its bias is well below the placement-sampling
    noise at the default sizes.
    """
    if n_placements < 1:
        raise ValueError("need at least one placement")
    pp = sc.placement
    if pp.mode == "fixed":
        p, _ = coverage_secondary(tau, sc, fast=True)
        return EstimateWithCI(p, 0.0, p, p, n_placements)
    rng = RngStream(seed).generator()
    xs, ds, ws = pp.sample_batch(rng, n_placements)
    vals = _p_cs_batch(tau, sc, xs, ds, ws, n_theta=n_theta, n_x=n_x, with_term4=with_term4)
    return mean_estimate(vals)
