"""SINR coverage of the primary link.

Two routes are kept deliberately distinct so they can cross-check each
other:

* ``coverage_primary_exact`` integrates the restricted-fading Laplace
  kernel over (angle, radius, orientation) numerically, exactly as the
  double-integral expression is written;
* ``coverage_primary_simplified`` evaluates the closed kernel form
  built from n1 (circular cosecant), n2 (radial tail kernel) and the
  average secondary directivity n3, with the separate
  ``- Gamma(2/alpha) + n2`` grouping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .antenna import BeamPattern, DevicePatterns, expected_gain_power, gain_mixture
from .geometry import TWO_PI
from .numerics import QuadratureSpec, integrate_radial, n1, n2
from .scenario import Scenario

# The restriction and transform kernels switch on radii that can sit
# decades apart, which makes the engine's error estimates conservative;
# the achieved accuracy only needs to keep the final exponent (scaled by
# lambda_s and the angular measure) well below the 1e-3 cross-route gate.
LAPLACE_QUADRATURE = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12, fail_rel=1e-4, fail_abs=1e-6)


@dataclass(frozen=True)
class PrimaryKernelParams:
    """Inputs of the simplified coverage kernel."""

    kappa_p: float  # noise-to-signal ratio at the primary receiver
    n3: float       # average secondary directivity
    alpha: float


def kappa_p(sc: Scenario) -> float:
    """rho * r_p^alpha / (p_p * boresight gains of the primary link)."""
    g0 = sc.patterns.pt.boresight() * sc.patterns.pr.boresight()
    if sc.p_p == 0.0 or g0 == 0.0:
        raise ValueError("primary link has no serving power (p_p or boresight gain is 0)")
    return sc.rho * sc.r_p ** sc.alpha / (sc.p_p * g0)


def kernel_params(sc: Scenario) -> PrimaryKernelParams:
    return PrimaryKernelParams(kappa_p=kappa_p(sc), n3=n3_general(sc.patterns, sc.alpha), alpha=sc.alpha)


def n3_general(patterns: DevicePatterns, alpha: float) -> float:
    """Average secondary directivity: the orientation-averaged angular
    integral of (g_pr * g_st)^(2/alpha).

    The uniform orientation decouples the two factors over a full period,
    so the integral is 2*pi times the product of the single-pattern
    moments (verified against brute-force double quadrature in the tests).
    """
    if alpha <= 2.0:
        raise ValueError("n3 requires alpha > 2")
    e = 2.0 / alpha
    return TWO_PI * expected_gain_power(patterns.pr, e) * expected_gain_power(patterns.st, e)


def n3_ula(M_p: int, M_s: int, kappa_prime: float, alpha: float) -> float:
    """Closed product form of n3 when every device is a uniform linear
    array with M elements, main gain M and beamwidth constant kappa."""
    if M_p < 1 or M_s < 1:
        raise ValueError("element counts must be >= 1")
    if not 0 < kappa_prime < 1:
        raise ValueError("kappa_prime must lie in (0, 1)")
    e1 = 2.0 / alpha - 1.0
    kp = kappa_prime

    def bracket(M: int) -> float:
        return 1.0 + ((1.0 - kp) / kp) * ((1.0 - kp) / (M - kp)) ** e1

    return TWO_PI * kp * kp * (M_p * M_s) ** e1 * bracket(M_p) * bracket(M_s)


def _restricted_fading_deficit(x: float, c: float, rho: float, s: float, alpha: float) -> float:
    """1 - E[exp(-s * chi * G * 1{G < rho/chi})] at chi = c * x^-alpha.

    The same fade gates the restriction and scales the interference, which
    is what produces the two-piece kernel.
    """
    if x == 0.0:
        return 0.0
    chi = c * x ** (-alpha)
    schi = s * chi
    return 1.0 - math.exp(-rho / chi) - (-math.expm1(-rho * (s + 1.0 / chi))) / (1.0 + schi)


def _pr_segments(p: BeamPattern, n_tabulated: int = 64):
    """(gain, angular measure) decomposition of the receive pattern."""
    if p.kind in ("sectorized", "ideal"):
        q = p.beamwidth / TWO_PI
        if q >= 1.0:
            return [(p.main_gain, TWO_PI)]
        return [(p.main_gain, p.beamwidth), (p.side_gain, TWO_PI - p.beamwidth)]
    if p.kind == "omni":
        return [(1.0, TWO_PI)]
    step = max(1, len(p.samples) // n_tabulated)
    sub = p.samples[::step]
    w = TWO_PI / len(sub)
    return [(float(g), w) for g in sub]


def _st_mixture(p: BeamPattern, n_tabulated: int = 64):
    if p.kind == "tabulated":
        step = max(1, len(p.samples) // n_tabulated)
        sub = p.samples[::step]
        w = 1.0 / len(sub)
        return [(float(g), w) for g in sub]
    return gain_mixture(p)


def laplace_secondary_interference(
    s: float, sc: Scenario, spec: QuadratureSpec = LAPLACE_QUADRATURE
) -> float:
    """Laplace transform of the restricted secondary interference at the
    primary receiver, evaluated by angular decomposition plus radial
    quadrature of the fading kernel (no closed-form shortcuts)."""
    if s < 0:
        raise ValueError("transform variable must be >= 0")
    if s == 0.0 or sc.lambda_s == 0.0 or sc.rho == 0.0:
        return 1.0
    total = 0.0
    for gp, measure in _pr_segments(sc.patterns.pr):
        for gs, w in _st_mixture(sc.patterns.st):
            c = sc.p_s * gp * gs
            if c == 0.0:
                continue
            # transition radii of the restriction and of the s-kernel
            x_restrict = (c / sc.rho) ** (1.0 / sc.alpha)
            x_kernel = (c * s) ** (1.0 / sc.alpha)
            scale = math.sqrt(x_restrict * x_kernel)
            val = integrate_radial(
                lambda x, c=c: _restricted_fading_deficit(x, c, sc.rho, s, sc.alpha),
                spec=spec,
                scale=scale,
            )
            total += measure * w * val
    return math.exp(-sc.lambda_s * total)


def _noise_factor(tau: float, sc: Scenario) -> float:
    g0 = sc.patterns.pt.boresight() * sc.patterns.pr.boresight()
    if g0 == 0.0 or sc.p_p == 0.0:
        return 0.0
    return math.exp(-tau * sc.sigma2 * sc.r_p ** sc.alpha / (sc.p_p * g0))


def coverage_primary_exact(tau: float, sc: Scenario, spec: QuadratureSpec = LAPLACE_QUADRATURE) -> float:
    """Primary coverage from the full double-integral expression."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    noise = _noise_factor(tau, sc)
    if noise == 0.0:
        return 0.0
    g0 = sc.patterns.pt.boresight() * sc.patterns.pr.boresight()
    s = tau * sc.r_p ** sc.alpha / (sc.p_p * g0)  # kappa_p * tau / rho
    return noise * laplace_secondary_interference(s, sc, spec=spec)


def coverage_primary_simplified(tau: float, sc: Scenario) -> float:
    """Primary coverage from the n1/n2/n3 kernel form."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    noise = _noise_factor(tau, sc)
    if noise == 0.0:
        return 0.0
    if sc.lambda_s == 0.0 or sc.rho == 0.0:
        return noise
    sexp = 2.0 / sc.alpha
    nu = kappa_p(sc) * tau
    bracket = nu ** sexp * n1(sc.alpha) - math.gamma(sexp) + n2(sc.alpha, nu)
    interference = (
        (sc.lambda_s / sc.alpha)
        * (sc.p_s / sc.rho) ** sexp
        * bracket
        * n3_general(sc.patterns, sc.alpha)
    )
    return noise * math.exp(-interference)
