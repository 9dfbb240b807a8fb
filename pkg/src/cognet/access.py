"""Medium-access probability, protection zones and the activity factor.

Gain-argument conventions (used consistently here, in the coverage modules
and in the Monte-Carlo engine):

* Every device's beam axis points at its own link partner.
* In the primary frame the restriction gains of a secondary transmitter at
  ``x /_ theta`` with beam axis ``omega`` are
  ``g_pr(theta) * g_st(theta - pi - omega)``.
* In the secondary frame, with ``d`` the bearing of the primary receiver
  from the transmitter (``angle(Y_p - X_s)``), they are
  ``g_st(d - omega) * g_pr(d - omega_p)``; the two frames agree exactly
  under the rigid transform between them.

Zero-gain convention: a transmitter with zero gain product deposits no
power at the primary receiver, so for any threshold ``rho > 0`` it is
always allowed to transmit (MAP 1); at ``rho = 0`` the strict inequality
can never hold (MAP 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .antenna import IDEAL, OMNI, SECTORIZED, BeamPattern, gain_mixture
from .geometry import PolarPoint, PrimaryPlacement, TWO_PI, bearing_to_primary_rx, cross_distance_z, wrap_angle
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    angular_nodes,
    lower_incomplete_gamma,
    psi,
    quad_checked,
)
from .scenario import Scenario


@dataclass(frozen=True)
class SecondaryLink:
    """A secondary transmitter with its link mark.

    ``orientation`` is the transmit beam axis, i.e. the bearing of the
    link's receiver from its transmitter.
    """

    tx: PolarPoint
    orientation: float
    length: float = 1.0

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("link length must be > 0")


def _map_from_exponent(rho: float, num: float, den: float) -> float:
    """MAP = 1 - exp(-num/den) with the zero-gain / zero-threshold rules."""
    if rho == 0.0:
        return 0.0
    if den == 0.0:
        return 1.0
    return -math.expm1(-num / den)


def map_primary_frame(link: SecondaryLink, sc: Scenario) -> float:
    """MAP of a transmitter located in the primary-receiver frame."""
    th = link.tx.angle.value
    g = sc.patterns.pr.gain(th) * sc.patterns.st.gain(th - math.pi - link.orientation)
    return _map_from_exponent(sc.rho, sc.rho * link.tx.radius ** sc.alpha, sc.p_s * g)


def map_secondary_frame(link: SecondaryLink, pp: PrimaryPlacement, sc: Scenario) -> float:
    """MAP of a transmitter located in the typical-secondary frame."""
    if sc.rho == 0.0:
        return 0.0
    d = bearing_to_primary_rx(link.tx, pp, sc.r_p)  # raises at the coincident point
    z = cross_distance_z(link.tx, pp, sc.r_p)
    g = sc.patterns.st.gain(d - link.orientation) * sc.patterns.pr.gain(d - pp.omega_p)
    return _map_from_exponent(sc.rho, sc.rho * z ** sc.alpha, sc.p_s * g)


def typical_link(sc: Scenario) -> SecondaryLink:
    """The typical pair: transmitter at (r_s, 0) aiming at the origin."""
    return SecondaryLink(tx=PolarPoint(sc.r_s, 0.0), orientation=math.pi, length=sc.r_s)


def typical_map(sc: Scenario) -> float:
    """MAP of the typical secondary link for the scenario's placement."""
    return map_secondary_frame(typical_link(sc), sc.placement, sc)


def protection_zone_radius(theta, omega, fade: float, sc: Scenario) -> float:
    """Radius below which a transmitter with this fade/orientation is barred."""
    if sc.rho <= 0:
        raise ValueError("protection zone requires rho > 0")
    if fade < 0:
        raise ValueError("fade must be >= 0")
    th = float(wrap_angle(float(theta)))
    g = sc.patterns.pr.gain(th) * sc.patterns.st.gain(th - math.pi - float(omega))
    if g == 0.0 or fade == 0.0:
        return 0.0
    return (sc.p_s * fade * g / sc.rho) ** (1.0 / sc.alpha)


def protection_zone_area_mainlobe(sc: Scenario, fade: float = 1.0) -> float:
    """Area of the main-lobe protection sector at constant fade.

    Half the primary-receiver beamwidth times the squared boundary radius
    at joint main-lobe gains; assumes the secondary main lobe spans the
    primary one (equal-or-wider beamwidth), as in the aligned-link set-up.
    """
    pr, st = sc.patterns.pr, sc.patterns.st
    if pr.kind not in (SECTORIZED, IDEAL) or st.kind not in (SECTORIZED, IDEAL):
        raise ValueError("main-lobe zone area needs sectorized (or ideal) patterns")
    r_star = (sc.p_s * fade * pr.main_gain * st.main_gain / sc.rho) ** (1.0 / sc.alpha)
    return 0.5 * pr.beamwidth * r_star ** 2


def _omega_mixture(p: BeamPattern, n_tabulated: int = 512):
    """Gain law at a uniform random bearing, thinned for tabulated patterns."""
    if p.kind == "tabulated":
        step = max(1, len(p.samples) // n_tabulated)
        sub = p.samples[::step]
        w = 1.0 / len(sub)
        return [(float(g), w) for g in sub]
    return gain_mixture(p)


def activity_factor(sc: Scenario, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Fraction of secondary transmitters allowed to transmit in the disk.

    Direct evaluation of the angular integral with the radial part folded
    into the lower incomplete gamma; the orientation expectation is the
    exact two-point mixture for sectorized patterns.  Independent of
    lambda_s by construction.
    """
    if sc.rho == 0.0:
        return 0.0
    s = 2.0 / sc.alpha
    mix = _omega_mixture(sc.patterns.st)
    scale = sc.rho / sc.p_s

    def kernel(g: float) -> float:
        if g <= 0.0:
            return 0.0
        u = scale / g
        return u ** (-s) * lower_incomplete_gamma(s, u * sc.R ** sc.alpha)

    def integrand(theta: float) -> float:
        gp = sc.patterns.pr.gain(theta)
        return sum(w * kernel(gp * gs) for gs, w in mix)

    pr = sc.patterns.pr
    if pr.kind == "tabulated":
        # piecewise-constant table: the periodic fixed-order rule is the
        # right tool (adaptive panels would chase every step)
        nodes = angular_nodes(512)
        val = TWO_PI * sum(integrand(t) for t in nodes) / len(nodes)
    else:
        points = None
        if pr.kind in (SECTORIZED, IDEAL) and pr.beamwidth < TWO_PI:
            half = 0.5 * pr.beamwidth
            points = [half, TWO_PI - half]
        val = quad_checked(integrand, 0.0, TWO_PI, spec, "activity-factor quadrature", points=points)
    eta = 1.0 - val / (math.pi * sc.R ** 2 * sc.alpha)
    return min(max(eta, 0.0), 1.0)


def activity_factor_sectorized(sc: Scenario) -> float:
    """Closed-form activity factor for sectorized beams.

    Mixture of psi terms over the four main/side gain combinations with
    weights q_pr*q_st, q_pr*(1-q_st), (1-q_pr)*q_st, (1-q_pr)*(1-q_st).
    Collapses to the single-term form when side gains vanish and to the
    omni expression for flat patterns.
    """
    for name in ("pr", "st"):
        p = getattr(sc.patterns, name)
        if p.kind not in (OMNI, SECTORIZED, IDEAL):
            raise ValueError(f"sectorized activity factor needs sector-like {name} pattern")
    if sc.rho == 0.0:
        return 0.0
    total = 0.0
    for gp, wp in gain_mixture(sc.patterns.pr):
        for gs, ws in gain_mixture(sc.patterns.st):
            if gp * gs == 0.0:
                continue
            total += wp * ws * psi((sc.rho / sc.p_s) / (gp * gs), sc.alpha, sc.R)
    eta = 1.0 - (2.0 / (sc.alpha * sc.R ** 2)) * total
    return min(max(eta, 0.0), 1.0)


def activity_factor_omni(sc: Scenario) -> float:
    """Omnidirectional sensing baseline: 1 - (2/(alpha R^2)) psi(rho/p_s)."""
    if sc.rho == 0.0:
        return 0.0
    return 1.0 - (2.0 / (sc.alpha * sc.R ** 2)) * psi(sc.rho / sc.p_s, sc.alpha, sc.R)


@dataclass(frozen=True)
class AccessDiagnostics:
    """Beamwidth-vs-gain trade-off terms for ideal and omni sensing."""

    eta_bar_ideal: float
    psi_ideal: float
    gamma_ideal: float
    eta_bar_omni: float
    psi_omni: float
    gamma_omni: float

    @property
    def eta_bar_ratio(self) -> float:
        return self.eta_bar_ideal / self.eta_bar_omni

    @property
    def psi_ratio(self) -> float:
        return self.psi_ideal / self.psi_omni

    @property
    def gamma_ratio(self) -> float:
        return self.gamma_ideal / self.gamma_omni


def _main_lobe_params(p: BeamPattern) -> tuple[float, float]:
    if p.kind == OMNI:
        return 1.0, TWO_PI
    if p.kind in (SECTORIZED, IDEAL):
        return p.main_gain, p.beamwidth
    raise ValueError("trade-off diagnostics need sector-like or omni patterns")


def tradeoff_diagnostics(sc: Scenario) -> AccessDiagnostics:
    """Auxiliary eta-bar / psi / incomplete-gamma terms and their omni
    counterparts at the scenario's parameters."""
    a_pr, phi_pr = _main_lobe_params(sc.patterns.pr)
    a_st, phi_st = _main_lobe_params(sc.patterns.st)
    q_pr, q_st = phi_pr / TWO_PI, phi_st / TWO_PI
    s = 2.0 / sc.alpha
    u_omni = sc.rho / sc.p_s
    u_ideal = u_omni / (a_pr * a_st)
    psi_ideal = psi(u_ideal, sc.alpha, sc.R)
    psi_omni = psi(u_omni, sc.alpha, sc.R)
    return AccessDiagnostics(
        eta_bar_ideal=(2.0 / (sc.alpha * sc.R ** 2)) * q_pr * q_st * psi_ideal,
        psi_ideal=psi_ideal,
        gamma_ideal=lower_incomplete_gamma(s, u_ideal),
        eta_bar_omni=(2.0 / (sc.alpha * sc.R ** 2)) * psi_omni,
        psi_omni=psi_omni,
        gamma_omni=lower_incomplete_gamma(s, u_omni),
    )
