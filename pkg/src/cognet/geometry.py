"""Planar geometry for the two coordinate frames used by the model.

Two frames appear throughout:

* the *primary frame*: primary receiver at the origin, primary transmitter
  on the positive x-axis at distance ``r_p``;
* the *secondary frame*: typical secondary receiver at the origin, typical
  secondary transmitter at ``(r_s, 0)``, primary transmitter at
  ``x_p`` along bearing ``delta_p``, primary link pointing along
  ``omega_p`` (transmitter towards receiver).

All angles are radians, wrapped to ``[-pi, pi)``.  Degrees only appear at
the config-file boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a):
    """Wrap an angle (scalar or array) to ``[-pi, pi)``. Idempotent."""
    return (np.asarray(a) + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class Angle:
    """An angle stored normalized to ``[-pi, pi)``."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(wrap_angle(float(self.value))))

    def __float__(self):
        return self.value

    def __add__(self, other):
        return Angle(self.value + float(other))

    def __sub__(self, other):
        return Angle(self.value - float(other))

    def __neg__(self):
        return Angle(-self.value)


def _rad(a) -> float:
    """Coerce Angle or plain number to a wrapped float in radians."""
    return float(wrap_angle(float(a)))


@dataclass(frozen=True)
class PolarPoint:
    """A point given by radial distance and bearing from the frame origin."""

    radius: float
    angle: Angle

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"radius must be >= 0, got {self.radius}")
        if not isinstance(self.angle, Angle):
            object.__setattr__(self, "angle", Angle(float(self.angle)))

    def to_xy(self) -> np.ndarray:
        th = self.angle.value
        return np.array([self.radius * math.cos(th), self.radius * math.sin(th)])

    @staticmethod
    def from_xy(x: float, y: float) -> "PolarPoint":
        return PolarPoint(math.hypot(x, y), Angle(math.atan2(y, x)))


@dataclass(frozen=True)
class PrimaryPlacement:
    """Pose of the primary link in the secondary frame.

    ``x_p``: distance of the primary transmitter from the typical secondary
    receiver; ``delta_p``: its bearing; ``omega_p``: direction of the
    primary link (transmitter towards its receiver).

    ``mode == "random"`` describes the averaged-user placement law:
    ``x_p = sqrt(U(0, R^2))`` with both angles uniform on ``[0, 2pi)``.
    ``law == "half_scale"`` switches to the alternative
    ``x_p = (R/2) * sqrt(U(0,1))`` with angles uniform on ``[0, pi)``.
    """

    x_p: float = 0.0
    delta_p: float = 0.0
    omega_p: float = 0.0
    mode: str = "fixed"
    region_radius: float | None = None
    law: str = "full_disk"

    def __post_init__(self):
        if self.mode not in ("fixed", "random"):
            raise ValueError(f"mode must be 'fixed' or 'random', got {self.mode!r}")
        if self.law not in ("full_disk", "half_scale"):
            raise ValueError(f"unknown placement law {self.law!r}")
        if self.mode == "fixed":
            for name in ("x_p", "delta_p", "omega_p"):
                v = getattr(self, name)
                if not math.isfinite(v):
                    raise ValueError(f"{name} must be finite in fixed mode")
            if self.x_p < 0:
                raise ValueError("x_p must be >= 0")
            object.__setattr__(self, "delta_p", _rad(self.delta_p))
            object.__setattr__(self, "omega_p", _rad(self.omega_p))
        else:
            if self.region_radius is None or self.region_radius <= 0:
                raise ValueError("random mode requires region_radius > 0")

    def sample(self, rng: np.random.Generator) -> "PrimaryPlacement":
        """Draw one fixed placement from the random law."""
        if self.mode != "random":
            return self
        R = self.region_radius
        if self.law == "half_scale":
            x = 0.5 * R * math.sqrt(rng.uniform())
            delta = rng.uniform(0.0, math.pi)
            omega = rng.uniform(0.0, math.pi)
        else:
            x = math.sqrt(rng.uniform(0.0, R * R))
            delta = rng.uniform(0.0, TWO_PI)
            omega = rng.uniform(0.0, TWO_PI)
        return PrimaryPlacement(x_p=x, delta_p=delta, omega_p=omega)

    def sample_batch(self, rng: np.random.Generator, n: int):
        """Vectorized draw: arrays (x_p, delta_p, omega_p) of length n."""
        if self.mode != "random":
            raise ValueError("sample_batch requires random mode")
        R = self.region_radius
        if self.law == "half_scale":
            x = 0.5 * R * np.sqrt(rng.uniform(size=n))
            delta = rng.uniform(0.0, math.pi, size=n)
            omega = rng.uniform(0.0, math.pi, size=n)
        else:
            x = np.sqrt(rng.uniform(0.0, R * R, size=n))
            delta = rng.uniform(0.0, TWO_PI, size=n)
            omega = rng.uniform(0.0, TWO_PI, size=n)
        return x, delta, omega


def primary_rx_position(pp: PrimaryPlacement, r_p: float) -> PolarPoint:
    """Primary receiver location Y_p in the secondary frame.

    The receiver sits at distance ``r_p`` from the transmitter along the
    link direction: ``Y_p = X_p + r_p * e(omega_p)``.
    """
    if r_p <= 0:
        raise ValueError("r_p must be > 0")
    if pp.mode != "fixed":
        raise ValueError("primary_rx_position requires a fixed placement")
    x = pp.x_p * math.cos(pp.delta_p) + r_p * math.cos(pp.omega_p)
    y = pp.x_p * math.sin(pp.delta_p) + r_p * math.sin(pp.omega_p)
    return PolarPoint.from_xy(x, y)


def cross_distance_z(sec_tx: PolarPoint, pp: PrimaryPlacement, r_p: float) -> float:
    """Distance z from a secondary transmitter to the primary receiver.

    Closed form with the three cosine cross terms; agrees with the direct
    Cartesian norm ``|X_s - Y_p|`` to rounding error.
    """
    x_s, th = sec_tx.radius, sec_tx.angle.value
    x_p, dp, wp = pp.x_p, pp.delta_p, pp.omega_p
    z2 = (
        x_s * x_s
        + r_p * r_p
        + x_p * x_p
        - 2.0 * r_p * x_s * math.cos(th - wp)
        - 2.0 * x_p * x_s * math.cos(th - dp)
        + 2.0 * x_p * r_p * math.cos(dp - wp)
    )
    # z2 can round to a tiny negative when the points coincide
    return math.sqrt(max(z2, 0.0))


def cross_bearing_beta(sec_tx: PolarPoint, pp: PrimaryPlacement, r_p: float) -> Angle:
    """Bearing of the secondary transmitter as seen from the primary
    receiver: ``angle(X_s - Y_p)``.

    Computed by direct vector arithmetic (two-argument arctangent); the
    nested-arcsine closed forms are kept as test subjects only since they
    carry branch ambiguities.
    """
    yp = primary_rx_position(pp, r_p).to_xy()
    xs = sec_tx.to_xy()
    dx, dy = xs[0] - yp[0], xs[1] - yp[1]
    if dx == 0.0 and dy == 0.0:
        raise ValueError("undefined bearing: secondary transmitter coincides with primary receiver")
    return Angle(math.atan2(dy, dx))


def bearing_to_primary_rx(sec_tx: PolarPoint, pp: PrimaryPlacement, r_p: float) -> float:
    """Bearing of the primary receiver as seen from the secondary
    transmitter: ``angle(Y_p - X_s)``.  Differs from cross_bearing_beta
    by pi; this is the angle the transmit-gain formulas consume.
    """
    return _rad(cross_bearing_beta(sec_tx, pp, r_p).value + math.pi)


def nested_arcsine_bearing_v1(sec_tx: PolarPoint, pp: PrimaryPlacement, r_p: float) -> float:
    """First printed nested-arcsine variant of the cross bearing.

    Test subject only (branch-ambiguous); see cross_bearing_beta.
    """
    yp = primary_rx_position(pp, r_p)
    y_p = yp.radius
    x_s = sec_tx.radius
    th = sec_tx.angle.value
    dp, wp = pp.delta_p, pp.omega_p
    inner = math.asin(_clip1((pp.x_p / y_p) * math.sin(dp - wp))) if y_p > 0 else 0.0
    return _rad(th - math.asin(_clip1((y_p / x_s) * math.sin(dp - wp + inner))))


def nested_arcsine_bearing_v2(sec_tx: PolarPoint, pp: PrimaryPlacement, r_p: float) -> float:
    """Second printed nested-arcsine variant (z-form).  Test subject only."""
    yp = primary_rx_position(pp, r_p)
    y_p = yp.radius
    z = cross_distance_z(sec_tx, pp, r_p)
    th = sec_tx.angle.value
    dp, wp = pp.delta_p, pp.omega_p
    inner = math.asin(_clip1((r_p / y_p) * math.sin(dp - wp))) if y_p > 0 else 0.0
    return _rad(th - math.asin(_clip1((y_p / z) * math.sin(th - dp + inner))))


def _clip1(v: float) -> float:
    return min(1.0, max(-1.0, v))
