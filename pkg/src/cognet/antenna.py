"""Beam patterns: omni, sectorized, ideal and tabulated gains.

A pattern is an even, 2pi-periodic gain function of the angle off the beam
axis.  The sectorized pattern is piecewise constant: main-lobe gain ``a``
inside ``|theta| <= phi/2``, side-lobe gain ``b`` outside.  The ideal
pattern is the ``b = 0`` special case.  Uniform-linear-array parameters
map onto a sectorized pattern with ``phi = kappa/M``, ``a = M`` and the
side gain fixed by the unit-average-power normalization
``a*q + b*(1-q) = 1`` with ``q = phi/(2*pi)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, wrap_angle

KAPPA_DEFAULT = math.radians(121.0)

OMNI = "omni"
SECTORIZED = "sectorized"
IDEAL = "ideal"
TABULATED = "tabulated"

_TAB_SAMPLES = 4096  # nearest-lookup resolution, keeps hot loops branch-free


@dataclass(frozen=True)
class BeamPattern:
    kind: str
    main_gain: float = 1.0
    side_gain: float = 0.0
    beamwidth: float = TWO_PI
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in (OMNI, SECTORIZED, IDEAL, TABULATED):
            raise ValueError(f"unknown beam pattern kind {self.kind!r}")
        if self.kind in (SECTORIZED, IDEAL):
            if self.main_gain <= 0:
                raise ValueError("main gain must be > 0")
            if self.side_gain < 0:
                raise ValueError("side gain must be >= 0")
            if not 0 < self.beamwidth <= TWO_PI:
                raise ValueError("beamwidth must lie in (0, 2*pi]")
        if self.kind == TABULATED and (self.samples is None or len(self.samples) < 2):
            raise ValueError("tabulated pattern needs gain samples")

    def gain(self, theta):
        """Gain at angle(s) off the beam axis (linear scale)."""
        th = wrap_angle(theta)
        if self.kind == OMNI:
            return np.ones_like(th, dtype=float) if th.ndim else 1.0
        if self.kind in (SECTORIZED, IDEAL):
            out = np.where(np.abs(th) <= 0.5 * self.beamwidth, self.main_gain, self.side_gain)
            return out if th.ndim else float(out)
        n = len(self.samples)
        idx = np.round((th + math.pi) / TWO_PI * n).astype(int) % n
        out = self.samples[idx]
        return out if th.ndim else float(out)

    def boresight(self) -> float:
        return float(self.gain(0.0))

    def is_flat(self) -> bool:
        """True when the pattern is constant 1 (omni, or degenerate sector)."""
        if self.kind == OMNI:
            return True
        if self.kind in (SECTORIZED, IDEAL):
            return self.main_gain == 1.0 and (self.side_gain == 1.0 or self.beamwidth == TWO_PI)
        return bool(np.all(self.samples == 1.0))


def omni() -> BeamPattern:
    return BeamPattern(OMNI)


def sectorized(a: float, b: float, phi: float, check_normalization: bool = True) -> BeamPattern:
    """Sectorized pattern with explicit gains; warns when the average gain
    is not 1 (experiments may break the normalization deliberately)."""
    p = BeamPattern(SECTORIZED, main_gain=a, side_gain=b, beamwidth=phi)
    if check_normalization:
        q = phi / TWO_PI
        avg = a * q + b * (1.0 - q)
        if abs(avg - 1.0) > 1e-9:
            warnings.warn(
                f"sectorized pattern has average gain {avg:.6g} != 1; "
                "transmit power will depend on the beamwidth",
                stacklevel=2,
            )
    return p


def ideal(a: float, phi: float) -> BeamPattern:
    return BeamPattern(IDEAL, main_gain=a, side_gain=0.0, beamwidth=phi)


def tabulated(samples) -> BeamPattern:
    """Resample an arbitrary gain table to the internal uniform grid."""
    src = np.asarray(samples, dtype=float)
    if src.ndim != 1 or len(src) < 2:
        raise ValueError("samples must be a 1-D array of gains over [-pi, pi)")
    if np.any(src < 0):
        raise ValueError("gains must be >= 0")
    if len(src) == _TAB_SAMPLES:
        grid = src
    else:
        pos = np.arange(_TAB_SAMPLES) / _TAB_SAMPLES * len(src)
        grid = src[np.floor(pos).astype(int) % len(src)]
    return BeamPattern(TABULATED, samples=grid)


@dataclass(frozen=True)
class UlaSpec:
    """Uniform linear array: element count and beamwidth constant."""

    M: int
    kappa: float = KAPPA_DEFAULT

    def __post_init__(self):
        if self.M <= 1:
            raise ValueError("ULA needs M > 1 antenna elements")
        if not 0 < self.kappa <= TWO_PI:
            raise ValueError("kappa must lie in (0, 2*pi]")

    @property
    def kappa_prime(self) -> float:
        return self.kappa / TWO_PI

    @property
    def q(self) -> float:
        return self.kappa_prime / self.M


def from_ula(u: UlaSpec) -> BeamPattern:
    """Sectorized pattern of a ULA: phi = kappa/M, a = M, and the side
    gain (1 - kappa')/(1 - kappa'/M) enforcing a*q + b*(1-q) = 1."""
    kp = u.kappa_prime
    b = (1.0 - kp) / (1.0 - kp / u.M)
    return BeamPattern(SECTORIZED, main_gain=float(u.M), side_gain=b, beamwidth=u.kappa / u.M)


def ula_or_omni(M: int, kappa: float = KAPPA_DEFAULT) -> BeamPattern:
    """M = 1 degenerates to the omni pattern (full-circle beam, unit gain)."""
    if M == 1:
        return omni()
    return from_ula(UlaSpec(M=M, kappa=kappa))


def main_lobe_probability(p: BeamPattern) -> float:
    """Probability q of seeing the main lobe from a uniform random bearing."""
    if p.kind not in (SECTORIZED, IDEAL):
        raise ValueError(f"main-lobe probability undefined for {p.kind} pattern")
    return p.beamwidth / TWO_PI


def expected_gain_power(p: BeamPattern, exponent: float) -> float:
    """E[g^exponent] under a uniform random bearing.

    Exact two-point mixture for sectorized and ideal patterns, angular
    average for tabulated ones.  Used by the directivity kernels where
    the exponent is 2/alpha.
    """
    if exponent <= 0:
        raise ValueError("exponent must be > 0")
    if p.kind == OMNI:
        return 1.0
    if p.kind in (SECTORIZED, IDEAL):
        q = p.beamwidth / TWO_PI
        side = p.side_gain ** exponent if p.side_gain > 0 else 0.0
        return q * p.main_gain ** exponent + (1.0 - q) * side
    return float(np.mean(p.samples ** exponent))


def gain_mixture(p: BeamPattern):
    """Distribution of g at a uniform random bearing: [(gain, prob), ...].

    For tabulated patterns this is the full sample list with equal weights.
    """
    if p.kind == OMNI:
        return [(1.0, 1.0)]
    if p.kind in (SECTORIZED, IDEAL):
        q = p.beamwidth / TWO_PI
        if q >= 1.0:
            return [(p.main_gain, 1.0)]
        return [(p.main_gain, q), (p.side_gain, 1.0 - q)]
    w = 1.0 / len(p.samples)
    return [(float(g), w) for g in p.samples]


@dataclass(frozen=True)
class DevicePatterns:
    """The four device patterns: primary/secondary x transmit/receive."""

    pt: BeamPattern
    pr: BeamPattern
    st: BeamPattern
    sr: BeamPattern

    def all_sector_like(self) -> bool:
        """True when every pattern admits the two-point gain mixture."""
        return all(p.kind in (OMNI, SECTORIZED, IDEAL) for p in (self.pt, self.pr, self.st, self.sr))


def uniform_patterns(p: BeamPattern) -> DevicePatterns:
    return DevicePatterns(pt=p, pr=p, st=p, sr=p)


def ula_patterns(M_p: int, M_s: int, kappa: float = KAPPA_DEFAULT) -> DevicePatterns:
    """Both ends of the primary link use M_p elements, both ends of the
    secondary links use M_s; M = 1 means omni."""
    prim = ula_or_omni(M_p, kappa)
    sec = ula_or_omni(M_s, kappa)
    return DevicePatterns(pt=prim, pr=prim, st=sec, sr=sec)
