"""The full parameter record, unit conversions, presets and config parsing.

Internal units are SI (watts, meters, radians).  dBm and degrees are
accepted only at the config-file boundary.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace

from .antenna import (
    KAPPA_DEFAULT,
    BeamPattern,
    DevicePatterns,
    UlaSpec,
    from_ula,
    ideal,
    omni,
    sectorized,
    tabulated,
    ula_patterns,
)
from .geometry import PrimaryPlacement

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml


def dbm_to_watts(v: float) -> float:
    return 10.0 ** ((v - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    if w <= 0:
        raise ValueError("power must be > 0 to express in dBm")
    return 10.0 * math.log10(w) + 30.0


def db_to_linear(v: float) -> float:
    return 10.0 ** (v / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class NoiseDerivation:
    """Normalized noise power from bandwidth and near-field gain."""

    bandwidth_hz: float = 200e6
    near_field_gain: float = 1e-6
    thermal_floor_dbm_hz: float = -174.0

    def johnson_nyquist_watts(self) -> float:
        dbm = self.thermal_floor_dbm_hz + 10.0 * math.log10(self.bandwidth_hz)
        return dbm_to_watts(dbm)

    def sigma2(self) -> float:
        return self.johnson_nyquist_watts() / self.near_field_gain


@dataclass(frozen=True)
class Scenario:
    """All physical parameters of one network configuration."""

    alpha: float
    rho: float
    p_p: float
    p_s: float
    lambda_s: float
    r_p: float
    r_s: float
    sigma2: float
    R: float
    patterns: DevicePatterns
    placement: PrimaryPlacement

    def __post_init__(self):
        if self.alpha <= 2.0:
            raise ValueError("path-loss exponent must exceed 2 (coverage kernels diverge)")
        for name in ("rho", "p_p", "p_s", "sigma2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.lambda_s < 0:
            raise ValueError("lambda_s must be >= 0")
        for name in ("r_p", "r_s", "R"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    def with_rho(self, rho: float) -> "Scenario":
        return replace(self, rho=rho)

    def with_patterns(self, patterns: DevicePatterns) -> "Scenario":
        return replace(self, patterns=patterns)

    def with_placement(self, placement: PrimaryPlacement) -> "Scenario":
        return replace(self, placement=placement)

    def with_ula(self, M_p: int, M_s: int, kappa: float = KAPPA_DEFAULT) -> "Scenario":
        return replace(self, patterns=ula_patterns(M_p, M_s, kappa))


def preset_type(n: int, R: float = 4000.0, law: str = "full_disk") -> PrimaryPlacement:
    """The four canonical primary-link poses.

    Types 1-3 are the fixed study geometries; type 4 is the averaged user
    with the primary transmitter drawn uniformly in the disk of radius R.
    """
    if n == 1:
        return PrimaryPlacement(x_p=50.0, delta_p=math.pi / 2, omega_p=math.pi / 12)
    if n == 2:
        return PrimaryPlacement(x_p=80.0, delta_p=math.pi / 2, omega_p=-math.pi / 2)
    if n == 3:
        return PrimaryPlacement(x_p=10.0, delta_p=math.pi / 2, omega_p=math.pi / 2)
    if n == 4:
        return PrimaryPlacement(mode="random", region_radius=R, law=law)
    raise ValueError(f"preset type must be 1..4, got {n}")


def default_scenario(
    M_p: int = 4,
    M_s: int = 4,
    placement_type: int = 1,
    rho: float = 40e-9,
) -> Scenario:
    """Baseline 60 GHz configuration used throughout the numerical study.

    rho defaults to the 40 nW working point of the directionality sweeps.
    """
    R = 4000.0
    return Scenario(
        alpha=3.3,
        rho=rho,
        p_p=dbm_to_watts(27.0),
        p_s=dbm_to_watts(17.0),
        lambda_s=8e-5,
        r_p=50.0,
        r_s=20.0,
        sigma2=7.962e-7,
        R=R,
        patterns=ula_patterns(M_p, M_s),
        placement=preset_type(placement_type, R=R),
    )


# ---------------------------------------------------------------------------
# Config-file ingestion (TOML).  Schema documented in the README; defaults
# reproduce default_scenario().
# ---------------------------------------------------------------------------


def _pattern_from_config(tbl: dict, device: str) -> BeamPattern:
    kind = tbl.get("type", "ula")
    if kind == "omni":
        return omni()
    if kind == "ula":
        M = int(tbl.get("M", 4))
        kappa = math.radians(float(tbl.get("kappa_deg", 121.0)))
        if M == 1:
            return omni()
        return from_ula(UlaSpec(M=M, kappa=kappa))
    if kind == "sectorized":
        for key in ("a", "b", "phi_deg"):
            if key not in tbl:
                raise ConfigError(f"[antenna.{device}] sectorized pattern needs '{key}'")
        return sectorized(float(tbl["a"]), float(tbl["b"]), math.radians(float(tbl["phi_deg"])))
    if kind == "ideal":
        for key in ("a", "phi_deg"):
            if key not in tbl:
                raise ConfigError(f"[antenna.{device}] ideal pattern needs '{key}'")
        return ideal(float(tbl["a"]), math.radians(float(tbl["phi_deg"])))
    if kind == "tabulated":
        if "gains" not in tbl:
            raise ConfigError(f"[antenna.{device}] tabulated pattern needs 'gains'")
        return tabulated(tbl["gains"])
    raise ConfigError(f"[antenna.{device}] unknown pattern type {kind!r}")


class ConfigError(ValueError):
    """Raised with an exhaustive message when a config file is invalid."""


def _power_watts(tbl: dict, base: str, default_w: float, errors: list) -> float:
    w_key, dbm_key = f"{base}_w", f"{base}_dbm"
    if w_key in tbl and dbm_key in tbl:
        errors.append(f"give either {w_key} or {dbm_key}, not both")
        return default_w
    if w_key in tbl:
        return float(tbl[w_key])
    if dbm_key in tbl:
        return dbm_to_watts(float(tbl[dbm_key]))
    return default_w


def scenario_from_dict(cfg: dict) -> Scenario:
    """Build a Scenario from a parsed config tree; unknown keys rejected."""
    errors: list[str] = []
    sc_tbl = cfg.get("scenario", {})
    known = {
        "alpha", "rho_w", "rho_dbm", "p_p_w", "p_p_dbm", "p_s_w", "p_s_dbm",
        "lambda_s_per_m2", "r_p_m", "r_s_m", "sigma2_w", "region_radius_m", "noise",
    }
    for key in sc_tbl:
        if key not in known:
            errors.append(f"[scenario] unknown key {key!r}")

    alpha = float(sc_tbl.get("alpha", 3.3))
    R = float(sc_tbl.get("region_radius_m", 4000.0))
    rho = _power_watts(sc_tbl, "rho", 40e-9, errors)
    p_p = _power_watts(sc_tbl, "p_p", dbm_to_watts(27.0), errors)
    p_s = _power_watts(sc_tbl, "p_s", dbm_to_watts(17.0), errors)
    lambda_s = float(sc_tbl.get("lambda_s_per_m2", 8e-5))
    r_p = float(sc_tbl.get("r_p_m", 50.0))
    r_s = float(sc_tbl.get("r_s_m", 20.0))
    if "sigma2_w" in sc_tbl and "noise" in sc_tbl:
        errors.append("[scenario] give either sigma2_w or a [scenario.noise] table, not both")
    if "noise" in sc_tbl:
        nz = sc_tbl["noise"]
        sigma2 = NoiseDerivation(
            bandwidth_hz=float(nz.get("bandwidth_hz", 200e6)),
            near_field_gain=float(nz.get("near_field_gain", 1e-6)),
            thermal_floor_dbm_hz=float(nz.get("thermal_floor_dbm_hz", -174.0)),
        ).sigma2()
    else:
        sigma2 = float(sc_tbl.get("sigma2_w", 7.962e-7))

    ant_tbl = cfg.get("antenna", {})
    for key in ant_tbl:
        if key not in ("pt", "pr", "st", "sr"):
            errors.append(f"[antenna] unknown device {key!r} (expected pt|pr|st|sr)")
    pats = {}
    for dev in ("pt", "pr", "st", "sr"):
        try:
            pats[dev] = _pattern_from_config(ant_tbl.get(dev, {}), dev)
        except (ConfigError, ValueError) as exc:
            errors.append(str(exc))
            pats[dev] = omni()

    pl_tbl = cfg.get("placement", {})
    try:
        placement = _placement_from_config(pl_tbl, R)
    except (ConfigError, ValueError) as exc:
        errors.append(str(exc))
        placement = preset_type(1)

    if errors:
        raise ConfigError("invalid config:\n  " + "\n  ".join(errors))
    return Scenario(
        alpha=alpha, rho=rho, p_p=p_p, p_s=p_s, lambda_s=lambda_s,
        r_p=r_p, r_s=r_s, sigma2=sigma2, R=R,
        patterns=DevicePatterns(**pats), placement=placement,
    )


def _placement_from_config(tbl: dict, R: float) -> PrimaryPlacement:
    kind = tbl.get("type", 1)
    law = tbl.get("law", "full_disk")
    if isinstance(kind, int):
        return preset_type(kind, R=R, law=law)
    if kind == "fixed":
        for key in ("x_p_m", "delta_p_deg", "omega_p_deg"):
            if key not in tbl:
                raise ConfigError(f"[placement] fixed placement needs '{key}'")
        return PrimaryPlacement(
            x_p=float(tbl["x_p_m"]),
            delta_p=math.radians(float(tbl["delta_p_deg"])),
            omega_p=math.radians(float(tbl["omega_p_deg"])),
        )
    if kind == "random":
        return PrimaryPlacement(mode="random", region_radius=float(tbl.get("region_radius_m", R)), law=law)
    raise ConfigError(f"[placement] unknown type {kind!r}")


@dataclass(frozen=True)
class RunConfig:
    """Scenario plus the raw tool sections ([mc], [sweep], ...) of a file."""

    scenario: Scenario
    sections: dict = field(default_factory=dict)


def load_config(path) -> RunConfig:
    with open(path, "rb") as fh:
        cfg = _toml.load(fh)
    scenario = scenario_from_dict(cfg)
    tool_sections = {k: v for k, v in cfg.items() if k not in ("scenario", "antenna", "placement")}
    return RunConfig(scenario=scenario, sections=tool_sections)
