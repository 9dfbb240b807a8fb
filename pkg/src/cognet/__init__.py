"""Stochastic-geometry toolkit for cognitive mmWave networks with
directional sensing: analytic medium-access / activity-factor / coverage
expressions, a Monte-Carlo oracle, and threshold-selection tools."""

from .access import (
    AccessDiagnostics,
    SecondaryLink,
    activity_factor,
    activity_factor_sectorized,
    map_primary_frame,
    map_secondary_frame,
    protection_zone_area_mainlobe,
    protection_zone_radius,
    tradeoff_diagnostics,
    typical_map,
)
from .antenna import (
    BeamPattern,
    DevicePatterns,
    UlaSpec,
    expected_gain_power,
    from_ula,
    ideal,
    main_lobe_probability,
    omni,
    sectorized,
    tabulated,
    ula_patterns,
)
from .coverage_primary import (
    coverage_primary_exact,
    coverage_primary_simplified,
    kappa_p,
    laplace_secondary_interference,
    n3_general,
    n3_ula,
)
from .coverage_secondary import (
    SecondaryCoverageTerms,
    coverage_secondary,
    coverage_secondary_averaged,
    term4_exact,
    term4_far_primary,
    term4_near_primary,
    term4_sectorized,
)
from .geometry import (
    Angle,
    PolarPoint,
    PrimaryPlacement,
    cross_bearing_beta,
    cross_distance_z,
    primary_rx_position,
    wrap_angle,
)
from .montecarlo import (
    EstimateWithCI,
    NetworkRealization,
    RngStream,
    estimate_af,
    estimate_coverage_primary,
    estimate_coverage_secondary,
    estimate_map,
    sample_realization,
)
from .numerics import (
    QuadratureError,
    QuadratureSpec,
    integrate_radial,
    lower_incomplete_gamma,
    n1,
    n2,
    psi,
    upper_incomplete_gamma,
)
from .planner import (
    QoSConstraint,
    RhoSearchResult,
    cumulative_performance,
    feasible_tau_ceiling,
    find_rho_dagger,
)
from .scenario import (
    NoiseDerivation,
    Scenario,
    dbm_to_watts,
    default_scenario,
    load_config,
    preset_type,
    watts_to_dbm,
)

__version__ = "0.1.0"
