"""Outage and transmission capacity of DS-CDMA ad hoc networks with guard zones.

Core pipeline: place mobiles on a finite disc with exclusion zones, deactivate
by CSMA guard zones, evaluate the exact conditional outage probability under
Nakagami fading and average over many random geometries.
"""

from .channel import ChannelParams, NormalizedPowers, chip_factor, effective_gain, normalized_powers, path_gain
from .geometry import (
    InfeasiblePackingError,
    NetworkRealization,
    NetworkScenario,
    csma_thin,
    guard_anchor_position,
    place_uniform_clustering,
    receiver_at_center,
    receiver_at_perimeter,
    realization_from_text,
    realization_to_text,
)
from .montecarlo import (
    ExperimentSpec,
    SpatialAverage,
    generate_realization,
    link_noise_levels,
    spatial_average_outage,
    sweep,
    transmission_capacity,
)
from .oracle import OracleResult, simulate_outage
from .outage import (
    OutageInputs,
    OutageNumericsError,
    ccdf_z,
    conditional_outage,
    g_coefficients,
    h_coefficients,
    outage_curve,
)
from .scenario import ScenarioParseError, build_spec, format_scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "NormalizedPowers",
    "NetworkScenario",
    "NetworkRealization",
    "InfeasiblePackingError",
    "ExperimentSpec",
    "SpatialAverage",
    "OutageInputs",
    "OutageNumericsError",
    "OracleResult",
    "ScenarioParseError",
    "path_gain",
    "chip_factor",
    "effective_gain",
    "normalized_powers",
    "place_uniform_clustering",
    "csma_thin",
    "receiver_at_center",
    "receiver_at_perimeter",
    "realization_to_text",
    "realization_from_text",
    "g_coefficients",
    "h_coefficients",
    "ccdf_z",
    "conditional_outage",
    "outage_curve",
    "simulate_outage",
    "generate_realization",
    "link_noise_levels",
    "spatial_average_outage",
    "transmission_capacity",
    "sweep",
    "build_spec",
    "parse_scenario",
    "format_scenario",
    "__version__",
]
