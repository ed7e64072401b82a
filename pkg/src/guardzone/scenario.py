"""Plain-text scenario files: one experiment definition per file.

Format: ``key = value`` lines, ``#`` comments, blank lines ignored. Unknown or
repeated keys are hard errors so a typo cannot silently fall back to a
default. Fractions like ``1/12`` are accepted wherever a number is, since the
natural radii are fractions of the network radius. An empty file resolves to
the default configuration: 30 interferers with a 1/12 exclusion zone and no
extra CSMA zone, spread system, shadowed, SNR swept 0..25 dB.
"""

from __future__ import annotations

from dataclasses import replace

from .channel import ChannelParams
from .geometry import NetworkScenario
from .montecarlo import ExperimentSpec, LAMBDA_MODES, RECEIVER_MODES

__all__ = ["ScenarioParseError", "DEFAULTS", "parse_scenario", "spec_from_mapping",
           "spec_to_mapping", "format_scenario", "build_spec"]


class ScenarioParseError(ValueError):
    """Scenario file is syntactically invalid (bad key, value or line)."""


DEFAULTS: dict[str, object] = {
    "r_net": 1.0,
    "M": 30,
    "r_ex": 1.0 / 12.0,
    "r_g": 1.0 / 12.0,
    "tx_distance": 1.0 / 6.0,
    "receiver": "center",
    "alpha": 3.5,
    "sigma_s_db": 8.0,
    "beta_db": 0.0,
    "m0": 3,
    "m_i": 1.0,
    "p_active": 0.5,
    "G_e": 48.0,
    "gamma_db": tuple(float(g) for g in range(26)),
    "realizations": 10_000,
    "seed": 1,
    "lambda_mode": "weighted",
    "clamp_near_field": False,
    "exclusion_around_receiver": True,
}

_FLOAT_KEYS = ("r_net", "r_ex", "r_g", "tx_distance", "alpha", "sigma_s_db",
               "beta_db", "m_i", "p_active", "G_e")
_INT_KEYS = ("M", "m0", "realizations", "seed")
_BOOL_KEYS = ("clamp_near_field", "exclusion_around_receiver")


def _parse_number(text: str) -> float:
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)


def _parse_value(key: str, raw: str):
    if key in _FLOAT_KEYS:
        return _parse_number(raw)
    if key in _INT_KEYS:
        return int(raw, 0)
    if key in _BOOL_KEYS:
        lowered = raw.lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if key == "receiver":
        if raw not in RECEIVER_MODES:
            raise ValueError(f"receiver must be one of {RECEIVER_MODES}, got {raw!r}")
        return raw
    if key == "lambda_mode":
        if raw not in LAMBDA_MODES:
            raise ValueError(f"lambda_mode must be one of {LAMBDA_MODES}, got {raw!r}")
        return raw
    # gamma_db: comma- or whitespace-separated list
    parts = [p for chunk in raw.split(",") for p in chunk.split()]
    if not parts:
        raise ValueError("gamma_db list must not be empty")
    return tuple(_parse_number(p) for p in parts)


def parse_scenario(text: str) -> dict[str, object]:
    """Parse scenario text into a fully-defaulted key/value mapping."""
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ScenarioParseError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in DEFAULTS:
            raise ScenarioParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioParseError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _parse_value(key, raw)
        except ValueError as exc:
            raise ScenarioParseError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    resolved = dict(DEFAULTS)
    resolved.update(values)
    return resolved


def spec_from_mapping(mapping: dict[str, object]) -> ExperimentSpec:
    """Build an ExperimentSpec from a resolved mapping; domain checks apply."""
    scenario = NetworkScenario(
        r_net=mapping["r_net"],
        M=mapping["M"],
        r_ex=mapping["r_ex"],
        r_g=mapping["r_g"],
        tx_distance=mapping["tx_distance"],
        p_active=mapping["p_active"],
        exclude_receiver=mapping["exclusion_around_receiver"],
    )
    channel = ChannelParams(
        alpha=mapping["alpha"],
        sigma_s_db=mapping["sigma_s_db"],
        beta_db=mapping["beta_db"],
        m0=mapping["m0"],
        m_i_default=mapping["m_i"],
        chip_mode="constant",
        G_e=mapping["G_e"],
        clamp_near_field=mapping["clamp_near_field"],
    )
    return ExperimentSpec(
        scenario=scenario,
        channel=channel,
        gamma_db_grid=mapping["gamma_db"],
        n_realizations=mapping["realizations"],
        master_seed=mapping["seed"],
        receiver_location_mode=mapping["receiver"],
        lambda_mode=mapping["lambda_mode"],
    )


def build_spec(text: str, **overrides) -> ExperimentSpec:
    """Parse scenario text and apply keyword overrides (seed=, realizations=, ...)."""
    mapping = parse_scenario(text)
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in DEFAULTS:
            raise KeyError(f"unknown scenario key {key!r}")
        mapping[key] = value
    return spec_from_mapping(mapping)


def spec_to_mapping(spec: ExperimentSpec) -> dict[str, object]:
    """Inverse of spec_from_mapping, in canonical key order."""
    sc, ch = spec.scenario, spec.channel
    return {
        "r_net": sc.r_net,
        "M": sc.M,
        "r_ex": sc.r_ex,
        "r_g": sc.r_g,
        "tx_distance": sc.tx_distance,
        "receiver": spec.receiver_location_mode,
        "alpha": ch.alpha,
        "sigma_s_db": ch.sigma_s_db,
        "beta_db": ch.beta_db,
        "m0": ch.m0,
        "m_i": ch.m_i_default,
        "p_active": sc.p_active,
        "G_e": ch.G_e,
        "gamma_db": spec.gamma_db_grid,
        "realizations": spec.n_realizations,
        "seed": spec.master_seed,
        "lambda_mode": spec.lambda_mode,
        "clamp_near_field": ch.clamp_near_field,
        "exclusion_around_receiver": sc.exclude_receiver,
    }


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    if isinstance(value, float):
        return repr(value)  # repr round-trips doubles exactly
    return str(value)


def format_scenario(spec: ExperimentSpec) -> str:
    """Render the fully-resolved scenario; parses back to an identical spec."""
    lines = [f"{key} = {_format_value(value)}" for key, value in spec_to_mapping(spec).items()]
    return "\n".join(lines) + "\n"
