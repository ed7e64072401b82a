"""Spatial averaging over random network geometries.

Generates many network realizations, applies shadowing and CSMA thinning,
evaluates the closed-form conditional outage of each and aggregates outage
and transmission-capacity statistics. Fading is never simulated here: the
closed form already averages over it.

The SNR grid is referenced to the desired link: gamma_db is the SNR the
reference transmission would have at its actual distance with no fading or
shadowing. The closed form is therefore evaluated at
z = tx_distance**alpha / gamma_linear, which makes the noise floor independent
of the path-loss exponent and of where the receiver sits; this convention is
the one the published outage tables and SNR sweeps follow.

Reproducibility contract: every realization owns private random streams keyed
by (master_seed, realization index), and aggregation reduces an index-ordered
array, so results are bit-identical for a fixed master seed regardless of how
work is split across processes. Parameters that leave placement untouched
(guard radius, spreading gain, path-loss exponent, SNR grid) therefore see
the same set of networks under the same seed: common random numbers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelParams, normalized_powers
from .geometry import (
    NetworkScenario,
    NetworkRealization,
    csma_thin,
    place_uniform_clustering,
    receiver_at_center,
    receiver_at_perimeter,
)
from .outage import outage_curve

__all__ = [
    "ExperimentSpec",
    "SpatialAverage",
    "RECEIVER_MODES",
    "LAMBDA_MODES",
    "SWEEP_PARAMETERS",
    "generate_realization",
    "link_noise_levels",
    "spatial_average_outage",
    "transmission_capacity",
    "sweep",
]

RECEIVER_MODES = ("center", "perimeter")

# Density conventions for the transmission capacity (1 - eps) * lambda:
#   weighted     reference transmitter plus p_active per surviving interferer
#                (expected concurrent transmissions per unit area, the default)
#   count        reference transmitter plus every surviving interferer
#   interferers  p_active per surviving interferer, reference excluded
LAMBDA_MODES = ("weighted", "count", "interferers")

SWEEP_PARAMETERS = ("tx_distance", "r_g", "r_ex", "M", "gamma")


@dataclass(frozen=True)
class ExperimentSpec:
    """Complete definition of one spatial-averaging experiment."""

    scenario: NetworkScenario = NetworkScenario()
    channel: ChannelParams = ChannelParams()
    gamma_db_grid: tuple[float, ...] = (10.0,)
    n_realizations: int = 10_000
    master_seed: int = 1
    receiver_location_mode: str = "center"
    lambda_mode: str = "weighted"

    def __post_init__(self):
        object.__setattr__(self, "gamma_db_grid", tuple(float(g) for g in self.gamma_db_grid))
        if len(self.gamma_db_grid) == 0:
            raise ValueError("SNR grid must not be empty")
        if self.n_realizations < 1:
            raise ValueError(f"need at least one realization, got {self.n_realizations}")
        if not (isinstance(self.master_seed, (int, np.integer)) and 0 <= self.master_seed < 2 ** 64):
            raise ValueError(f"master seed must be an unsigned 64-bit integer, got {self.master_seed!r}")
        if self.receiver_location_mode not in RECEIVER_MODES:
            raise ValueError(f"receiver mode must be one of {RECEIVER_MODES}, got {self.receiver_location_mode!r}")
        if self.lambda_mode not in LAMBDA_MODES:
            raise ValueError(f"lambda mode must be one of {LAMBDA_MODES}, got {self.lambda_mode!r}")

    def resolved_scenario(self) -> NetworkScenario:
        """Scenario with the receiver position implied by the location mode."""
        if self.receiver_location_mode == "perimeter":
            return receiver_at_perimeter(self.scenario)
        return receiver_at_center(self.scenario)


@dataclass(frozen=True)
class SpatialAverage:
    """Per-SNR spatial means with standard errors, plus density diagnostics.

    tc_* hold the normalized transmission capacity (1 - eps) * lambda, i.e.
    throughput per unit area per unit link rate. active_mean counts surviving
    interferers; density_mean is the lambda convention recorded in the spec.
    """

    gamma_db: np.ndarray
    outage_mean: np.ndarray
    outage_se: np.ndarray
    tc_mean: np.ndarray
    tc_se: np.ndarray
    active_mean: float
    density_mean: float
    n_realizations: int


def _streams(master_seed: int, index: int):
    """Independent (geometry, channel) generators for one realization.

    Keyed purely by seed and index: execution order and worker count do not
    enter, and experiments that share a seed share placement and shadowing
    draws whenever the placement inputs coincide.
    """
    geom = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(index, 0))))
    chan = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(index, 1))))
    return geom, chan


def generate_realization(spec: ExperimentSpec, index: int) -> NetworkRealization:
    """The pre-thinning network realization with the given index.

    Exactly the geometry the estimators use for that index, before CSMA
    deactivation; useful for fixtures and common-random-number checks.
    """
    geom_rng, _ = _streams(spec.master_seed, index)
    return place_uniform_clustering(spec.resolved_scenario(), geom_rng)


def _density(scenario: NetworkScenario, n_active: int, lambda_mode: str) -> float:
    area = np.pi * scenario.r_net ** 2
    if lambda_mode == "weighted":
        return (1.0 + scenario.p_active * n_active) / area
    if lambda_mode == "count":
        return (1.0 + n_active) / area
    return scenario.p_active * n_active / area


def link_noise_levels(spec: ExperimentSpec) -> np.ndarray:
    """Evaluation points z for the closed form, one per grid SNR.

    gamma_db is the reference-link SNR. The normalized powers carry the
    absolute path gain tx_distance**(-alpha), so the matching noise level is
    z = tx_distance**(-alpha) / Gamma: the desired link then sits exactly
    Gamma above the noise before fading and shadowing.
    """
    grid = np.asarray(spec.gamma_db_grid)
    link_gain = spec.scenario.tx_distance ** (-spec.channel.alpha)
    return link_gain * 10.0 ** (-grid / 10.0)


def _evaluate_block(spec: ExperimentSpec, lo: int, hi: int):
    """Outage, TC, active count and density for realizations lo..hi-1."""
    scenario = spec.resolved_scenario()
    channel = spec.channel
    grid = np.asarray(spec.gamma_db_grid)
    z = link_noise_levels(spec)
    thin = scenario.r_g > scenario.r_ex

    n = hi - lo
    eps = np.empty((n, grid.size))
    tc = np.empty((n, grid.size))
    active = np.empty(n)
    density = np.empty(n)
    for row, index in enumerate(range(lo, hi)):
        geom_rng, chan_rng = _streams(spec.master_seed, index)
        realization = place_uniform_clustering(scenario, geom_rng)
        if thin:
            realization = csma_thin(realization, scenario.r_g)
        powers = normalized_powers(realization, channel, chan_rng, p_active=scenario.p_active)
        eps[row] = outage_curve(powers, channel.beta, channel.m0, z)
        n_act = realization.n_active
        lam = _density(scenario, n_act, spec.lambda_mode)
        tc[row] = (1.0 - eps[row]) * lam
        active[row] = n_act
        density[row] = lam
    return eps, tc, active, density


def _block_worker(args):
    spec, lo, hi = args
    return lo, _evaluate_block(spec, lo, hi)


def _collect(spec: ExperimentSpec, workers: int):
    n = spec.n_realizations
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers == 1 or n < 2 * workers:
        return _evaluate_block(spec, 0, n)

    k = len(spec.gamma_db_grid)
    eps = np.empty((n, k))
    tc = np.empty((n, k))
    active = np.empty(n)
    density = np.empty(n)
    bounds = np.linspace(0, n, 4 * workers + 1, dtype=int)
    tasks = [(spec, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for lo, (e, t, a, d) in pool.map(_block_worker, tasks):
            eps[lo:lo + e.shape[0]] = e
            tc[lo:lo + t.shape[0]] = t
            active[lo:lo + a.size] = a
            density[lo:lo + d.size] = d
    return eps, tc, active, density


def _summarize(spec: ExperimentSpec, eps, tc, active, density) -> SpatialAverage:
    n = spec.n_realizations
    if n > 1:
        eps_se = eps.std(axis=0, ddof=1) / np.sqrt(n)
        tc_se = tc.std(axis=0, ddof=1) / np.sqrt(n)
    else:
        eps_se = np.zeros(eps.shape[1])
        tc_se = np.zeros(tc.shape[1])
    return SpatialAverage(
        gamma_db=np.asarray(spec.gamma_db_grid),
        outage_mean=eps.mean(axis=0),
        outage_se=eps_se,
        tc_mean=tc.mean(axis=0),
        tc_se=tc_se,
        active_mean=float(active.mean()),
        density_mean=float(density.mean()),
        n_realizations=n,
    )


def spatial_average_outage(spec: ExperimentSpec, workers: int = 1) -> SpatialAverage:
    """Average the conditional outage over ``spec.n_realizations`` networks.

    Per realization: place interferers, thin if the guard zone extends beyond
    the exclusion zone, draw shadowing, build the normalized powers and
    evaluate the closed form on the SNR grid.
    """
    return _summarize(spec, *_collect(spec, workers))


def transmission_capacity(spec: ExperimentSpec, workers: int = 1) -> SpatialAverage:
    """Average normalized transmission capacity (1 - eps) * lambda.

    The density lambda counts transmitters per unit area under the spec's
    lambda_mode; the product with (1 - eps) is formed per realization, so
    outage/density correlation is kept.
    """
    return _summarize(spec, *_collect(spec, workers))


def _apply_parameter(spec: ExperimentSpec, parameter: str, value: float) -> ExperimentSpec:
    if parameter == "gamma":
        return replace(spec, gamma_db_grid=(float(value),))
    if parameter == "M":
        m = int(value)
        if m != value:
            raise ValueError(f"mobile count must be an integer, got {value}")
        return replace(spec, scenario=replace(spec.scenario, M=m))
    return replace(spec, scenario=replace(spec.scenario, **{parameter: float(value)}))


def sweep(
    spec: ExperimentSpec,
    parameter: str,
    values,
    workers: int = 1,
) -> list[tuple[float, SpatialAverage]]:
    """Run the estimator once per parameter value, sharing the master seed.

    Values sharing a seed see common random numbers wherever the swept
    parameter does not feed placement; an r_g sweep in particular reuses the
    identical pre-thinning networks for every value.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"sweep parameter must be one of {SWEEP_PARAMETERS}, got {parameter!r}")
    out = []
    for value in values:
        point = _apply_parameter(spec, parameter, value)
        out.append((float(value), _summarize(point, *_collect(point, workers))))
    return out
