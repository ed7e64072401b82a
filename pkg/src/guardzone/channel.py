"""Physical-layer math: path loss, shadowing, despreading gain, normalized powers.

Distances are in units of the network radius. Powers are normalized so that
the desired signal at unit distance with no fading/shadowing has power 1;
noise enters elsewhere through the unit-distance SNR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChannelParams",
    "NormalizedPowers",
    "path_gain",
    "chip_factor",
    "effective_gain",
    "normalized_powers",
]

CHIP_MODES = ("constant", "random")


@dataclass(frozen=True)
class ChannelParams:
    """Physical-layer constants shared by every link in an experiment.

    alpha            path-loss exponent, >= 2
    sigma_s_db       log-normal shadowing standard deviation in dB (0 = none)
    beta_db          SINR threshold in dB
    m0               Nakagami parameter of the desired link (positive integer)
    m_i_default      Nakagami parameter of interfering links (> 0, may be non-integer)
    G                processing gain of the spreading sequence
    chip_mode        "constant": every interferer is attenuated by G_e;
                     "random": per-interferer gain G / h(u) with u ~ U[0, 1]
    G_e              effective spreading gain used in constant mode (>= 1)
    power_ratio      common interferer-to-reference transmit power ratio P_i / P_0
    clamp_near_field when True, path gains are capped at 1 inside the
                     reference distance instead of following the power law
    """

    alpha: float = 3.5
    sigma_s_db: float = 0.0
    beta_db: float = 0.0
    m0: int = 3
    m_i_default: float = 1.0
    G: float = 32.0
    chip_mode: str = "constant"
    G_e: float = 48.0
    power_ratio: float = 1.0
    clamp_near_field: bool = False

    def __post_init__(self):
        if self.alpha < 2.0:
            raise ValueError(f"path-loss exponent must be >= 2, got {self.alpha}")
        if self.sigma_s_db < 0.0:
            raise ValueError(f"shadowing std must be >= 0 dB, got {self.sigma_s_db}")
        if not (isinstance(self.m0, (int, np.integer)) and self.m0 >= 1):
            raise ValueError(f"m0 must be a positive integer, got {self.m0!r}")
        if self.m_i_default <= 0.0:
            raise ValueError(f"interferer Nakagami parameter must be > 0, got {self.m_i_default}")
        if self.chip_mode not in CHIP_MODES:
            raise ValueError(f"chip_mode must be one of {CHIP_MODES}, got {self.chip_mode!r}")
        if self.G < 1.0:
            raise ValueError(f"processing gain must be >= 1, got {self.G}")
        if self.chip_mode == "constant" and self.G_e < 1.0:
            raise ValueError(f"effective gain must be >= 1, got {self.G_e}")
        if self.power_ratio <= 0.0:
            raise ValueError(f"power ratio must be > 0, got {self.power_ratio}")

    @property
    def beta(self) -> float:
        """SINR threshold on a linear scale."""
        return 10.0 ** (self.beta_db / 10.0)


@dataclass
class NormalizedPowers:
    """Normalized power vector: the sufficient statistic for conditional outage.

    omega0 is the desired-signal normalized power. The i-th interferer is
    described by (omega[i], m[i], p[i]): normalized power, Nakagami parameter
    and activity probability. Interferers silenced by a CSMA guard zone carry
    p[i] = 0, which is equivalent to removing them.
    """

    omega0: float
    omega: np.ndarray
    m: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        self.omega = np.atleast_1d(np.asarray(self.omega, dtype=float))
        self.m = np.atleast_1d(np.asarray(self.m, dtype=float))
        self.p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if not self.omega0 > 0.0:
            raise ValueError(f"desired normalized power must be > 0, got {self.omega0}")
        if self.omega.shape != self.m.shape or self.omega.shape != self.p.shape:
            raise ValueError("omega, m and p must have matching shapes")
        if np.any(self.omega < 0.0):
            raise ValueError("interferer powers must be >= 0")
        if np.any(self.m <= 0.0):
            raise ValueError("Nakagami parameters must be > 0")
        if np.any((self.p < 0.0) | (self.p > 1.0)):
            raise ValueError("activity probabilities must lie in [0, 1]")

    @classmethod
    def from_interferers(cls, omega0, interferers):
        """Build from a list of (omega_i, m_i, p_i) tuples."""
        if interferers:
            omega, m, p = (np.array(col, dtype=float) for col in zip(*interferers))
        else:
            omega = m = p = np.empty(0)
        return cls(omega0, omega, m, p)

    @property
    def n_interferers(self) -> int:
        return self.omega.size


def path_gain(d, d0: float = 1.0, alpha: float = 3.5, clamp: bool = False):
    """Power-law path gain (d/d0)**(-alpha).

    The power law is extrapolated below the reference distance unless
    ``clamp`` is set, in which case the gain saturates at 1 there.
    """
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0.0) or d0 <= 0.0:
        raise ValueError("distances must be > 0")
    if alpha < 2.0:
        raise ValueError(f"path-loss exponent must be >= 2, got {alpha}")
    gain = (d / d0) ** (-alpha)
    if clamp:
        gain = np.minimum(gain, 1.0)
    return gain if gain.ndim else float(gain)


def chip_factor(u):
    """Despreading attenuation of an asynchronous interferer, rectangular chips.

    ``u`` is the timing offset normalized to one chip, in [0, 1]. The result
    (1 - u)**2 + u**2 lies in [1/2, 1] and averages 2/3 over a uniform offset.
    """
    u = np.asarray(u, dtype=float)
    if np.any((u < 0.0) | (u > 1.0)):
        raise ValueError("normalized chip offset must lie in [0, 1]")
    h = (1.0 - u) ** 2 + u ** 2
    return h if h.ndim else float(h)


def effective_gain(params: ChannelParams, rng: np.random.Generator | None = None, size=None):
    """Per-interferer interference-suppression factor G_i.

    Constant mode returns the configured effective gain; random mode draws a
    fresh chip offset per interferer and returns G / h(u).
    """
    if params.chip_mode == "constant":
        return params.G_e if size is None else np.full(size, params.G_e)
    if rng is None:
        raise ValueError("random chip mode needs a random generator")
    return params.G / chip_factor(rng.random(size))


def normalized_powers(
    realization,
    params: ChannelParams,
    rng: np.random.Generator | None = None,
    p_active: float = 1.0,
) -> NormalizedPowers:
    """Normalized power vector of one network realization.

    Draws fresh shadowing (and chip offsets in random mode) from ``rng``.
    Interferers flagged inactive by CSMA thinning keep their power entry but
    carry activity probability 0; active ones carry ``p_active``.
    """
    if not 0.0 <= p_active <= 1.0:
        raise ValueError(f"activity probability must lie in [0, 1], got {p_active}")
    receiver = np.asarray(realization.receiver, dtype=float)
    d0 = float(np.hypot(*(np.asarray(realization.reference_tx, dtype=float) - receiver)))
    if d0 <= 0.0:
        raise ValueError("reference transmitter sits on the receiver")
    pts = np.asarray(realization.interferers, dtype=float).reshape(-1, 2)
    n = pts.shape[0]
    dists = np.hypot(pts[:, 0] - receiver[0], pts[:, 1] - receiver[1])
    if np.any(dists <= 0.0):
        raise ValueError("interferer at zero distance from the receiver")

    if params.sigma_s_db > 0.0:
        if rng is None:
            raise ValueError("shadowing needs a random generator")
        xi = rng.normal(0.0, params.sigma_s_db, n + 1)
        shadow = 10.0 ** (xi / 10.0)
    else:
        shadow = np.ones(n + 1)

    gain0 = d0 ** (-params.alpha)
    gains = dists ** (-params.alpha)
    if params.clamp_near_field:
        gain0 = min(gain0, 1.0)
        gains = np.minimum(gains, 1.0)

    g_i = effective_gain(params, rng, size=n) if n else np.empty(0)
    omega0 = shadow[0] * gain0
    omega = (params.power_ratio / g_i) * shadow[1:] * gains if n else np.empty(0)

    active = np.asarray(realization.active, dtype=bool)
    p = np.where(active, p_active, 0.0) if n else np.empty(0)
    m = np.full(n, params.m_i_default)
    return NormalizedPowers(omega0=float(omega0), omega=omega, m=m, p=p)
