"""Exact conditional outage probability given a normalized power vector.

The SINR decision variable is reduced to Z = g0*omega0/beta - sum I_i g_i omega_i
with gamma-distributed fading gains; outage is P[Z <= 1/SNR]. For an integer
desired-link Nakagami parameter the ccdf of Z has a closed form: a degree
(m0-1) polynomial in z times exp(-beta0*z), whose coefficients combine the
per-interferer ladders G_l through a truncated product H_t. Everything here is
pure, deterministic double-precision arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import NormalizedPowers

__all__ = [
    "OutageInputs",
    "OutageNumericsError",
    "g_coefficients",
    "h_coefficients",
    "ccdf_z",
    "conditional_outage",
    "outage_curve",
]

# tolerated excursion of the ccdf outside [0, 1] before numbers are declared broken
_EPS_NUM = 1e-9


class OutageNumericsError(ArithmeticError):
    """ccdf evaluated outside [0, 1] beyond numerical tolerance."""


@dataclass(frozen=True)
class OutageInputs:
    """Inputs of one conditional-outage evaluation.

    beta is the linear SINR threshold, m0 the integer Nakagami parameter of
    the desired link and gamma_inv the evaluation point z = 1/SNR (0 for the
    interference-limited case).
    """

    powers: NormalizedPowers
    beta: float = 1.0
    m0: int = 3
    gamma_inv: float = 0.0

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ValueError(f"SINR threshold must be > 0, got {self.beta}")
        if not (isinstance(self.m0, (int, np.integer)) and self.m0 >= 1):
            raise ValueError(f"m0 must be a positive integer, got {self.m0!r}")
        if self.gamma_inv < 0.0:
            raise ValueError(f"evaluation point must be >= 0, got {self.gamma_inv}")


def _g_matrix(omega: np.ndarray, m: np.ndarray, p: np.ndarray, beta0: float, ell_max: int) -> np.ndarray:
    """Ladder coefficients G_0..G_ell_max for every interferer, one row each."""
    psi = 1.0 / (beta0 * omega / m + 1.0)
    psi_m = psi ** m
    out = np.empty((omega.size, ell_max + 1))
    out[:, 0] = 1.0 - p * (1.0 - psi_m)
    if ell_max >= 1:
        # gamma-ratio Gamma(l+m)/(l! Gamma(m)) by multiplicative recurrence,
        # valid for non-integer m
        ratio = np.ones_like(m)
        acc = psi_m * p
        step = (omega / m) * psi
        for ell in range(1, ell_max + 1):
            ratio = ratio * (ell - 1.0 + m) / ell
            acc = acc * step
            out[:, ell] = ratio * acc
    return out


def g_coefficients(omega_i: float, m_i: float, p_i: float, beta0: float, ell_max: int) -> np.ndarray:
    """Coefficient ladder [G_0, ..., G_ell_max] of a single interferer.

    G_0 = 1 - p*(1 - Psi**m) and, for l > 0,
    G_l = p * (Gamma(l+m)/(l! Gamma(m))) * (omega/m)**l * Psi**(m+l)
    with Psi = 1/(beta0*omega/m + 1). An inactive (p=0) or zero-power
    interferer yields [1, 0, ..., 0] and therefore drops out of the product.
    """
    if omega_i < 0.0:
        raise ValueError(f"interferer power must be >= 0, got {omega_i}")
    if m_i <= 0.0:
        raise ValueError(f"Nakagami parameter must be > 0, got {m_i}")
    if not 0.0 <= p_i <= 1.0:
        raise ValueError(f"activity probability must lie in [0, 1], got {p_i}")
    if beta0 <= 0.0:
        raise ValueError(f"beta0 must be > 0, got {beta0}")
    if ell_max < 0:
        raise ValueError(f"ell_max must be >= 0, got {ell_max}")
    return _g_matrix(np.array([omega_i]), np.array([m_i]), np.array([p_i]), beta0, ell_max)[0]


def h_coefficients(g_vectors, t_max: int) -> np.ndarray:
    """Combine per-interferer ladders into [H_0, ..., H_t_max].

    H_t is the coefficient of x**t in the product of the interferer
    polynomials sum_l G_l x**l, i.e. the sum over all index tuples adding up
    to t. Computed by truncated polynomial multiplication, which is O(M*t_max^2)
    instead of enumerating index tuples. An empty interferer set gives the
    empty product [1, 0, ..., 0].
    """
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    g = np.atleast_2d(np.asarray(g_vectors, dtype=float))
    if g.size and g.shape[1] < t_max + 1:
        raise ValueError(f"G vectors must have length >= {t_max + 1}, got {g.shape[1]}")
    h = np.zeros(t_max + 1)
    h[0] = 1.0
    if g.size == 0:
        return h
    if t_max == 0:
        h[0] = float(np.prod(g[:, 0]))
        return h
    if t_max <= 2:
        # hot path for the default m0 = 3: unrolled scalar updates beat
        # np.convolve on length-3 operands by an order of magnitude
        h0, h1, h2 = 1.0, 0.0, 0.0
        if t_max == 1:
            for row in g:
                a0, a1 = row[0], row[1]
                h0, h1 = h0 * a0, h0 * a1 + h1 * a0
            h[0], h[1] = h0, h1
        else:
            for row in g:
                a0, a1, a2 = row[0], row[1], row[2]
                h0, h1, h2 = h0 * a0, h0 * a1 + h1 * a0, h0 * a2 + h1 * a1 + h2 * a0
            h[0], h[1], h[2] = h0, h1, h2
        return h
    for row in g:
        h = np.convolve(h, row[: t_max + 1])[: t_max + 1]
    return h


def _ccdf_poly(beta0: float, h: np.ndarray, z) -> np.ndarray:
    """Evaluate exp(-beta0*z) * sum_s (beta0*z)^s sum_{t<=s} z^(-t) H_t/(s-t)!.

    Regrouping by k = s - t gives sum_k C_k z^k with
    C_k = beta0^k/k! * sum_{t <= m0-1-k} beta0^t H_t, which removes the 0*inf
    ambiguity at z = 0 and keeps large beta0 out of negative powers.
    """
    m0 = h.size
    z = np.asarray(z, dtype=float)
    prefix = np.cumsum(h * beta0 ** np.arange(m0))
    ccdf = np.zeros_like(z)
    bk = 1.0
    for k in range(m0):
        ccdf += (bk * prefix[m0 - 1 - k]) * z ** k
        bk *= beta0 / (k + 1)
    ccdf *= np.exp(-beta0 * z)
    bad = (ccdf < -_EPS_NUM) | (ccdf > 1.0 + _EPS_NUM)
    if bad.any():
        raise OutageNumericsError(
            f"ccdf left [0, 1] by more than {_EPS_NUM:g} "
            f"(range [{float(np.min(ccdf)):.17g}, {float(np.max(ccdf)):.17g}]); "
            "coefficient computation is broken"
        )
    return np.clip(ccdf, 0.0, 1.0)


def _ccdf_curve(powers: NormalizedPowers, beta: float, m0: int, z_values) -> np.ndarray:
    beta0 = beta * m0 / powers.omega0
    g = _g_matrix(powers.omega, powers.m, powers.p, beta0, m0 - 1)
    h = h_coefficients(g, m0 - 1)
    return _ccdf_poly(beta0, h, z_values)


def ccdf_z(inputs: OutageInputs) -> float:
    """P[Z > z]: probability the fading margin exceeds the noise level z."""
    return float(_ccdf_curve(inputs.powers, inputs.beta, inputs.m0, inputs.gamma_inv))


def conditional_outage(inputs: OutageInputs) -> float:
    """Outage probability conditioned on the normalized powers: 1 - ccdf at 1/SNR."""
    return 1.0 - ccdf_z(inputs)


def outage_curve(powers: NormalizedPowers, beta: float, m0: int, z_values) -> np.ndarray:
    """Conditional outage at several noise levels z = 1/SNR at once.

    The interferer ladders and their product do not depend on z, so a whole
    SNR grid costs barely more than a single point.
    """
    if beta <= 0.0:
        raise ValueError(f"SINR threshold must be > 0, got {beta}")
    if not (isinstance(m0, (int, np.integer)) and m0 >= 1):
        raise ValueError(f"m0 must be a positive integer, got {m0!r}")
    z_values = np.asarray(z_values, dtype=float)
    if np.any(z_values < 0.0):
        raise ValueError("evaluation points must be >= 0")
    return 1.0 - _ccdf_curve(powers, beta, m0, z_values)
