"""Node geometry, Rician small-scale fading, and air/ground channel power gains.

All gains are linear power ratios (dimensionless), distances in meters.
Ground-to-air (G2A) links connect a ground user to a UAV; air-to-air (A2A)
links connect the helper UAV to another UAV.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Position",
    "ChannelParams",
    "FadingSample",
    "horizontal_distance",
    "sample_fading",
    "sample_fading_n",
    "g2a_power_gain",
    "a2a_power_gain",
]

# Rician K factors at or above this are treated as a pure line-of-sight link
# (the scattered term underflows any meaningful contribution).
PURE_LOS_K = 1e12


@dataclass(frozen=True)
class Position:
    """Horizontal coordinates in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError("position coordinates must be finite")

    def as_array(self):
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class ChannelParams:
    """Channel constants, all in linear scale.

    beta0/beta1 are the received power gains at 1 m reference distance for
    the G2A and A2A links, k_g2a/k_a2a the Rician factors, sigma2 the noise
    power in watts, and d_min the horizontal-distance clamp that keeps the
    A2A gain finite when the helper overlaps a same-altitude UAV.
    """

    beta0: float = 1e-5
    beta1: float = 1e-4
    k_g2a: float = 10 ** 1.2  # 12 dB
    k_a2a: float = 10 ** 2.0  # 20 dB
    sigma2: float = 1e-13  # -100 dBm
    d_min: float = 1.0

    def __post_init__(self):
        if self.beta0 <= 0 or self.beta1 <= 0 or self.sigma2 <= 0:
            raise ValueError("beta0, beta1 and sigma2 must be positive")
        if self.k_g2a < 0 or self.k_a2a < 0:
            raise ValueError("Rician K factors must be nonnegative")
        if self.d_min <= 0:
            raise ValueError("d_min must be positive")


@dataclass(frozen=True)
class FadingSample:
    """Realized small-scale power factor |gamma|^2 (unit mean by construction)."""

    power_factor: float

    def __post_init__(self):
        if not np.isfinite(self.power_factor) or self.power_factor < 0:
            raise ValueError("fading power factor must be finite and nonnegative")


def horizontal_distance(a, b):
    """Euclidean distance between two horizontal positions (meters).

    Accepts Position objects or array-likes of shape (..., 2); broadcasts.
    """
    ax = a.as_array() if isinstance(a, Position) else np.asarray(a, dtype=float)
    bx = b.as_array() if isinstance(b, Position) else np.asarray(b, dtype=float)
    return np.hypot(ax[..., 0] - bx[..., 0], ax[..., 1] - bx[..., 1])


def _rician_power(k_linear, normals):
    """Power of (los + scattered) with los amplitude sqrt(K/(K+1)) and a
    complex Gaussian scattered part of total variance 1/(K+1).

    ``normals`` has shape (..., 2): independent standard normals for the
    real/imaginary parts.
    """
    los = np.sqrt(k_linear / (k_linear + 1.0))
    s = np.sqrt(1.0 / (2.0 * (k_linear + 1.0)))
    re = los + s * normals[..., 0]
    im = s * normals[..., 1]
    return re * re + im * im


def sample_fading(k_linear, rng):
    """Draw one Rician power factor with mean 1.

    K = 0 degenerates to Rayleigh (exponential power); K >= PURE_LOS_K is
    treated as deterministic line of sight and returns exactly 1 without
    consuming random draws.
    """
    if k_linear < 0:
        raise ValueError("K factor must be nonnegative")
    if k_linear >= PURE_LOS_K:
        return FadingSample(1.0)
    normals = rng.standard_normal(2)
    return FadingSample(float(_rician_power(k_linear, normals)))

def sample_fading_n(k_linear, n, rng):
    """Vectorized version of :func:`sample_fading`: returns an array of n
    power factors drawn from the same stream (identical values to n scalar
    calls on the same rng)."""
    if k_linear < 0:
        raise ValueError("K factor must be nonnegative")
    if k_linear >= PURE_LOS_K:
        return np.ones(n)
    normals = rng.standard_normal((n, 2))
    return _rician_power(k_linear, normals)


def g2a_power_gain(ue, uav, altitude, params, fading):
    """Ground-to-air channel power gain.

    beta0 * |fading|^2 / (altitude^2 + D^2) with D the horizontal distance
    between the user and the UAV; altitude is the receiving UAV's altitude.
    """
    if np.any(np.asarray(altitude) <= 0):
        raise ValueError("altitude must be positive")
    d = horizontal_distance(ue, uav)
    pf = fading.power_factor if isinstance(fading, FadingSample) else np.asarray(fading)
    return params.beta0 * pf / (altitude * altitude + d * d)


def a2a_power_gain(helper, other, altitude_diff, params, fading):
    """Air-to-air channel power gain between the helper UAV and another UAV.

    beta1 * |fading|^2 / (altitude_diff^2 + max(D, d_min)^2). The d_min
    clamp keeps the gain finite when both UAVs share the same altitude and
    horizontal position.
    """
    d = np.maximum(horizontal_distance(helper, other), params.d_min)
    pf = fading.power_factor if isinstance(fading, FadingSample) else np.asarray(fading)
    return params.beta1 * pf / (altitude_diff * altitude_diff + d * d)
