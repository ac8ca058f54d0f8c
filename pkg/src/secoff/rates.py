"""Per-user achievable rates at the legitimate and eavesdropper UAVs and the
resulting secrecy sum-rate.

The helper UAV operates in one of two modes per slot:

* relay -- decode-and-forward with a half-slot split: the user transmits to
  both UAVs in the first half, the helper re-transmits to the legitimate UAV
  in the second half.  The eavesdropper overhears both transmissions.
* jam -- the helper radiates artificial noise for the whole slot; it raises
  the interference floor at the eavesdropper but also at the legitimate UAV.

All rates are spectral efficiencies in bits/s/Hz.  Functions accept scalars
or numpy arrays (elementwise over users).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Mode",
    "PowerConfig",
    "UeLinkGains",
    "rate_legitimate",
    "rate_eavesdropper",
    "secrecy_rate_ue",
    "secrecy_sum_rate",
]

_LN2 = np.log(2.0)


class Mode(Enum):
    JAM = 0
    RELAY = 1

    @property
    def label(self):
        return "relay" if self is Mode.RELAY else "jam"


@dataclass(frozen=True)
class PowerConfig:
    """Transmit/noise powers in watts; p_u is common to all users."""

    p_u: float = 0.1
    p_r: float = 0.012
    p_j: float = 0.08
    sigma2: float = 1e-13

    def __post_init__(self):
        for name in ("p_u", "p_r", "p_j", "sigma2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    def helper_power(self, mode):
        return self.p_r if mode is Mode.RELAY else self.p_j


@dataclass(frozen=True)
class UeLinkGains:
    """Realized power gains of the five links relevant to one user.

    g_ul: user -> legitimate UAV     g_uh: user -> helper UAV
    g_ue: user -> eavesdropper UAV   g_hl: helper -> legitimate UAV
    g_he: helper -> eavesdropper UAV
    """

    g_ul: float
    g_uh: float
    g_ue: float
    g_hl: float
    g_he: float


def _log2_1p(x):
    # log2(1+x) via log1p keeps accuracy for the small jam-mode SINRs.
    return np.log1p(x) / _LN2


def rate_legitimate(mode, gains, power):
    """Achievable rate at the legitimate UAV for one user.

    Relay mode is the decode-and-forward bottleneck of the two half-slot
    hops (helper reception, then boosted delivery); jam mode treats the
    helper's noise as interference.
    """
    if mode is Mode.RELAY:
        combined = (power.p_r * gains.g_hl + power.p_u * gains.g_ul) / power.sigma2
        helper_hop = power.p_u * gains.g_uh / power.sigma2
        return 0.5 * np.minimum(_log2_1p(combined), _log2_1p(helper_hop))
    return _log2_1p(power.p_u * gains.g_ul / (power.p_j * gains.g_hl + power.sigma2))


def rate_eavesdropper(mode, gains, power):
    """Achievable overhearing rate at the eavesdropper UAV for one user.

    In relay mode the eavesdropper combines the user's transmission with the
    helper's re-transmission; in jam mode it is hit by the helper's noise.
    """
    if mode is Mode.RELAY:
        combined = (power.p_r * gains.g_he + power.p_u * gains.g_ue) / power.sigma2
        return 0.5 * _log2_1p(combined)
    return _log2_1p(power.p_u * gains.g_ue / (power.p_j * gains.g_he + power.sigma2))


def secrecy_rate_ue(mode, gains, power):
    """Nonnegative secrecy rate max(legitimate - eavesdropper, 0)."""
    return np.maximum(rate_legitimate(mode, gains, power) - rate_eavesdropper(mode, gains, power), 0.0)


def secrecy_sum_rate(mode, z, per_ue_gains, power):
    """Sum of secrecy rates over the users selected by the 0/1 sequence z."""
    if len(z) != len(per_ue_gains):
        raise ValueError(f"offload decisions ({len(z)}) and gain records ({len(per_ue_gains)}) differ in length")
    total = 0.0
    for z_u, gains in zip(z, per_ue_gains):
        if z_u:
            total += float(secrecy_rate_ue(mode, gains, power))
    return total
