"""Path loss, channel gain and Shannon rate.

Everything inside the package is SI (W, Hz, s, bits). Decibel quantities
only appear at the configuration boundary and are converted here.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PathLossParams:
    """Free-space style path-loss inputs.

    Parameters
    ----------
    fc_mhz : float
        Carrier frequency in MHz.
    d_km : float
        Link distance in km.
    """

    fc_mhz: float
    d_km: float

    def __post_init__(self):
        if not (self.fc_mhz > 0 and self.d_km > 0):
            raise DomainError(f"path loss needs fc_mhz > 0 and d_km > 0, got {self.fc_mhz}, {self.d_km}")


def path_loss_db(params):
    """Return ``32.4 + 20 log10(fc_mhz) + 20 log10(d_km)`` in dB."""
    return 32.4 + 20.0 * math.log10(params.fc_mhz) + 20.0 * math.log10(params.d_km)


def channel_gain(pl_db):
    """Convert a path loss in dB to a linear power gain."""
    return 10.0 ** (-pl_db / 10.0)


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


def shannon_rate(p, gain, n0, bandwidth):
    """Achievable rate ``B log2(1 + p |h|^2 / (B N0))`` in bits/s.

    Works elementwise on arrays. The rate is taken as 0 at ``B = 0`` or
    ``p = 0`` (its continuous limit).

    Parameters
    ----------
    p : float or array_like
        Transmit power in W.
    gain : float or array_like
        Linear channel power gain ``|h|^2``.
    n0 : float
        Noise power spectral density in W/Hz.
    bandwidth : float or array_like
        Bandwidth in Hz.

    Raises
    ------
    DomainError
        On negative inputs, or ``n0 = 0`` with a positive signal (infinite SNR).
    """
    scalar = np.ndim(p) == 0 and np.ndim(gain) == 0 and np.ndim(bandwidth) == 0
    p = np.asarray(p, dtype=float)
    gain = np.asarray(gain, dtype=float)
    bw = np.asarray(bandwidth, dtype=float)
    if np.any(p < 0) or np.any(gain < 0) or n0 < 0 or np.any(bw < 0):
        raise DomainError("shannon_rate inputs must be nonnegative")
    signal = p * gain
    active = (signal > 0) & (bw > 0)
    if n0 == 0 and np.any(active):
        raise DomainError("n0 = 0 with positive received power gives infinite SNR")
    with np.errstate(divide="ignore", invalid="ignore"):
        # log1p keeps precision at low SNR; B log1p(s/B) -> s as B -> inf
        rate = np.where(active, bw * np.log1p(signal / (np.where(active, bw, 1.0) * (n0 or 1.0))) / _LN2, 0.0)
    return float(rate) if scalar else rate


@dataclass(frozen=True)
class LinkBudget:
    """One direction of the loop (uplink or downlink).

    Parameters
    ----------
    p_max : float
        Transmit-power cap in W.
    channel_gain : float
        Linear power gain ``|h|^2``.
    n0 : float
        Noise power spectral density in W/Hz.
    """

    p_max: float
    channel_gain: float
    n0: float

    def __post_init__(self):
        for name in ("p_max", "channel_gain", "n0"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"LinkBudget.{name} must be positive and finite, got {value}")

    @classmethod
    def from_path_loss(cls, p_max, fc_mhz, d_km, n0_dbm_per_hz):
        """Build a budget from the path-loss model and a dBm/Hz noise density."""
        gain = channel_gain(path_loss_db(PathLossParams(fc_mhz, d_km)))
        return cls(p_max=p_max, channel_gain=gain, n0=dbm_to_watts(n0_dbm_per_hz))

    def rate(self, bandwidth, power=None):
        """Rate at ``bandwidth``, transmitting at ``power`` (default: the cap)."""
        return shannon_rate(self.p_max if power is None else power, self.channel_gain, self.n0, bandwidth)
