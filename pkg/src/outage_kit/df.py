"""Closed-form statistics of a decode-and-forward relay path.

The selection variable of a DF path is the smaller of the two hop
envelopes, which is itself Rayleigh with rate parameter equal to the sum
of the per-hop inverse mean-square gains.  Its time derivative is a
zero-mean Gaussian mixture, so the per-path outage rate has a closed
form and no quadrature is needed anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import HopStats, threshold_value

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class DfPathStats:
    """Static description of one source-relay-destination DF path.

    Parameters
    ----------
    lambda_k : float
        Rayleigh rate parameter of the selection variable,
        1/omega_sk + 1/omega_kd [gain^-2].
    omega_sk, omega_kd : float
        Mean-square gains of the two hops.
    sigma_dot_sk, sigma_dot_kd : float
        Standard deviations of the hop envelope derivatives [slot^-1].
    """

    lambda_k: float
    omega_sk: float
    omega_kd: float
    sigma_dot_sk: float
    sigma_dot_kd: float

    def __post_init__(self):
        if self.omega_sk <= 0 or self.omega_kd <= 0:
            raise ValueError("hop mean-square gains must be positive")
        if self.sigma_dot_sk < 0 or self.sigma_dot_kd < 0:
            raise ValueError("derivative spreads must be non-negative")
        expected = 1.0 / self.omega_sk + 1.0 / self.omega_kd
        if not math.isclose(self.lambda_k, expected, rel_tol=1e-12):
            raise ValueError(
                f"lambda_k must equal 1/omega_sk + 1/omega_kd = {expected!r}, "
                f"got {self.lambda_k!r}")

    @classmethod
    def from_hops(cls, source: HopStats, dest: HopStats) -> "DfPathStats":
        return cls(1.0 / source.omega + 1.0 / dest.omega,
                   source.omega, dest.omega,
                   source.sigma_dot, dest.sigma_dot)


def _as_checked_array(w):
    arr = np.asarray(w, dtype=float)
    if np.any(arr < 0):
        raise ValueError("amplitude must be non-negative")
    return arr


def df_pdf(w, path: DfPathStats):
    """Density of the DF selection variable at amplitude w.

    Parameters
    ----------
    w : float or array_like
        Amplitude, >= 0.
    path : DfPathStats

    Returns
    -------
    float or ndarray
        2 * lambda_k * w * exp(-lambda_k * w^2).
    """
    arr = _as_checked_array(w)
    out = 2.0 * path.lambda_k * arr * np.exp(-path.lambda_k * arr * arr)
    return float(out) if arr.ndim == 0 else out


def df_cdf(w, path: DfPathStats):
    """CDF of the DF selection variable, 1 - exp(-lambda_k * w^2)."""
    arr = _as_checked_array(w)
    out = -np.expm1(-path.lambda_k * arr * arr)
    return float(out) if arr.ndim == 0 else out


def df_path_aor(z, path: DfPathStats) -> float:
    """Average outage rate of a single DF path at threshold z [slot^-1].

    The derivative mixture contributes the gain-weighted spread

        (omega_kd * sigma_dot_sk + omega_sk * sigma_dot_kd)
            / (omega_sk + omega_kd)

    and the rate is that spread times pdf(z) / sqrt(2 pi).  Vanishes at
    z = 0 and as z grows, with a single maximum at 1/sqrt(2 lambda_k).
    """
    zv = threshold_value(z)
    if zv < 0:
        raise ValueError("threshold must be non-negative")
    spread = (path.omega_kd * path.sigma_dot_sk
              + path.omega_sk * path.sigma_dot_kd) / (path.omega_sk + path.omega_kd)
    return spread / _SQRT_2PI * df_pdf(zv, path)


def _gaussian_pdf(x, sigma):
    # a zero-spread hop pins its derivative at 0; treat it as a point mass
    if sigma == 0.0:
        return np.where(x == 0.0, np.inf, 0.0)
    return np.exp(-0.5 * (x / sigma) ** 2) / (sigma * _SQRT_2PI)


def df_derivative_mixture_pdf(wdot, path: DfPathStats):
    """Density of the DF selection variable's time derivative.

    A two-component zero-mean Gaussian mixture: the source-hop spread is
    weighted by omega_kd / (omega_sk + omega_kd) and the destination-hop
    spread by the complementary weight.  Symmetric about zero.
    """
    arr = np.asarray(wdot, dtype=float)
    total = path.omega_sk + path.omega_kd
    weight_s = path.omega_kd / total
    weight_d = path.omega_sk / total
    out = (weight_s * _gaussian_pdf(arr, path.sigma_dot_sk)
           + weight_d * _gaussian_pdf(arr, path.sigma_dot_kd))
    return float(out) if arr.ndim == 0 else out
