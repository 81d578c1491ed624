"""System-level outage statistics under best-relay selection.

Per-slot selection forwards through the relay whose selection variable
is largest, so the system outage process is the max of the per-path
processes.  Its crossing rate decomposes into per-path rates weighted by
the probability that every other path already sits below the threshold,
and the dwell time follows from the outage-probability identity
aod * aor = outage_prob.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .af import AfPathStats, af_cdf, af_path_aor
from .df import DfPathStats, df_cdf, df_path_aor
from .scenario import AF, DF, MODES, SystemConfig, threshold_value
from .special import QuadratureRule, gauss_hermite

_DEFAULT_AF_ORDER = 40
_IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class OutageReport:
    """Outage statistics of one scenario at one threshold.

    Analytical reports must satisfy the dwell identity
    aod * aor = outage_prob to 1e-10 relative; simulated reports carry
    standard errors instead and satisfy it only within sampling noise.
    """

    z: float
    outage_prob: float
    aor: float              # downward crossings per slot
    aod: float              # slots per outage event
    source: str             # "analytical" or "simulated"
    mode: str
    outage_prob_stderr: Optional[float] = None
    aor_stderr: Optional[float] = None
    aod_stderr: Optional[float] = None

    def __post_init__(self):
        if self.source not in ("analytical", "simulated"):
            raise ValueError(f"unknown source {self.source!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        for name in ("z", "outage_prob", "aor", "aod"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if (self.source == "analytical" and self.aor > 0
                and math.isfinite(self.aod)):
            residual = abs(self.aod * self.aor / self.outage_prob - 1.0)
            if residual > _IDENTITY_TOL:
                raise ValueError(
                    f"dwell identity violated: aod*aor differs from "
                    f"outage_prob by {residual:.3e} relative")


def conditional_prob_pk(k: int, z, cdfs) -> float:
    """Probability that every path other than k is below z.

    Parameters
    ----------
    k : int
        Path index, 1-based.
    z : float or OutageThreshold
    cdfs : sequence of callables
        Per-path CDF evaluators F_Wi.
    """
    if not 1 <= k <= len(cdfs):
        raise IndexError(f"path index {k} outside 1..{len(cdfs)}")
    zv = threshold_value(z)
    prob = 1.0
    for i, cdf in enumerate(cdfs, start=1):
        if i != k:
            prob *= cdf(zv)
    return prob


def _check_paths(paths, mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not paths:
        raise ValueError("at least one path is required")
    want = DfPathStats if mode == DF else AfPathStats
    for p in paths:
        if not isinstance(p, want):
            raise TypeError(f"{mode} system needs {want.__name__}, "
                            f"got {type(p).__name__}")


def _components(zv, paths, mode, rule):
    """Per-path CDF values and crossing rates at threshold zv."""
    if mode == DF:
        cdf_vals = [df_cdf(zv, p) for p in paths]
        rates = [df_path_aor(zv, p) for p in paths]
    else:
        rule = rule if rule is not None else gauss_hermite(_DEFAULT_AF_ORDER)
        cdf_vals = [af_cdf(zv, p) for p in paths]
        rates = [af_path_aor(zv, p, rule) for p in paths]
    return cdf_vals, rates


def system_aor(z, paths, mode: str,
               rule: Optional[QuadratureRule] = None) -> float:
    """Average outage rate of the selection system [slot^-1]."""
    _check_paths(paths, mode)
    zv = threshold_value(z)
    cdf_vals, rates = _components(zv, paths, mode, rule)
    total = 0.0
    for k in range(len(paths)):
        others = 1.0
        for i, f in enumerate(cdf_vals):
            if i != k:
                others *= f
        total += others * rates[k]
    return total


def system_aod(z, paths, mode: str,
               rule: Optional[QuadratureRule] = None) -> float:
    """Average outage duration of the selection system [slots].

    Uses the reciprocal-sum form 1 / sum_k(N_k / F_k), which avoids
    underflowing the product of CDFs at deep thresholds.  Diverges (to
    inf) when every per-path rate underflows while the outage
    probability does not.
    """
    _check_paths(paths, mode)
    zv = threshold_value(z)
    if zv <= 0:
        raise ValueError("threshold must be positive; at 0 the dwell "
                         "statistics are 0/0")
    cdf_vals, rates = _components(zv, paths, mode, rule)
    if max(cdf_vals) < 1e-300:
        raise ValueError("per-path outage probabilities underflowed; "
                         "threshold is too deep to represent")
    total = sum(n / f for n, f in zip(rates, cdf_vals))
    if total == 0.0:
        return math.inf
    return 1.0 / total


def outage_probability(z, paths, mode: str) -> float:
    """Probability that every path sits below z simultaneously."""
    _check_paths(paths, mode)
    zv = threshold_value(z)
    prob = 1.0
    if mode == DF:
        for p in paths:
            prob *= df_cdf(zv, p)
    else:
        for p in paths:
            prob *= af_cdf(zv, p)
    return prob


def config_paths(config: SystemConfig):
    """Per-path analytic descriptions implied by a scenario."""
    if config.mode == DF:
        return tuple(DfPathStats.from_hops(config.source_hop(k),
                                           config.dest_hop(k))
                     for k in range(config.m))
    return tuple(AfPathStats.from_hops(config.source_hop(k),
                                       config.dest_hop(k),
                                       config.snr_total)
                 for k in range(config.m))


def analytic_report(config: SystemConfig,
                    rule: Optional[QuadratureRule] = None) -> OutageReport:
    """Closed-form OutageReport at the scenario's own capacity threshold."""
    paths = config_paths(config)
    zv = config.threshold().z
    cdf_vals, rates = _components(zv, paths, config.mode, rule)
    prob = 1.0
    for f in cdf_vals:
        prob *= f
    aor = 0.0
    for k in range(len(paths)):
        others = 1.0
        for i, f in enumerate(cdf_vals):
            if i != k:
                others *= f
        aor += others * rates[k]
    recip = sum(n / f for n, f in zip(rates, cdf_vals)) if min(cdf_vals) > 0 else 0.0
    aod = 1.0 / recip if recip > 0 else math.inf
    return OutageReport(z=zv, outage_prob=prob, aor=aor, aod=aod,
                        source="analytical", mode=config.mode)
