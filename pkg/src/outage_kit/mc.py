"""Empirical outage statistics by simulating the selection process.

M independent dual-hop paths are synthesized as correlated Rayleigh
envelope processes, the per-slot selection picks the best path, and
downward crossings plus below-threshold dwells of the resulting max
process are counted in a single streaming pass.  Repetitions use
independent seed streams and merge commutatively, so results do not
depend on scheduling order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .af import af_selection_variable
from .fading import MAX_DT_DOPPLER, DEFAULT_RING_SIZE, ring_components
from .scenario import AF, DF, SystemConfig, threshold_value
from .selection import OutageReport, analytic_report, config_paths


@dataclass(frozen=True)
class CrossingStats:
    """Crossing and dwell bookkeeping of one amplitude sequence.

    outage_time and n_outage_events cover only dwells that both start
    and end inside the trace, so outage_time / n_outage_events is an
    uncensored duration estimate.  below_time counts every sample at or
    below the threshold and feeds the outage-probability estimate.
    Within a single trace n_outage_events stays within 1 of n_down (the
    trace may begin or end inside a dwell); merged stats relax that.
    """

    n_down: int
    total_time: float       # slots
    outage_time: float      # slots inside completed dwells
    n_outage_events: int
    below_time: float       # slots at or below the threshold

    def __post_init__(self):
        if min(self.n_down, self.total_time, self.outage_time,
               self.n_outage_events, self.below_time) < 0:
            raise ValueError("counts and times must be non-negative")
        if self.outage_time > self.total_time or self.below_time > self.total_time:
            raise ValueError("dwell time cannot exceed the trace duration")

    @property
    def aor(self) -> float:
        """Empirical outage rate, crossings per slot."""
        return self.n_down / self.total_time

    @property
    def aod(self) -> float:
        """Empirical outage duration, slots per completed event."""
        if self.n_outage_events == 0:
            return 0.0
        return self.outage_time / self.n_outage_events

    @property
    def outage_fraction(self) -> float:
        """Fraction of time spent at or below the threshold."""
        return self.below_time / self.total_time

    def merged(self, other: "CrossingStats") -> "CrossingStats":
        return CrossingStats(self.n_down + other.n_down,
                             self.total_time + other.total_time,
                             self.outage_time + other.outage_time,
                             self.n_outage_events + other.n_outage_events,
                             self.below_time + other.below_time)


def count_crossings(w, z, dt: float) -> CrossingStats:
    """Count downward crossings of z and below-z dwells in sequence w.

    A downward crossing sits at index i when w[i-1] > z >= w[i]; dwells
    touching either end of the sequence are excluded from the duration
    bookkeeping (they are censored) but still count toward below_time.
    """
    arr = np.asarray(w, dtype=float)
    if arr.ndim != 1 or len(arr) < 2:
        raise ValueError("need a 1-d sequence of at least 2 samples")
    if dt <= 0:
        raise ValueError("dt must be positive")
    zv = threshold_value(z)
    below = arr <= zv
    n = len(arr)
    n_down = int(np.count_nonzero(below[1:] & ~below[:-1]))
    prev = np.concatenate(([False], below[:-1]))
    nxt = np.concatenate((below[1:], [False]))
    starts = np.flatnonzero(below & ~prev)
    ends = np.flatnonzero(below & ~nxt)
    complete = (starts > 0) & (ends < n - 1)
    lengths = ends - starts + 1
    return CrossingStats(
        n_down=n_down,
        total_time=n * dt,
        outage_time=float(lengths[complete].sum()) * dt,
        n_outage_events=int(np.count_nonzero(complete)),
        below_time=float(np.count_nonzero(below)) * dt)


def selection_process(traces, mode: str, paths=None) -> np.ndarray:
    """Per-sample best-path selection amplitude from M trace pairs.

    Parameters
    ----------
    traces : sequence of (FadingTrace, FadingTrace)
        Source-hop and destination-hop trace of each relay, all on the
        same sampling grid.
    mode : str
        "df" or "af".
    paths : sequence of AfPathStats, optional
        Required in AF mode for the fixed-gain constants.
    """
    if not traces:
        raise ValueError("at least one trace pair is required")
    dt0 = traces[0][0].dt
    n0 = len(traces[0][0].samples)
    for pair in traces:
        for tr in pair:
            if tr.dt != dt0 or len(tr.samples) != n0:
                raise ValueError("all traces must share dt and length")
    w_max = None
    for k, (src, dst) in enumerate(traces):
        if mode == DF:
            w = np.minimum(src.samples, dst.samples)
        elif mode == AF:
            if paths is None:
                raise ValueError("AF selection needs per-path stats for c_k")
            w = af_selection_variable(src.samples, dst.samples, paths[k])
        else:
            raise ValueError(f"unknown mode {mode!r}")
        w_max = w if w_max is None else np.maximum(w_max, w)
    return w_max


def auto_dt(config: SystemConfig) -> float:
    """Sampling interval fine enough for this scenario's dwell geometry.

    Takes the coarser of two ceilings: the oversampling default of 64
    samples per unit Doppler sum, and one sixth of the analytic outage
    duration (dwells shorter than a few samples would bias the crossing
    counts).  Rounded down to a power of two so sweep output is stable.
    """
    f_sums = []
    for k in range(config.m):
        f_sums.append(config.f_ms + config.f_mk[k])
        f_sums.append(config.f_mk[k] + config.f_md)
    bound = 1.0 / (64.0 * max(f_sums))
    rep = analytic_report(config)
    if math.isfinite(rep.aod) and rep.aod > 0:
        bound = min(bound, rep.aod / 6.0)
    return 2.0 ** math.floor(math.log2(bound))


def _grid_arrays(config, modes, snr_grid):
    """Thresholds, mode flags, and gain constants for a (mode, snr) grid."""
    points = [(mode, snr) for mode in modes for snr in snr_grid]
    zs = np.empty(len(points))
    af_g = np.zeros(len(points), dtype=np.bool_)
    ck = np.zeros((len(points), config.m))
    for g, (mode, snr) in enumerate(points):
        cfg = config.with_snr(snr)
        zs[g] = cfg.threshold().z
        af_g[g] = mode == AF
        if mode == AF:
            ck[g] = [p.c_k for p in config_paths(replace(cfg, mode=AF))]
    return points, zs, af_g, ck


def _run_rep(config, seed, n_samples, dt, af_g, ck, zs, n1, n2):
    """One independent repetition; returns per-grid-point CrossingStats."""
    rng = np.random.default_rng(seed)
    n_hops = 2 * config.m
    n_comp = n1 * n2
    nu = np.empty((n_hops, n_comp))
    psi = np.empty((n_hops, n_comp))
    amp = np.empty((n_hops, n_comp))
    for k in range(config.m):
        omega_sk, omega_kd = config.hops[k]
        hop_params = ((2 * k, omega_sk, config.f_ms, config.f_mk[k]),
                      (2 * k + 1, omega_kd, config.f_mk[k], config.f_md))
        for h, omega, f_a, f_b in hop_params:
            nu[h], psi[h], amp[h] = ring_components(omega, f_a, f_b, rng, n1, n2)
    n_grid = len(zs)
    n_down = np.zeros(n_grid, dtype=np.int64)
    below = np.zeros(n_grid, dtype=np.int64)
    dwell = np.zeros(n_grid, dtype=np.int64)
    events = np.zeros(n_grid, dtype=np.int64)
    _kernels.stream_selection_stats(
        amp * np.cos(psi), amp * np.sin(psi),
        np.cos(nu * dt), np.sin(nu * dt), amp,
        n_samples, af_g, ck, zs, n_down, below, dwell, events)
    total = n_samples * dt
    return [CrossingStats(int(n_down[g]), total, float(dwell[g]) * dt,
                          int(events[g]), float(below[g]) * dt)
            for g in range(n_grid)]


def _stderr(values) -> float:
    vals = [v for v in values if v is not None]
    if len(vals) < 2:
        return 0.0
    return float(np.std(vals, ddof=1) / math.sqrt(len(vals)))


def _report(mode, zv, rep_stats) -> OutageReport:
    """Pooled OutageReport with across-repetition standard errors."""
    merged = rep_stats[0]
    for s in rep_stats[1:]:
        merged = merged.merged(s)
    aod_samples = [s.aod if s.n_outage_events > 0 else None for s in rep_stats]
    return OutageReport(
        z=zv,
        outage_prob=merged.outage_fraction,
        aor=merged.aor,
        aod=merged.aod,
        source="simulated",
        mode=mode,
        outage_prob_stderr=_stderr([s.outage_fraction for s in rep_stats]),
        aor_stderr=_stderr([s.aor for s in rep_stats]),
        aod_stderr=_stderr(aod_samples))


def _check_mc_args(dt, config, n_samples, n_reps):
    f_max = max(max(config.f_ms + f, f + config.f_md) for f in config.f_mk)
    if dt <= 0 or dt * f_max > MAX_DT_DOPPLER + 1e-12:
        raise ValueError(f"dt = {dt} violates the oversampling bound "
                         f"{MAX_DT_DOPPLER} for the fastest hop")
    if n_reps < 1:
        raise ValueError("n_reps must be >= 1")
    if n_samples < 2 * n_reps:
        raise ValueError("need at least 2 samples per repetition")


def run_experiment(config: SystemConfig, z=None, n_samples: int = 10_000_000,
                   master_seed: int = 0, n_reps: int = 4,
                   dt: Optional[float] = None,
                   n1: int = DEFAULT_RING_SIZE,
                   n2: int = DEFAULT_RING_SIZE) -> OutageReport:
    """Simulate one scenario at one threshold.

    n_samples is the total budget, split evenly over n_reps independent
    repetitions; point estimates pool all repetitions, standard errors
    come from the spread across them (within-trace samples are
    correlated, so only across-repetition spread is trustworthy).
    Identical arguments give identical output.
    """
    zv = config.threshold().z if z is None else threshold_value(z)
    if dt is None:
        dt = auto_dt(config)
    _check_mc_args(dt, config, n_samples, n_reps)
    _, zs, af_g, ck = _grid_arrays(config, (config.mode,), (config.snr_total,))
    zs = np.array([zv])
    per_rep = n_samples // n_reps
    children = np.random.SeedSequence(master_seed).spawn(n_reps)
    rep_stats = [_run_rep(config, child, per_rep, dt, af_g, ck, zs, n1, n2)[0]
                 for child in children]
    return _report(config.mode, zv, rep_stats)


def run_grid(config: SystemConfig, snr_db_grid: Sequence[float],
             n_samples: int = 10_000_000, master_seed: int = 0,
             n_reps: int = 4, dt: Optional[float] = None,
             modes: Optional[Sequence[str]] = None,
             threads: int = 1,
             n1: int = DEFAULT_RING_SIZE,
             n2: int = DEFAULT_RING_SIZE) -> dict:
    """Simulate a whole SNR sweep in one pass over the fading processes.

    The hop envelopes do not depend on the SNR, and DF and AF read the
    same envelopes, so every (mode, SNR) grid point is serviced by the
    same synthesized processes; only thresholds and gain constants
    differ per point.  Returns {(mode, snr_db): OutageReport}.

    threads > 1 distributes repetitions over a thread pool (the kernels
    release the GIL); results merge in repetition order, so the output
    is identical whatever the thread count.
    """
    if modes is None:
        modes = (config.mode,)
    snr_lin = [10.0 ** (s / 10.0) for s in snr_db_grid]
    if dt is None:
        dt = min(auto_dt(config.with_snr(s)) for s in snr_lin)
    _check_mc_args(dt, config, n_samples, n_reps)
    points, zs, af_g, ck = _grid_arrays(config, modes, snr_lin)
    per_rep = n_samples // n_reps
    children = np.random.SeedSequence(master_seed).spawn(n_reps)

    def one(child):
        return _run_rep(config, child, per_rep, dt, af_g, ck, zs, n1, n2)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_rep_stats = list(pool.map(one, children))
    else:
        per_rep_stats = [one(child) for child in children]

    out = {}
    for g, (mode, _) in enumerate(points):
        snr_db = snr_db_grid[g % len(snr_db_grid)]
        rep_stats = [per_rep_stats[r][g] for r in range(n_reps)]
        out[(mode, snr_db)] = _report(mode, float(zs[g]), rep_stats)
    return out
