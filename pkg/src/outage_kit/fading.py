"""Time-correlated mobile-to-mobile Rayleigh envelope generator.

A double-ring sum of sinusoids: one ring of arrival angles per moving
terminal, each component carrying the sum of the two induced Doppler
shifts, with independent uniform phases.  Ring angles are stratified
(even grid plus one random rotation per ring), which pins the per-trace
mean-square gain and the envelope derivative variance at their exact
targets instead of leaving them to sampling luck.  When one terminal is
fixed its ring collapses and the classic single-ring model remains.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .scenario import derivative_variance

_MAGIC = b"OKTRACE1"
_HEADER = struct.Struct("<4d")
# crossing-count bias stays under a percent while the envelope is still
# sampled densely enough for the rotation recurrence to track it
MAX_DT_DOPPLER = 1.0 / 32.0
DEFAULT_RING_SIZE = 16


@dataclass(frozen=True)
class FadingTrace:
    """One generated envelope sequence and the parameters that made it."""

    samples: np.ndarray     # non-negative amplitudes
    dt: float               # sampling interval [slots]
    omega: float            # target mean-square gain
    f_a: float              # terminal Doppler rates [slot^-1]
    f_b: float
    seed: Optional[int]     # None for traces loaded from disk

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.f_a < 0 or self.f_b < 0:
            raise ValueError("Doppler rates must be non-negative")
        if self.dt * (self.f_a + self.f_b) > MAX_DT_DOPPLER + 1e-12:
            raise ValueError(
                f"dt*(f_a+f_b) = {self.dt * (self.f_a + self.f_b):.4g} "
                f"violates the oversampling bound {MAX_DT_DOPPLER}")

    @property
    def duration(self) -> float:
        """Trace length in slots."""
        return len(self.samples) * self.dt


def ring_components(omega, f_a, f_b, rng, n1=DEFAULT_RING_SIZE,
                    n2=DEFAULT_RING_SIZE):
    """Component frequencies [rad/slot], phases, and amplitudes for one hop.

    Both rings active: frequencies 2 pi (f_a cos theta_p + f_b cos phi_q)
    over the angle product grid.  One ring's rate zero: a single
    stratified ring with n1*n2 components (same component count, so
    envelope tail quality does not depend on which case we are in).
    Both zero: a static hop, one Rayleigh draw held forever.
    """
    n_comp = n1 * n2
    if f_a > 0 and f_b > 0:
        theta = 2.0 * math.pi * ((np.arange(n1) + 0.5) / n1 + rng.random())
        phi = 2.0 * math.pi * ((np.arange(n2) + 0.5) / n2 + rng.random())
        nu = 2.0 * math.pi * (f_a * np.cos(theta)[:, None]
                              + f_b * np.cos(phi)[None, :]).ravel()
    elif f_a > 0 or f_b > 0:
        f_m = max(f_a, f_b)
        phi = 2.0 * math.pi * ((np.arange(n_comp) + 0.5) / n_comp + rng.random())
        nu = 2.0 * math.pi * f_m * np.cos(phi)
    else:
        nu = np.zeros(n_comp)
    psi = rng.uniform(0.0, 2.0 * math.pi, n_comp)
    amp = np.full(n_comp, math.sqrt(omega / n_comp))
    return nu, psi, amp


def generate_m2m_trace(omega, f_a, f_b, dt, n_samples, seed,
                       n1=DEFAULT_RING_SIZE, n2=DEFAULT_RING_SIZE) -> FadingTrace:
    """Generate a mobile-to-mobile Rayleigh envelope trace.

    Parameters
    ----------
    omega : float
        Target mean-square gain, > 0.
    f_a, f_b : float
        Maximum Doppler rates of the two terminals [slot^-1]; at least
        one must be positive.
    dt : float
        Sampling interval [slots]; dt*(f_a+f_b) <= 1/32.
    n_samples : int
    seed : int
        Identical seeds give bit-identical traces.
    n1, n2 : int
        Ring sizes; the component count is always n1*n2.

    Returns
    -------
    FadingTrace
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    if f_a < 0 or f_b < 0:
        raise ValueError("Doppler rates must be non-negative")
    if f_a + f_b == 0:
        raise ValueError("f_a + f_b must be positive; a static hop has no "
                         "fading process to sample")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if dt <= 0 or dt * (f_a + f_b) > MAX_DT_DOPPLER + 1e-12:
        raise ValueError(
            f"dt must be positive with dt*(f_a+f_b) <= {MAX_DT_DOPPLER}")
    if n1 < 2 or n2 < 2:
        raise ValueError("ring sizes must be >= 2")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    nu, psi, amp = ring_components(omega, f_a, f_b, rng, n1, n2)
    out = np.empty(n_samples)
    _kernels.synth_envelope(amp * np.cos(psi), amp * np.sin(psi),
                            np.cos(nu * dt), np.sin(nu * dt), amp, out)
    return FadingTrace(out, dt, omega, f_a, f_b, seed)


def trace_derivative_variance(trace: FadingTrace) -> float:
    """Sample variance of the central-difference envelope derivative."""
    s = trace.samples
    if len(s) < 3:
        raise ValueError("need at least 3 samples for a central difference")
    d = (s[2:] - s[:-2]) / (2.0 * trace.dt)
    return float(np.var(d))


def expected_derivative_variance(trace: FadingTrace) -> float:
    """Analytic derivative variance matching this trace's parameters."""
    return derivative_variance(trace.omega, trace.f_a, trace.f_b)


def dump_trace(trace: FadingTrace, path) -> None:
    """Write a trace as magic + (dt, omega, f_a, f_b) + little-endian f64."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(_HEADER.pack(trace.dt, trace.omega, trace.f_a, trace.f_b))
        fh.write(np.ascontiguousarray(trace.samples, dtype="<f8").tobytes())


def load_trace(path) -> FadingTrace:
    """Read a trace written by dump_trace.  The seed is not stored."""
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ValueError(f"not a trace file: bad magic {magic!r}")
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError("truncated trace header")
        dt, omega, f_a, f_b = _HEADER.unpack(header)
        samples = np.frombuffer(fh.read(), dtype="<f8")
    return FadingTrace(samples.copy(), dt, omega, f_a, f_b, None)
