"""Scenario parameters and the capacity-outage threshold mapping.

Units are normalized throughout the package: Doppler rates in slot^-1,
channel gains as dimensionless mean-square amplitudes, durations in slots.
SNR is stored as a linear power ratio; dB conversion belongs to the CLI
boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DF = "df"
AF = "af"
MODES = (DF, AF)


def db_to_linear(value_db: float) -> float:
    """Convert a dB power ratio to linear."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB."""
    if value <= 0:
        raise ValueError("power ratio must be positive")
    return 10.0 * math.log10(value)


def derivative_variance(omega: float, f_a: float, f_b: float) -> float:
    """Variance of the envelope time derivative of one hop, in slot^-2.

    Both terminals of the hop contribute their maximum Doppler rate; a
    fixed terminal contributes zero. The value is
    pi^2 * omega * (f_a^2 + f_b^2).

    Parameters
    ----------
    omega : float
        Mean-square envelope gain of the hop, > 0.
    f_a, f_b : float
        Maximum Doppler rates of the two terminals [slot^-1], >= 0.
    """
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if f_a < 0 or f_b < 0:
        raise ValueError("Doppler rates must be non-negative")
    return math.pi * math.pi * omega * (f_a * f_a + f_b * f_b)


@dataclass(frozen=True)
class HopStats:
    """One hop's mean-square gain and envelope derivative spread."""

    omega: float            # mean-square gain, dimensionless
    sigma_dot: float        # std dev of the envelope derivative [slot^-1]

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.sigma_dot < 0:
            raise ValueError("sigma_dot must be non-negative")

    @classmethod
    def from_doppler(cls, omega: float, f_a: float, f_b: float) -> "HopStats":
        """Build hop stats from the two terminal Doppler rates."""
        return cls(omega, math.sqrt(derivative_variance(omega, f_a, f_b)))


@dataclass(frozen=True)
class OutageThreshold:
    """Amplitude threshold below which the dual-hop link is in outage."""

    z: float

    def __post_init__(self):
        if self.z < 0:
            raise ValueError("threshold must be non-negative")


def threshold_value(z) -> float:
    """Accept either an OutageThreshold or a bare float and return the float."""
    if isinstance(z, OutageThreshold):
        return z.z
    return float(z)


def outage_threshold(rate_r: float, snr_total: float) -> OutageThreshold:
    """Amplitude threshold equivalent to a capacity outage.

    The half-duplex dual-hop mutual information drops below rate_r exactly
    when the selection amplitude drops below
    Z = sqrt((2^(2 rate_r) - 1) / snr_total).
    """
    if rate_r < 0:
        raise ValueError("rate_r must be non-negative")
    if snr_total <= 0:
        raise ValueError(f"snr_total must be positive, got {snr_total}")
    return OutageThreshold(math.sqrt((2.0 ** (2.0 * rate_r) - 1.0) / snr_total))


def mutual_information(w_max: float, snr_total: float) -> float:
    """Half-duplex dual-hop mutual information at selection amplitude w_max."""
    if w_max < 0:
        raise ValueError("amplitude must be non-negative")
    if snr_total <= 0:
        raise ValueError("snr_total must be positive")
    return 0.5 * math.log2(1.0 + snr_total * w_max * w_max)


@dataclass(frozen=True)
class SystemConfig:
    """Complete relaying scenario.

    Parameters
    ----------
    m : int
        Relay count, >= 1.
    hops : tuple of (omega_sk, omega_kd) pairs
        Mean-square gains of the source->relay and relay->destination hops,
        one pair per relay.
    f_ms, f_md : float
        Maximum Doppler rates of source and destination [slot^-1].
    f_mk : tuple of float
        Maximum Doppler rate of each relay [slot^-1].
    snr_total : float
        Total transmit SNR P_T/N0 as a linear ratio.
    rate_r : float
        Target spectral efficiency [bps/Hz].
    mode : str
        Relaying mode, "df" or "af". A single mode applies to all relays;
        mixed-mode systems are rejected.
    """

    m: int
    hops: tuple
    f_ms: float
    f_md: float
    f_mk: tuple
    snr_total: float
    rate_r: float
    mode: str

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"relay count must be >= 1, got {self.m}")
        object.__setattr__(self, "hops", tuple((float(a), float(b)) for a, b in self.hops))
        object.__setattr__(self, "f_mk", tuple(float(f) for f in self.f_mk))
        if len(self.hops) != self.m:
            raise ValueError(f"expected {self.m} hop pairs, got {len(self.hops)}")
        if len(self.f_mk) != self.m:
            raise ValueError(f"expected {self.m} relay Doppler rates, got {len(self.f_mk)}")
        for k, (omega_sk, omega_kd) in enumerate(self.hops, start=1):
            if omega_sk <= 0 or omega_kd <= 0:
                raise ValueError(f"relay {k}: hop gains must be positive")
        if self.f_ms < 0 or self.f_md < 0 or any(f < 0 for f in self.f_mk):
            raise ValueError("Doppler rates must be non-negative")
        for k, f in enumerate(self.f_mk, start=1):
            # a path with every terminal fixed is static and has no crossings
            if self.f_ms + self.f_md + f == 0:
                raise ValueError(f"relay {k}: all Doppler rates are zero, path is static")
        if self.snr_total <= 0:
            raise ValueError("snr_total must be positive")
        if self.rate_r <= 0:
            raise ValueError("rate_r must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    # ---- derived views ------------------------------------------------

    def source_hop(self, k: int) -> HopStats:
        """Stats of the source->relay hop of relay k (0-based)."""
        omega_sk, _ = self.hops[k]
        return HopStats.from_doppler(omega_sk, self.f_ms, self.f_mk[k])

    def dest_hop(self, k: int) -> HopStats:
        """Stats of the relay->destination hop of relay k (0-based)."""
        _, omega_kd = self.hops[k]
        return HopStats.from_doppler(omega_kd, self.f_mk[k], self.f_md)

    def threshold(self) -> OutageThreshold:
        return outage_threshold(self.rate_r, self.snr_total)

    def with_snr(self, snr_total: float) -> "SystemConfig":
        """Copy of this config at a different total SNR."""
        return SystemConfig(self.m, self.hops, self.f_ms, self.f_md, self.f_mk,
                            snr_total, self.rate_r, self.mode)

    @classmethod
    def uniform(cls, m: int, mode: str, snr_total: float, omega: float = 0.5,
                rate_r: float = 1.0, f_ms: float = 0.0, f_md: float = 0.0,
                f_mk: float = 1.0) -> "SystemConfig":
        """Scenario with m identical relays and equal hop gains."""
        return cls(m, tuple((omega, omega) for _ in range(m)), f_ms, f_md,
                   tuple(f_mk for _ in range(m)), snr_total, rate_r, mode)
