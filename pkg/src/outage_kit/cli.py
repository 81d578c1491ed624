"""Command-line sweep driver.

Reads a flat INI-style scenario file, evaluates the analytical outage
rate and duration over an SNR grid, optionally validates each point
against the simulator, and writes plot-ready CSV with a versioned
column schema.  Analytical columns are bit-stable across runs; the
simulated columns are stable for a fixed seed.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .mc import run_grid
from .scenario import AF, DF, MODES, SystemConfig, db_to_linear
from .selection import analytic_report

SCHEMA_HEADER = "# outage-kit sweep csv schema=1"
COLUMNS = ("snr_db", "z", "mode",
           "aor_analytic_norm", "aod_analytic_norm", "outage_prob",
           "aor_mc_norm", "aor_mc_stderr", "aod_mc_norm", "aod_mc_stderr",
           "agree", "error")
AGREE_TOL = 0.05
OUTPUT_CHOICES = ("aor", "aod", "both")

_DEFAULT_GRID = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
_DEFAULT_BUDGET = 20_000_000
_DEFAULT_REPS = 4


class ConfigError(ValueError):
    """Config problem with its file location when one is known."""

    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        where = path if path else "config"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class SweepSpec:
    """Everything one sweep run needs, fully validated."""

    config: SystemConfig          # template; snr_total is replaced per point
    snr_db_grid: tuple
    normalize_by: float           # f_m0, slot^-1
    outputs: str                  # "aor" | "aod" | "both"
    validate: bool
    mc_budget: int
    mc_reps: int = _DEFAULT_REPS
    seed: int = 0

    def __post_init__(self):
        if not self.snr_db_grid:
            raise ValueError("snr_db grid must not be empty")
        if any(b <= a for a, b in zip(self.snr_db_grid, self.snr_db_grid[1:])):
            raise ValueError("snr_db grid must be strictly increasing")
        if not self.normalize_by > 0:
            raise ValueError(f"f_m0 must be positive, got {self.normalize_by}")
        if self.outputs not in OUTPUT_CHOICES:
            raise ValueError(f"outputs must be one of {OUTPUT_CHOICES}")
        if self.mc_reps < 1:
            raise ValueError("mc_reps must be >= 1")
        if self.validate and self.mc_budget < 2 * self.mc_reps:
            raise ValueError("mc_budget too small for the repetition count")


def _key_lines(text: str) -> dict:
    """Map (section, key) to the 1-based line it was set on."""
    lines = {}
    section = None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", ";")):
            continue
        m = re.match(r"\[(.+)\]\s*$", line)
        if m:
            section = m.group(1).strip().lower()
            lines[(section, None)] = i
            continue
        m = re.match(r"([^=:]+?)\s*[=:]", line)
        if m and section is not None:
            lines[(section, m.group(1).strip().lower())] = i
    return lines


_SYSTEM_KEYS = {"mode", "relays", "omega", "rate", "f_ms", "f_md", "f_mk"}
_SWEEP_KEYS = {"snr_db", "f_m0", "outputs", "validate", "mc_budget",
               "mc_reps", "seed"}
_HOP_KEY = re.compile(r"omega_([sd])(\d+)$")


class _Loader:
    """One parsed config file plus location-aware accessors."""

    def __init__(self, path: str):
        self.path = path
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", path)
        self.lines = _key_lines(text)
        self.cp = configparser.ConfigParser(
            inline_comment_prefixes=("#", ";"), interpolation=None)
        try:
            self.cp.read_string(text, source=path)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            if getattr(exc, "errors", None):    # ParsingError carries a list
                line = exc.errors[0][0]
            raise ConfigError(f"malformed config: {exc.message}", path, line)

    def where(self, section: str, key: Optional[str] = None) -> Optional[int]:
        return self.lines.get((section, key))

    def fail(self, section: str, key: Optional[str], message: str):
        raise ConfigError(message, self.path, self.where(section, key))

    def raw(self, section: str, key: str) -> Optional[str]:
        if self.cp.has_option(section, key):
            return self.cp.get(section, key).strip()
        return None

    def typed(self, section: str, key: str, kind, default):
        text = self.raw(section, key)
        if text is None:
            return default
        try:
            if kind is bool:
                lowered = text.lower()
                if lowered in ("true", "yes", "on", "1"):
                    return True
                if lowered in ("false", "no", "off", "0"):
                    return False
                raise ValueError(text)
            return kind(text)
        except ValueError:
            self.fail(section, key,
                      f"{key} must be a {kind.__name__}, got {text!r}")

    def float_list(self, section: str, key: str, default):
        text = self.raw(section, key)
        if text is None:
            return default
        parts = [p for p in re.split(r"[,\s]+", text) if p]
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            self.fail(section, key, f"{key} must be a list of numbers, got {text!r}")


def _check_keys(loader: _Loader, m: int):
    hop_keys = {f"omega_{sd}{k}" for sd in "sd" for k in range(1, m + 1)}
    allowed = {"system": _SYSTEM_KEYS | hop_keys, "sweep": _SWEEP_KEYS}
    for section in loader.cp.sections():
        if section not in allowed:
            loader.fail(section, None, f"unknown section [{section}]")
        for key in loader.cp.options(section):
            if key in allowed[section]:
                continue
            hop = _HOP_KEY.match(key)
            if section == "system" and hop:
                loader.fail(section, key,
                            f"{key}: relay index outside 1..{m}")
            loader.fail(section, key, f"unknown key {key} in [{section}]")


def load_config(path: str, mode: Optional[str] = None,
                relays: Optional[int] = None,
                validate: Optional[bool] = None,
                seed: Optional[int] = None) -> SweepSpec:
    """Parse and validate a sweep config; kwargs override file values.

    Every value has a default chosen so an empty file yields the
    reference scenario: DF, 2 relays, all hop gains 0.5, rate 1,
    static source and destination, unit relay Doppler rates, and a
    0..30 dB grid in 5 dB steps.
    """
    loader = _Loader(path)

    if mode is None:
        mode = loader.typed("system", "mode", str, DF).lower()
    if mode not in MODES:
        loader.fail("system", "mode",
                    f"mode must be one of {sorted(MODES)}, got {mode!r} "
                    "(per-relay mode mixing is not supported)")
    if relays is None:
        relays = loader.typed("system", "relays", int, 2)
    if relays < 1:
        loader.fail("system", "relays", f"relays must be >= 1, got {relays}")

    _check_keys(loader, relays)

    omega = loader.typed("system", "omega", float, 0.5)
    if not omega > 0:
        loader.fail("system", "omega", f"omega must be positive, got {omega}")
    rate = loader.typed("system", "rate", float, 1.0)
    f_ms = loader.typed("system", "f_ms", float, 0.0)
    f_md = loader.typed("system", "f_md", float, 0.0)
    f_mk = loader.float_list("system", "f_mk", (1.0,))
    if len(f_mk) == 1:
        f_mk = f_mk * relays
    if len(f_mk) != relays:
        loader.fail("system", "f_mk",
                    f"f_mk needs 1 or {relays} entries, got {len(f_mk)}")

    hops = []
    for k in range(1, relays + 1):
        pair = []
        for sd in "sd":
            key = f"omega_{sd}{k}"
            val = loader.typed("system", key, float, omega)
            if not val > 0:
                loader.fail("system", key, f"{key} must be positive, got {val}")
            pair.append(val)
        hops.append(tuple(pair))

    grid = loader.float_list("sweep", "snr_db", _DEFAULT_GRID)
    f_m0 = loader.typed("sweep", "f_m0", float, 1.0)
    outputs = loader.typed("sweep", "outputs", str, "both").lower()
    if validate is None:
        validate = loader.typed("sweep", "validate", bool, False)
    mc_budget = loader.typed("sweep", "mc_budget", int, _DEFAULT_BUDGET)
    mc_reps = loader.typed("sweep", "mc_reps", int, _DEFAULT_REPS)
    if seed is None:
        seed = loader.typed("sweep", "seed", int, 0)

    try:
        template = SystemConfig(relays, tuple(hops), f_ms, f_md, tuple(f_mk),
                                db_to_linear(grid[0]), rate, mode)
    except ValueError as exc:
        raise ConfigError(str(exc), path, loader.where("system", None))
    try:
        return SweepSpec(template, tuple(grid), f_m0, outputs, bool(validate),
                         mc_budget, mc_reps, seed)
    except ValueError as exc:
        raise ConfigError(str(exc), path, loader.where("sweep", None))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(x, ".12g")


@dataclass(frozen=True)
class SweepResult:
    """CSV lines in grid order plus outcome counters."""

    lines: tuple
    n_errors: int
    n_disagreements: int

    @property
    def exit_code(self) -> int:
        if self.n_errors:
            return 1
        if self.n_disagreements:
            return 2
        return 0


def _agreement(row, spec) -> Optional[str]:
    checks = []
    if spec.outputs in ("aor", "both"):
        checks.append((row["aor_analytic_norm"], row["aor_mc_norm"]))
    if spec.outputs in ("aod", "both"):
        checks.append((row["aod_analytic_norm"], row["aod_mc_norm"]))
    for ana, sim in checks:
        if ana is None or sim is None or not math.isfinite(ana) or ana == 0:
            return "fail"
        if abs(sim / ana - 1) > AGREE_TOL:
            return "fail"
    return "pass"


def run_sweep(spec: SweepSpec, threads: int = 1, log=None) -> SweepResult:
    """Evaluate the sweep and render CSV rows in grid order.

    A failure in one grid point is reported in that row's error column
    (and on the log stream when given); the other rows still complete.
    """
    f_m0 = spec.normalize_by
    want_aor = spec.outputs in ("aor", "both")
    want_aod = spec.outputs in ("aod", "both")

    rows = []
    n_errors = 0
    for snr_db in spec.snr_db_grid:
        row = {c: None for c in COLUMNS}
        row["snr_db"] = snr_db
        row["mode"] = spec.config.mode
        try:
            cfg = spec.config.with_snr(db_to_linear(snr_db))
            row["z"] = cfg.threshold().z
            rep = analytic_report(cfg)
            if want_aor:
                row["aor_analytic_norm"] = rep.aor / f_m0
            if want_aod:
                row["aod_analytic_norm"] = rep.aod * f_m0
            row["outage_prob"] = rep.outage_prob
        except (ValueError, RuntimeError) as exc:
            row["error"] = f"analytics: {exc}"
            n_errors += 1
            if log is not None:
                print(f"point {snr_db} dB: analytics failed: {exc}", file=log)
        rows.append(row)

    n_disagreements = 0
    if spec.validate:
        try:
            reports = run_grid(spec.config, spec.snr_db_grid,
                               n_samples=spec.mc_budget,
                               master_seed=spec.seed, n_reps=spec.mc_reps,
                               threads=threads)
            for row in rows:
                rep = reports[(spec.config.mode, row["snr_db"])]
                if want_aor:
                    row["aor_mc_norm"] = rep.aor / f_m0
                    row["aor_mc_stderr"] = (rep.aor_stderr or 0.0) / f_m0
                if want_aod:
                    row["aod_mc_norm"] = rep.aod * f_m0
                    row["aod_mc_stderr"] = (rep.aod_stderr or 0.0) * f_m0
                if row["error"] is None:
                    row["agree"] = _agreement(row, spec)
                    if row["agree"] == "fail":
                        n_disagreements += 1
        except (ValueError, RuntimeError) as exc:
            n_errors += 1
            for row in rows:
                note = f"simulation: {exc}"
                row["error"] = note if row["error"] is None else row["error"]
            if log is not None:
                print(f"simulation failed: {exc}", file=log)

    lines = [SCHEMA_HEADER, ",".join(COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in COLUMNS))
    return SweepResult(tuple(lines), n_errors, n_disagreements)


def _worker_count() -> int:
    limit = os.environ.get("OUTAGE_KIT_THREADS")
    available = os.cpu_count() or 1
    if limit is None:
        return available
    try:
        cap = int(limit)
    except ValueError:
        raise ValueError(f"OUTAGE_KIT_THREADS must be an integer, got {limit!r}")
    if cap < 1:
        raise ValueError(f"OUTAGE_KIT_THREADS must be >= 1, got {cap}")
    return min(available, cap)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="outage-kit",
        description="Outage rate and duration statistics for opportunistic "
                    "relay selection over mobile-to-mobile fading.")
    sub = parser.add_subparsers(dest="command", required=True)
    sweep = sub.add_parser("sweep", help="evaluate an SNR sweep to CSV")
    sweep.add_argument("--config", required=True, help="scenario file (INI)")
    sweep.add_argument("--mode", choices=sorted(MODES),
                       help="override the relaying mode")
    sweep.add_argument("--relays", type=int, help="override the relay count")
    sweep.add_argument("--validate", action="store_true", default=None,
                       help="run the simulator alongside the analytics")
    sweep.add_argument("--seed", type=int, help="simulation master seed")
    sweep.add_argument("--out", help="output CSV path (default: stdout)")
    args = parser.parse_args(argv)

    try:
        spec = load_config(args.config, mode=args.mode, relays=args.relays,
                           validate=args.validate, seed=args.seed)
        threads = _worker_count()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    result = run_sweep(spec, threads=threads, log=sys.stderr)
    text = "\n".join(result.lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
