"""Second-order outage statistics for opportunistic relay selection.

Closed-form average outage rate and duration for decode-and-forward
and fixed-gain amplify-and-forward relay selection over
mobile-to-mobile Rayleigh fading, together with a correlated-fading
Monte Carlo simulator that validates them, and a CSV sweep CLI.
"""

from .scenario import (AF, DF, MODES, HopStats, OutageThreshold, SystemConfig,
                       db_to_linear, derivative_variance, linear_to_db,
                       mutual_information, outage_threshold, threshold_value)
from .special import QuadratureRule, bessel_k1, bessel_k1_scaled, gauss_hermite
from .df import (DfPathStats, df_cdf, df_derivative_mixture_pdf, df_path_aor,
                 df_pdf)
from .af import AfPathStats, af_cdf, af_path_aor, af_selection_variable
from .selection import (OutageReport, analytic_report, conditional_prob_pk,
                        config_paths, outage_probability, system_aod,
                        system_aor)
from .fading import (FadingTrace, dump_trace, expected_derivative_variance,
                     generate_m2m_trace, load_trace, ring_components,
                     trace_derivative_variance)
from .mc import (CrossingStats, auto_dt, count_crossings, run_experiment,
                 run_grid, selection_process)
from .cli import ConfigError, SweepSpec, load_config, main, run_sweep

__all__ = [
    "AF", "DF", "MODES", "HopStats", "OutageThreshold", "SystemConfig",
    "db_to_linear", "derivative_variance", "linear_to_db",
    "mutual_information", "outage_threshold", "threshold_value",
    "QuadratureRule", "bessel_k1", "bessel_k1_scaled", "gauss_hermite",
    "DfPathStats", "df_cdf", "df_derivative_mixture_pdf", "df_path_aor",
    "df_pdf",
    "AfPathStats", "af_cdf", "af_path_aor", "af_selection_variable",
    "OutageReport", "analytic_report", "conditional_prob_pk", "config_paths",
    "outage_probability", "system_aod", "system_aor",
    "FadingTrace", "dump_trace", "expected_derivative_variance",
    "generate_m2m_trace", "load_trace", "ring_components",
    "trace_derivative_variance",
    "CrossingStats", "auto_dt", "count_crossings", "run_experiment",
    "run_grid", "selection_process",
    "ConfigError", "SweepSpec", "load_config", "main", "run_sweep",
]
