"""Fixed-gain AF path statistics: CDF, selection variable, rate quadrature."""

import math

import mpmath
import numpy as np
import pytest

from outage_kit import (AfPathStats, HopStats, af_cdf, af_path_aor,
                        af_selection_variable, gauss_hermite)
from outage_kit.af import _log_integral_hermite, _log_integral_panels


def path(omega_s=0.5, omega_d=0.5, c_k=0.6, f_src=(0.0, 1.0), f_dst=(1.0, 0.0)):
    src = HopStats.from_doppler(omega_s, *f_src)
    dst = HopStats.from_doppler(omega_d, *f_dst)
    return AfPathStats(c_k=c_k, omega_sk=src.omega, omega_kd=dst.omega,
                       sigma_dot_sk=src.sigma_dot, sigma_dot_kd=dst.sigma_dot)


def ref_path(snr_db):
    """Reference-scenario path at a given total SNR."""
    return AfPathStats.from_hops(HopStats.from_doppler(0.5, 0.0, 1.0),
                                 HopStats.from_doppler(0.5, 1.0, 0.0),
                                 10.0 ** (snr_db / 10.0))


def test_selection_variable_example():
    # unit hop amplitudes, C = 0.6: W = 1/sqrt(1.6)
    p = path()
    assert af_selection_variable(1.0, 1.0, p) == pytest.approx(
        1.0 / math.sqrt(1.6), rel=1e-14)
    a = np.array([1.0, 2.0])
    b = np.array([1.0, 0.5])
    out = af_selection_variable(a, b, p)
    assert out.shape == (2,)
    assert out[0] == pytest.approx(0.7905694150420949, rel=1e-14)


def test_selection_variable_below_weaker_hop():
    # the AF amplitude never beats either hop amplitude scaled by its gain
    p = path()
    rng = np.random.default_rng(11)
    s = rng.rayleigh(0.5, 1000)
    d = rng.rayleigh(0.5, 1000)
    w = af_selection_variable(s, d, p)
    assert np.all(w < s)


def test_cdf_limits_and_spot_values():
    p = path()
    assert af_cdf(0.0, p) == 0.0
    assert af_cdf(40.0, p) == pytest.approx(1.0, abs=1e-12)
    # frozen from an independent high-precision evaluation
    assert af_cdf(0.3, p) == pytest.approx(0.47209204562124135, rel=1e-12)
    assert af_cdf(1.0, p) == pytest.approx(0.98502914496714187, rel=1e-12)
    assert af_cdf(2.5, p) == pytest.approx(0.99999999411581208, rel=1e-12)
    asym = path(0.8, 0.3, 0.95)
    assert af_cdf(0.7, asym) == pytest.approx(0.92145410940529505, rel=1e-12)


def test_cdf_against_empirical_distribution():
    p = path()
    rng = np.random.default_rng(2026)
    n = 10 ** 6
    s = rng.rayleigh(math.sqrt(p.omega_sk / 2.0), n)
    d = rng.rayleigh(math.sqrt(p.omega_kd / 2.0), n)
    w = np.sort(af_selection_variable(s, d, p))
    zs = np.linspace(0.05, 2.0, 40)
    ecdf = np.searchsorted(w, zs, side="right") / n
    assert np.max(np.abs(af_cdf(zs, p) - ecdf)) <= 0.005


def test_cdf_strictly_increasing():
    # up to the point where 1 - F falls below float resolution
    p = path(0.8, 0.3, 0.95)
    zs = np.linspace(1e-3, 1.8, 500)
    vals = af_cdf(zs, p)
    assert np.all(np.diff(vals) > 0)
    assert vals[-1] < 1.0


def test_cdf_derivative_matches_implied_pdf():
    # implied density: d/dz [1 - A K1(A) e^(-z^2/Os)] with A = 2z sqrt(C/(Os Od))
    # equals [s A K0(A) + (2z/Os) A K1(A)] e^(-z^2/Os), s = A/z
    p = path(0.8, 0.3, 0.95)
    scale = 2.0 * math.sqrt(p.c_k / (p.omega_sk * p.omega_kd))
    for z in (0.15, 0.6, 1.4, 2.8):
        a = scale * z
        eb = math.exp(-z * z / p.omega_sk)
        implied = (scale * a * float(mpmath.besselk(0, a))
                   + (2.0 * z / p.omega_sk) * a * float(mpmath.besselk(1, a))) * eb
        h = 1e-4 * max(z, 1.0)
        fd = (af_cdf(z + h, p) - af_cdf(z - h, p)) / (2.0 * h)
        assert fd == pytest.approx(implied, rel=1e-5)


def test_cdf_continuous_as_gain_constant_approaches_limit():
    # C_k -> Omega_Sk from above (infinite-SNR limit of the gain constant)
    vals = [af_cdf(0.7, path(c_k=0.5 * (1.0 + eps)))
            for eps in (1e-2, 1e-4, 1e-6, 1e-8)]
    diffs = np.abs(np.diff(vals))
    assert np.all(np.diff(diffs) < 0)
    assert diffs[-1] < 2e-7


def test_path_stats_validation():
    with pytest.raises(ValueError):
        path(c_k=0.5)     # gain constant must exceed the source hop gain
    with pytest.raises(ValueError):
        path(c_k=0.3)
    with pytest.raises(ValueError):
        AfPathStats(c_k=0.6, omega_sk=0.5, omega_kd=-0.5,
                    sigma_dot_sk=1.0, sigma_dot_kd=1.0)
    p = AfPathStats.from_hops(HopStats.from_doppler(0.5, 0.0, 1.0),
                              HopStats.from_doppler(0.5, 1.0, 0.0), 4.0)
    assert p.c_k == pytest.approx(0.75)


def test_aor_preconditions():
    p = ref_path(10.0)
    with pytest.raises(ValueError):
        af_path_aor(0.0, p)
    with pytest.raises(ValueError):
        af_path_aor(-1.0, p)
    with pytest.raises(ValueError):
        af_path_aor(0.5, p, gauss_hermite(8))


def test_aor_static_path_is_zero():
    frozen = AfPathStats(c_k=0.6, omega_sk=0.5, omega_kd=0.5,
                         sigma_dot_sk=0.0, sigma_dot_kd=0.0)
    assert af_path_aor(0.5, frozen) == 0.0


def test_aor_vanishes_with_threshold():
    p = ref_path(10.0)
    assert af_path_aor(1e-9, p) <= 1e-7
    assert af_path_aor(1e-9, p) > 0.0


def test_aor_order_40_vs_80_across_grid():
    r40, r80 = gauss_hermite(40), gauss_hermite(80)
    for snr_db in (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0):
        p = ref_path(snr_db)
        z = math.sqrt(3.0 / 10.0 ** (snr_db / 10.0))
        a, b = af_path_aor(z, p, r40), af_path_aor(z, p, r80)
        assert abs(a / b - 1.0) < 1e-6, f"{snr_db} dB"


def test_panel_fallback_agrees_with_quadrature():
    # benign regime where the mapped rule converges on its own
    p = ref_path(5.0)
    z = math.sqrt(3.0 / 10.0 ** 0.5)
    a = 1.0 / p.omega_kd
    b = p.c_k * z * z / p.omega_sk
    args = (p.sigma_dot_sk ** 2, p.sigma_dot_kd ** 2, p.c_k, z)
    lg_h = _log_integral_hermite(a, b, *args, gauss_hermite(80))
    lg_p = _log_integral_panels(a, b, *args)
    assert abs(math.expm1(lg_h - lg_p)) < 1e-6


def test_aor_spot_value_asymmetric():
    # frozen from direct high-precision integration of the rate integral
    src = HopStats.from_doppler(0.8, 0.2, 1.3)
    dst = HopStats.from_doppler(0.3, 1.3, 0.7)
    p = AfPathStats.from_hops(src, dst, 10.0 ** 1.2)
    z = 0.66458268194118275
    assert af_path_aor(z, p) == pytest.approx(0.60422918981574301, rel=1e-8)
    assert af_cdf(z, p) == pytest.approx(0.89547728108979407, rel=1e-12)
