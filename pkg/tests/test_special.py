"""Modified Bessel K1 and Gauss-Hermite rules against high-precision oracles."""

import math

import numpy as np
import pytest
from mpmath import mp, mpf, gamma
from k1_reference import k1_reference as _k1_reference

from outage_kit import QuadratureRule, bessel_k1, bessel_k1_scaled, gauss_hermite

mp.dps = 60


def test_k1_against_reference_on_log_grid():
    xs = np.logspace(math.log10(1e-6), math.log10(50.0), 200)
    worst = 0.0
    for x in xs:
        ref = _k1_reference(x)
        worst = max(worst, abs(bessel_k1(float(x)) / float(ref) - 1.0))
    assert worst <= 1e-10, f"worst relative error {worst:.3e}"


def test_k1_spot_values():
    assert bessel_k1(1.0) == pytest.approx(0.6019072301972346, rel=1e-12)
    assert bessel_k1(0.01) == pytest.approx(99.97389411829625, rel=1e-12)
    assert bessel_k1(10.0) == pytest.approx(1.8648773453825585e-05, rel=1e-12)
    assert bessel_k1(50.0) == pytest.approx(3.4441022267175556e-23, rel=1e-12)


def test_k1_scaled_identity():
    for x in (1e-5, 0.3, 2.0, 30.0):
        assert bessel_k1_scaled(x) == pytest.approx(
            bessel_k1(x) * math.exp(x), rel=1e-13)


def test_k1_arrays_and_domain():
    xs = np.array([0.5, 1.0, 2.0])
    out = bessel_k1(xs)
    assert out.shape == (3,)
    assert out[1] == bessel_k1(1.0)
    assert isinstance(bessel_k1(1.0), float)
    with pytest.raises(ValueError):
        bessel_k1(0.0)
    with pytest.raises(ValueError):
        bessel_k1(np.array([1.0, -2.0]))


def _exact_even_moment(m):
    # integral of x^(2m) e^(-x^2) over the real line
    return gamma(mpf(2 * m + 1) / 2)


@pytest.mark.parametrize("order", [8, 16, 40])
def test_hermite_moments_through_2n_minus_1(order):
    rule = gauss_hermite(order)
    nodes = [mpf(float(x)) for x in rule.nodes]
    weights = [mpf(float(w)) for w in rule.weights]
    for p in range(0, 2 * order):
        got = sum(w * x**p for x, w in zip(nodes, weights))
        if p % 2:
            assert abs(got) <= 1e-9
        else:
            exact = _exact_even_moment(p // 2)
            assert abs(got / exact - 1) <= 1e-9, f"moment {p}"


def test_hermite_rule_shape():
    rule = gauss_hermite(40)
    assert isinstance(rule, QuadratureRule)
    assert rule.order == 40
    assert len(rule.nodes) == 40 and len(rule.weights) == 40
    assert float(np.sum(rule.weights)) == pytest.approx(math.sqrt(math.pi),
                                                        abs=1e-10)
    # nodes come symmetric and sorted
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.max(np.abs(rule.nodes + rule.nodes[::-1])) <= 1e-12
    assert not rule.nodes.flags.writeable
    assert not rule.weights.flags.writeable


def test_hermite_order_validation():
    with pytest.raises(ValueError):
        gauss_hermite(1)
    with pytest.raises(ValueError):
        gauss_hermite(129)


def test_hermite_integrates_smooth_function():
    # integral of e^(-x^2) cos x = sqrt(pi) e^(-1/4)
    rule = gauss_hermite(40)
    got = float(np.sum(rule.weights * np.cos(rule.nodes)))
    assert got == pytest.approx(math.sqrt(math.pi) * math.exp(-0.25),
                                rel=1e-13)
