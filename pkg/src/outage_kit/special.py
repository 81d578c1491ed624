"""Self-contained numerics: modified Bessel K1 and Gauss-Hermite rules.

Only the two primitives the amplify-and-forward branch needs live here.
K1 is evaluated by the convergent log/digamma power series for small
arguments and by a trapezoid rule on the integral representation

    e^x K1(x) = int_0^inf exp(-x (cosh t - 1)) cosh t dt

for large ones. The integrand is even and decays double-exponentially, so
the trapezoid sum converges geometrically; the classical asymptotic series
cannot reach the accuracy contract in the midrange and is not used.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

_EULER_GAMMA = 0.5772156649015328606

# switchover between the power series and the integral representation;
# series cancellation grows like e^(2x)*eps, harmless this far down
_K1_SERIES_CUTOFF = 2.0


def _k1_series_scaled(x: float) -> float:
    """e^x K1(x) for 0 < x <= cutoff via the power series."""
    half = 0.5 * x
    q = half * half
    log_half = math.log(half)

    # I1 series and the digamma-weighted companion series, summed together
    i1_term = half                       # (x/2)^(2k+1) / (k! (k+1)!)
    psi_a = -_EULER_GAMMA                # psi(k+1)
    psi_b = 1.0 - _EULER_GAMMA           # psi(k+2)
    comp_term = 1.0                      # q^k / (k! (k+1)!)
    i1 = 0.0
    comp = 0.0
    for k in range(64):
        i1 += i1_term
        comp += (psi_a + psi_b) * comp_term
        if i1_term < 1e-19 * (abs(i1) + 1e-300) and k > 2:
            break
        i1_term *= q / ((k + 1.0) * (k + 2.0))
        comp_term *= q / ((k + 1.0) * (k + 2.0))
        psi_a += 1.0 / (k + 1.0)
        psi_b += 1.0 / (k + 2.0)
    k1 = log_half * i1 + 1.0 / x - 0.25 * x * comp
    return k1 * math.exp(x)


def _k1_integral_scaled(x: float) -> float:
    """e^x K1(x) for x >= cutoff via the trapezoid rule on the cosh integral."""
    # truncate where exp(-x (cosh t - 1)) < ~1e-21 relative
    t_max = math.acosh(1.0 + 48.0 / x)
    n = 96
    h = t_max / n
    total = 0.5  # t = 0 contributes cosh(0) * exp(0) = 1
    for i in range(1, n + 1):
        t = i * h
        c = math.cosh(t)
        total += c * math.exp(-x * (c - 1.0))
    return h * total


def _k1_scaled_scalar(x: float) -> float:
    if x <= _K1_SERIES_CUTOFF:
        return _k1_series_scaled(x)
    return _k1_integral_scaled(x)


def bessel_k1(x):
    """Modified Bessel function of the second kind, order one.

    Relative error is below 1e-10 over at least [1e-6, 50]. Accepts a
    scalar or an array; the argument must be strictly positive.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("bessel_k1 requires x > 0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    for i, xi in enumerate(flat):
        out[i] = _k1_scaled_scalar(xi) * math.exp(-xi)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def bessel_k1_scaled(x):
    """e^x K1(x), which stays representable for large x."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("bessel_k1_scaled requires x > 0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    for i, xi in enumerate(flat):
        out[i] = _k1_scaled_scalar(xi)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a Gauss-Hermite rule (weight e^(-x^2))."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != self.order or len(self.weights) != self.order:
            raise ValueError("rule arrays must match the stated order")
        if abs(self.weights.sum() - math.sqrt(math.pi)) > 1e-10:
            raise ValueError("weights must sum to sqrt(pi)")
        if np.max(np.abs(self.nodes + self.nodes[::-1])) > 1e-12:
            raise ValueError("nodes must be symmetric about 0")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)


def _hermite_scaled_triplet(x: float, n: int):
    """psi_n(x), psi_(n-1)(x) and sum_(k<n) psi_k(x)^2.

    psi_k = (orthonormal Hermite polynomial) * e^(-x^2/2); the scaling keeps
    every intermediate bounded out to the extreme nodes of large rules.
    """
    p_prev = math.pi ** -0.25 * math.exp(-0.5 * x * x)
    p_cur = math.sqrt(2.0) * x * p_prev
    christoffel = p_prev * p_prev
    for k in range(1, n):
        christoffel += p_cur * p_cur
        p_next = math.sqrt(2.0 / (k + 1)) * x * p_cur - math.sqrt(k / (k + 1.0)) * p_prev
        p_prev, p_cur = p_cur, p_next
    return p_cur, p_prev, christoffel


@functools.lru_cache(maxsize=None)
def gauss_hermite(order: int) -> QuadratureRule:
    """Gauss-Hermite rule of the given order via the Golub-Welsch method.

    Eigenvalues of the symmetric tridiagonal Jacobi matrix (zero diagonal,
    off-diagonal sqrt(k/2)) seed the nodes; two Newton sweeps on the scaled
    orthonormal recurrence sharpen them, and the weights come from the
    Christoffel sum 1/sum_k phi_k(x_i)^2, which keeps the tiny outermost
    weights fully accurate in a relative sense (the raw eigenvector-based
    weights do not).

    Parameters
    ----------
    order : int
        Number of nodes, 2 <= order <= 128.
    """
    if not 2 <= order <= 128:
        raise ValueError(f"order must be in [2, 128], got {order}")
    jacobi = np.zeros((order, order))
    off = np.sqrt(0.5 * np.arange(1, order))
    idx = np.arange(order - 1)
    jacobi[idx, idx + 1] = off
    jacobi[idx + 1, idx] = off
    nodes = np.linalg.eigvalsh(jacobi)

    weights = np.empty(order)
    sqrt_2n = math.sqrt(2.0 * order)
    for i in range(order):
        x = nodes[i]
        for _ in range(2):
            p_n, p_nm1, _ = _hermite_scaled_triplet(x, order)
            deriv = sqrt_2n * p_nm1 - x * p_n
            x -= p_n / deriv
        _, _, christoffel = _hermite_scaled_triplet(x, order)
        nodes[i] = x
        weights[i] = math.exp(-x * x) / christoffel

    # the spectrum is symmetric up to rounding; make the symmetry exact
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(order, nodes, weights)
