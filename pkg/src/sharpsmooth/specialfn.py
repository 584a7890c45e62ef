"""Special functions evaluated by exact forward recurrences.

Gegenbauer polynomials, Legendre polynomials in ``d`` dimensions, sphere
measures, normalizing constants of the ``S^2`` harmonics and the scalar
harmonics ``Y_k^n`` themselves.  Everything accepts numpy arrays for the
continuous argument and broadcasts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "HarmonicIndex",
    "PolynomialEval",
    "gegenbauer",
    "gegenbauer_eval",
    "legendre_d",
    "legendre_table",
    "legendre_rodrigues",
    "log_gamma",
    "double_factorial",
    "log_double_factorial",
    "sphere_measure",
    "normalizing_constant",
    "spherical_harmonic",
]


@dataclass(frozen=True)
class HarmonicIndex:
    """Degree/order pair ``(k, n)`` of a scalar harmonic on ``S^2``."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"degree must be >= 0, got k={self.k}")
        if abs(self.n) > self.k:
            raise ValueError(f"order out of range: |n|={abs(self.n)} > k={self.k}")


@dataclass(frozen=True)
class PolynomialEval:
    value: np.ndarray | float
    derivative: np.ndarray | float | None = None


def log_gamma(x):
    return gammaln(x)


def log_double_factorial(n: int) -> float:
    """``log(n!!)`` for odd or even ``n >= -1``; ``(-1)!! = 0!! = 1``."""
    if n < -1:
        raise ValueError(f"double factorial undefined for n={n}")
    if n <= 0:
        return 0.0
    if n % 2:
        m = (n + 1) // 2  # n!! = (2m)! / (2^m m!)
        return math.lgamma(2 * m + 1) - m * math.log(2.0) - math.lgamma(m + 1)
    m = n // 2
    return m * math.log(2.0) + math.lgamma(m + 1)


def double_factorial(n: int) -> float:
    if n < -1:
        raise ValueError(f"double factorial undefined for n={n}")
    out = 1
    for j in range(n, 0, -2):
        out *= j
    return float(out)


def gegenbauer(p: float, n: int, x):
    """Gegenbauer polynomial ``C_n^p(x)`` via the three-term recurrence.

    ``C_{-1}^p = 0`` and ``C_0^p = 1``; then
    ``(j+1) C_{j+1} = 2 (j+p) x C_j - (j+2p-1) C_{j-1}``.
    """
    if p <= 0:
        raise ValueError(f"Gegenbauer parameter must be positive, got p={p}")
    if n < -1:
        raise ValueError(f"Gegenbauer degree must be >= -1, got n={n}")
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    if n == -1:
        return _unwrap(prev)
    for j in range(n):
        prev, cur = cur, (2.0 * (j + p) * x * cur - (j + 2.0 * p - 1.0) * prev) / (j + 1.0)
    return _unwrap(cur)


def gegenbauer_eval(p: float, n: int, x, derivative: bool = False) -> PolynomialEval:
    """Value and optionally ``d/dx C_n^p = 2p C_{n-1}^{p+1}``."""
    value = gegenbauer(p, n, x)
    if not derivative:
        return PolynomialEval(value)
    deriv = 2.0 * p * gegenbauer(p + 1.0, n - 1, x) if n >= 1 else np.zeros_like(value)
    return PolynomialEval(value, deriv)


def _chebyshev(k: int, t):
    t = np.asarray(t, dtype=float)
    prev, cur = np.ones_like(t), t.copy()
    if k == 0:
        return _unwrap(prev)
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * t * cur - prev
    return _unwrap(cur)


def legendre_d(d: int, k: int, t):
    """Legendre polynomial of degree ``k`` in ``d`` dimensions, ``p_{d,k}(1) = 1``.

    For ``d >= 3`` this is ``C_k^{(d-2)/2}(t) / C_k^{(d-2)/2}(1)``; for ``d = 2``
    it is the Chebyshev polynomial ``T_k``.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got d={d}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got k={k}")
    if d == 2:
        return _chebyshev(k, t)
    lam = (d - 2) / 2.0
    # C_k^lam(1) = Gamma(k + 2 lam) / (k! Gamma(2 lam))
    log_at_one = gammaln(k + 2 * lam) - gammaln(k + 1) - gammaln(2 * lam)
    return gegenbauer(lam, k, t) / math.exp(log_at_one)


def legendre_table(d: int, k_max: int, t) -> np.ndarray:
    """All ``p_{d,0..k_max}(t)`` stacked along a new leading axis.

    Uses the normalized recurrence
    ``(k+d-2) p_{k+1} = (2k+d-2) t p_k - k p_{k-1}`` with ``p_1 = t``.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((k_max + 1,) + t.shape)
    out[0] = 1.0
    if k_max >= 1:
        out[1] = t
    for k in range(1, k_max):
        out[k + 1] = ((2 * k + d - 2) * t * out[k] - k * out[k - 1]) / (k + d - 2)
    return out


def legendre_rodrigues(d: int, k: int, t):
    """``p_{d,k}`` from the Rodrigues formula, differentiated exactly.

    The ``k``-th derivative of ``(1-t)^a (1+t)^a`` with ``a = k + (d-3)/2`` is
    expanded by the Leibniz rule; dividing by ``(1-t^2)^{(d-3)/2}`` leaves a
    polynomial in ``(1-t)`` and ``(1+t)``.  Independent of the recurrences.
    """
    t = np.asarray(t, dtype=float)
    a = k + (d - 3) / 2.0
    total = np.zeros_like(t)
    for j in range(k + 1):
        # falling factorials a(a-1)...(a-j+1)
        ff_j = math.prod(a - i for i in range(j))
        ff_kj = math.prod(a - i for i in range(k - j))
        total = total + math.comb(k, j) * (-1) ** j * ff_j * ff_kj * (1 - t) ** (k - j) * (1 + t) ** j
    log_pref = math.lgamma((d - 1) / 2.0) - k * math.log(2.0) - math.lgamma(k + (d - 1) / 2.0)
    return _unwrap((-1) ** k * math.exp(log_pref) * total)


def sphere_measure(j: int) -> float:
    """Surface measure ``2 pi^{(j+1)/2} / Gamma((j+1)/2)`` of the unit ``j``-sphere."""
    if j < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {j}")
    return 2.0 * math.pi ** ((j + 1) / 2.0) / math.gamma((j + 1) / 2.0)


def normalizing_constant(k: int, n: int) -> float:
    """``N_k^n = (2n-1)!! ((k+1/2)(k-n)!/(k+n)!)^{1/2}`` for ``0 <= n <= k``."""
    if n < 0 or n > k:
        raise ValueError(f"normalizing constant needs 0 <= n <= k, got k={k}, n={n}")
    log_n = log_double_factorial(2 * n - 1) + 0.5 * (
        math.log(k + 0.5) + math.lgamma(k - n + 1) - math.lgamma(k + n + 1)
    )
    return math.exp(log_n)


def spherical_harmonic(k: int, n: int, theta, phi):
    """Orthonormal harmonic ``Y_k^n(theta, phi)`` on ``S^2``.

    ``(2 pi)^{-1/2} (-1)^{(n+|n|)/2} N_k^{|n|} sin^{|n|}(theta)
    C_{k-|n|}^{|n|+1/2}(cos theta) e^{i n phi}``.  Evaluated literally for any
    real ``theta``, so ``Y_k^n(theta, phi) = Y_k^{-n}(-theta, -phi)`` holds.
    """
    HarmonicIndex(k, n)
    a = abs(n)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sign = -1.0 if (n > 0 and n % 2) else 1.0
    radial = normalizing_constant(k, a) * np.sin(theta) ** a * gegenbauer(a + 0.5, k - a, np.cos(theta))
    return _unwrap(sign * radial * np.exp(1j * n * phi) / math.sqrt(2.0 * math.pi))


def _unwrap(arr):
    arr = np.asarray(arr)
    return arr.item() if arr.ndim == 0 else arr
