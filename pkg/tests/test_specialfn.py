import math

import mpmath as mp
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpsmooth.specialfn import (
    HarmonicIndex,
    double_factorial,
    gegenbauer,
    gegenbauer_eval,
    legendre_d,
    legendre_rodrigues,
    legendre_table,
    log_double_factorial,
    log_gamma,
    normalizing_constant,
    sphere_measure,
    spherical_harmonic,
)

params = st.sampled_from([0.5, 1.0, 1.5, 2.0, 2.5, 3.5])
degrees = st.integers(min_value=1, max_value=30)
points = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def close(a, b, *terms, rel=1e-10):
    """Residual relative to the largest term of the identity."""
    scale = max([abs(a), abs(b), 1.0] + [abs(t) for t in terms])
    return abs(a - b) <= rel * scale


@settings(max_examples=200, deadline=None)
@given(params, degrees, points)
def test_parameter_shift(p, n, x):
    lhs = (n + p) * gegenbauer(p, n, x)
    rhs = p * (gegenbauer(p + 1, n, x) - gegenbauer(p + 1, n - 2, x)) if n >= 1 else None
    assert close(lhs, rhs)


@settings(max_examples=200, deadline=None)
@given(params, degrees, points)
def test_derivative_relation(p, n, x):
    lhs = 4 * p * (n + p) * (1 - x * x) * gegenbauer(p + 1, n - 1, x)
    a = (n + 2 * p - 1) * (n + 2 * p) * gegenbauer(p, n - 1, x)
    b = n * (n + 1) * gegenbauer(p, n + 1, x)
    assert close(lhs, a - b, a, b)


@settings(max_examples=200, deadline=None)
@given(params, degrees, points)
def test_three_term(p, n, x):
    lhs = 2 * (n + p) * x * gegenbauer(p, n, x)
    rhs = (n + 1) * gegenbauer(p, n + 1, x) + (n + 2 * p - 1) * gegenbauer(p, n - 1, x)
    assert close(lhs, rhs)


@pytest.mark.parametrize("p,n", [(0.5, 7), (1.5, 4), (2.25, 10), (3.0, 0), (1.0, 1)])
def test_gegenbauer_matches_mpmath(p, n):
    x = np.array([-0.97, -0.61, -0.33, 0.12, 0.48, 0.86, 1.0])
    ref = [float(mp.gegenbauer(n, p, float(xi))) for xi in x]
    np.testing.assert_allclose(gegenbauer(p, n, x), ref, rtol=1e-12, atol=1e-13)


def test_gegenbauer_base_cases_and_errors():
    assert gegenbauer(1.5, -1, 0.3) == 0.0
    assert gegenbauer(1.5, 0, 0.3) == 1.0
    with pytest.raises(ValueError):
        gegenbauer(0.0, 2, 0.1)
    with pytest.raises(ValueError):
        gegenbauer(1.0, -2, 0.1)


def test_gegenbauer_derivative():
    p, n, x = 1.5, 6, np.linspace(-0.9, 0.9, 7)
    ev = gegenbauer_eval(p, n, x, derivative=True)
    h = 1e-6
    fd = (gegenbauer(p, n, x + h) - gegenbauer(p, n, x - h)) / (2 * h)
    np.testing.assert_allclose(ev.derivative, fd, rtol=1e-7, atol=1e-6)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("k", [0, 1, 2, 5, 8])
def test_legendre_against_symbolic_rodrigues(d, k):
    t = sp.symbols("t")
    e = sp.Rational(d - 3, 2)
    # p_{d,k} = (-1)^k R / (1-t^2)^e d^k/dt^k (1-t^2)^{k+e}, normalized at t=1
    expr = sp.diff((1 - t**2) ** (k + e), t, k) * (-1) ** k / (1 - t**2) ** e
    expr = sp.simplify(expr)
    norm = sp.limit(expr, t, 1)
    f = sp.lambdify(t, expr / norm, "mpmath")
    ts = np.array([-0.83, -0.2, 0.0, 0.41, 0.77])
    ref = np.array([float(f(sp.Float(x))) for x in ts])
    np.testing.assert_allclose(legendre_d(d, k, ts), ref, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(legendre_rodrigues(d, k, ts), ref, rtol=1e-10, atol=1e-12)


def test_legendre_special_dimensions():
    t = np.linspace(-1, 1, 9)
    for k in range(6):
        np.testing.assert_allclose(legendre_d(3, k, t), [float(mp.legendre(k, x)) for x in t], atol=1e-13)
        np.testing.assert_allclose(legendre_d(2, k, t), np.cos(k * np.arccos(t)), atol=1e-13)


def test_legendre_table_shape_and_rows():
    t = np.linspace(-1, 1, 5)
    tab = legendre_table(4, 6, t)
    assert tab.shape == (7, 5)
    for k in range(7):
        np.testing.assert_allclose(tab[k], legendre_d(4, k, t), atol=1e-14)


def test_factorials_and_gamma():
    assert double_factorial(-1) == 1 and double_factorial(0) == 1
    assert double_factorial(7) == 105 and double_factorial(8) == 384
    assert math.isclose(log_double_factorial(31), math.log(double_factorial(31)), rel_tol=1e-14)
    assert math.isclose(float(log_gamma(5.5)), math.lgamma(5.5), rel_tol=1e-14)


def test_sphere_measure():
    assert math.isclose(sphere_measure(0), 2.0)
    assert math.isclose(sphere_measure(1), 2 * math.pi)
    assert math.isclose(sphere_measure(2), 4 * math.pi)
    assert math.isclose(sphere_measure(3), 2 * math.pi**2)


def test_normalizing_constant_formula():
    for k in range(8):
        for n in range(k + 1):
            ref = double_factorial(2 * n - 1) * math.sqrt((k + 0.5) * math.factorial(k - n) / math.factorial(k + n))
            assert math.isclose(normalizing_constant(k, n), ref, rel_tol=1e-13)


@pytest.mark.parametrize("k,n", [(0, 0), (2, 1), (3, -2), (4, -1), (5, 5), (6, -6)])
def test_spherical_harmonic_matches_mpmath(k, n):
    th, ph = 0.7, 1.1
    ref = complex(mp.spherharm(k, n, th, ph))
    assert abs(spherical_harmonic(k, n, th, ph) - ref) < 1e-13


def test_harmonic_index_validation():
    HarmonicIndex(3, -3)
    with pytest.raises(ValueError):
        HarmonicIndex(2, 3)
