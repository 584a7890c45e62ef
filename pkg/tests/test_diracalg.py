import math

import numpy as np
import pytest
from scipy.linalg import expm

from sharpsmooth.checks import random_unitary
from sharpsmooth.curves import dirac_combine
from sharpsmooth.diracalg import (
    DegenerateSymbolError,
    assembled_Lambda_matrix,
    dirac_Lambda_matrix,
    extremiser_space,
    gamma_set,
    mass_coupling,
    pm_projection,
    propagator,
    symbol,
)


@pytest.mark.parametrize("d", [2, 3])
def test_anticommutation(d, rng):
    gs = gamma_set(d)
    assert gs.N == (2 if d == 2 else 4)
    assert gs.anticommutator_residual() <= 1e-14
    assert gs.conjugated(random_unitary(gs.N, rng)).anticommutator_residual() <= 1e-13


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        gamma_set(4)
    with pytest.raises(ValueError):
        mass_coupling(4, 1.0, 1.0)


@pytest.mark.parametrize("d", [2, 3])
def test_symbol_squares_to_phi2(d, rng):
    gs = gamma_set(d)
    xi, m = rng.normal(size=d), 0.8
    A = symbol(gs, xi, m)
    np.testing.assert_allclose(A @ A, (xi @ xi + m * m) * np.eye(gs.N), atol=1e-13)
    with pytest.raises(ValueError):
        symbol(gs, np.ones(d + 1), m)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("t", [-3.2, 0.0, 0.7, 11.0])
def test_propagator_matches_expm(d, t, rng):
    gs = gamma_set(d)
    xi, m = rng.normal(size=d), 1.1
    U = propagator(gs, xi, m, t)
    np.testing.assert_allclose(U, expm(-1j * t * symbol(gs, xi, m)), atol=1e-12)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(gs.N), atol=1e-13)


def test_propagator_at_zero_symbol():
    gs = gamma_set(3)
    np.testing.assert_allclose(propagator(gs, np.zeros(3), 0.0, 5.0), np.eye(4))


def test_pm_projection(rng):
    gs = gamma_set(3)
    xi, m = rng.normal(size=3), 0.5
    f = rng.normal(size=4) + 1j * rng.normal(size=4)
    fp, fm = pm_projection(gs, f, xi, m)
    A, phi = symbol(gs, xi, m), math.sqrt(xi @ xi + m * m)
    np.testing.assert_allclose(fp + fm, f, atol=1e-14)
    np.testing.assert_allclose(A @ fp, phi * fp, atol=1e-13)
    np.testing.assert_allclose(A @ fm, -phi * fm, atol=1e-13)
    with pytest.raises(DegenerateSymbolError):
        pm_projection(gs, f, np.zeros(3), 0.0)


@pytest.mark.parametrize("d", [2, 3])
def test_lambda_block_eigen_consistency(d, rng):
    for _ in range(200):
        m, r = rng.uniform(0, 3), rng.uniform(1e-3, 10)
        lk, lk1 = rng.uniform(0, 5, 2)
        M = dirac_Lambda_matrix(d, lk, lk1, m, r)
        expected = float(dirac_combine(lk, lk1, m, r))
        assert abs(np.linalg.eigvalsh(M)[-1] - expected) <= 1e-12 * expected
        es = extremiser_space(d, lk, lk1, m, r)
        B = es.max_eigenspace_basis
        np.testing.assert_allclose(M @ B, es.max_eigenvalue * B, atol=1e-12 * expected)
        np.testing.assert_allclose(B.conj().T @ B, np.eye(B.shape[1]), atol=1e-13)
        np.testing.assert_allclose(np.sort(es.full_spectrum), np.linalg.eigvalsh(M), atol=1e-12 * expected)
        np.testing.assert_allclose(M, assembled_Lambda_matrix(d, lk, lk1, m, r), atol=1e-13 * expected)


def test_extremiser_space_dimensions():
    assert extremiser_space(2, 3.0, 1.0, 1.0, 0.5).max_eigenspace_basis.shape == (2, 1)
    assert extremiser_space(3, 3.0, 1.0, 1.0, 0.5).max_eigenspace_basis.shape == (4, 2)
    # massless or degenerate: the block is scalar, everything is extremal
    assert extremiser_space(3, 3.0, 1.0, 0.0, 0.5).max_eigenspace_basis.shape == (4, 4)
    assert extremiser_space(2, 2.0, 2.0, 1.0, 0.5).max_eigenspace_basis.shape == (2, 2)


def test_extremiser_direction_switches_with_order():
    a = extremiser_space(2, 3.0, 1.0, 1.0, 0.5).max_eigenspace_basis[:, 0]
    b = extremiser_space(2, 1.0, 3.0, 1.0, 0.5).max_eigenspace_basis[:, 0]
    assert abs(np.vdot(a, b)) < 1e-14


def test_block_input_validation():
    with pytest.raises(ValueError):
        dirac_Lambda_matrix(3, -1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        dirac_Lambda_matrix(3, 1.0, 1.0, 1.0, 0.0)
