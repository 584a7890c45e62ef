import csv
import math

import numpy as np
import pytest

from sharpsmooth.checks import harmonics_suite
from sharpsmooth.harmonics import (
    QuadratureFailure,
    active_projector,
    basis_pair,
    coefficients_to_csv,
    coupling_matrix,
    coupling_triple,
    decompose_3d,
    matrix_harmonic_2d,
    matrix_harmonic_3d,
    mode_indices,
    sphere_grid,
    synthesize_3d,
)


def test_identity_suite(rng):
    for check in harmonics_suite(rng):
        assert check.passed, check


def test_lowest_coupling_matrix():
    # A_0^0 * sqrt(3) = [[1, 0], [-sqrt(2), 0]]
    np.testing.assert_allclose(coupling_matrix(0, 0) * math.sqrt(3), [[1, 0], [-math.sqrt(2), 0]], atol=1e-15)
    u, v = basis_pair(0, 0)
    np.testing.assert_allclose(u, [0, 1], atol=1e-15)


def test_reflection_for_negative_orders():
    s1 = np.array([[0, 1], [1, 0]])
    for k in range(6):
        for n in range(0, k + 1):
            np.testing.assert_allclose(coupling_matrix(k, -(n + 1)), -s1 @ coupling_matrix(k, n) @ s1, atol=1e-15)


def test_index_checks():
    for k, n in [(-1, 0), (2, 3), (2, -4)]:
        with pytest.raises(IndexError):
            coupling_matrix(k, n)
    coupling_matrix(2, -3)


def test_triples_are_read_only():
    t = coupling_triple(3, 1)
    with pytest.raises(ValueError):
        t.u[0] = 2.0
    u, _ = basis_pair(3, 1)
    u[0] = 2.0
    assert coupling_triple(3, 1).u[0] != 2.0


def test_active_projector_edges():
    np.testing.assert_array_equal(active_projector(3, 3), np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(active_projector(3, -4), np.diag([0.0, 1.0]))
    np.testing.assert_array_equal(active_projector(3, 0), np.eye(2))


def test_matrix_harmonic_shapes():
    th = np.linspace(0.1, 3.0, 5)
    assert matrix_harmonic_2d(2, th).shape == (5, 2, 2)
    assert matrix_harmonic_3d(2, -1, th, th).E.shape == (5, 4, 4)


def _orthonormality(k_max):
    grid = sphere_grid(k_max + 1)
    th, ph = grid.mesh
    cols = []
    for k, n in mode_indices(k_max):
        E = matrix_harmonic_3d(k, n, th, ph).E
        cols.append(E.reshape(-1, 4, 4))
    w = grid.weights.reshape(-1)
    M = np.concatenate(cols, axis=2)  # (points, 4, 4 * modes)
    return np.einsum("p,pia,pib->ab", w, M.conj(), M)


def test_matrix_harmonics_orthonormal():
    G = _orthonormality(4)
    np.testing.assert_allclose(G, np.eye(G.shape[0]), atol=1e-13)


def _random_coefficients(rng, k_max, r):
    return {
        (k, n): (rng.normal(size=(r.size, 4)) + 1j * rng.normal(size=(r.size, 4))) * np.exp(-r)[:, None]
        for k, n in mode_indices(k_max)
    }


def test_parseval_and_round_trip(rng):
    k_max = 4
    r = np.linspace(0.5, 3.0, 5)
    grid = sphere_grid(k_max + 1)
    coeffs = _random_coefficients(rng, k_max, r)
    field = synthesize_3d(coeffs, r, grid)
    back = decompose_3d(field, k_max, r, grid)
    for key in coeffs:
        np.testing.assert_allclose(back[key], coeffs[key], atol=1e-12)
    # sphere-wise Parseval: r^2 int |f(r w)|^2 dw = sum |f_k^n(r)|^2
    lhs = r**2 * np.einsum("tp,rtpi->r", grid.weights, np.abs(field) ** 2)
    rhs = sum(np.sum(np.abs(c) ** 2, axis=1) for c in coeffs.values())
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12)


def test_decompose_callable_and_errors(rng):
    r = np.array([1.0, 2.0])
    const = rng.normal(size=4)
    coeffs = decompose_3d(lambda xi: np.broadcast_to(const, xi.shape[:-1] + (4,)), 2, r)
    # a constant field lives in the k = 0 modes only
    mass = {key: float(np.sum(np.abs(v) ** 2)) for key, v in coeffs.items()}
    assert sum(v for (k, _), v in mass.items() if k > 0) < 1e-24
    assert math.isclose(sum(mass.values()), float(np.sum(r**2)) * 4 * math.pi * float(const @ const), rel_tol=1e-12)
    bad = lambda xi: np.full(xi.shape[:-1] + (4,), np.nan)
    with pytest.raises(QuadratureFailure):
        decompose_3d(bad, 1, r)
    with pytest.raises(ValueError):
        decompose_3d(np.zeros((2, 3, 3, 4)), 1, r)


def test_coefficients_csv(tmp_path, rng):
    r = np.array([1.0, 2.0])
    coeffs = _random_coefficients(rng, 1, r)
    path = tmp_path / "c.csv"
    coefficients_to_csv(coeffs, r, path)
    rows = list(csv.reader(path.open()))
    assert rows[0][:3] == ["k", "n", "r"] and len(rows[0]) == 11
    assert len(rows) == 1 + len(coeffs) * r.size
    assert complex(float(rows[1][3]), float(rows[1][4])) == coeffs[(0, -1)][0, 0]
