"""Angular bases for the Dirac smoothing problem.

2D: diagonal harmonics ``E_k(theta)``.  3D: coupling matrices ``A_k^n``, the
kernel/image pair ``(u_k^n, v_k^n)``, the 4x4 matrix harmonics ``E_k^n`` and
decomposition/synthesis of C^4-valued fields on spheres.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .diracalg import SIGMA1, SIGMA2, SIGMA3
from .specialfn import normalizing_constant, spherical_harmonic

__all__ = [
    "QuadratureFailure",
    "CouplingTriple",
    "MatrixHarmonicValue",
    "SphereGrid",
    "coupling_matrix",
    "coupling_triple",
    "basis_pair",
    "matrix_harmonic_2d",
    "harmonic_block",
    "active_projector",
    "PAULI",
    "matrix_harmonic_3d",
    "sphere_grid",
    "mode_indices",
    "decompose_3d",
    "synthesize_3d",
    "coefficients_to_csv",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class QuadratureFailure(RuntimeError):
    """Sampled field was not finite on the quadrature grid."""


def _check_index(k: int, n: int) -> None:
    if k < 0 or not (-k - 1 <= n <= k):
        raise IndexError(f"index out of range: need k >= 0 and -k-1 <= n <= k, got k={k}, n={n}")


def _ratio(prefactor: float, k_num: int, n_num: int, k_den: int, n_den: int) -> float:
    """``prefactor * N_{k_num}^{n_num} / N_{k_den}^{n_den}``, zero when the prefactor is."""
    if prefactor == 0:
        return 0.0
    return prefactor * normalizing_constant(k_num, n_num) / normalizing_constant(k_den, n_den)


@lru_cache(maxsize=None)
def _coupling(k: int, n: int) -> tuple:
    if n < 0:
        # A_k^n = -sigma_1 A_k^{-(n+1)} sigma_1
        (a, b), (c, d) = _coupling(k, -(n + 1))
        return ((-d, -c), (-b, -a))
    q = 2 * k + 1
    a = _ratio((k - n + 1) / q, k, n, k + 1, n)
    b = _ratio((k - n) * (k - n + 1) / ((2 * n + 1) * q), k, n + 1, k + 1, n)
    c = _ratio(-(2 * n + 1) / q, k, n, k + 1, n + 1)
    d = _ratio(-(k - n) / q, k, n + 1, k + 1, n + 1)
    return ((a, b), (c, d))


def coupling_matrix(k: int, n: int) -> np.ndarray:
    """Real 2x2 matrix ``A_k^n`` for ``k >= 0``, ``-k-1 <= n <= k``."""
    _check_index(k, n)
    return np.array(_coupling(k, n), dtype=float)


def _kernel_vector(A: np.ndarray) -> np.ndarray:
    """Unit vector spanning ``ker A`` for a rank-one 2x2 ``A``; first nonzero entry positive."""
    rows = np.abs(A).sum(axis=1)
    a1, a2 = A[int(np.argmax(rows))]
    vec = np.array([-a2, a1], dtype=float)
    norm = math.hypot(vec[0], vec[1])
    if norm == 0.0:
        vec, norm = np.array([1.0, 0.0]), 1.0
    vec = vec / norm
    lead = vec[0] if abs(vec[0]) > 1e-15 else vec[1]
    return (vec if lead > 0 else -vec).astype(complex)


@dataclass(frozen=True)
class CouplingTriple:
    k: int
    n: int
    A: np.ndarray
    u: np.ndarray
    v: np.ndarray


@lru_cache(maxsize=None)
def _triple(k: int, n: int) -> CouplingTriple:
    A = coupling_matrix(k, n)
    u = _kernel_vector(A)
    u_next = _kernel_vector(coupling_matrix(k + 1, n))
    v = A.T @ u_next
    for arr in (A, u, v):
        arr.setflags(write=False)
    return CouplingTriple(k, n, A, u, v)


def coupling_triple(k: int, n: int) -> CouplingTriple:
    """Memoized ``(A_k^n, u_k^n, v_k^n)``; the arrays are read-only."""
    _check_index(k, n)
    return _triple(k, n)


def basis_pair(k: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``u_k^n`` spanning ``ker A_k^n`` and ``v_k^n = (A_k^n)^T u_{k+1}^n``."""
    t = coupling_triple(k, n)
    return t.u.copy(), t.v.copy()


def matrix_harmonic_2d(k: int, theta) -> np.ndarray:
    """``diag(e^{ik theta}, e^{i(k+1) theta}) / sqrt(2 pi)``; shape ``(..., 2, 2)``."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * k * theta)
    out[..., 1, 1] = np.exp(1j * (k + 1) * theta)
    return out / _SQRT_2PI


def _scalar_y(k: int, n: int, theta, phi):
    if k < 0 or abs(n) > k:
        return np.zeros(np.broadcast(np.asarray(theta), np.asarray(phi)).shape, dtype=complex)
    return np.asarray(spherical_harmonic(k, n, theta, phi), dtype=complex)


def harmonic_block(k: int, n: int, theta, phi) -> np.ndarray:
    """``diag(Y_k^n, Y_k^{n+1})`` with out-of-range orders set to zero; shape ``(..., 2, 2)``."""
    y0 = _scalar_y(k, n, theta, phi)
    y1 = _scalar_y(k, n + 1, theta, phi)
    out = np.zeros(y0.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = y0
    out[..., 1, 1] = y1
    return out


def active_projector(k: int, n: int) -> np.ndarray:
    """``diag`` of indicators of the orders of ``harmonic_block(k, n)`` that are in range.

    Identities for ``A_k^n`` hold after multiplication by ``harmonic_block``; at the
    edge orders ``n = k`` and ``n = -k-1`` one component vanishes identically.
    """
    return np.diag([float(abs(n) <= k), float(abs(n + 1) <= k)])


@dataclass(frozen=True)
class MatrixHarmonicValue:
    E: np.ndarray


def _harmonic_array(k: int, n: int, theta, phi) -> np.ndarray:
    t = coupling_triple(k, n)
    u_next = coupling_triple(k + 1, n).u
    top = harmonic_block(k, n, theta, phi) @ t.v
    bottom = harmonic_block(k + 1, n, theta, phi) @ u_next
    E = np.zeros(top.shape[:-1] + (4, 4), dtype=complex)
    E[..., 0:2, 0] = top
    E[..., 2:4, 1] = top
    E[..., 2:4, 2] = bottom
    E[..., 0:2, 3] = bottom
    return E


def matrix_harmonic_3d(k: int, n: int, theta, phi) -> MatrixHarmonicValue:
    """4x4 ``E_k^n(theta, phi)``; broadcasts over angle arrays into ``(..., 4, 4)``."""
    _check_index(k, n)
    return MatrixHarmonicValue(_harmonic_array(k, n, theta, phi))


@dataclass(frozen=True)
class SphereGrid:
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray  # (n_theta, n_phi), sum = 4 pi

    @property
    def mesh(self):
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def directions(self) -> np.ndarray:
        th, ph = self.mesh
        return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)


def sphere_grid(k_max: int) -> SphereGrid:
    """Gauss-Legendre in ``cos theta`` (order ``2k_max+2``) times trapezoid in ``phi`` (``4k_max+4``)."""
    x, w = np.polynomial.legendre.leggauss(2 * k_max + 2)
    n_phi = 4 * k_max + 4
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    return SphereGrid(np.arccos(x), phi, np.outer(w, np.full(n_phi, 2.0 * math.pi / n_phi)))


def mode_indices(k_max: int):
    """All ``(k, n)`` with ``0 <= k <= k_max`` and ``-k-1 <= n <= k``."""
    return [(k, n) for k in range(k_max + 1) for n in range(-k - 1, k + 1)]


def _sample(f, grid: SphereGrid, r_grid: np.ndarray) -> np.ndarray:
    if callable(f):
        xi = r_grid[:, None, None, None] * grid.directions()[None]
        values = np.asarray(f(xi), dtype=complex)
    else:
        values = np.asarray(f, dtype=complex)
    expected = (r_grid.size, grid.theta.size, grid.phi.size, 4)
    if values.shape != expected:
        raise ValueError(f"sampled field has shape {values.shape}, expected {expected}")
    if not np.all(np.isfinite(values)):
        raise QuadratureFailure("field is not finite on the quadrature grid")
    return values


def decompose_3d(f, k_max: int, r_grid, grid: SphereGrid | None = None) -> dict:
    """Coefficients ``f_k^n(r) = r * int_{S^2} E_k^n(omega)^* f(r omega) d sigma``.

    ``f`` is either a callable taking points of shape ``(..., 3)`` and returning
    ``(..., 4)``, or an array already sampled on ``(r, theta, phi)`` of ``grid``.
    Returns ``{(k, n): array of shape (len(r_grid), 4)}``.  The grid must resolve
    degree ``k_max + 1``; the default does.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    grid = grid or sphere_grid(k_max + 1)
    values = _sample(f, grid, r_grid)
    th, ph = grid.mesh
    out = {}
    for k, n in mode_indices(k_max):
        E = _harmonic_array(k, n, th, ph)
        proj = np.einsum("tp,tpij,rtpi->rj", grid.weights, E.conj(), values)
        out[(k, n)] = r_grid[:, None] * proj
    return out


def synthesize_3d(coefficients: dict, r_grid, grid: SphereGrid) -> np.ndarray:
    """``f(r omega) = r^{-1} sum E_k^n(omega) f_k^n(r)`` sampled on ``(r, theta, phi)``."""
    r_grid = np.asarray(r_grid, dtype=float)
    th, ph = grid.mesh
    out = np.zeros((r_grid.size, th.shape[0], th.shape[1], 4), dtype=complex)
    for (k, n), coeff in coefficients.items():
        coeff = np.asarray(coeff, dtype=complex).reshape(r_grid.size, 4)
        E = _harmonic_array(k, n, th, ph)
        out += np.einsum("tpij,rj->rtpi", E, coeff)
    return out / r_grid[:, None, None, None]


def coefficients_to_csv(coefficients: dict, r_grid, path) -> None:
    """Rows ``k, n, r`` followed by real and imaginary parts of the four components."""
    r_grid = np.asarray(r_grid, dtype=float)
    header = ["k", "n", "r"] + [f"{part}{j}" for j in range(4) for part in ("re", "im")]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for (k, n) in sorted(coefficients):
            coeff = np.asarray(coefficients[(k, n)]).reshape(r_grid.size, 4)
            for r, row in zip(r_grid, coeff):
                flat = [x for c in row for x in (c.real, c.imag)]
                writer.writerow([k, n, repr(float(r))] + [repr(float(x)) for x in flat])


# Pauli vector used by the sigma.omega identities in tests and the oracle.
PAULI = (SIGMA1, SIGMA2, SIGMA3)
