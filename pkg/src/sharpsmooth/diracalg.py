"""Dirac matrices for d = 2, 3 and the finite-dimensional blocks of the smoothing form.

Every matrix used here is ``c I + (scaled involution)``, so eigen-decompositions
are written down in closed form rather than delegated to a general solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SIGMA0",
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
    "DegenerateSymbolError",
    "GammaSet",
    "EigenStructure",
    "gamma_set",
    "symbol",
    "propagator",
    "pm_projection",
    "mass_coupling",
    "dirac_Lambda_matrix",
    "assembled_Lambda_matrix",
    "extremiser_space",
]

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


class DegenerateSymbolError(ValueError):
    """``phi_m(|xi|) = 0``: the +/- spectral split is undefined."""


@dataclass(frozen=True)
class GammaSet:
    d: int
    alphas: tuple
    beta: np.ndarray

    @property
    def N(self) -> int:
        return self.beta.shape[0]

    def all_matrices(self) -> list[np.ndarray]:
        """``alpha_1, ..., alpha_d, alpha_{d+1} = beta``."""
        return list(self.alphas) + [self.beta]

    def conjugated(self, U: np.ndarray) -> "GammaSet":
        """The set ``U^{-1} alpha_j U``; satisfies the same relations for unitary ``U``."""
        Uinv = np.linalg.inv(U)
        return GammaSet(self.d, tuple(Uinv @ a @ U for a in self.alphas), Uinv @ self.beta @ U)

    def anticommutator_residual(self) -> float:
        mats = self.all_matrices()
        eye = np.eye(self.N)
        worst = 0.0
        for j, a in enumerate(mats):
            worst = max(worst, np.max(np.abs(a - a.conj().T)))
            for l, b in enumerate(mats):
                target = 2.0 * eye if j == l else 0.0 * eye
                worst = max(worst, np.max(np.abs(a @ b + b @ a - target)))
        return float(worst)


@dataclass(frozen=True)
class EigenStructure:
    max_eigenvalue: float
    max_eigenspace_basis: np.ndarray  # columns
    full_spectrum: np.ndarray


def gamma_set(d: int) -> GammaSet:
    """d=2: ``(sigma_1, sigma_2; beta = sigma_3)``; d=3: ``alpha_j = sigma_1 (x) sigma_j``, ``beta = sigma_3 (x) I``."""
    if d == 2:
        return GammaSet(2, (SIGMA1, SIGMA2), SIGMA3)
    if d == 3:
        alphas = tuple(np.kron(SIGMA1, s) for s in (SIGMA1, SIGMA2, SIGMA3))
        return GammaSet(3, alphas, np.kron(SIGMA3, SIGMA0))
    raise ValueError(f"gamma matrices are provided for d = 2, 3 only, got d={d}")


def symbol(gs: GammaSet, xi, m: float) -> np.ndarray:
    """``A_xi = alpha . xi + m beta``."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (gs.d,):
        raise ValueError(f"xi must have shape ({gs.d},)")
    out = m * gs.beta
    for a, x in zip(gs.alphas, xi):
        out = out + x * a
    return out


def propagator(gs: GammaSet, xi, m: float, t: float) -> np.ndarray:
    """``exp(-i t A_xi) = cos(t phi) I - i sin(t phi)/phi A_xi`` with ``phi = (|xi|^2+m^2)^{1/2}``."""
    A = symbol(gs, xi, m)
    phi = math.sqrt(float(np.dot(xi, xi)) + m * m)
    # sin(t phi)/phi -> t as phi -> 0
    s_over_phi = t * np.sinc(t * phi / math.pi)
    return math.cos(t * phi) * np.eye(gs.N) - 1j * s_over_phi * A


def pm_projection(gs: GammaSet, value, xi, m: float):
    """Split ``value`` into the ``+phi_m`` and ``-phi_m`` eigencomponents of ``A_xi``."""
    value = np.asarray(value, dtype=complex)
    phi = math.sqrt(float(np.dot(xi, xi)) + m * m)
    if phi == 0.0:
        raise DegenerateSymbolError("phi_m(|xi|) = 0 at xi = 0, m = 0")
    Af = symbol(gs, xi, m) @ value / phi
    return 0.5 * (value + Af), 0.5 * (value - Af)


def mass_coupling(d: int, m: float, r: float) -> np.ndarray:
    """``m sigma_3 + r sigma_1`` (d=2) or ``m sigma_3 (x) I + r sigma_1 (x) sigma_3`` (d=3)."""
    if d == 2:
        return m * SIGMA3 + r * SIGMA1
    if d == 3:
        return m * np.kron(SIGMA3, SIGMA0) + r * np.kron(SIGMA1, SIGMA3)
    raise ValueError(f"unsupported dimension d={d}")


def _check(lk, lk1, m, r):
    if lk < 0 or lk1 < 0:
        raise ValueError("lambda values must be nonnegative")
    if m < 0 or r <= 0:
        raise ValueError("need m >= 0 and r > 0")


def dirac_Lambda_matrix(d: int, lk: float, lk1: float, m: float, r: float) -> np.ndarray:
    """``(lk+lk1)/2 I + m/(2 phi^2) (lk-lk1) X`` with ``X`` from :func:`mass_coupling`."""
    _check(lk, lk1, m, r)
    X = mass_coupling(d, m, r)
    phi2 = r * r + m * m
    return 0.5 * (lk + lk1) * np.eye(X.shape[0]) + m / (2.0 * phi2) * (lk - lk1) * X


def assembled_Lambda_matrix(d: int, lk: float, lk1: float, m: float, r: float) -> np.ndarray:
    """Same block assembled from the +/- projections acting on ``diag(lk, lk1)``.

    ``(P_+ L P_+ + P_- L P_-)`` with ``P_pm = (I pm Y/phi)/2`` and
    ``Y = m sigma_3 + r sigma_1`` (d=2) or ``m sigma_3 (x) sigma_3 + r sigma_1 (x) I``
    (d=3), ``L = diag(lk, lk1)`` (tensored with ``I`` for d=3).
    """
    _check(lk, lk1, m, r)
    L = np.diag([lk, lk1]).astype(complex)
    if d == 2:
        Y = m * SIGMA3 + r * SIGMA1
    elif d == 3:
        Y = m * np.kron(SIGMA3, SIGMA3) + r * np.kron(SIGMA1, SIGMA0)
        L = np.kron(L, SIGMA0)
    else:
        raise ValueError(f"unsupported dimension d={d}")
    phi = math.sqrt(r * r + m * m)
    eye = np.eye(Y.shape[0])
    Pp, Pm = 0.5 * (eye + Y / phi), 0.5 * (eye - Y / phi)
    return Pp @ L @ Pp + Pm @ L @ Pm


def _pm_vectors(m: float, r: float, phi: float, sign_r: float):
    """Unit eigenvectors of ``m sigma_3 + sign_r r sigma_1`` for ``+phi`` and ``-phi``."""
    up = np.array([m + phi, sign_r * r], dtype=complex)
    down = np.array([-sign_r * r, m + phi], dtype=complex)
    return up / np.linalg.norm(up), down / np.linalg.norm(down)


def extremiser_space(d: int, lk: float, lk1: float, m: float, r: float) -> EigenStructure:
    """Top eigenvalue of the block and its eigenspace ``W_k(r)`` (orthonormal columns)."""
    _check(lk, lk1, m, r)
    phi = math.sqrt(r * r + m * m)
    mean = 0.5 * (lk + lk1)
    gap = m / (2.0 * phi) * abs(lk - lk1)
    N = 2 if d == 2 else 4
    if d not in (2, 3):
        raise ValueError(f"unsupported dimension d={d}")
    top = mean + gap
    half = N // 2
    spectrum = np.array([mean - gap] * half + [mean + gap] * half)
    coupling = m * (lk - lk1)
    if coupling == 0.0:
        return EigenStructure(top, np.eye(N, dtype=complex), np.full(N, mean))
    want_plus = coupling > 0
    if d == 2:
        up, down = _pm_vectors(m, r, phi, 1.0)
        basis = (up if want_plus else down)[:, None]
    else:
        cols = []
        # X (a (x) e_s) = (m sigma_3 + s r sigma_1) a (x) e_s for sigma_3 e_s = s e_s
        for s, e in ((1.0, np.array([1, 0], dtype=complex)), (-1.0, np.array([0, 1], dtype=complex))):
            up, down = _pm_vectors(m, r, phi, s)
            cols.append(np.kron(up if want_plus else down, e))
        basis = np.stack(cols, axis=1)
    return EigenStructure(top, basis, spectrum)
