"""Identity suites shared by ``sharpsmooth verify`` and the test-suite.

Each suite returns a list of :class:`Check` records holding the worst residual
observed and the tolerance it is held to.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .curves import dirac_combine
from .diracalg import (
    SIGMA0,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    assembled_Lambda_matrix,
    dirac_Lambda_matrix,
    extremiser_space,
    gamma_set,
)
from .harmonics import (
    active_projector,
    coupling_matrix,
    coupling_triple,
    harmonic_block,
    matrix_harmonic_2d,
    matrix_harmonic_3d,
)
from .oracle import funk_hecke_residual
from .problem import ProblemSpec
from .specialfn import gegenbauer, legendre_d, legendre_rodrigues, spherical_harmonic

__all__ = ["Check", "SUITES", "run_suite", "random_unitary"]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def _rel(lhs, rhs, *terms) -> float:
    """Residual relative to the largest term of the identity (at least 1)."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    for t in terms:
        scale = np.maximum(scale, np.abs(t))
    return float(np.max(np.abs(lhs - rhs) / scale))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# ---------------------------------------------------------------- specialfn


def specialfn_suite(rng: np.random.Generator) -> list[Check]:
    x = rng.uniform(-1.0, 1.0, 64)
    g1 = g2 = g3 = 0.0
    for p in (0.5, 1.0, 1.5, 2.5, 3.25):
        for n in range(1, 25):
            # (n+p) C_n^p = p (C_n^{p+1} - C_{n-2}^{p+1})
            prev2 = gegenbauer(p + 1, n - 2, x) if n >= 1 else 0.0
            g1 = max(g1, _rel((n + p) * gegenbauer(p, n, x), p * (gegenbauer(p + 1, n, x) - prev2)))
            # 4p(n+p)(1-x^2) C_{n-1}^{p+1} = (n+2p-1)(n+2p) C_{n-1}^p - n(n+1) C_{n+1}^p
            lhs = 4 * p * (n + p) * (1 - x * x) * gegenbauer(p + 1, n - 1, x)
            a = (n + 2 * p - 1) * (n + 2 * p) * gegenbauer(p, n - 1, x)
            b = n * (n + 1) * gegenbauer(p, n + 1, x)
            g2 = max(g2, _rel(lhs, a - b, a, b))
            # 2(n+p) x C_n^p = (n+1) C_{n+1}^p + (n+2p-1) C_{n-1}^p
            lhs = 2 * (n + p) * x * gegenbauer(p, n, x)
            rhs = (n + 1) * gegenbauer(p, n + 1, x) + (n + 2 * p - 1) * gegenbauer(p, n - 1, x)
            g3 = max(g3, _rel(lhs, rhs))
    rod = one = 0.0
    t = rng.uniform(-1.0, 1.0, 32)
    for d in range(2, 7):
        for k in range(0, 9):
            rod = max(rod, _rel(legendre_d(d, k, t), legendre_rodrigues(d, k, t)))
            one = max(one, abs(float(legendre_d(d, k, 1.0)) - 1.0))
    # orthonormality of Y_k^n, k <= 6, on an exact product rule
    xg, wg = np.polynomial.legendre.leggauss(16)
    n_phi = 32
    th, ph = np.meshgrid(np.arccos(xg), 2 * math.pi * np.arange(n_phi) / n_phi, indexing="ij")
    w = np.outer(wg, np.full(n_phi, 2 * math.pi / n_phi))
    idx = [(k, n) for k in range(7) for n in range(-k, k + 1)]
    Y = np.array([spherical_harmonic(k, n, th, ph) for k, n in idx]).reshape(len(idx), -1)
    gram = (Y.conj() * w.reshape(-1)) @ Y.T
    ortho = float(np.max(np.abs(gram - np.eye(len(idx)))))
    return [
        Check("specialfn", "gegenbauer_parameter_shift", g1, 1e-10),
        Check("specialfn", "gegenbauer_derivative_relation", g2, 1e-10),
        Check("specialfn", "gegenbauer_three_term", g3, 1e-10),
        Check("specialfn", "legendre_rodrigues_agreement", rod, 1e-10),
        Check("specialfn", "legendre_unit_at_one", one, 1e-12),
        Check("specialfn", "harmonic_orthonormality", ortho, 1e-12),
    ]


# ---------------------------------------------------------------- harmonics


def _sigma_dot(theta, phi):
    return (
        SIGMA1 * (np.sin(theta) * np.cos(phi))[..., None, None]
        + SIGMA2 * (np.sin(theta) * np.sin(phi))[..., None, None]
        + SIGMA3 * np.cos(theta)[..., None, None]
    )


def harmonics_suite(rng: np.random.Generator, k_max: int = 30, k_angles: int = 10, n_angles: int = 100) -> list[Check]:
    eye = np.eye(2)
    l2 = l3 = l4 = 0.0
    c_norm = c_orth = c_ker = c_img = 0.0
    for k in range(k_max + 1):
        for n in range(-k - 1, k + 1):
            A = coupling_matrix(k, n)
            l2 = max(l2, float(np.max(np.abs(coupling_matrix(k + 1, n) @ A))))
            l4 = max(l4, abs(float(np.linalg.det(A))))
            lhs = A.T @ A
            if -k <= n <= k - 1:
                prev = coupling_matrix(k - 1, n)
                lhs = lhs + prev @ prev.T
            P = active_projector(k, n)
            l3 = max(l3, float(np.max(np.abs((lhs - eye) @ P))))
            tri = coupling_triple(k, n)
            u, v = tri.u, tri.v
            u1 = coupling_triple(k + 1, n).u
            c_norm = max(c_norm, abs(np.linalg.norm(u) - 1), abs(np.linalg.norm(v) - 1))
            c_orth = max(c_orth, abs(np.vdot(u, v)))
            ker = np.max(np.abs(A @ u))
            if -k <= n <= k - 1:
                ker = max(ker, np.max(np.abs(coupling_matrix(k - 1, n).T @ v)))
            c_ker = max(c_ker, float(ker))
            img = max(
                np.max(np.abs(A @ v - u1)),
                np.max(np.abs(A @ A.T @ u1 - u1)),
                np.max(np.abs(A.T @ A @ v - v)),
            )
            c_img = max(c_img, float(img))

    theta = np.arccos(rng.uniform(-1.0, 1.0, n_angles))
    phi = rng.uniform(0.0, 2.0 * math.pi, n_angles)
    sd = _sigma_dot(theta, phi)
    gs = gamma_set(3)
    adot = sum(a * c[:, None, None] for a, c in zip(gs.alphas, (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))))
    s1i = np.kron(SIGMA1, SIGMA0)
    s33 = np.kron(SIGMA3, SIGMA3)
    l1 = ia = ib = 0.0
    for k in range(k_angles + 1):
        for n in range(-k - 1, k + 1):
            rhs = harmonic_block(k + 1, n, theta, phi) @ coupling_matrix(k, n)
            if -k <= n <= k - 1:
                rhs = rhs + harmonic_block(k - 1, n, theta, phi) @ coupling_matrix(k - 1, n).T
            l1 = max(l1, float(np.max(np.abs(sd @ harmonic_block(k, n, theta, phi) - rhs))))
            E = matrix_harmonic_3d(k, n, theta, phi).E
            ia = max(ia, float(np.max(np.abs(adot @ E - E @ s1i))))
            ib = max(ib, float(np.max(np.abs(gs.beta @ E - E @ s33))))
    i2 = 0.0
    rot = SIGMA1 * np.cos(theta)[:, None, None] + SIGMA2 * np.sin(theta)[:, None, None]
    for k in range(-k_angles - 1, k_angles + 1):
        E = matrix_harmonic_2d(k, theta)
        i2 = max(i2, float(np.max(np.abs(rot @ E - E @ SIGMA1))))
    return [
        Check("harmonics", "coupling_expansion", l1, 1e-10),
        Check("harmonics", "coupling_nilpotent", l2, 1e-12),
        Check("harmonics", "coupling_resolution_of_identity", l3, 1e-12),
        Check("harmonics", "coupling_singular", l4, 1e-12),
        Check("harmonics", "basis_unit_length", c_norm, 1e-12),
        Check("harmonics", "basis_orthogonal", c_orth, 1e-12),
        Check("harmonics", "basis_kernels", c_ker, 1e-12),
        Check("harmonics", "basis_images", c_img, 1e-12),
        Check("harmonics", "alpha_intertwining_3d", ia, 1e-10),
        Check("harmonics", "beta_intertwining_3d", ib, 1e-10),
        Check("harmonics", "sigma_intertwining_2d", i2, 1e-10),
    ]


# ---------------------------------------------------------------- algebra


def algebra_suite(rng: np.random.Generator, draws: int = 1000) -> list[Check]:
    anti = max(gamma_set(d).anticommutator_residual() for d in (2, 3))
    conj = max(gamma_set(d).conjugated(random_unitary(gamma_set(d).N, rng)).anticommutator_residual() for d in (2, 3))
    eig = vec = asm = 0.0
    for _ in range(draws):
        m = float(rng.uniform(0.0, 3.0))
        r = float(rng.uniform(1e-3, 10.0))
        lk, lk1 = (float(x) for x in rng.uniform(0.0, 5.0, 2))
        expected = float(dirac_combine(lk, lk1, m, r))
        for d in (2, 3):
            M = dirac_Lambda_matrix(d, lk, lk1, m, r)
            top = float(np.linalg.eigvalsh(M)[-1])
            es = extremiser_space(d, lk, lk1, m, r)
            eig = max(eig, abs(top - expected) / max(abs(expected), 1e-300), abs(es.max_eigenvalue - expected) / expected)
            B = es.max_eigenspace_basis
            vec = max(vec, float(np.max(np.abs(M @ B - es.max_eigenvalue * B))) / expected)
            asm = max(asm, float(np.max(np.abs(M - assembled_Lambda_matrix(d, lk, lk1, m, r)))) / expected)
    return [
        Check("algebra", "anticommutation", anti, 1e-14),
        Check("algebra", "anticommutation_conjugated", conj, 1e-13),
        Check("algebra", "top_eigenvalue_formula", eig, 1e-12),
        Check("algebra", "extremiser_eigenvectors", vec, 1e-12),
        Check("algebra", "assembled_block_agreement", asm, 1e-12),
    ]


# ---------------------------------------------------------------- Funk-Hecke


def funk_hecke_suite(rng: np.random.Generator, k_max: int = 6, n_omega: int = 20) -> list[Check]:
    kernels = {
        "exp": lambda t: np.exp(2.0 * t),
        "rational": lambda t: 1.0 / (2.5 - t),
    }
    out = []
    for name, F in kernels.items():
        worst = 0.0
        for _ in range(n_omega):
            omega = rng.normal(size=3)
            for k in range(k_max + 1):
                for n in range(-k, k + 1):
                    worst = max(worst, funk_hecke_residual(F, k, n, omega))
        out.append(Check("funk-hecke", f"funk_hecke_{name}", worst, 1e-8))
    return out


# ---------------------------------------------------------------- equivalence


def equivalence_suite(rng: np.random.Generator) -> list[Check]:
    from .optimum import dirac_constant, equivalence_check, type_b_ck

    out = []
    cases = [(2, "B", 1.5, 0.0), (2, "B", 1.5, 1.0), (3, "B", 2.0, 0.0), (3, "B", 2.0, 1.0), (3, "C", 2.0, 1.0), (2, "C", 2.0, 1.0)]
    for d, fam, s, m in cases:
        rep = equivalence_check(ProblemSpec.dirac(d, fam, s, m), method="numeric")
        slack = max(0.0, 0.5 * rep.upper - rep.dirac, rep.dirac - rep.upper) - rep.tolerance
        out.append(Check("equivalence", f"sandwich_d{d}_{fam}_s{s:g}_m{m:g}", max(slack, 0.0), 0.0))
        out.append(
            Check("equivalence", f"reduction_d{d}_{fam}_s{s:g}_m{m:g}", abs(rep.upper - rep.upper_via_reduction) / rep.upper, 1e-3)
        )
    for d in (2, 3):
        s = 1.5 if d == 2 else 2.0
        rep = dirac_constant(ProblemSpec.dirac(d, "B", s, 1.0), method="numeric")
        upper = type_b_ck(d, s, 0)
        out.append(Check("equivalence", f"upper_attained_d{d}_B_m1", abs(rep.value - upper) / upper, 1e-6))
        s_edge = d - 1e-3
        rep = equivalence_check(ProblemSpec.dirac(d, "B", s_edge, 0.0))
        out.append(Check("equivalence", f"lower_sharp_d{d}_B_m0", abs(rep.ratio_to_reduced - 1.0), 1e-2))
    return out


SUITES = {
    "specialfn": specialfn_suite,
    "harmonics": harmonics_suite,
    "algebra": algebra_suite,
    "funk-hecke": funk_hecke_suite,
    "equivalence": equivalence_suite,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    """Run one suite (or ``all``) with a fixed seed."""
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise ValueError(f"unknown suite {n!r}")
        out.extend(SUITES[n](np.random.default_rng(seed)))
    return out
