"""Brute-force cross-checks of the spectral formula for the Dirac smoothing norm.

``norm_spectral`` evaluates ``2 pi sum int <Lambda f_k, f_k> dr`` from the lambda
curves.  ``norm_direct`` never touches them: it propagates a single-mode datum
with the closed-form matrix exponential, Fourier-transforms it through the
plane-wave expansion and integrates ``w |S f|^2`` over a space-time box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable

import numpy as np
from scipy import special

from .curves import lambda_table, mu_k
from .diracalg import SIGMA0, SIGMA1, SIGMA3, assembled_Lambda_matrix, extremiser_space
from .harmonics import QuadratureFailure, coupling_triple, sphere_grid
from .problem import DispersionSpec, ProblemSpec, SmoothingSpec, WeightSpec, weight_profile
from .specialfn import spherical_harmonic

__all__ = [
    "TruncationNotConverged",
    "InequalityViolation",
    "ModeInput",
    "TruncationBox",
    "DirectResult",
    "InequalitySample",
    "Scenario",
    "gaussian_bump",
    "oracle_spec",
    "mode_coupling",
    "funk_hecke_residual",
    "profile_norm",
    "norm_spectral",
    "norm_direct",
    "aligned_profile",
    "inequality_sample",
    "parse_scenario",
    "load_scenario",
    "bundled_scenarios",
    "run_scenario",
    "with_box",
]


class TruncationNotConverged(RuntimeError):
    """Doubling the space or time cutoff moved the result beyond the budget."""


class InequalityViolation(AssertionError):
    """A computed ratio exceeded the sharp bound."""


@dataclass(frozen=True)
class ModeInput:
    """Single angular mode ``f = r^{-(d-1)/2} E(omega) f_k(r)`` on the Fourier side.

    ``mode`` is ``k`` for d = 2 and ``(k, n)`` for d = 3; ``profile(r)`` returns
    an array of shape ``(len(r), N)`` with ``N = 2`` or ``4``.
    """

    d: int
    mode: int | tuple
    profile: Callable
    support: tuple
    m: float = 0.0

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("mode inputs are defined for d = 2, 3")
        r0, r1 = self.support
        if not 0 < r0 < r1:
            raise ValueError("support must satisfy 0 < r0 < r1")
        if self.d == 3:
            k, n = self.mode
            coupling_triple(k, n)

    @property
    def N(self) -> int:
        return 2 if self.d == 2 else 4

    @property
    def k(self) -> int:
        return self.mode if self.d == 2 else self.mode[0]

    def values(self, r) -> np.ndarray:
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.asarray(self.profile(r), dtype=complex).reshape(r.size, self.N)
        return np.where(((r >= self.support[0]) & (r <= self.support[1]))[:, None], out, 0.0)


@dataclass(frozen=True)
class TruncationBox:
    X: float = 7.0
    T: float = 20.0
    n_x: int = 80
    dt: float = 0.1
    n_xi: int = 256
    budget: float = 0.02

    def __post_init__(self):
        for name in ("X", "T", "n_x", "dt", "n_xi", "budget"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def n_t(self) -> int:
        return int(round(2.0 * self.T / self.dt)) + 1


def gaussian_bump(center: float, width: float, vector, cut: float = 6.0) -> tuple[Callable, tuple]:
    """Profile ``exp(-(r-c)^2/(2 w^2)) v`` and its truncated support ``[c - 6w, c + 6w]``."""
    vec = np.asarray(vector, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    lo, hi = center - cut * width, center + cut * width
    if lo <= 0:
        raise ValueError("bump support must stay in r > 0")

    def profile(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-0.5 * ((r - center) / width) ** 2)[:, None] * vec[None, :]

    return profile, (lo, hi)


def oracle_spec(d: int, m: float, weight: WeightSpec | None = None, smoothing: SmoothingSpec | None = None) -> ProblemSpec:
    """Gaussian weight, ``psi = 1`` and the relativistic dispersion unless overridden."""
    return ProblemSpec(
        d,
        weight or WeightSpec("gaussian"),
        smoothing or SmoothingSpec("one"),
        DispersionSpec("relativistic", m),
    )


def mode_coupling(d: int, m: float, r) -> np.ndarray:
    """Matrix of ``A_xi`` in the mode basis: ``r sigma_1 + m sigma_3`` or its 4x4 analogue."""
    r = np.asarray(r, dtype=float)
    if d == 2:
        base = [SIGMA1, SIGMA3]
    else:
        base = [np.kron(SIGMA1, SIGMA0), np.kron(SIGMA3, SIGMA3)]
    return r[..., None, None] * base[0] + m * base[1]


def _lambda_pair(spec: ProblemSpec, k: int, r) -> tuple[np.ndarray, np.ndarray]:
    a, b = (abs(k), abs(k + 1)) if k < 0 else (k, k + 1)
    vals, _ = lambda_table(spec, max(a, b), r)
    return vals[a], vals[b]


def _radial_rule(support, n):
    x, w = np.polynomial.legendre.leggauss(n)
    a, b = support
    return a + 0.5 * (b - a) * (x + 1.0), 0.5 * (b - a) * w


def profile_norm(inp: ModeInput, n_r: int = 200) -> float:
    """``||f||^2 = int |f_k(r)|^2 dr``."""
    r, w = _radial_rule(inp.support, n_r)
    return float(np.sum(w * np.sum(np.abs(inp.values(r)) ** 2, axis=1)))


def norm_spectral(inputs, spec: ProblemSpec, n_r: int = 200, method: str = "split") -> float:
    """``2 pi sum_modes int (<L f^+, f^+> + <L f^-, f^->) dr`` with ``L = diag(lambda_k, lambda_{k+1})``.

    ``method="block"`` uses the assembled block matrix instead of the split;
    both are the same quadratic form.  Distinct modes are orthogonal, so a list
    of inputs contributes additively.
    """
    if isinstance(inputs, ModeInput):
        inputs = [inputs]
    total = 0.0
    for inp in inputs:
        if spec.dispersion.kind != "relativistic" or spec.m != inp.m:
            raise ValueError("spec must carry the relativistic dispersion with the input's mass")
        r, w = _radial_rule(inp.support, n_r)
        f = inp.values(r)
        if not np.all(np.isfinite(f)):
            raise QuadratureFailure("profile is not finite on the radial rule")
        lk, lk1 = _lambda_pair(spec, inp.k, r)
        if method == "split":
            phi = np.sqrt(r * r + inp.m ** 2)
            Y = mode_coupling(inp.d, inp.m, r) / phi[:, None, None]
            Yf = np.einsum("rij,rj->ri", Y, f)
            fp, fm = 0.5 * (f + Yf), 0.5 * (f - Yf)
            diag = np.stack([lk, lk1], axis=1)
            if inp.d == 3:
                diag = np.repeat(diag, 2, axis=1)
            dens = np.sum(diag * (np.abs(fp) ** 2 + np.abs(fm) ** 2), axis=1)
        elif method == "block":
            dens = np.array(
                [np.vdot(fi, assembled_Lambda_matrix(inp.d, a, b, inp.m, ri) @ fi).real for fi, a, b, ri in zip(f, lk, lk1, r)]
            )
        else:
            raise ValueError(f"unknown method {method!r}")
        total += 2.0 * math.pi * float(np.sum(w * dens))
    return total


def aligned_profile(spec: ProblemSpec, d: int, k: int, radial: Callable, column: int = 0) -> Callable:
    """Profile ``radial(r) b(r)`` with ``b(r)`` a unit vector of the top eigenspace of the block."""

    def profile(r):
        r = np.asarray(r, dtype=float)
        lk, lk1 = _lambda_pair(spec, k, r)
        out = []
        for ri, a, b in zip(r, lk, lk1):
            es = extremiser_space(d, max(a, 0.0), max(b, 0.0), spec.m, ri)
            out.append(es.max_eigenspace_basis[:, min(column, es.max_eigenspace_basis.shape[1] - 1)])
        return np.asarray(radial(r))[:, None] * np.array(out)

    return profile


@dataclass(frozen=True)
class InequalitySample:
    ratio: float
    bound: float

    @property
    def normalized(self) -> float:
        return self.ratio / self.bound


def inequality_sample(inputs, spec: ProblemSpec, lambda_star: float, rtol: float = 1e-9, n_r: int = 200) -> InequalitySample:
    """``norm_spectral(f) / ||f||^2``, checked against ``2 pi lambda_star``.

    ``lambda_star`` is the supremum of the curves themselves, i.e. the reported
    constant times ``(2 pi)^{d-1}``.
    """
    if isinstance(inputs, ModeInput):
        inputs = [inputs]
    norm2 = sum(profile_norm(inp, n_r) for inp in inputs)
    if norm2 == 0.0:
        raise ValueError("zero input")
    ratio = norm_spectral(inputs, spec, n_r) / norm2
    bound = 2.0 * math.pi * lambda_star
    if ratio > bound * (1.0 + rtol):
        raise InequalityViolation(f"ratio {ratio!r} exceeds 2 pi lambda* = {bound!r}")
    return InequalitySample(ratio, bound)


# ---------------------------------------------------------------- Funk-Hecke


def funk_hecke_residual(F: Callable, k: int, n: int, omega, d: int = 3, order: int = 40) -> float:
    """``|int F(theta . omega) Y_k^n(theta) dsigma - mu_k[F] Y_k^n(omega)|``.

    The left side uses a tensor Gauss-Legendre x trapezoid rule on ``S^2``; the
    right side uses Gauss-Jacobi in the zonal variable.
    """
    if d != 3:
        raise ValueError("the sphere quadrature oracle is implemented for d = 3")
    omega = np.asarray(omega, dtype=float)
    omega = omega / np.linalg.norm(omega)
    grid = sphere_grid(order)
    th, ph = grid.mesh
    dirs = grid.directions()
    lhs = np.sum(grid.weights * F(dirs @ omega) * spherical_harmonic(k, n, th, ph))
    theta_w = math.acos(max(-1.0, min(1.0, omega[2])))
    phi_w = math.atan2(omega[1], omega[0])
    mu, _ = mu_k(F, 3, k)
    rhs = mu * spherical_harmonic(k, n, theta_w, phi_w)
    if not (np.isfinite(lhs) and np.isfinite(rhs)):
        raise QuadratureFailure("non-finite Funk-Hecke quadrature")
    return float(abs(lhs - rhs))


# ---------------------------------------------------------------- direct quadrature


@dataclass
class DirectResult:
    value: float
    trace: dict = field(default_factory=dict)


def _rotation(seed: int | None):
    if seed is None:
        return np.eye(3)
    from scipy.spatial.transform import Rotation

    return Rotation.random(random_state=seed).as_matrix()


def _terms_2d(k: int):
    """Rows of ``E_k g``: row ``j`` is ``(2 pi)^{-1/2} e^{i l_j theta} g_j``."""
    return [[(k, 0, 1.0, 0)], [(k + 1, 0, 1.0, 1)]]


def _terms_3d(k: int, n: int):
    """Rows of ``E_k^n g`` as lists of ``(l, order, coefficient, component of g)``."""
    v = coupling_triple(k, n).v
    u = coupling_triple(k + 1, n).u
    top = [(k, n, v[0], 0), (k + 1, n, u[0], 3)], [(k, n + 1, v[1], 0), (k + 1, n + 1, u[1], 3)]
    bottom = [(k, n, v[0], 1), (k + 1, n, u[0], 2)], [(k, n + 1, v[1], 1), (k + 1, n + 1, u[1], 2)]
    rows = [*top, *bottom]
    return [[t for t in row if abs(t[1]) <= t[0] and t[2] != 0] for row in rows]


def _angular_gram(d: int, keys, seed, n_ang: int):
    """``int conj(Y_a) Y_b`` over the evaluation sphere/circle, optionally rotated."""
    if d == 2:
        n_theta = max(n_ang, 8)
        offset = 0.0 if seed is None else float(np.random.default_rng(seed).uniform(0, 2 * math.pi))
        theta = offset + 2.0 * math.pi * np.arange(n_theta) / n_theta
        w = np.full(n_theta, 2.0 * math.pi / n_theta)
        vals = np.array([np.exp(1j * l * theta) / math.sqrt(2.0 * math.pi) for (l, _) in keys])
    else:
        grid = sphere_grid(n_ang)
        dirs = grid.directions().reshape(-1, 3) @ _rotation(seed).T
        th = np.arccos(np.clip(dirs[:, 2], -1.0, 1.0))
        ph = np.arctan2(dirs[:, 1], dirs[:, 0])
        w = grid.weights.reshape(-1)
        vals = np.array([spherical_harmonic(l, nn, th, ph) for (l, nn) in keys])
    return np.einsum("ax,bx,x->ab", vals.conj(), vals, w)


def norm_direct(inp: ModeInput, spec: ProblemSpec, box: TruncationBox | None = None, rotation_seed: int | None = None) -> DirectResult:
    """``int_{|t|<2T} int_{|x|<2X} w(|x|) |S f(x, t)|^2 dx dt`` with a tail trace.

    The reported value uses the largest box; the trace records the fractions
    contributed by ``X < |x| < 2X`` and ``T < |t| < 2T``.  A fraction above
    ``box.budget`` raises :class:`TruncationNotConverged`.
    """
    box = box or TruncationBox()
    d, k, m = inp.d, inp.k, inp.m
    if spec.dispersion.kind != "relativistic" or spec.m != m:
        raise ValueError("spec must carry the relativistic dispersion with the input's mass")

    r, wr = _radial_rule(inp.support, box.n_xi)
    f = inp.values(r)
    if not np.any(f):
        return DirectResult(0.0, {"tail_x": 0.0, "tail_t": 0.0, "budget": box.budget})
    psi = np.sqrt(spec.smoothing.psi_squared(r, spec.weight, m))
    phi = np.sqrt(r * r + m * m)
    Af = np.einsum("rij,rj->ri", mode_coupling(d, m, r), f)
    a = psi[:, None] * f
    b = -1j * (psi / phi)[:, None] * Af

    t = np.linspace(-2.0 * box.T, 2.0 * box.T, 2 * (box.n_t - 1) + 1)
    tw = np.full(t.size, box.dt)
    tw[[0, -1]] *= 0.5
    cos_t, sin_t = np.cos(np.outer(phi, t)), np.sin(np.outer(phi, t))
    # g_c(r, t) = psi(r) U(r, t) f(r), component c
    g = cos_t[:, :, None] * a[:, None, :] + sin_t[:, :, None] * b[:, None, :]

    xg, xw = np.polynomial.legendre.leggauss(box.n_x)
    rho = np.concatenate([0.5 * box.X * (xg + 1.0), box.X + 0.5 * box.X * (xg + 1.0)])
    rw = np.concatenate([0.5 * box.X * xw, 0.5 * box.X * xw])
    inner = rho <= box.X

    if d == 2:
        rows = _terms_2d(k)
        pref, radial_pow = 2.0 * math.pi, 0.5

        def kernel(l):
            return special.jv(l, np.outer(rho, r))
    else:
        rows = _terms_3d(*inp.mode)
        pref, radial_pow = 4.0 * math.pi, 1.0

        def kernel(l):
            return special.spherical_jn(l, np.outer(rho, r))

    # I[(l, c)](rho, t) = int kernel_l(r rho) r^{p} g_c(r, t) dr
    needed = sorted({(l, c) for row in rows for (l, _, _, c) in row})
    ls = sorted({l for (l, _) in needed})
    kern = {l: kernel(l) * (wr * r ** radial_pow)[None, :] for l in ls}
    radial_int = {(l, c): kern[l] @ g[:, :, c] for (l, c) in needed}

    keys = sorted({(l, nn) for row in rows for (l, nn, _, _) in row})
    index = {key: i for i, key in enumerate(keys)}
    n_ang = 2 * (k + 2) + 4
    gram = _angular_gram(d, keys, rotation_seed, n_ang)

    # angular integral of |u|^2 for each row, u = sum_a pref i^l coef Y_a I_a
    density = np.zeros((rho.size, t.size))
    for row in rows:
        coeffs = [(index[(l, nn)], pref * (1j ** l) * coef * radial_int[(l, c)]) for (l, nn, coef, c) in row]
        for ia, ca in coeffs:
            for ib, cb in coeffs:
                density += (gram[ia, ib] * ca.conj() * cb).real
    wx = weight_profile(spec.weight, rho) * rho ** (d - 1) * rw
    per_time = wx @ density  # int over |x| < 2X at each t
    inner_time = (wx * inner) @ density
    in_T = np.abs(t) <= box.T + 1e-12

    def total(space, time_mask):
        return float(np.sum(tw * space * time_mask))

    full = total(per_time, np.ones_like(in_T))
    small_x = total(inner_time, np.ones_like(in_T))
    small_t = total(per_time, in_T)
    base = total(inner_time, in_T)
    tail_x = (full - small_x) / full
    tail_t = (full - small_t) / full
    checkpoints = [box.T / 4, box.T / 2, box.T, 2 * box.T]
    decay = {f"{c:g}": float(per_time[np.argmin(np.abs(t - c))]) for c in checkpoints}
    trace = {
        "value_box": base,
        "value_2X": small_t,
        "value_2T": small_x,
        "value_2X_2T": full,
        "tail_x": tail_x,
        "tail_t": tail_t,
        "budget": box.budget,
        "energy_at_t": decay,
    }
    if max(abs(tail_x), abs(tail_t)) > box.budget:
        raise TruncationNotConverged(
            f"tail fractions x={tail_x:.3g}, t={tail_t:.3g} exceed budget {box.budget:g}"
        )
    return DirectResult(full, trace)


# ---------------------------------------------------------------- scenarios


_SCENARIO_KEYS = {
    "d": int,
    "k": int,
    "n": int,
    "m": float,
    "center": float,
    "width": float,
    "vector": str,
    "X": float,
    "T": float,
    "n_x": int,
    "dt": float,
    "n_xi": int,
    "budget": float,
    "rel_tol": float,
}


@dataclass(frozen=True)
class Scenario:
    name: str
    d: int
    k: int
    n: int = 0
    m: float = 0.0
    center: float = 2.0
    width: float = 0.3
    vector: tuple = (1.0, 0.0)
    box: TruncationBox = field(default_factory=TruncationBox)
    rel_tol: float = 0.05

    def mode_input(self) -> ModeInput:
        profile, support = gaussian_bump(self.center, self.width, self.vector)
        mode = self.k if self.d == 2 else (self.k, self.n)
        return ModeInput(self.d, mode, profile, support, self.m)

    def spec(self) -> ProblemSpec:
        return oracle_spec(self.d, self.m)


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    """``key = value`` lines; errors carry the 1-based line number."""
    raw: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, val = (p.strip() for p in body.split("=", 1))
        if key not in _SCENARIO_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        try:
            raw[key] = _SCENARIO_KEYS[key](val)
        except ValueError:
            raise ValueError(f"line {lineno}: bad value for {key!r}: {val!r}") from None
    for key in ("d", "k"):
        if key not in raw:
            raise ValueError(f"scenario needs key {key!r}")
    d = raw["d"]
    n_comp = 2 if d == 2 else 4
    if "vector" in raw:
        try:
            vector = tuple(float(x) for x in raw["vector"].replace(",", " ").split())
        except ValueError:
            raise ValueError(f"bad vector {raw['vector']!r}") from None
    else:
        vector = (1.0,) + (0.0,) * (n_comp - 1)
    if len(vector) != n_comp:
        raise ValueError(f"vector needs {n_comp} entries for d={d}")
    box_kw = {key: raw[key] for key in ("X", "T", "n_x", "dt", "n_xi", "budget") if key in raw}
    box = TruncationBox(**box_kw)
    fields = {key: raw[key] for key in ("n", "m", "center", "width", "rel_tol") if key in raw}
    sc = Scenario(name, d, raw["k"], vector=vector, box=box, **fields)
    sc.mode_input()
    return sc


def load_scenario(path) -> Scenario:
    import pathlib

    p = pathlib.Path(path)
    return parse_scenario(p.read_text(encoding="utf-8"), p.stem)


def bundled_scenarios() -> dict:
    """Scenarios shipped with the package, keyed by name."""
    out = {}
    for entry in sorted(resources.files("sharpsmooth.scenarios").iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".txt"):
            out[entry.name[:-4]] = parse_scenario(entry.read_text(encoding="utf-8"), entry.name[:-4])
    return out


def run_scenario(sc: Scenario, rotation_seed: int | None = None) -> dict:
    """Spectral and direct norms for a scenario plus their relative difference."""
    inp, spec = sc.mode_input(), sc.spec()
    spectral = norm_spectral(inp, spec)
    direct = norm_direct(inp, spec, sc.box, rotation_seed)
    rel = abs(direct.value - spectral) / spectral
    return {
        "scenario": sc.name,
        "spectral": spectral,
        "direct": direct.value,
        "rel_diff": rel,
        "budget": sc.rel_tol,
        "tail_x": direct.trace["tail_x"],
        "tail_t": direct.trace["tail_t"],
        "trace": direct.trace,
    }


def with_box(sc: Scenario, **kw) -> Scenario:
    """Copy of ``sc`` with truncation-box fields replaced."""
    return replace(sc, box=replace(sc.box, **kw))
