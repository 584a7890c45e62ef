"""Funk-Hecke coefficients and the curves lambda_k(r), their Dirac combinations.

``lambda_k(r) = |S^{d-2}| r^{d-1} psi(r)^2 / phi'(r)
                * int_{-1}^{1} F_w(r^2 (1-t)) p_{d,k}(t) (1-t^2)^{(d-3)/2} dt``

Power weights (family B) are integrated by Gauss-Jacobi in ``t``, which is
exact.  Everything else goes through a graded composite rule in
``x = sqrt((1-t)/2)``, where ``F_w(r^2(1-t))`` becomes ``w^(2 r x)`` and the
boundary layer of width ``1/r`` near ``t = 1`` is resolved by geometric panels.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special

from .problem import ProblemSpec, fourier_radial, type_b_kappa
from .specialfn import legendre_d, legendre_table, sphere_measure

__all__ = [
    "QuadratureError",
    "QuadratureScheme",
    "LambdaProfile",
    "mu_k",
    "lambda_table",
    "lambda_k",
    "lambda_k_with_error",
    "dirac_lambda_k",
    "dirac_lambda_rad",
    "dirac_combine",
    "radial_combine",
    "sample_profile",
    "profiles_to_csv",
]

PROFILE_KINDS = ("schrodinger", "dirac", "dirac_radial")


class QuadratureError(RuntimeError):
    """A quadrature did not reach its requested tolerance."""


@dataclass(frozen=True)
class QuadratureScheme:
    """Rule for integrals over ``[-1, 1]``.

    For ``gauss_jacobi`` the weight ``(1-t)^alpha (1+t)^beta`` is divided out of
    the integrand before the rule is applied.  ``gauss_chebyshev`` is the
    ``alpha = beta = -1/2`` case.
    """

    rule: str = "gauss_jacobi"
    node_count: int = 128
    alpha: float = 0.0
    beta: float = 0.0
    tol: float = 1e-10

    def __post_init__(self):
        if self.rule not in ("gauss_legendre", "gauss_jacobi", "gauss_chebyshev", "adaptive"):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError("Jacobi exponents must exceed -1")
        if self.node_count < 1:
            raise ValueError("node_count must be positive")

    @classmethod
    def for_dimension(cls, d: int, **kw) -> "QuadratureScheme":
        """Jacobi rule carrying the ``(1-t^2)^{(d-3)/2}`` measure exactly."""
        e = (d - 3) / 2.0
        return cls("gauss_jacobi", alpha=e, beta=e, **kw)

    def exponents(self) -> tuple[float, float]:
        if self.rule == "gauss_chebyshev":
            return -0.5, -0.5
        if self.rule == "gauss_legendre":
            return 0.0, 0.0
        return self.alpha, self.beta


@lru_cache(maxsize=256)
def _jacobi_nodes(n: int, alpha: float, beta: float):
    if alpha == 0.0 and beta == 0.0:
        x, w = special.roots_legendre(n)
    else:
        x, w = special.roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _fixed_rule(F, d, k, n, alpha, beta):
    t, wts = _jacobi_nodes(n, alpha, beta)
    e = (d - 3) / 2.0
    meas = (1.0 - t) ** (e - alpha) * (1.0 + t) ** (e - beta)
    return float(np.sum(wts * F(t) * legendre_d(d, k, t) * meas))


def mu_k(F: Callable, d: int, k: int, scheme: QuadratureScheme | None = None) -> tuple[float, float]:
    """Funk-Hecke coefficient ``|S^{d-2}| int F p_{d,k} (1-t^2)^{(d-3)/2} dt``.

    Returns ``(value, abs_error_estimate)``.  Fixed rules estimate the error by
    repeating with twice the nodes.
    """
    scheme = scheme or QuadratureScheme.for_dimension(d)
    k = abs(k)
    area = sphere_measure(d - 2)
    if scheme.rule == "adaptive":
        e = (d - 3) / 2.0
        val, err = integrate.quad(
            lambda t: F(t) * legendre_d(d, k, t),
            -1.0, 1.0, weight="alg", wvar=(e, e), limit=500, epsabs=0.0, epsrel=scheme.tol,
        )
        if not math.isfinite(val) or err > max(scheme.tol * abs(val), 1e-13):
            raise QuadratureError(f"adaptive Funk-Hecke integral failed: err={err:.3g}")
        return area * val, area * err
    a, b = scheme.exponents()
    v1 = _fixed_rule(F, d, k, scheme.node_count, a, b)
    v2 = _fixed_rule(F, d, k, 2 * scheme.node_count, a, b)
    return area * v2, area * abs(v2 - v1)


# ---------------------------------------------------------------------------
# lambda_k(r) for all k at once


@dataclass(frozen=True)
class _Composite:
    levels: int = 16
    ratio: float = 0.35
    panel_nodes: int = 40
    cutoff: float = 45.0  # 2 r x beyond which exponentially decaying w^ is dropped


_DEFAULT_COMPOSITE = _Composite()


def _leading_power(spec: ProblemSpec) -> float:
    """Exponent ``alpha`` with ``integrand ~ x^alpha`` as ``x -> 0``."""
    d, fam, s = spec.d, spec.weight.family, spec.weight.s
    if fam in ("A", "C", "B"):
        return min(s, d) - 2.0
    return d - 2.0


def _decays(spec: ProblemSpec) -> bool:
    return spec.weight.family in ("A", "C", "gaussian")


def _composite_nodes(spec: ProblemSpec, r: float, n: int, cfg: _Composite):
    """Nodes/weights on ``x in [0, x_top]`` with the singular powers factored out.

    Returns ``(x, wts)``.  The Jacobi factors ``x^{alpha}`` on the first panel and
    ``(1-x)^{beta}`` on the last one are divided back out of ``wts``, so the caller
    integrates the full integrand against plain weights.
    """
    d = spec.d
    alpha = _leading_power(spec)
    beta = (d - 3) / 2.0
    x_top = min(1.0, cfg.cutoff / (2.0 * r)) if _decays(spec) else 1.0
    edges = x_top * cfg.ratio ** np.arange(cfg.levels, -1, -1)
    edges = np.concatenate(([0.0], edges))
    xs, ws = [], []
    last = len(edges) - 2
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        al = alpha if i == 0 else 0.0
        be = beta if (i == last and x_top == 1.0 and beta != 0.0) else 0.0
        y, w = _jacobi_nodes(n, float(be), float(al))
        half = 0.5 * (b - a)
        x = a + half * (y + 1.0)
        wt = w * half
        if al:
            # rule integrates g(y)(1+y)^al; integrand has x^al = (half (1+y))^al
            wt = wt * half ** al
            wt = wt / x ** al
        if be:
            wt = wt * half ** be / (1.0 - x) ** be
        xs.append(x)
        ws.append(wt)
    return np.concatenate(xs), np.concatenate(ws)


def _x_integrand(spec: ProblemSpec, r: float, x, k_max: int):
    d = spec.d
    t = 1.0 - 2.0 * x * x
    what = fourier_radial(spec.weight, d, 2.0 * r * x)
    meas = 2.0 ** (d - 1) * x ** (d - 2) * (1.0 - x * x) ** ((d - 3) / 2.0)
    return legendre_table(d, k_max, t) * (what * meas)


def _integrals_composite(spec, r, k_max, n, cfg):
    x, w = _composite_nodes(spec, r, n, cfg)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = _x_integrand(spec, r, x, k_max)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    return vals @ w


def _integrals_power(spec, r, k_max, n):
    # w^ is a pure power: (1-t)^{(s-3)/2}(1+t)^{(d-3)/2} times a polynomial
    d, s = spec.d, spec.weight.s
    t, wts = _jacobi_nodes(n, (s - 3) / 2.0, (d - 3) / 2.0)
    scale = type_b_kappa(d, s) * (2.0 * r * r) ** ((s - d) / 2.0)
    return scale * (legendre_table(d, k_max, t) @ wts)


def _integrals(spec, r, k_max, precise: bool):
    if spec.weight.family == "B":
        n = 256 if precise else 128
        return _integrals_power(spec, r, k_max, n)
    cfg = _DEFAULT_COMPOSITE
    n = cfg.panel_nodes + (k_max // 2)
    return _integrals_composite(spec, r, k_max, 2 * n if precise else n, cfg)


def lambda_table(spec: ProblemSpec, k_max: int, r) -> tuple[np.ndarray, np.ndarray]:
    """``lambda_k(r)`` for ``k = 0..k_max`` on an array of radii.

    Returns ``(values, errors)`` of shape ``(k_max + 1, len(r))``; the error is
    the difference to a rule with twice the nodes.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise ValueError("lambda_k is defined for r > 0 only")
    vals = np.empty((k_max + 1, r.size))
    errs = np.empty_like(vals)
    area = sphere_measure(spec.d - 2)
    pref = area * spec.prefactor(r)
    for j, rj in enumerate(r):
        coarse = _integrals(spec, rj, k_max, precise=False)
        fine = _integrals(spec, rj, k_max, precise=True)
        vals[:, j] = pref[j] * fine
        errs[:, j] = np.abs(pref[j] * (fine - coarse))
    bad = ~np.isfinite(vals)
    if bad.any():
        raise QuadratureError("non-finite lambda_k value; check the weight/smoothing pair")
    # absolute floor: rounding in the Legendre recurrence
    errs = np.maximum(errs, 1e-14 * np.max(np.abs(vals), axis=0, keepdims=True))
    return vals, errs


def lambda_k_with_error(spec: ProblemSpec, k: int, r):
    """``(lambda_k(r), error)``; for negative ``k`` (``d = 2``) uses ``|k|``."""
    k = abs(int(k))
    scalar = np.ndim(r) == 0
    vals, errs = lambda_table(spec, k, r)
    if scalar:
        return float(vals[k, 0]), float(errs[k, 0])
    return vals[k], errs[k]


def lambda_k(spec: ProblemSpec, k: int, r):
    return lambda_k_with_error(spec, k, r)[0]


def _require_relativistic(spec: ProblemSpec):
    if spec.dispersion.kind != "relativistic":
        raise ValueError("Dirac curves are defined for the dispersion phi_m(r) = (r^2+m^2)^{1/2}")


def dirac_combine(lk, lk1, m: float, r):
    """``(lk + lk1)/2 + m / (2 phi_m) |lk - lk1|``."""
    r = np.asarray(r, dtype=float)
    lk, lk1 = np.asarray(lk), np.asarray(lk1)
    if m == 0.0:
        return 0.5 * (lk + lk1)
    return 0.5 * (lk + lk1) + m / (2.0 * np.sqrt(r * r + m * m)) * np.abs(lk - lk1)


def radial_combine(l0, l1, m: float, r):
    """``(l0 + l1 + m^2/(r^2+m^2) (l0 - l1)) / 2``."""
    r = np.asarray(r, dtype=float)
    return 0.5 * (l0 + l1 + m * m / (r * r + m * m) * (l0 - l1))


def dirac_lambda_k(spec: ProblemSpec, k: int, r):
    _require_relativistic(spec)
    k = int(k)
    if spec.d == 2 and k < 0:
        # lambda_k := lambda_{|k|}; the pair (k, k+1) maps to (|k|, |k+1|)
        a, b = abs(k), abs(k + 1)
    else:
        a, b = k, k + 1
    vals, _ = lambda_table(spec, max(a, b), r)
    out = dirac_combine(vals[a], vals[b], spec.m, r)
    return float(out[0]) if np.ndim(r) == 0 else out


def dirac_lambda_rad(spec: ProblemSpec, r):
    _require_relativistic(spec)
    vals, _ = lambda_table(spec, 1, r)
    out = radial_combine(vals[0], vals[1], spec.m, r)
    return float(out[0]) if np.ndim(r) == 0 else out


@dataclass
class LambdaProfile:
    k: int
    r_grid: np.ndarray
    values: np.ndarray
    kind: str = "schrodinger"
    errors: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        self.r_grid = np.asarray(self.r_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.r_grid.shape != self.values.shape:
            raise ValueError("grid and values must have the same length")
        if self.r_grid.size > 1 and np.any(np.diff(self.r_grid) <= 0):
            raise ValueError("radial grid must be strictly increasing")
        if self.errors is None:
            self.errors = np.zeros_like(self.values)

    def __len__(self):
        return self.r_grid.size


def sample_profile(spec: ProblemSpec, k: int, kind: str, r_grid) -> LambdaProfile:
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size == 0:
        return LambdaProfile(k, r_grid, np.empty(0), kind)
    if kind == "schrodinger":
        vals, errs = lambda_table(spec, abs(k), r_grid)
        return LambdaProfile(k, r_grid, vals[abs(k)], kind, errs[abs(k)])
    _require_relativistic(spec)
    if kind == "dirac":
        a, b = (abs(k), abs(k + 1)) if k < 0 else (k, k + 1)
        vals, errs = lambda_table(spec, max(a, b), r_grid)
        values = dirac_combine(vals[a], vals[b], spec.m, r_grid)
        return LambdaProfile(k, r_grid, values, kind, np.maximum(errs[a], errs[b]))
    if kind == "dirac_radial":
        vals, errs = lambda_table(spec, 1, r_grid)
        values = radial_combine(vals[0], vals[1], spec.m, r_grid)
        return LambdaProfile(0, r_grid, values, kind, np.maximum(errs[0], errs[1]))
    raise ValueError(f"unknown profile kind {kind!r}")


def profiles_to_csv(profiles, out=None) -> str:
    """Write ``k, r, value, err_estimate, kind`` rows with 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "r", "value", "err_estimate", "kind"])
    for prof in profiles:
        for r, v, e in zip(prof.r_grid, prof.values, prof.errors):
            writer.writerow([prof.k, f"{r:.17g}", f"{v:.17g}", f"{e:.17g}", prof.kind])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
