"""Problem triples ``(w, psi, phi)``: weights, smoothing functions, dispersions.

The weight families are

* ``A``: ``w = (1+r^2)^{-s/2}``, standard ``psi = (1+r^2)^{1/4}``
* ``B``: ``w = r^{-s}``,         standard ``psi = r^{(2-s)/2}``
* ``C``: ``w = (1+r^2)^{-s/2}``, standard ``psi = r^{1/2}``
* ``gaussian``: ``w = exp(-r^2/2)``, standard ``psi = 1``

and the Dirac variants multiply the standard ``psi`` by ``phi_m^{-1/2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy import integrate, special

__all__ = [
    "FAMILIES",
    "DivergentTransformError",
    "WeightSpec",
    "DispersionSpec",
    "SmoothingSpec",
    "ProblemSpec",
    "fw_eval",
    "fw_numeric",
    "type_b_kappa",
    "weight_profile",
    "reduce_to_schrodinger",
    "parse_config",
    "format_config",
    "load_config",
]

FAMILIES = ("A", "B", "C", "gaussian", "custom")


class DivergentTransformError(RuntimeError):
    """The radial Fourier integral of a weight failed its convergence check."""


@dataclass(frozen=True)
class WeightSpec:
    family: str
    s: float = 2.0
    func: Callable | None = None
    fourier: Callable | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "custom" and self.func is None:
            raise ValueError("custom weight needs a radial profile callable")

    def check(self, d: int) -> None:
        """Raise ``ValueError`` if ``s`` is outside the family's admissible range."""
        s = self.s
        if self.family == "A" and s < 2:
            raise ValueError(f"family A needs s >= 2, got s={s}")
        if self.family == "B" and not 1 < s < d:
            raise ValueError(f"family B needs 1 < s < d={d}, got s={s}")
        if self.family == "C" and s <= 1:
            raise ValueError(f"family C needs s > 1, got s={s}")


@dataclass(frozen=True)
class DispersionSpec:
    kind: str = "schrodinger"
    m: float = 0.0
    func: Callable | None = None
    deriv: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("schrodinger", "relativistic", "custom"):
            raise ValueError(f"unknown dispersion kind {self.kind!r}")
        if self.m < 0:
            raise ValueError(f"mass must be nonnegative, got m={self.m}")
        if self.kind == "custom" and (self.func is None or self.deriv is None):
            raise ValueError("custom dispersion needs phi and phi' callables")

    def phi(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "schrodinger":
            return r * r
        if self.kind == "relativistic":
            return np.sqrt(r * r + self.m * self.m)
        return self.func(r)

    def dphi(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "schrodinger":
            return 2.0 * r
        if self.kind == "relativistic":
            return r / np.sqrt(r * r + self.m * self.m)
        return self.deriv(r)


@dataclass(frozen=True)
class SmoothingSpec:
    """Smoothing function ``psi``.

    ``tag`` is one of ``standard``, ``dirac`` (``phi_m^{-1/2}`` times standard),
    ``one``, ``power:<a>`` (``r^a``) or ``custom``.  ``reduced_from`` records the
    dispersion of the reduction ``psi -> sqrt(r / phi') psi``.
    """

    tag: str = "standard"
    func: Callable | None = None
    reduced_from: DispersionSpec | None = None

    def __post_init__(self):
        base = self.tag.split(":", 1)[0]
        if base not in ("standard", "dirac", "one", "power", "custom"):
            raise ValueError(f"unknown smoothing tag {self.tag!r}")
        if base == "custom" and self.func is None:
            raise ValueError("custom smoothing needs a callable")
        if base == "power":
            float(self.tag.split(":", 1)[1])

    def psi_squared(self, r, weight: WeightSpec, m: float):
        r = np.asarray(r, dtype=float)
        base = self.tag.split(":", 1)[0]
        if base == "one":
            out = np.ones_like(r)
        elif base == "power":
            out = r ** (2.0 * float(self.tag.split(":", 1)[1]))
        elif base == "custom":
            out = np.asarray(self.func(r), dtype=float) ** 2
        else:
            out = _standard_psi_squared(weight, r)
            if base == "dirac":
                # after a reduction the spec's own dispersion is massless
                if self.reduced_from is not None:
                    m = self.reduced_from.m
                out = out / np.sqrt(r * r + m * m)
        if self.reduced_from is not None:
            out = out * r / self.reduced_from.dphi(r)
        return out


def _standard_psi_squared(weight: WeightSpec, r):
    fam = weight.family
    if fam == "A":
        return np.sqrt(1.0 + r * r)
    if fam == "B":
        return r ** (2.0 - weight.s)
    if fam == "C":
        return r.copy()
    if fam == "gaussian":
        return np.ones_like(r)
    raise ValueError("custom weights have no standard smoothing function")


@dataclass(frozen=True)
class ProblemSpec:
    d: int
    weight: WeightSpec
    smoothing: SmoothingSpec = field(default_factory=SmoothingSpec)
    dispersion: DispersionSpec = field(default_factory=DispersionSpec)
    reduced: bool = False

    def __post_init__(self):
        if not 2 <= self.d <= 6:
            raise ValueError(f"supported dimensions are 2..6, got d={self.d}")
        self.weight.check(self.d)

    @property
    def m(self) -> float:
        return self.dispersion.m

    @classmethod
    def schrodinger(cls, d: int, family: str, s: float = 2.0) -> "ProblemSpec":
        """The classical triple ``(w, psi, r^2)`` of a family."""
        return cls(d, WeightSpec(family, s), SmoothingSpec("standard"), DispersionSpec("schrodinger"))

    @classmethod
    def dirac(cls, d: int, family: str, s: float = 2.0, m: float = 0.0) -> "ProblemSpec":
        """``(w, phi_m^{-1/2} psi, phi_m)``, the Dirac variant of a family."""
        return cls(d, WeightSpec(family, s), SmoothingSpec("dirac"), DispersionSpec("relativistic", m))

    def prefactor(self, r):
        """``r^{d-1} psi(r)^2 / phi'(r)``."""
        r = np.asarray(r, dtype=float)
        psi2 = self.smoothing.psi_squared(r, self.weight, self.m)
        return r ** (self.d - 1) * psi2 / np.abs(self.dispersion.dphi(r))


def type_b_kappa(d: int, s: float) -> float:
    """Constant in the Fourier transform of ``|x|^{-s}`` on ``R^d``."""
    return 2.0 ** (d - s) * math.pi ** (d / 2.0) * math.gamma((d - s) / 2.0) / math.gamma(s / 2.0)


def weight_profile(weight: WeightSpec, r):
    r = np.asarray(r, dtype=float)
    fam = weight.family
    if fam == "B":
        return r ** (-weight.s)
    if fam in ("A", "C"):
        return (1.0 + r * r) ** (-weight.s / 2.0)
    if fam == "gaussian":
        return np.exp(-0.5 * r * r)
    return np.asarray(weight.func(r), dtype=float)


def fourier_radial(weight: WeightSpec, d: int, rho):
    """``w(|.|)^``(xi) as a function of ``rho = |xi|``, closed form where known."""
    rho = np.asarray(rho, dtype=float)
    fam, s = weight.family, weight.s
    if fam == "B":
        return type_b_kappa(d, s) * rho ** (s - d)
    if fam == "gaussian":
        return (2.0 * math.pi) ** (d / 2.0) * np.exp(-0.5 * rho * rho)
    if fam in ("A", "C"):
        # Macdonald form: (2pi)^{d/2} 2^{1-s/2}/Gamma(s/2) rho^{(s-d)/2} K_{(d-s)/2}(rho)
        nu = (d - s) / 2.0
        pref = (2.0 * math.pi) ** (d / 2.0) * 2.0 ** (1.0 - s / 2.0) / math.gamma(s / 2.0)
        with np.errstate(over="ignore", under="ignore"):
            return pref * rho ** (-nu) * special.kve(nu, rho) * np.exp(-rho)
    if weight.fourier is not None:
        return np.asarray(weight.fourier(0.5 * rho * rho), dtype=float)
    return np.vectorize(lambda x: _hankel(weight, d, x))(rho)


def fw_eval(weight: WeightSpec, d: int, u):
    """``F_w(u)`` with ``F_w(|xi|^2/2)`` the Fourier transform of ``w(|x|)``."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("F_w is defined for u > 0 only")
    if weight.family == "B":
        return type_b_kappa(d, weight.s) * (2.0 * u) ** ((weight.s - d) / 2.0)
    return fourier_radial(weight, d, np.sqrt(2.0 * u))


def fw_numeric(weight: WeightSpec, d: int, u, method: str = "bessel"):
    """``F_w(u)`` from the radial Fourier integral, bypassing closed forms.

    ``method='bessel'`` integrates ``w(r) r^{d/2} J_{d/2-1}(r rho)`` between
    consecutive zeros and accelerates the alternating panel sums with Wynn's
    epsilon algorithm.  ``method='sine'`` (odd ``d = 3`` only) rewrites the
    kernel as ``sin(r rho)`` and uses QUADPACK's Fourier-integral routine.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    rho = np.sqrt(2.0 * u)
    if method == "bessel":
        out = np.array([_hankel(weight, d, x) for x in rho])
    elif method == "sine":
        if d != 3:
            raise ValueError("sine route is only available for d=3")
        out = np.array([_sine_transform_3d(weight, x) for x in rho])
    else:
        raise ValueError(f"unknown method {method!r}")
    return out if out.size > 1 else out[0]


def _hankel(weight: WeightSpec, d: int, rho: float, tol: float = 1e-11) -> float:
    nu = d / 2.0 - 1.0
    w = lambda r: weight_profile(weight, r) * r ** (d / 2.0) * special.jv(nu, r * rho)
    # panel edges approximate the zeros of J_nu(r rho) (McMahon)
    edges = [0.0] + [(j + nu / 2.0 - 0.25) * math.pi / rho for j in range(1, 400)]
    edges = [e for e in edges if e >= 0.0]
    partial, sums = 0.0, []
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(w, a, b, limit=200, epsabs=0.0, epsrel=1e-13)
        partial += val
        sums.append(partial)
        if len(sums) >= 40 and len(sums) % 10 == 0:
            est = _wynn_epsilon(sums[-40:])
            prev = _wynn_epsilon(sums[-41:-1])
            if abs(est - prev) <= tol * max(abs(est), 1e-300):
                return (2.0 * math.pi) ** (d / 2.0) * rho ** (1.0 - d / 2.0) * est
    raise DivergentTransformError(f"radial Fourier integral did not converge at rho={rho}")


def _sine_transform_3d(weight: WeightSpec, rho: float) -> float:
    # J_{1/2}(z) = sqrt(2/(pi z)) sin z collapses the 3D kernel to 4 pi / rho * int w(r) r sin(r rho)
    val, _ = integrate.quad(
        lambda r: weight_profile(weight, r) * r, 0.0, np.inf, weight="sin", wvar=rho, limlst=200
    )
    return 4.0 * math.pi / rho * val


def _wynn_epsilon(seq) -> float:
    """Wynn's epsilon extrapolation of a sequence of partial sums."""
    eps_prev = [0.0] * (len(seq) + 1)
    eps = [float(x) for x in seq]
    best = eps[-1]
    for col in range(1, len(seq)):
        nxt = []
        for i in range(len(eps) - 1):
            if not (math.isfinite(eps[i + 1]) and math.isfinite(eps[i])):
                nxt.append(math.inf)
                continue
            diff = eps[i + 1] - eps[i]
            if diff == 0.0:
                nxt.append(math.inf)
            else:
                nxt.append(eps_prev[i + 1] + 1.0 / diff)
        eps_prev, eps = eps, nxt
        if col % 2 == 0 and eps and math.isfinite(eps[-1]):
            best = eps[-1]
        if len(eps) <= 1:
            break
    return best


def reduce_to_schrodinger(spec: ProblemSpec) -> ProblemSpec:
    """``(w, psi, phi) -> (w, sqrt(r) psi / sqrt(phi'), r^2)``.

    ``C_d(w, psi, phi) = 2 C_d(reduced)``.  The output carries ``reduced=True``;
    reducing it again is refused because the recipe is not idempotent.
    """
    if spec.reduced:
        raise ValueError("spec is already reduced to Schrodinger form")
    smoothing = replace(spec.smoothing, reduced_from=spec.dispersion)
    return ProblemSpec(spec.d, spec.weight, smoothing, DispersionSpec("schrodinger"), reduced=True)


_CONFIG_KEYS = ("d", "m", "family", "s", "psi", "phi")


def parse_config(text: str) -> ProblemSpec:
    """Build a spec from ``key = value`` lines (``#`` starts a comment).

    Keys: ``d``, ``m``, ``family``, ``s``, ``psi``, ``phi``; unknown keys raise.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = val
    if "d" not in values or "family" not in values:
        raise ValueError("config needs at least 'd' and 'family'")
    d = int(values["d"])
    m = float(values.get("m", 0.0))
    phi = values.get("phi", "schrodinger")
    weight = WeightSpec(values["family"], float(values.get("s", 2.0)))
    dispersion = DispersionSpec(phi, m) if phi == "relativistic" else DispersionSpec(phi)
    return ProblemSpec(d, weight, SmoothingSpec(values.get("psi", "standard")), dispersion)


def format_config(spec: ProblemSpec) -> str:
    if spec.reduced or spec.weight.family == "custom" or spec.dispersion.kind == "custom":
        raise ValueError("only preset specs can be serialized")
    lines = [
        f"d = {spec.d}",
        f"m = {spec.m!r}",
        f"family = {spec.weight.family}",
        f"s = {spec.weight.s!r}",
        f"psi = {spec.smoothing.tag}",
        f"phi = {spec.dispersion.kind}",
    ]
    return "\n".join(lines) + "\n"


def load_config(path) -> ProblemSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
