"""Sharp constants as suprema of the lambda curves, with closed forms where known.

All constants use the normalization ``(2 pi)^{d-1} C = sup lambda``; the operator
convention ``||S||^2 = (2 pi)^d C`` is available through :meth:`ConstantReport.to_dict`.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .curves import LambdaProfile, dirac_combine, lambda_table, radial_combine
from .problem import ProblemSpec, reduce_to_schrodinger

__all__ = [
    "EXTREMISER_STATES",
    "SupNotLocalized",
    "SearchPolicy",
    "SupResult",
    "ConstantReport",
    "EquivalenceReport",
    "type_b_ck",
    "type_b_dirac_gamma",
    "type_b_dirac_ck",
    "type_c_dirac",
    "schrodinger_closed_form",
    "dirac_closed_form",
    "curve_family",
    "sup_search",
    "extremiser_diagnosis",
    "schrodinger_constant",
    "dirac_constant",
    "dirac_radial_constant",
    "equivalence_check",
]

EXTREMISER_STATES = ("exists_flat_interval", "none_detected", "unknown")
R_TO_ZERO = "r->0+"
R_TO_INF = "r->inf"


class SupNotLocalized(UserWarning):
    """The running maximum still grows at ``k_max`` or at an ``r`` boundary."""


@dataclass(frozen=True)
class SearchPolicy:
    k_max: int = 64
    r_min: float = 1e-3
    r_max: float = 1e3
    points_per_decade: int = 64
    refine_iterations: int = 40
    eps_flat: float = 1e-9
    k_patience: int = 8
    flat_min_length: float = 1e-2
    extension_steps: int = 3

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.points_per_decade < 2:
            raise ValueError("points_per_decade must be >= 2")

    def grid(self) -> np.ndarray:
        decades = math.log10(self.r_max / self.r_min)
        n = max(2, int(round(decades * self.points_per_decade)) + 1)
        return np.geomspace(self.r_min, self.r_max, n)


# ---------------------------------------------------------------- closed forms


def type_b_ck(d: int, s: float, k: int) -> float:
    """``c_k = 2^{2-s} pi G(s-1) G((d-s)/2+k) / (G(s/2)^2 G((d+s)/2+k-1))``."""
    lg = math.lgamma
    log_c = (
        (2.0 - s) * math.log(2.0)
        + lg(s - 1.0)
        + lg((d - s) / 2.0 + k)
        - 2.0 * lg(s / 2.0)
        - lg((d + s) / 2.0 + k - 1.0)
    )
    return math.pi * math.exp(log_c)


def type_b_dirac_gamma(d: int, s: float, m: float) -> float:
    """Dirac constant for ``(r^{-s}, phi_m^{-1/2} r^{(2-s)/2})`` from the Gamma formula."""
    base = 2.0 ** (2.0 - s) * math.pi * math.gamma(s - 1.0) * math.gamma((d - s) / 2.0)
    base /= math.gamma(s / 2.0) ** 2 * math.gamma((d + s) / 2.0 - 1.0)
    if m > 0:
        return base
    if d not in (2, 3):
        raise ValueError("the massless value is known for d = 2, 3 only")
    return (1.0 - (s - 1.0) / (d + s - 2.0)) * base


def type_b_dirac_ck(d: int, s: float, m: float) -> float:
    """Same constant from the ``c_k`` levels: ``c_0`` if ``m > 0``, else ``(c_0 + c_1)/2``."""
    if m > 0:
        return type_b_ck(d, s, 0)
    if d not in (2, 3):
        raise ValueError("the massless value is known for d = 2, 3 only")
    return 0.5 * (type_b_ck(d, s, 0) + type_b_ck(d, s, 1))


def type_c_dirac(s: float) -> float:
    """``pi^{1/2} G((s-1)/2) / G(s)``."""
    return math.sqrt(math.pi) * math.gamma((s - 1.0) / 2.0) / math.gamma(s)


@dataclass(frozen=True)
class _Known:
    value: float
    k: int | None
    r: float | str | None
    extremiser: str


def _standard_schrodinger(d: int, family: str, s: float) -> _Known | None:
    if family == "B":
        return _Known(0.5 * type_b_ck(d, s, 0), 0, None, "exists_flat_interval")
    if family == "A" and s == 2.0:
        if d == 3:
            return _Known(math.pi, 0, R_TO_ZERO, "none_detected")
        if d >= 5:
            return _Known(math.pi / 2.0, None, R_TO_INF, "none_detected")
    if family == "C" and d >= 3:
        return _Known(0.5 * type_c_dirac(s), None, R_TO_INF, "none_detected")
    return None


def _is_standard_schrodinger(spec: ProblemSpec) -> bool:
    sm = spec.smoothing
    if spec.dispersion.kind != "schrodinger":
        return False
    if sm.tag == "standard" and sm.reduced_from is None:
        return True
    # (w, phi_m^{-1/2} psi, phi_m) reduced: psi^2 r / phi' = standard psi^2
    return sm.tag == "dirac" and sm.reduced_from is not None and sm.reduced_from.kind == "relativistic"


def schrodinger_closed_form(spec: ProblemSpec) -> _Known | None:
    """Known ``C_d(w, psi, phi)`` for the preset families, or ``None``."""
    fam, s, d = spec.weight.family, spec.weight.s, spec.d
    if _is_standard_schrodinger(spec):
        return _standard_schrodinger(d, fam, s)
    if spec.dispersion.kind == "relativistic" and spec.smoothing.tag == "dirac" and not spec.reduced:
        base = _standard_schrodinger(d, fam, s)
        if base is None:
            return None
        # the reduction halves every lambda_k pointwise
        return _Known(2.0 * base.value, base.k, base.r, base.extremiser)
    return None


def dirac_closed_form(spec: ProblemSpec) -> _Known | None:
    fam, s, d, m = spec.weight.family, spec.weight.s, spec.d, spec.m
    if spec.smoothing.tag != "dirac" or spec.dispersion.kind != "relativistic":
        return None
    if fam == "B":
        if m > 0:
            return _Known(type_b_dirac_gamma(d, s, m), 0, R_TO_ZERO, "none_detected")
        if d in (2, 3):
            return _Known(type_b_dirac_gamma(d, s, m), 0, None, "exists_flat_interval")
    if fam == "C" and d >= 3:
        return _Known(type_c_dirac(s), None, R_TO_INF, "unknown")
    return None


# ---------------------------------------------------------------- sup search


def curve_family(spec: ProblemSpec, kind: str) -> Callable:
    """``evaluate(k_max, r) -> (values, errors)`` with rows ``k = 0..k_max``.

    For ``kind = "dirac"`` row ``k`` is the Dirac curve built from ``lambda_k`` and
    ``lambda_{k+1}``; in d = 2 the negative ``k`` give the same set of curves.
    ``dirac_radial`` has the single row ``k = 0``.
    """
    m = spec.m

    def schrodinger(k_max, r):
        return lambda_table(spec, k_max, r)

    def dirac(k_max, r):
        vals, errs = lambda_table(spec, k_max + 1, r)
        return dirac_combine(vals[:-1], vals[1:], m, r), np.maximum(errs[:-1], errs[1:])

    def radial(k_max, r):
        vals, errs = lambda_table(spec, 1, r)
        return radial_combine(vals[0], vals[1], m, r)[None], np.maximum(errs[0], errs[1])[None]

    table = {"schrodinger": schrodinger, "dirac": dirac, "dirac_radial": radial}
    if kind not in table:
        raise ValueError(f"unknown curve kind {kind!r}")
    evaluate = table[kind]
    evaluate.single_row = kind == "dirac_radial"
    evaluate.kind = kind
    return evaluate


@dataclass
class SupResult:
    value: float
    error: float
    k: int
    r: float | str
    flat: bool
    localized: bool
    profiles: list = field(repr=False, default_factory=list)
    diagnostics: dict = field(default_factory=dict)


def _as_pair(out, shape):
    if isinstance(out, tuple):
        vals, errs = out
    else:
        vals, errs = out, np.zeros(shape)
    return np.atleast_2d(np.asarray(vals, dtype=float)), np.atleast_2d(np.asarray(errs, dtype=float))


def _decreasing_run(maxima: list[float]) -> int:
    run = 0
    for a, b in zip(maxima[:-1], maxima[1:]):
        run = run + 1 if b < a else 0
    return run


def _scan(curves, grid, policy):
    """Evaluate rows in doubling blocks until ``k_patience`` strictly decreasing maxima."""
    single = getattr(curves, "single_row", False)
    k_end = 0 if single else min(16, policy.k_max)
    while True:
        vals, errs = _as_pair(curves(k_end, grid), (k_end + 1, grid.size))
        maxima = list(vals.max(axis=1))
        run = 0
        stop_at = None
        for k in range(1, len(maxima)):
            run = run + 1 if maxima[k] < maxima[k - 1] else 0
            if run >= policy.k_patience:
                stop_at = k
                break
        if stop_at is not None:
            return vals[: stop_at + 1], errs[: stop_at + 1], True
        if single or k_end >= policy.k_max:
            return vals, errs, False
        k_end = min(2 * k_end, policy.k_max)


def _runs(mask: np.ndarray):
    """``(start, stop)`` index pairs of maximal runs of ``True``."""
    out, start = [], None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            out.append((start, i - 1))
            start = None
    if start is not None:
        out.append((start, mask.size - 1))
    return out


def _flat_runs(profile: LambdaProfile, level: float, policy: SearchPolicy):
    """Runs at the top level; ``certified`` unless the run touches exactly one grid edge."""
    r, v = profile.r_grid, profile.values
    if r.size < 2 or level <= 0:
        return []
    mask = v >= level * (1.0 - policy.eps_flat)
    found = []
    for a, b in _runs(mask):
        length = (r[b] - r[a]) / r[b]
        touches = (a == 0) + (b == r.size - 1)
        found.append((a, b, length, touches != 1))
    return found


def extremiser_diagnosis(profiles, value: float, policy: SearchPolicy | None = None) -> str:
    """Classify the level sets ``{lambda_k >= value (1 - eps_flat)}`` on the sampled grid.

    ``exists_flat_interval`` if some run has relative length ``>= flat_min_length``
    and does not end at exactly one grid edge; ``unknown`` if the only long runs
    end at one edge (a boundary limit reached below the grid resolution);
    ``none_detected`` otherwise.
    """
    policy = policy or SearchPolicy()
    edge_only = False
    for prof in profiles:
        for a, b, length, certified in _flat_runs(prof, value, policy):
            if length < policy.flat_min_length:
                continue
            if certified:
                return "exists_flat_interval"
            edge_only = True
    return "unknown" if edge_only else "none_detected"


def _golden(f, a: float, b: float, iterations: int):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _polish(f, r: float, lo: float, hi: float, steps: int = 3) -> float:
    """Newton steps on a five-point derivative; value comparisons stall near ``sqrt(eps)``."""
    h = 1e-3 * r
    for _ in range(steps):
        fm2, fm1, f0, fp1, fp2 = (f(r + j * h) for j in (-2, -1, 0, 1, 2))
        d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
        d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
        if not d2 < 0:
            return r
        r_new = r - d1 / d2
        if not lo <= r_new <= hi:
            return r
        r = r_new
    return r


def _extrapolate(f_seq: np.ndarray, noise: float):
    """Limit of a sequence sampled at geometric steps; ``(limit, error, converged)``."""
    d1, d2 = f_seq[-2] - f_seq[-3], f_seq[-1] - f_seq[-2]
    if abs(d2) <= noise:
        return float(f_seq[-1]), float(max(noise, abs(d2))), True
    if d1 == 0.0:
        return float(f_seq[-1]), float(abs(d2)), False
    rho = d2 / d1
    if 0.0 < rho < 1.0:
        tail = d2 * rho / (1.0 - rho)
        return float(f_seq[-1] + tail), float(abs(tail) + noise), True
    return float(f_seq[-1]), float(abs(d2)), False


def _boundary(curves, k_rows: int, edge_r: float, direction: int, policy: SearchPolicy):
    """Evaluate past an edge at ``edge_r * 10^{direction j}`` and extrapolate each row."""
    steps = np.array([edge_r * 10.0 ** (direction * j) for j in range(1, policy.extension_steps + 1)])
    order = np.argsort(steps)
    vals, errs = _as_pair(curves(k_rows - 1, steps[order]), (k_rows, steps.size))
    back = np.empty_like(order)
    back[order] = np.arange(order.size)
    vals, errs = vals[:, back], errs[:, back]
    return steps, vals, errs


def sup_search(curves: Callable, policy: SearchPolicy | None = None) -> SupResult:
    """``sup_k sup_r`` of a curve family on a log grid with refinement and edge limits.

    ``curves(k_max, r)`` returns values (or ``(values, errors)``) of shape
    ``(k_max + 1, len(r))``.
    """
    policy = policy or SearchPolicy()
    grid = policy.grid()
    vals, errs, stopped = _scan(curves, grid, policy)
    kind = getattr(curves, "kind", "schrodinger")
    profiles = [LambdaProfile(k, grid, vals[k], kind, errs[k]) for k in range(vals.shape[0])]
    maxima = [float(x) for x in vals.max(axis=1)]
    diagnostics = {
        "k_scanned": vals.shape[0] - 1,
        "per_k_max": maxima,
        "early_stop": stopped,
        "grid_points": int(grid.size),
    }
    localized = True
    warn_msgs = []
    if not stopped and vals.shape[0] > 1 and maxima[-1] >= max(maxima):
        localized = False
        warn_msgs.append("per-k maximum still growing at k_max")

    best = float(vals.max())
    k_best, i_best = np.unravel_index(int(np.argmax(vals)), vals.shape)
    k_best, i_best = int(k_best), int(i_best)
    noise = float(errs.max())

    # flat top
    for prof in profiles:
        for a, b, length, certified in _flat_runs(prof, best, policy):
            if certified and length >= policy.flat_min_length:
                mid = math.sqrt(grid[a] * grid[b])
                diagnostics["flat_interval"] = [float(grid[a]), float(grid[b])]
                return _finish(SupResult(best, noise, prof.k, mid, True, localized, profiles, diagnostics), warn_msgs)

    # boundary limits
    level = best * (1.0 - policy.eps_flat)
    for edge, direction, marker in ((0, -1, R_TO_ZERO), (grid.size - 1, 1, R_TO_INF)):
        if not np.any(vals[:, edge] >= level):
            continue
        steps, ext, ext_err = _boundary(curves, vals.shape[0], grid[edge], direction, policy)
        seq = np.concatenate([vals[:, edge : edge + 1], ext], axis=1)
        if np.max(ext[:, 0]) < np.max(vals[:, edge]) - noise:
            # decreasing past the edge: the peak sits just outside the scanned range
            continue
        limits = []
        for k in range(seq.shape[0]):
            lim, lerr, ok = _extrapolate(seq[k], noise + float(ext_err[k].max()))
            limits.append((lim, lerr, ok, k))
        top = max(limits)
        # ties at a limit are common (all k approach it); report the lowest such k
        lim, lerr, ok, k_lim = next(x for x in limits if x[0] >= top[0] - top[1])
        diagnostics["boundary"] = {
            "limit": marker,
            "radii": [float(x) for x in steps],
            "values": [float(x) for x in seq[k_lim]],
            "extrapolated": lim,
        }
        if not ok:
            localized = False
            warn_msgs.append(f"no recognized limit as {marker}")
        value = max(best, lim)
        return _finish(SupResult(value, lerr, k_lim, marker, False, localized, profiles, diagnostics), warn_msgs)

    # interior peak
    lo = grid[max(i_best - 1, 0)]
    hi = grid[min(i_best + 1, grid.size - 1)]
    if i_best == 0:
        lo = grid[0] / 10.0
    if i_best == grid.size - 1:
        hi = grid[-1] * 10.0

    def row(r):
        v, _ = _as_pair(curves(k_best, np.array([r])), (k_best + 1, 1))
        return float(v[k_best if v.shape[0] > k_best else 0, 0])

    r_star, v_star = _golden(row, lo, hi, policy.refine_iterations)
    r_pol = _polish(row, r_star, lo, hi)
    v_pol = row(r_pol)
    if v_pol >= v_star - abs(v_star) * 1e-14:
        r_star, v_star = r_pol, max(v_star, v_pol)
    value = max(best, v_star)
    diagnostics["refined"] = {"bracket": [float(lo), float(hi)], "r": r_star}
    return _finish(SupResult(value, float(errs[k_best, i_best]), k_best, r_star, False, localized, profiles, diagnostics), warn_msgs)


def _finish(result: SupResult, msgs: list[str]) -> SupResult:
    if msgs:
        result.diagnostics["warnings"] = msgs
        for msg in msgs:
            warnings.warn(msg, SupNotLocalized, stacklevel=3)
    return result


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class ConstantReport:
    value: float
    attaining_k: int | None
    attaining_r: float | str | None
    extremiser: str
    method: str
    error_estimate: float
    d: int = 3
    equation: str = "schrodinger"
    lower_bound: float | None = None
    upper_bound: float | None = None
    localized: bool = True
    policy: SearchPolicy = field(default_factory=SearchPolicy)
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("constant must be nonnegative")
        if self.method not in ("closed_form", "numeric_sup", "bound_only"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.extremiser not in EXTREMISER_STATES:
            raise ValueError(f"unknown extremiser state {self.extremiser!r}")
        if self.method == "closed_form" and self.error_estimate != 0:
            raise ValueError("closed-form reports carry zero error")

    def scale(self, norm: str) -> float:
        if norm == "paper":
            return 1.0
        if norm == "operator":
            return (2.0 * math.pi) ** self.d
        raise ValueError(f"unknown normalization {norm!r}")

    def to_dict(self, norm: str = "paper") -> dict:
        c = self.scale(norm)
        if isinstance(self.attaining_r, str):
            attaining = {"k": self.attaining_k, "limit": self.attaining_r}
        else:
            attaining = {"k": self.attaining_k, "r": self.attaining_r}
        out = {
            "constant": self.value * c,
            "normalization": norm,
            "equation": self.equation,
            "d": self.d,
            "attaining": attaining,
            "extremiser": self.extremiser,
            "method": self.method,
            "error_estimate": self.error_estimate * c,
            "localized": self.localized,
            "policy_echo": asdict(self.policy),
        }
        if self.method == "bound_only":
            out["bounds"] = {
                "lower": None if self.lower_bound is None else self.lower_bound * c,
                "upper": None if self.upper_bound is None else self.upper_bound * c,
            }
        return out

    def to_json(self, norm: str = "paper") -> str:
        return json.dumps(self.to_dict(norm), sort_keys=True, indent=2)


def _from_known(known: _Known, spec: ProblemSpec, equation: str, policy) -> ConstantReport:
    return ConstantReport(
        known.value, known.k, known.r, known.extremiser, "closed_form", 0.0, spec.d, equation, policy=policy
    )


def _numeric(spec: ProblemSpec, kind: str, equation: str, policy: SearchPolicy) -> ConstantReport:
    norm = (2.0 * math.pi) ** (spec.d - 1)
    res = sup_search(curve_family(spec, kind), policy)
    extremiser = extremiser_diagnosis(res.profiles, res.value, policy)
    if not res.flat and extremiser == "exists_flat_interval":
        extremiser = "unknown"
    if isinstance(res.r, str):
        # a boundary limit is approached, not attained, unless a flat run also reaches it
        extremiser = "unknown" if extremiser == "unknown" else "none_detected"
    r = res.r if isinstance(res.r, str) else float(res.r)
    return ConstantReport(
        res.value / norm,
        res.k,
        r,
        extremiser,
        "numeric_sup",
        res.error / norm,
        spec.d,
        equation,
        localized=res.localized,
        policy=policy,
        diagnostics=res.diagnostics,
    )


def _policy(policy):
    return policy if policy is not None else SearchPolicy()


def schrodinger_constant(spec: ProblemSpec, policy: SearchPolicy | None = None, method: str = "auto") -> ConstantReport:
    """``C_d(w, psi, phi) = sup_k sup_r lambda_k(r) / (2 pi)^{d-1}`` for any dispersion."""
    policy = _policy(policy)
    equation = "schrodinger" if spec.dispersion.kind == "schrodinger" else "relativistic"
    if method not in ("auto", "numeric", "closed_form"):
        raise ValueError(f"unknown method {method!r}")
    if method != "numeric":
        known = schrodinger_closed_form(spec)
        if known is not None:
            return _from_known(known, spec, equation, policy)
        if method == "closed_form":
            raise ValueError("no closed form for this spec")
    return _numeric(spec, "schrodinger", equation, policy)


def dirac_radial_constant(spec: ProblemSpec, policy: SearchPolicy | None = None, method: str = "auto") -> ConstantReport:
    """``sup_r`` of the radial Dirac curve over ``(2 pi)^{d-1}``."""
    policy = _policy(policy)
    if spec.dispersion.kind != "relativistic":
        raise ValueError("Dirac constants need the relativistic dispersion")
    if method != "numeric" and spec.weight.family == "B" and spec.smoothing.tag == "dirac":
        d, s = spec.d, spec.weight.s
        if spec.m > 0:
            known = _Known(type_b_ck(d, s, 0), 0, R_TO_ZERO, "none_detected")
        else:
            known = _Known(0.5 * (type_b_ck(d, s, 0) + type_b_ck(d, s, 1)), 0, None, "exists_flat_interval")
        return _from_known(known, spec, "dirac-radial", policy)
    if method == "closed_form":
        raise ValueError("no closed form for this spec")
    return _numeric(spec, "dirac_radial", "dirac-radial", policy)


def dirac_constant(spec: ProblemSpec, policy: SearchPolicy | None = None, method: str = "auto") -> ConstantReport:
    """``sup_k sup_r`` of the Dirac curves over ``(2 pi)^{d-1}``.

    For ``d >= 4`` without a known value the report is ``bound_only``: the upper
    bound ``C_d(w, psi, phi_m)`` and the radial constant as lower bound.
    """
    policy = _policy(policy)
    if spec.dispersion.kind != "relativistic":
        raise ValueError("Dirac constants need the relativistic dispersion")
    if method != "numeric":
        known = dirac_closed_form(spec)
        if known is not None:
            return _from_known(known, spec, "dirac", policy)
        if method == "closed_form":
            raise ValueError("no closed form for this spec")
    if spec.d in (2, 3):
        return _numeric(spec, "dirac", "dirac", policy)
    upper = schrodinger_constant(spec, policy)
    lower = dirac_radial_constant(spec, policy)
    return ConstantReport(
        upper.value,
        None,
        None,
        "unknown",
        "bound_only",
        upper.error_estimate,
        spec.d,
        "dirac",
        lower_bound=lower.value,
        upper_bound=upper.value,
        localized=upper.localized and lower.localized,
        policy=policy,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """``C/2 <= C_dirac <= C = 2 C_reduced`` on computed values."""

    schrodinger_reduced: float
    dirac: float
    upper: float
    upper_via_reduction: float
    tolerance: float
    holds: bool
    reduction_consistent: bool

    @property
    def lower(self) -> float:
        return 0.5 * self.upper

    @property
    def ratio_to_upper(self) -> float:
        return self.dirac / self.upper

    @property
    def ratio_to_reduced(self) -> float:
        return self.dirac / self.schrodinger_reduced


def equivalence_check(spec: ProblemSpec, policy: SearchPolicy | None = None, method: str = "auto") -> EquivalenceReport:
    """Compute the three constants of the Dirac/Schrodinger sandwich for a Dirac spec."""
    if spec.d not in (2, 3):
        raise ValueError("the lower bound is established for d = 2, 3 only")
    policy = _policy(policy)
    upper = schrodinger_constant(spec, policy, method)
    reduced = schrodinger_constant(reduce_to_schrodinger(spec), policy, method)
    dirac = dirac_constant(spec, policy, method)
    errs = upper.error_estimate + reduced.error_estimate + dirac.error_estimate
    tol = 2.0 * errs + 1e-12 * upper.value
    holds = 0.5 * upper.value - tol <= dirac.value <= upper.value + tol
    consistent = abs(upper.value - 2.0 * reduced.value) <= max(1e-3 * upper.value, 10.0 * errs)
    return EquivalenceReport(reduced.value, dirac.value, upper.value, 2.0 * reduced.value, tol, holds, consistent)
