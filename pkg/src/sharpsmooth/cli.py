"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 supremum not localized, 3 quadrature
failure, 4 expectation mismatch, 5 verification failure, 6 truncation not
converged.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_LOCALIZED = 2
EXIT_QUADRATURE = 3
EXIT_MISMATCH = 4
EXIT_VERIFY = 5
EXIT_TRUNCATION = 6

EXIT_CODES = {
    EXIT_OK: "success",
    EXIT_INPUT: "invalid flags, config or scenario",
    EXIT_NOT_LOCALIZED: "supremum not localized within the search policy",
    EXIT_QUADRATURE: "quadrature failure",
    EXIT_MISMATCH: "result differs from --expect (or oracle budget exceeded)",
    EXIT_VERIFY: "a verification check failed",
    EXIT_TRUNCATION: "oracle truncation did not converge",
}

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


class UsageError(ValueError):
    """Invalid flag combination detected after parsing."""


def _int_range(text: str) -> list[int]:
    """``""`` (empty), ``"3"``, ``"0..3"`` or ``"0,2,5"``."""
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def _r_grid(text: str, points: int, spacing: str):
    import numpy as np

    text = text.strip()
    if ".." in text:
        lo, hi = (float(x) for x in text.split("..", 1))
        if not 0 < lo < hi:
            raise UsageError("r range needs 0 < lo < hi")
        if points < 2:
            raise UsageError("--points must be >= 2")
        return np.geomspace(lo, hi, points) if spacing == "log" else np.linspace(lo, hi, points)
    vals = np.array([float(x) for x in text.split(",")])
    if np.any(vals <= 0) or np.any(np.diff(vals) <= 0):
        raise UsageError("r values must be positive and increasing")
    return vals


def _spec_from(args, kind: str):
    from .problem import DispersionSpec, ProblemSpec, SmoothingSpec, WeightSpec, load_config

    if args.config:
        return load_config(args.config)
    if args.d is None or args.family is None:
        raise UsageError("--d and --family are required without --config")
    if args.m < 0:
        raise UsageError("--m must be nonnegative")
    if kind in ("dirac", "dirac_radial", "relativistic"):
        return ProblemSpec.dirac(args.d, args.family, args.s, args.m)
    phi = getattr(args, "phi", "schrodinger")
    dispersion = DispersionSpec("relativistic", args.m) if phi == "relativistic" else DispersionSpec("schrodinger")
    return ProblemSpec(args.d, WeightSpec(args.family, args.s), SmoothingSpec(args.psi), dispersion)


def _add_spec_flags(p):
    p.add_argument("--d", type=int, help="spatial dimension")
    p.add_argument("--family", choices=["A", "B", "C", "gaussian"], help="weight family")
    p.add_argument("--s", type=float, default=2.0, help="weight exponent (default 2)")
    p.add_argument("--m", type=float, default=0.0, help="mass (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpsmooth", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="key = value problem file (d, m, family, s, psi, phi)")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks (default 0)")
    parser.add_argument("--threads", type=int, help="cap on BLAS/OpenMP worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda", help="sample lambda curves as CSV")
    _add_spec_flags(p)
    p.add_argument("--kind", choices=["schrodinger", "dirac", "dirac-radial"], default="schrodinger")
    p.add_argument("--psi", default="standard", help="smoothing tag for --kind schrodinger")
    p.add_argument("--phi", choices=["schrodinger", "relativistic"], default="schrodinger")
    p.add_argument("--k", default="0", help="k values: '3', '0..3', '0,2,5' or '' for none")
    p.add_argument("--r", default="0.01..100", help="'lo..hi' or comma-separated radii")
    p.add_argument("--points", type=int, default=101, help="points for an r range")
    p.add_argument("--spacing", choices=["log", "linear"], default="log")
    p.add_argument("--out", help="write CSV here instead of stdout")

    p = sub.add_parser("constant", help="compute a sharp constant as JSON")
    _add_spec_flags(p)
    p.add_argument("--equation", choices=["schrodinger", "relativistic", "dirac", "dirac-radial"], default="schrodinger")
    p.add_argument("--psi", default="standard", help="smoothing tag for --equation schrodinger")
    p.add_argument("--method", choices=["auto", "numeric", "closed_form"], default="auto")
    p.add_argument(
        "--norm",
        choices=["paper", "operator"],
        default="paper",
        help="paper: sup lambda / (2 pi)^(d-1) (default); operator: (2 pi)^d times that",
    )
    p.add_argument("--expect", type=float, help="exit 4 unless the constant matches this value")
    p.add_argument("--rtol", type=float, default=1e-6, help="relative tolerance for --expect")
    p.add_argument("--k-max", type=int, help="largest k searched")
    p.add_argument("--r-min", type=float, help="smallest r on the search grid")
    p.add_argument("--r-max", type=float, help="largest r on the search grid")
    p.add_argument("--points-per-decade", type=int, help="search grid density")
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("verify", help="run identity suites")
    p.add_argument("--suite", choices=["specialfn", "harmonics", "algebra", "funk-hecke", "equivalence", "all"], default="all")
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("oracle", help="compare the direct and spectral norms on a scenario")
    p.add_argument("scenario", help="scenario file, or the name of a bundled scenario")
    p.add_argument("--log", help="append a CSV row (scenario, spectral, direct, rel_diff, budget)")
    p.add_argument("--rotation-seed", type=int, help="rotate the evaluation grid")

    sub.add_parser("info", help="version, bundled scenarios and exit codes")
    return parser


def _num(x: float) -> str:
    return f"{x:.17g}"


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_lambda(args) -> int:
    from .curves import profiles_to_csv, sample_profile

    kind = args.kind.replace("-", "_")
    spec = _spec_from(args, kind)
    ks = _int_range(args.k)
    r = _r_grid(args.r, args.points, args.spacing)
    if kind == "dirac_radial":
        ks = ks[:1] and [0]
    profiles = [sample_profile(spec, k, kind, r) for k in ks]
    _emit(profiles_to_csv(profiles), args.out)
    return EXIT_OK


def run_constant(args) -> int:
    from dataclasses import replace

    from .optimum import SearchPolicy, SupNotLocalized, dirac_constant, dirac_radial_constant, schrodinger_constant

    spec = _spec_from(args, args.equation.replace("-", "_"))
    policy = SearchPolicy()
    overrides = {
        name: getattr(args, name)
        for name in ("k_max", "r_min", "r_max", "points_per_decade")
        if getattr(args, name) is not None
    }
    policy = replace(policy, **overrides)
    fn = {
        "schrodinger": schrodinger_constant,
        "relativistic": schrodinger_constant,
        "dirac": dirac_constant,
        "dirac-radial": dirac_radial_constant,
    }[args.equation]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SupNotLocalized)
        report = fn(spec, policy, args.method)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(report.to_json(args.norm) + "\n", args.out)
    if args.expect is not None:
        value = report.value * report.scale(args.norm)
        if not math.isclose(value, args.expect, rel_tol=args.rtol, abs_tol=0.0):
            print(f"mismatch: constant {_num(value)} vs expected {_num(args.expect)} (rtol {args.rtol:g})", file=sys.stderr)
            return EXIT_MISMATCH
    if not report.localized:
        return EXIT_NOT_LOCALIZED
    return EXIT_OK


def run_verify(args) -> int:
    from .checks import run_suite

    checks = run_suite(args.suite, args.seed)
    width = max(len(c.name) for c in checks)
    for c in checks:
        flag = "PASS" if c.passed else "FAIL"
        print(f"{flag}  {c.suite:<12} {c.name:<{width}}  residual={c.residual:.3e}  tol={c.tolerance:.1e}", file=sys.stderr)
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if payload["passed"] else EXIT_VERIFY


def run_oracle(args) -> int:
    from .oracle import bundled_scenarios, load_scenario, run_scenario

    if os.path.exists(args.scenario):
        sc = load_scenario(args.scenario)
    else:
        bundled = bundled_scenarios()
        if args.scenario not in bundled:
            raise UsageError(f"no scenario file or bundled scenario named {args.scenario!r}")
        sc = bundled[args.scenario]
    res = run_scenario(sc, args.rotation_seed)
    row = [res["scenario"], _num(res["spectral"]), _num(res["direct"]), _num(res["rel_diff"]), _num(res["budget"])]
    if args.log:
        fresh = not os.path.exists(args.log) or os.path.getsize(args.log) == 0
        with open(args.log, "a", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if fresh:
                writer.writerow(["scenario", "spectral", "direct", "rel_diff", "budget"])
            writer.writerow(row)
    print(",".join(row))
    print(
        f"{sc.name}: spectral={res['spectral']:.10g} direct={res['direct']:.10g} "
        f"rel_diff={res['rel_diff']:.3e} budget={res['budget']:g} "
        f"tail_x={res['tail_x']:.2e} tail_t={res['tail_t']:.2e}",
        file=sys.stderr,
    )
    return EXIT_OK if res["rel_diff"] <= res["budget"] else EXIT_MISMATCH


def run_info(args) -> int:
    import numpy
    import scipy

    from . import __version__
    from .oracle import bundled_scenarios
    from .problem import FAMILIES

    info = {
        "version": __version__,
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "weight_families": list(FAMILIES),
        "bundled_scenarios": sorted(bundled_scenarios()),
        "exit_codes": {str(k): v for k, v in EXIT_CODES.items()},
    }
    sys.stdout.write(json.dumps(info, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {
    "lambda": run_lambda,
    "constant": run_constant,
    "verify": run_verify,
    "oracle": run_oracle,
    "info": run_info,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return EXIT_INPUT
        for var in _THREAD_VARS:
            os.environ[var] = str(args.threads)

    from .curves import QuadratureError
    from .harmonics import QuadratureFailure
    from .oracle import TruncationNotConverged
    from .problem import DivergentTransformError

    try:
        return _COMMANDS[args.command](args)
    except TruncationNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (QuadratureError, QuadratureFailure, DivergentTransformError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (UsageError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
