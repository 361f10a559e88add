"""Command-line interface: exact values, simulation, sweeps, property checks.

Subcommands
-----------
* ``exact``     -- closed-form record probabilities and Roman harmonics.
* ``simulate``  -- Monte Carlo estimates with reproducible seeds.
* ``sweep``     -- parameter grids combining exact values and estimates.
* ``check``     -- ordering / dependence / limit property checks.

Exit codes: 0 success, 2 usage error, 3 invalid parameter or spec,
4 partial failure (some sweep rows failed), 5 property violation.

Output goes to stdout or ``--out-file`` as CSV (RFC 4180, floats with 12
significant digits) or JSON lines (one object per row, native numbers).
Every row carries ``schema_version``, the command name and the seed, so any
number is traceable to (command, params, seed). Timing is reported on
stderr only, keeping machine output byte-identical across reruns and across
``--workers`` settings.

Distribution specs serialize as JSON objects::

    {"family": "iid-exp" | "dir" | "pa" | "dirichlet" | "comonotone"
               | "mixture",
     "d": int,            # iid-exp, dir, pa, comonotone
     "a": float,          # dir, pa
     "b": [float, ...],   # dirichlet
     "q": float, "first": {...}, "second": {...}}   # mixture

The default seed is 0; the environment variable ``RECORDS_SEED`` overrides
it and the ``--seed`` flag wins over both.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import RecordsError
from .exact import (
    pn_independent,
    pn_independent_exact,
    pn_marginal_dirichlet,
    pn_scale_mixture,
    roman_harmonic,
)
from .model import (
    Comonotone,
    Dirichlet,
    DistributionSpec,
    ExperimentConfig,
    ExponentialScaleMixture,
    IidExponential,
    MarginalDirichlet,
    Mixture,
    validate,
)
from .ordering import (
    Direction,
    check_nuod,
    check_p2_bound,
    check_record_order,
    default_probe_grid,
)
from .samplers import make_rng
from .simulate import (
    concomitant_check,
    estimate_maxima,
    estimate_record_prob,
    estimate_record_prob_survival,
    simulate_trajectory,
    sweep,
)

__all__ = ["main", "spec_from_json", "spec_to_json"]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARAMETER = 3
EXIT_PARTIAL = 4
EXIT_VIOLATION = 5


# ---------------------------------------------------------------------------
# Spec (de)serialization -- the JSON schema lives here
# ---------------------------------------------------------------------------


def spec_to_json(spec: DistributionSpec) -> dict:
    """Encode a spec as a plain JSON-compatible dict."""
    if isinstance(spec, IidExponential):
        return {"family": "iid-exp", "d": spec.d}
    if isinstance(spec, MarginalDirichlet):
        return {"family": "dir", "d": spec.d, "a": spec.a}
    if isinstance(spec, ExponentialScaleMixture):
        return {"family": "pa", "d": spec.d, "a": spec.a}
    if isinstance(spec, Dirichlet):
        return {"family": "dirichlet", "b": list(spec.b)}
    if isinstance(spec, Comonotone):
        return {"family": "comonotone", "d": spec.d}
    if isinstance(spec, Mixture):
        return {
            "family": "mixture",
            "q": spec.q,
            "first": spec_to_json(spec.first),
            "second": spec_to_json(spec.second),
        }
    raise RecordsError(f"unknown spec type: {spec!r}")


def spec_from_json(obj) -> DistributionSpec:
    """Decode a spec from a dict or JSON string (inverse of spec_to_json)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "family" not in obj:
        raise RecordsError(f"spec object must be a dict with a 'family' key, got {obj!r}")
    family = obj["family"]
    try:
        if family == "iid-exp":
            return IidExponential(obj["d"])
        if family == "dir":
            return MarginalDirichlet(obj["d"], obj["a"])
        if family == "pa":
            return ExponentialScaleMixture(obj["d"], obj["a"])
        if family == "dirichlet":
            return Dirichlet(tuple(obj["b"]))
        if family == "comonotone":
            return Comonotone(obj["d"])
        if family == "mixture":
            return Mixture(obj["q"], spec_from_json(obj["first"]), spec_from_json(obj["second"]))
    except KeyError as exc:
        raise RecordsError(f"spec for family {family!r} is missing field {exc}") from None
    raise RecordsError(f"unknown family {family!r}")


def _spec_from_args(args) -> DistributionSpec:
    if getattr(args, "spec", None):
        return spec_from_json(args.spec)
    family = args.family
    if family is None:
        raise RecordsError("either --family or --spec is required")
    if family == "mixture":
        raise RecordsError("mixtures must be given via --spec JSON")
    obj = {"family": family}
    if family == "dirichlet":
        if not args.b:
            raise RecordsError("--b is required for the dirichlet family")
        obj["b"] = [float(v) for v in args.b.split(",")]
    else:
        if args.d is None:
            raise RecordsError(f"--d is required for family {family}")
        obj["d"] = args.d
        if family in ("dir", "pa"):
            if args.a is None:
                raise RecordsError(f"--a is required for family {family}")
            obj["a"] = args.a
    return spec_from_json(obj)


# ---------------------------------------------------------------------------
# Output machinery
# ---------------------------------------------------------------------------


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def emit_rows(rows: list[dict], out: str, out_file: str | None) -> None:
    """Write rows as CSV (with header) or JSON lines to stdout or a file."""
    if out == "csv":
        buf = io.StringIO()
        fieldnames = list(rows[0].keys()) if rows else []
        writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _format_value(v) for k, v in row.items()})
        text = buf.getvalue()
    else:
        text = "".join(json.dumps(row, sort_keys=False) + "\n" for row in rows)
    if out_file:
        with open(out_file, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def read_table(path_or_text: str, from_file: bool = True) -> list[dict]:
    """Parse a CSV table written by :func:`emit_rows` back into row dicts.

    Numeric-looking fields come back as int or float, empty fields as None;
    used by the round-trip tests and handy for downstream scripts.
    """
    if from_file:
        with open(path_or_text, encoding="utf-8", newline="") as fh:
            text = fh.read()
    else:
        text = path_or_text
    rows = []
    for raw in csv.DictReader(io.StringIO(text)):
        row = {}
        for key, val in raw.items():
            if val == "" or val is None:
                row[key] = None
            elif val in ("true", "false"):
                row[key] = val == "true"
            else:
                try:
                    row[key] = int(val)
                except ValueError:
                    try:
                        row[key] = float(val)
                    except ValueError:
                        row[key] = val
        rows.append(row)
    return rows


def _base_row(command: str, seed: int | None) -> dict:
    row = {"schema_version": SCHEMA_VERSION, "command": command, "version": __version__}
    if seed is not None:
        row["seed"] = seed
    return row


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_exact(args) -> int:
    formula = args.formula
    row = _base_row("exact", None)
    row.update({"formula": formula, "n": args.n})
    if formula == "roman":
        k = args.k if args.k is not None else 0
        value = roman_harmonic(args.n, k)
        row["k"] = k
        row["value"] = float(value)
        if args.rational:
            row["numerator"] = value.numerator
            row["denominator"] = value.denominator
    elif formula == "pstar":
        if args.d is None:
            raise RecordsError("--d is required for pstar")
        row["d"] = args.d
        row["value"] = pn_independent(args.n, args.d)
        if args.rational:
            value = pn_independent_exact(args.n, args.d)
            row["numerator"] = value.numerator
            row["denominator"] = value.denominator
    elif formula in ("pdir", "ppa"):
        if args.d is None or args.a is None:
            raise RecordsError(f"--d and --a are required for {formula}")
        if args.rational:
            raise RecordsError("--rational is defined for pstar and roman only")
        fn = pn_marginal_dirichlet if formula == "pdir" else pn_scale_mixture
        row.update({"d": args.d, "a": args.a, "value": fn(args.n, args.d, args.a)})
    else:  # pragma: no cover - argparse restricts choices
        raise RecordsError(f"unknown formula {formula!r}")
    emit_rows([row], args.out, args.out_file)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    validate(spec)
    seed = _resolve_seed(args)
    t0 = time.perf_counter()
    rows = []
    if args.estimand == "pn":
        if args.estimator == "survival":
            est = estimate_record_prob_survival(spec, args.n, args.reps, seed, args.workers)
        else:
            est = estimate_record_prob(ExperimentConfig(spec, args.n, args.reps, seed, args.workers))
        row = _base_row("simulate", seed)
        row.update(spec_to_json_flat(spec))
        row.update(
            {
                "estimand": "pn",
                "estimator": args.estimator,
                "n": args.n,
                "reps": args.reps,
                "estimate": est.point,
                "std_error": est.std_error,
            }
        )
        rows.append(row)
    else:
        result = estimate_maxima(ExperimentConfig(spec, args.n, args.reps, seed, args.workers))
        for name, est in (("records_mean", result.records), ("maxima_mean", result.maxima)):
            row = _base_row("simulate", seed)
            row.update(spec_to_json_flat(spec))
            row.update(
                {
                    "estimand": name,
                    "estimator": "indicator",
                    "n": args.n,
                    "reps": args.reps,
                    "estimate": est.point,
                    "std_error": est.std_error,
                }
            )
            rows.append(row)
    if args.emit_trajectory:
        _write_trajectory(args.emit_trajectory, spec, args.n, seed)
    emit_rows(rows, args.out, args.out_file)
    print(f"elapsed {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    return EXIT_OK


def spec_to_json_flat(spec: DistributionSpec) -> dict:
    """Spec fields flattened for tabular output (mixtures nest as JSON text)."""
    obj = spec_to_json(spec)
    if obj["family"] == "mixture":
        return {"family": "mixture", "spec": json.dumps(obj)}
    if obj["family"] == "dirichlet":
        return {"family": "dirichlet", "b": ",".join(repr(v) for v in obj["b"])}
    return obj


def _write_trajectory(path: str, spec, n: int, seed: int) -> None:
    # One stream (stream index 0), one row per step: step, is_record, broken, r_n.
    result = simulate_trajectory(spec, n, make_rng(seed, 0))
    running = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "is_record", "broken", "maxima_count"])
        for step, outcome in enumerate(result.outcomes, start=1):
            if outcome.is_record:
                running += 1 - outcome.broken
            writer.writerow([step, _format_value(outcome.is_record), outcome.broken, running])


def _cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    lo, hi, steps = _parse_grid(args.a_grid)
    grid = np.geomspace(lo, hi, steps)
    reps = args.reps if args.with_mc else 0
    t0 = time.perf_counter()
    rows_out = []
    failures = 0
    results = sweep(
        args.family,
        a_values=grid,
        n=args.n,
        d=args.d,
        reps=reps,
        seed=seed,
        workers=args.workers,
        estimator=args.estimator,
    )
    for r in results:
        row = _base_row("sweep", seed)
        row.update(
            {
                "family": r.family,
                "n": r.n,
                "d": r.d,
                "a": r.a,
                "exact": r.exact,
                "mc": r.estimate,
                "se": r.std_error,
                "sigma_gap": r.sigma_gap,
                "error": r.error,
            }
        )
        rows_out.append(row)
        failures += r.error is not None
    emit_rows(rows_out, args.out, args.out_file)
    print(f"elapsed {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise RecordsError(f"grid must look like lo:hi:steps, got {text!r}")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if lo <= 0 or hi <= 0 or steps < 1:
        raise RecordsError("grid endpoints must be > 0 (log spacing) and steps >= 1")
    return lo, hi, steps


def _cmd_check(args) -> int:
    seed = _resolve_seed(args)
    kind = args.check
    handler = {
        "rp-order": _check_rp_order,
        "nuod": _check_nuod,
        "p2": _check_p2,
        "concomitant": _check_concomitant,
        "limits": _check_limits,
    }[kind]
    report = handler(args, seed)
    report_row = _base_row("check", seed)
    report_row.update(report)
    emit_rows([report_row], args.out, args.out_file)
    return EXIT_OK if report["verdict"] == "pass" else EXIT_VIOLATION


def _check_rp_order(args, seed: int) -> dict:
    spec_first = _spec_from_args(args)
    if args.family2 is None and not args.spec2:
        raise RecordsError("rp-order needs a second spec (--family2/--a2/--d2 or --spec2)")
    if args.spec2:
        spec_second = spec_from_json(args.spec2)
    else:
        obj = {"family": args.family2}
        if args.family2 != "dirichlet":
            obj["d"] = args.d2 if args.d2 is not None else args.d
            if args.family2 in ("dir", "pa"):
                if args.a2 is None:
                    raise RecordsError("--a2 is required for family2 dir/pa")
                obj["a"] = args.a2
        spec_second = spec_from_json(obj)
    verdict = check_record_order(spec_first, spec_second, args.samples, make_rng(seed, 0))
    expected = _expected_direction(spec_first, spec_second)
    violated = expected is not None and verdict.direction not in (expected, Direction.INDISTINGUISHABLE)
    return {
        "check": "rp-order",
        "first": json.dumps(spec_to_json(spec_first)),
        "second": json.dumps(spec_to_json(spec_second)),
        "samples": args.samples,
        "direction": verdict.direction.value,
        "statistic": verdict.statistic,
        "threshold": verdict.threshold,
        "expected": expected.value if expected is not None else None,
        "verdict": "violation" if violated else "pass",
    }


def _expected_direction(first, second) -> Direction | None:
    # Theoretical ordering when both families admit an exact p_2.
    def exact_p2(spec):
        if isinstance(spec, IidExponential):
            return pn_independent(2, spec.d)
        if isinstance(spec, MarginalDirichlet):
            return pn_marginal_dirichlet(2, spec.d, spec.a)
        if isinstance(spec, ExponentialScaleMixture):
            return pn_scale_mixture(2, spec.d, spec.a)
        return None

    p_first, p_second = exact_p2(first), exact_p2(second)
    if p_first is None or p_second is None or first.dim != second.dim:
        return None
    if math.isclose(p_first, p_second, rel_tol=1e-12):
        return Direction.INDISTINGUISHABLE
    return Direction.FIRST_DOMINATES if p_first < p_second else Direction.SECOND_DOMINATES


def _check_nuod(args, seed: int) -> dict:
    spec = _spec_from_args(args)
    rng = make_rng(seed, 0)
    probes = default_probe_grid(spec, rng)
    result = check_nuod(spec, probes, args.samples, rng)
    return {
        "check": "nuod",
        "spec": json.dumps(spec_to_json(spec)),
        "samples": args.samples,
        "probes": probes.shape[0],
        "worst_margin_sigma": result.worst_margin_sigma,
        "slack_sigma": result.slack_sigma,
        "verdict": "pass" if result.consistent else "violation",
    }


def _check_p2(args, seed: int) -> dict:
    spec = _spec_from_args(args)
    result = check_p2_bound(spec, args.samples, make_rng(seed, 0))
    # Expected side of the bound, when the family pins one down.
    if isinstance(spec, MarginalDirichlet):
        ok = result.margin_sigma >= -4.0
    elif isinstance(spec, ExponentialScaleMixture):
        ok = result.margin_sigma <= 4.0
    elif isinstance(spec, IidExponential):
        ok = abs(result.margin_sigma) <= 4.0
    else:
        ok = True
    return {
        "check": "p2",
        "spec": json.dumps(spec_to_json(spec)),
        "samples": args.samples,
        "estimate": result.estimate,
        "std_error": result.std_error,
        "bound": result.bound,
        "margin_sigma": result.margin_sigma,
        "verdict": "pass" if ok else "violation",
    }


def _check_concomitant(args, seed: int) -> dict:
    spec = _spec_from_args(args)
    result = concomitant_check(spec, args.n, args.reps, seed, args.workers)
    return {
        "check": "concomitant",
        "spec": json.dumps(spec_to_json(spec)),
        "n": args.n,
        "reps": args.reps,
        "statistic": result.statistic,
        "dof": result.dof,
        "pvalue": result.pvalue,
        "alpha": args.alpha,
        "verdict": "pass" if result.pvalue >= args.alpha else "violation",
    }


def _check_limits(args, seed: int) -> dict:
    if args.family not in ("dir", "pa"):
        raise RecordsError("limits check needs --family dir or pa")
    if args.d is None:
        raise RecordsError("--d is required for the limits check")
    n, d = args.n, args.d
    fn = pn_marginal_dirichlet if args.family == "dir" else pn_scale_mixture
    p_small = fn(n, d, 1e-3)
    p_large = fn(n, d, 1e3)
    p_indep = pn_independent(n, d)
    small_target = 1.0 if args.family == "dir" else 1.0 / n
    gap_small = abs(p_small - small_target)
    gap_large = abs(p_large - p_indep)
    ok = gap_small <= 2e-2 and gap_large <= 1e-3
    return {
        "check": "limits",
        "family": args.family,
        "n": n,
        "d": d,
        "p_at_a_0.001": p_small,
        "small_a_target": small_target,
        "small_a_gap": gap_small,
        "p_at_a_1000": p_large,
        "large_a_target": p_indep,
        "large_a_gap": gap_large,
        "verdict": "pass" if ok else "violation",
    }


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RECORDS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise RecordsError(f"RECORDS_SEED must be an integer, got {env!r}") from None
    return 0


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--family",
        choices=["iid-exp", "dir", "pa", "dirichlet", "comonotone", "mixture"],
        help="distribution family (dir = marginalized Dirichlet, pa = Exponential scale mixture)",
    )
    p.add_argument("--d", type=int, help="dimension")
    p.add_argument("--a", type=float, help="family parameter a > 0")
    p.add_argument("--b", help="comma-separated Dirichlet parameters")
    p.add_argument("--q", type=float, help="mixture weight of the second component")
    p.add_argument("--spec", help="full spec as a JSON object (required for mixtures)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", choices=["csv", "json"], default="csv", help="output format")
    p.add_argument("--out-file", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pareto-records",
        description="Exact and Monte Carlo analysis of multivariate Pareto record probabilities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_exact = sub.add_parser("exact", help="closed-form values")
    p_exact.add_argument("--formula", choices=["pstar", "pdir", "ppa", "roman"], required=True)
    p_exact.add_argument("--n", type=int, required=True)
    p_exact.add_argument("--d", type=int)
    p_exact.add_argument("--k", type=int, help="order of the Roman harmonic number")
    p_exact.add_argument("--a", type=float)
    p_exact.add_argument("--rational", action="store_true", help="also emit numerator/denominator")
    _add_output_flags(p_exact)
    p_exact.set_defaults(handler=_cmd_exact)

    p_sim = sub.add_parser("simulate", help="Monte Carlo estimation")
    _add_spec_flags(p_sim)
    p_sim.add_argument("--n", type=int, required=True, help="stream length / horizon")
    p_sim.add_argument("--reps", type=int, required=True, help="replicate count")
    p_sim.add_argument("--seed", type=int, help="seed (default: $RECORDS_SEED or 0)")
    p_sim.add_argument("--workers", type=int, default=1, help="worker threads (never affects results)")
    p_sim.add_argument("--estimator", choices=["indicator", "survival"], default="indicator")
    p_sim.add_argument("--estimand", choices=["pn", "maxima"], default="pn")
    p_sim.add_argument("--emit-trajectory", metavar="PATH", help="dump one stream as CSV per-step rows")
    _add_output_flags(p_sim)
    p_sim.set_defaults(handler=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="grids over the family parameter")
    p_sweep.add_argument("--family", choices=["dir", "pa"], required=True)
    p_sweep.add_argument("--a-grid", required=True, metavar="LO:HI:STEPS", help="log-spaced grid")
    p_sweep.add_argument("--n", type=int, required=True)
    p_sweep.add_argument("--d", type=int, required=True)
    p_sweep.add_argument("--with-mc", action="store_true", help="add Monte Carlo columns")
    p_sweep.add_argument("--reps", type=int, default=100_000)
    p_sweep.add_argument("--estimator", choices=["indicator", "survival"], default="indicator")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--workers", type=int, default=1)
    _add_output_flags(p_sweep)
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_check = sub.add_parser("check", help="property checks with JSON verdicts")
    p_check.add_argument(
        "--check", choices=["rp-order", "nuod", "p2", "concomitant", "limits"], required=True
    )
    _add_spec_flags(p_check)
    p_check.add_argument("--family2", choices=["iid-exp", "dir", "pa"], help="second spec (rp-order)")
    p_check.add_argument("--d2", type=int)
    p_check.add_argument("--a2", type=float)
    p_check.add_argument("--spec2", help="second spec as JSON (rp-order)")
    p_check.add_argument("--n", type=int, default=50)
    p_check.add_argument("--reps", type=int, default=100_000)
    p_check.add_argument("--samples", type=int, default=100_000)
    p_check.add_argument("--alpha", type=float, default=1e-3)
    p_check.add_argument("--seed", type=int)
    p_check.add_argument("--workers", type=int, default=1)
    _add_output_flags(p_check)
    p_check.set_defaults(handler=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except RecordsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except Exception as exc:  # noqa: BLE001 - nothing may escape to the shell
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
