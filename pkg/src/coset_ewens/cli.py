"""Command-line surface: classification, verification sweeps, probability
tables, sampling experiments, and series/tail computations.

One JSON envelope per invocation on stdout (or --out); --csv switches
table-shaped payloads to CSV.  Exit codes: 0 ok, 2 usage error, 3
verification failure, 4 resource-cap rejection.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import series as series_mod
from .cosets import (
    canonical_rep,
    coset_class,
    cycle_string,
    double_coset_size,
    enumerate_double_cosets,
    intersection_subgroup,
    order_histogram,
    partition_of,
    predicted_intersection_order,
    wreath_model,
)
from .errors import ResourceLimitError
from .ewens import coset_probability, good_probability_mc
from .partitions import Partition, enumerate_partitions
from .perm import cycle_string as perm_cycle_string
from .perm import parse_permutation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY_FAILED = 3
EXIT_RESOURCE = 4


class VerificationFailure(Exception):
    pass


def _fmt_float(x: float) -> str:
    return format(x, ".17g")


def _fmt_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("COSET_EWENS_THREADS")
    return int(env) if env else 1


def _parse_m_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# --- command payloads ----------------------------------------------------

def cmd_classify(args) -> dict:
    m = args.m
    g = parse_permutation(args.perm, 2 * m)
    lam = partition_of(g, m)
    record = coset_class(lam, m).to_json_dict()
    record["m"] = m
    record["input_cycles"] = perm_cycle_string(g)
    return record


def cmd_verify(args) -> dict:
    m = args.m
    if m > 5:
        raise ValueError("verify is limited to m <= 5")
    classes = []
    all_ok = True
    for lam in enumerate_partitions(m):
        rep = canonical_rep(lam, m)
        subgroup = intersection_subgroup(rep, m)
        predicted = predicted_intersection_order(lam)
        order_ok = len(subgroup) == predicted
        model_order, model_hist = wreath_model(lam)
        hist = order_histogram(subgroup)
        fingerprint_ok = model_order == len(subgroup) and model_hist == hist
        all_ok = all_ok and order_ok and fingerprint_ok
        classes.append({
            "lambda": str(lam),
            "predicted_order": str(predicted),
            "brute_force_order": str(len(subgroup)),
            "order_ok": order_ok,
            "fingerprint_ok": fingerprint_ok,
        })
    payload: dict = {"m": m, "classes": classes}
    if m <= 4:
        orbits = enumerate_double_cosets(m)
        expected_sizes = sorted(double_coset_size(lam, m)
                                for lam in enumerate_partitions(m))
        got_sizes = sorted(o.size for o in orbits)
        orbit_ok = (len(orbits) == len(enumerate_partitions(m))
                    and expected_sizes == got_sizes)
        all_ok = all_ok and orbit_ok
        payload["orbits"] = {
            "count": len(orbits),
            "expected_count": len(enumerate_partitions(m)),
            "sizes_ok": orbit_ok,
        }
    total = sum(double_coset_size(lam, m) for lam in enumerate_partitions(m))
    mass_ok = total == math.factorial(2 * m)
    all_ok = all_ok and mass_ok
    payload["mass_identity_ok"] = mass_ok
    payload["all_ok"] = all_ok
    if not all_ok:
        raise VerificationFailure(json.dumps(payload))
    return payload


def cmd_double_cosets(args) -> dict:
    m = args.m
    classes = [coset_class(lam, m).to_json_dict() for lam in enumerate_partitions(m)]
    return {"m": m, "classes": classes}


def cmd_table(args) -> dict:
    m = args.m
    rows = []
    total = Fraction(0)
    for lam in enumerate_partitions(m):
        prob = coset_probability(lam, m)
        total += prob
        rows.append({
            "lambda": str(lam),
            "predicted_order": str(predicted_intersection_order(lam)),
            "coset_size": str(double_coset_size(lam, m)),
            "probability": _fmt_fraction(prob),
            "probability_float": float(prob),
        })
    return {"m": m, "rows": rows, "total": _fmt_fraction(total)}


def cmd_sample(args) -> dict:
    report = good_probability_mc(args.m, args.c, args.samples, args.seed,
                                 threads=_threads(args))
    return report.to_json_dict()


def cmd_tails(args) -> dict:
    m, c = args.m, args.c
    if args.alpha_grid:
        alphas = [float(t) for t in args.alpha_grid.split(",")]
    else:
        alphas = list(series_mod.default_alpha_grid(args.alpha_points))
    left = series_mod.left_tail_bound(m, c, alphas)
    beta = args.beta if args.beta is not None else series_mod.default_right_beta(m, args.t)
    right = series_mod.right_tail_bound(m, c, beta)
    return {
        "m": m,
        "c": c,
        "left": {
            "bound": left.bound,
            "alpha_argmin": left.parameter,
            "grid": [[a, b] for a, b in left.grid],
        },
        "right": {
            "bound": right.bound,
            "beta": right.parameter,
        },
    }


def cmd_series(args) -> dict:
    beta = args.beta
    if beta >= 0 and float(beta).is_integer() \
            and args.max_degree <= series_mod.SERIES_EXACT_MAX_M:
        beta = int(beta)
    ts = series_mod.W_series_coeffs(beta, args.max_degree)
    coeffs: list = []
    for v in ts.coefficients:
        coeffs.append(_fmt_fraction(v) if ts.exact else v)
    return {
        "beta": args.beta,
        "max_degree": ts.truncation,
        "exact": ts.exact,
        "coefficients": coeffs,
    }


def cmd_asymptotics(args) -> dict:
    m_list = _parse_m_list(args.m_list)
    rows = series_mod.asymptotic_diagnostic(args.beta, m_list)
    w1 = series_mod.W_at_one(args.beta)
    return {
        "beta": args.beta,
        "product_at_one": w1.value,
        "product_error_bound": w1.error_bound,
        "limit": rows[0].limit if rows else None,
        "rows": [
            {"m": r.m, "scaled": r.scaled, "relative_deviation": r.relative_deviation}
            for r in rows
        ],
    }


# --- CSV rendering -------------------------------------------------------

def _csv_escape(v) -> str:
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def _rows_to_csv(fieldnames: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(",".join(fieldnames) + "\n")
    for row in rows:
        buf.write(",".join(_csv_escape(row[f]) for f in fieldnames) + "\n")
    return buf.getvalue()


def _payload_csv(command: str, payload: dict) -> str | None:
    if command == "table":
        return _rows_to_csv(
            ["lambda", "predicted_order", "coset_size", "probability", "probability_float"],
            payload["rows"])
    if command == "double-cosets":
        return _rows_to_csv(
            ["lambda", "predicted_order", "coset_size", "canonical"],
            payload["classes"])
    if command == "sample":
        return _rows_to_csv(
            ["m", "c", "samples", "frequency", "wilson_radius_95", "seed"],
            [payload])
    if command == "series":
        rows = [{"m": k, "coefficient": v} for k, v in enumerate(payload["coefficients"])]
        return _rows_to_csv(["m", "coefficient"], rows)
    if command == "asymptotics":
        rows = [{"m": r["m"], "scaled": r["scaled"],
                 "relative_deviation": r["relative_deviation"],
                 "limit": payload["limit"]} for r in payload["rows"]]
        return _rows_to_csv(["m", "scaled", "limit", "relative_deviation"], rows)
    if command == "tails":
        rows = [{"alpha": a, "left_bound": b} for a, b in payload["left"]["grid"]]
        return _rows_to_csv(["alpha", "left_bound"], rows)
    return None


# --- driver --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (fallback: COSET_EWENS_THREADS)")
    common.add_argument("--out", type=str, default=None, help="write output to file")
    common.add_argument("--csv", action="store_true", help="emit tables as CSV")

    parser = argparse.ArgumentParser(prog="coset-ewens", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="classify a permutation of S_2m into its double coset")
    p.add_argument("perm", help='permutation text, e.g. "(1 3)" or "[3,4,1,2]"')
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", parents=[common],
                       help="brute-force verification sweep for one m (m <= 5)")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("double-cosets", parents=[common],
                       help="per-class classification table for one m")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_double_cosets)

    p = sub.add_parser("table", parents=[common],
                       help="exact class probability table for one m")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sample", parents=[common],
                       help="Monte Carlo estimate of P(f <= m^c)")
    p.add_argument("m", type=int)
    p.add_argument("c", type=float)
    p.add_argument("samples", type=int)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("tails", parents=[common],
                       help="moment bounds for the two tails at (m, c)")
    p.add_argument("m", type=int)
    p.add_argument("c", type=float)
    p.add_argument("--alpha-grid", type=str, default=None,
                   help="comma-separated alpha grid for the left bound")
    p.add_argument("--alpha-points", type=int, default=64)
    p.add_argument("--beta", type=float, default=None,
                   help="right-tail beta in (0,1); default 1 - t/(log m)^2")
    p.add_argument("--t", type=float, default=1.0)
    p.set_defaults(func=cmd_tails)

    p = sub.add_parser("series", parents=[common],
                       help="coefficients of the weighted-sum generating function")
    p.add_argument("beta", type=float)
    p.add_argument("max_degree", type=int)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("asymptotics", parents=[common],
                       help="convergence diagnostic for beta > 1")
    p.add_argument("beta", type=float)
    p.add_argument("--m-list", type=str, required=True,
                   help="comma-separated m values")
    p.set_defaults(func=cmd_asymptotics)
    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "command", "out", "csv") and v is not None}
    start = time.monotonic()

    def envelope(status: str, payload=None, error=None) -> dict:
        env = {
            "command": args.command,
            "parameters": params,
            "status": status,
        }
        if payload is not None:
            env["payload"] = payload
        if error is not None:
            env["error"] = error
        env["elapsed_ms"] = int((time.monotonic() - start) * 1000)
        return env

    try:
        payload = args.func(args)
    except VerificationFailure as exc:
        env = envelope("error", error={"code": "verification_failed",
                                       "message": str(exc)})
        _emit(json.dumps(env) + "\n", args.out)
        return EXIT_VERIFY_FAILED
    except ResourceLimitError as exc:
        env = envelope("error", error={"code": "resource_cap", "message": str(exc)})
        _emit(json.dumps(env) + "\n", args.out)
        return EXIT_RESOURCE
    except (ValueError, OverflowError) as exc:
        env = envelope("error", error={"code": "usage", "message": str(exc)})
        _emit(json.dumps(env) + "\n", args.out)
        return EXIT_USAGE

    if args.csv:
        csv_text = _payload_csv(args.command, payload)
        if csv_text is not None:
            _emit(csv_text, args.out)
            return EXIT_OK
    _emit(json.dumps(envelope("ok", payload=payload)) + "\n", args.out)
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
