"""Command-line entry point.

Every subcommand writes one report: the full configuration, the constants
table, the result and a ``timing`` block.  Apart from ``timing`` the JSON
output depends only on the inputs and the seed.

Exit codes: 0 success, 2 invalid input, 3 inconclusive or failed check,
4 numerical failure.
"""

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
import time

import numpy as np

from . import condition, noise, plotting
from .chaosnorm import first, laplace, montecarlo
from .conventions import constants_table
from .errors import (DivergenceError, InvalidGram, InvalidParameter, MCDiagnosticError,
                     QuadratureError, UnsupportedEvaluation, WaveChaosError)
from .rng import default_threads
from .spectral import NoiseModel, homogeneous, model_from_dict
from .wavekernel import InitialData, w_eval

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_NUMERIC = 0, 2, 3, 4

SWEEP_ALPHA0 = tuple(round(0.1 * i, 1) for i in range(10))
SWEEP_ALPHA = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)


class InputError(Exception):
    pass


# ------------------------------------------------------------ argument types


def _positive_float(text):
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _nonneg_float(text):
    v = float(text)
    if not v >= 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return v


def _count(text):
    v = float(text)
    if v != int(v) or v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return int(v)


def _seed(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text}") from exc


def _ints(text):
    return [_count(x) for x in text.split(",") if x.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model JSON file")
    common.add_argument("--tol", type=_positive_float, default=1e-6, help="relative tolerance")
    common.add_argument("--seed", type=_seed, default=12345)
    common.add_argument("--samples", type=_count, default=1_000_000)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=_count, default=None,
                        help="worker threads for Monte Carlo (default: $WAVECHAOS_THREADS or 1)")
    common.add_argument("--figure", help="also draw a figure to this path (needs matplotlib)")

    ap = argparse.ArgumentParser(prog="wavechaos", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-condition", parents=[common], help="well-posedness verdict")
    p.add_argument("--method", choices=("auto", "shells"), default="auto")
    p.add_argument("--dalang", action="store_true", help="check int (1+|xi|^2)^-1 mu(dxi) instead")

    p = sub.add_parser("w-eval", parents=[common], help="free-wave term w(t, x)")
    p.add_argument("--data", required=True, help="initial data JSON file")
    p.add_argument("--t", type=_nonneg_float, required=True)
    p.add_argument("--x", type=_floats, required=True, help="comma-separated point")

    p = sub.add_parser("first-chaos", parents=[common], help="first chaos norm")
    p.add_argument("--t", type=_nonneg_float, required=True)
    p.add_argument("--route", choices=("auto", "time", "fourier", "closed"), default="auto")
    p.add_argument("--necessity", action="store_true", help="also report the necessity lower bound")

    p = sub.add_parser("laplace-bound", parents=[common], help="L_{alpha0,n} and the Laplace inequality")
    p.add_argument("--n", type=_ints, default=[1, 2, 4, 8, 16, 32, 64])
    p.add_argument("--t", type=_positive_float, default=1.0, help="time for the Laplace inequality")
    p.add_argument("--skip-inequality", action="store_true")

    p = sub.add_parser("scaling-test", parents=[common], help="Monte Carlo scaling law in d = 1")
    p.add_argument("--n", type=_count, default=1)
    p.add_argument("--alpha", type=_positive_float, default=0.5)
    p.add_argument("--alpha0", type=_nonneg_float, default=0.5)
    p.add_argument("--times", type=_floats, default=[0.5, 2.0])

    p = sub.add_parser("series-diag", parents=[common], help="chaos series partial sums (diagnostic)")
    p.add_argument("--t", type=_nonneg_float, default=1.0)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--w-sup", type=_nonneg_float, default=1.0)

    p = sub.add_parser("simulate-noise", parents=[common], help="empirical first chaos variance")
    p.add_argument("--t", type=_nonneg_float, default=1.0)

    p = sub.add_parser("sweep", parents=[common], help="phase diagram over homogeneous models")
    p.add_argument("--alpha0", type=_floats, default=list(SWEEP_ALPHA0))
    p.add_argument("--alpha", type=_floats, default=list(SWEEP_ALPHA))
    p.add_argument("--d", type=_ints, default=[1, 2, 3])
    p.add_argument("--method", choices=("auto", "shells"), default="auto")
    return ap


# --------------------------------------------------------------- helpers


def _load_json(path, what):
    if not path:
        raise InputError(f"--{what} is required for this command")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc}") from exc


def _model(args):
    return model_from_dict(_load_json(args.model, "model"))


def _mc(args):
    threads = args.threads if args.threads is not None else default_threads()
    return montecarlo.MCConfig(samples=args.samples, seed=args.seed, threads=threads)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    return obj


# -------------------------------------------------------------- commands
# each returns (status, result dict, csv rows)


def cmd_check_condition(args):
    model = _model(args)
    if args.dalang:
        v = condition.dalang_integral(model, tol=args.tol, method=args.method)
    else:
        v = condition.condition_integral(model, tol=args.tol, method=args.method)
    result = v.to_dict()
    result["integral"] = "dalang" if args.dalang else "condition"
    rows = [{"k": k, "S_k": s} for k, s in v.shells]
    if args.figure:
        plotting.shells_figure(result, args.figure)
    return v.status, result, rows


def cmd_w_eval(args):
    data = InitialData.from_dict(_load_json(args.data, "data"))
    value, err = w_eval(data, data.dimension, args.t, args.x, tol=args.tol)
    result = {"value": value, "error": err, "bound": data.bound(args.t), "t": args.t, "x": args.x,
              "data": data.to_dict()}
    return "ok", result, [{"t": args.t, "x": " ".join(map(str, args.x)), "value": value, "error": err}]


def cmd_first_chaos(args):
    model = _model(args)
    spec = first.ChaosKernelSpec(1, args.t, model)
    route = {"auto": first.first_chaos_norm, "time": first.first_chaos_norm_time,
             "fourier": first.first_chaos_norm_fourier,
             "closed": first.first_chaos_norm_closed_alpha0}[args.route]
    try:
        est = route(spec, tol=args.tol)
    except DivergenceError as exc:
        result = {"status": "divergent", "message": str(exc), "t": args.t}
        return "divergent", result, [{"t": args.t, "status": "divergent"}]
    result = {"status": "finite", "estimate": est.to_dict(), "t": args.t, "route": args.route}
    if args.necessity and model.alpha0 > 0:
        result["necessity_lower_bound"] = first.necessity_lower_bound(spec).to_dict()
    return "ok", result, [{"t": args.t, "value": est.value, "error": est.error, "method": est.method}]


def cmd_laplace_bound(args):
    model = _model(args)
    try:
        seq = laplace.l_sequence(model, args.n, tol=args.tol)
    except DivergenceError as exc:
        result = {"status": "divergent", "message": str(exc),
                  "verdict": exc.verdict.to_dict() if exc.verdict else None}
        return "divergent", result, [{"n": n, "n_L": "inf", "error": ""} for n in args.n]
    rows = [{"n": n, "n_L": v, "error": e} for n, v, e in seq]
    result = {"sequence": rows}
    status = "ok"
    if not args.skip_inequality:
        rep = laplace.laplace_monotonicity_check(first.ChaosKernelSpec(1, args.t, model), tol=args.tol)
        result["laplace_inequality"] = rep.to_dict()
        if not rep:
            status = rep.status
    tail = [r for r in rows if r["n"] >= 4]
    result["decreasing_from_4"] = all(b["n_L"] < a["n_L"] for a, b in zip(tail, tail[1:]))
    if args.figure:
        plotting.l_sequence_figure(rows, args.figure)
    return status, result, rows


def cmd_scaling_test(args):
    rep = montecarlo.scaling_check(args.n, args.alpha0, args.alpha, args.times, _mc(args))
    rows = []
    for r in rep.rows:
        ref = rep.reference
        ratio_se = r["ratio"] * math.hypot(r["stderr"] / r["estimate"], ref.error / ref.value)
        rows.append({"t": r["t"], "ratio": r["ratio"], "ratio_stderr": ratio_se,
                     "expected_ratio": r["expected_ratio"], "z": r["z"]})
    if args.figure:
        plotting.scaling_figure(rows, args.figure)
    status = "ok" if rep.status == "holds" else rep.status
    return status, rep.to_dict(), rows


def cmd_series_diag(args):
    model = _model(args)
    rep = montecarlo.series_diagnostic(model, args.t, args.n_max, args.w_sup, _mc(args))
    rows = []
    for n, (term, err, ps) in enumerate(zip(rep.terms, rep.term_errors, rep.partial_sums)):
        rows.append({"n": n, "term": term, "error": err, "partial_sum": ps,
                     "ratio": rep.ratios[n - 2] if n >= 2 else ""})
    if args.figure:
        plotting.series_figure(rows, args.figure)
    return "ok", rep.to_dict(), rows


def cmd_simulate_noise(args):
    model = _model(args)
    rep = noise.first_chaos_variance_check(model, args.t, args.samples, args.seed)
    result = {k: v for k, v in rep.to_dict().items()}
    row = {k: result[k] for k in ("t", "norm_quadrature", "norm_empirical", "stderr", "z", "status")}
    return rep.status if rep.status != "ok" else "ok", result, [row]


def sweep_points(alpha0s, alphas, dims, tol=1e-6, method="auto"):
    """One verdict per homogeneous model (alpha0, alpha, d); invalid points are marked."""
    points = []
    for d in dims:
        for a in alphas:
            for a0 in alpha0s:
                p = {"d": int(d), "alpha0": float(a0), "alpha": float(a)}
                try:
                    expected = condition.homogeneous_decision(a0, a, d)
                    model = NoiseModel(homogeneous(a, 1.0, d), a0)
                    v = condition.condition_integral(model, tol=tol, method=method)
                    p.update(status=v.status, expected="finite" if expected else "divergent",
                             value=v.value)
                except InvalidParameter as exc:
                    p.update(status="invalid-parameter", expected="", value=None, message=str(exc))
                points.append(p)
    return points


def cmd_sweep(args):
    points = sweep_points(args.alpha0, args.alpha, args.d, args.tol, args.method)
    valid = [p for p in points if p["status"] != "invalid-parameter"]
    agree = all(p["status"] == p["expected"] for p in valid)
    boundary = sorted({(p["d"], p["alpha"], min((q["alpha0"] for q in valid
                                                  if q["d"] == p["d"] and q["alpha"] == p["alpha"]
                                                  and q["status"] == "divergent"), default=None))
                       for p in valid}, key=lambda x: (x[0], x[1]))
    summary = [{"d": d, "alpha": a, "first_divergent_alpha0": b} for d, a, b in boundary]
    if args.figure:
        plotting.sweep_figure(points, args.figure)
    result = {"points": points, "boundary": summary, "matches_alpha0_plus_alpha_lt_3": agree,
              "valid_points": len(valid)}
    status = "ok" if all(p["status"] in ("finite", "divergent") for p in valid) else "inconclusive"
    rows = [{k: p.get(k) for k in ("d", "alpha0", "alpha", "status", "expected")} for p in points]
    return status, result, rows


COMMANDS = {
    "check-condition": cmd_check_condition,
    "w-eval": cmd_w_eval,
    "first-chaos": cmd_first_chaos,
    "laplace-bound": cmd_laplace_bound,
    "scaling-test": cmd_scaling_test,
    "series-diag": cmd_series_diag,
    "simulate-noise": cmd_simulate_noise,
    "sweep": cmd_sweep,
}

CHECK_FAILED = ("inconclusive", "check-failed", "violated")


def _config(args):
    return {k: v for k, v in sorted(vars(args).items())}


def render(report, rows, fmt):
    if fmt == "json":
        return json.dumps(_plain(report), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    if rows:
        fields = list(rows[0].keys())
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _plain(r.get(k)) for k in fields})
    return buf.getvalue()


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        try:
            status, result, rows = COMMANDS[args.command](args)
        except DivergenceError as exc:
            # a divergent model is an answer, not a failure
            verdict = exc.verdict.to_dict() if exc.verdict is not None else None
            status, result = "divergent", {"status": "divergent", "message": str(exc), "verdict": verdict}
            rows = [{"status": "divergent"}]
        code = EXIT_CHECK if status in CHECK_FAILED else EXIT_OK
    except ImportError as exc:
        print(f"wavechaos {args.command}: --figure needs matplotlib ({exc})", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, InvalidParameter, UnsupportedEvaluation, InvalidGram, KeyError, TypeError,
            ValueError) as exc:
        print(f"wavechaos {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureError, MCDiagnosticError, WaveChaosError, ArithmeticError) as exc:
        print(f"wavechaos {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    report = {
        "command": args.command,
        "config": _config(args),
        "constants": constants_table(),
        "status": status,
        "result": result,
        "timing": {"wall_time": time.perf_counter() - start,
                   "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")},
    }
    text = render(report, rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
