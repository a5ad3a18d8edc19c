"""Command-line front end.

Usage:
    cyclepoly eval --in weights.json --k 3 [--exact] [--f-table]
    cyclepoly optimize --n 6 --k 3 --restarts 20 --seed 7 [--out DIR]
    cyclepoly certify --in weights.json --k 4
    cyclepoly construct --n 9 --k 3 [--out graph.txt]
    cyclepoly sweep --kind path-amgm --count 1000 --seed 0

Exit codes: 0 success, 2 validation error, 3 parse error, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import certificates, cycles, exchange, planar
from .errors import CyclePolyError, InvariantViolation, NotStationary, ParseError, ValidationError
from .weights import load_weights, random_weight_function, write_edge_list

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE, EXIT_INVARIANT = 0, 2, 3, 4

BRUTE_FORCE_MAX_N = 14


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _emit(obj, out: Path | None = None) -> None:
    text = _dump(obj) + "\n"
    if out is not None:
        out.write_text(text)
    sys.stdout.write(text)


def cmd_eval(args) -> int:
    w = load_weights(args.inp, exact=args.exact)
    k = args.k
    enum = cycles.beta(w, k, "enumeration")
    dp = cycles.beta(w, k, "subset-dp")
    ident = cycles.beta_via_identity(w, k)
    residual = max(abs(enum - dp), abs(enum - ident))
    if residual > 1e-9 * max(1.0, float(enum)):
        raise InvariantViolation(f"cycle polynomial engines disagree by {float(residual):.3e}")
    report = {
        "n": w.n,
        "k": k,
        "normalized": w.normalized,
        "beta_enumeration": float(enum),
        "beta_subset_dp": float(dp),
        "beta_identity": float(ident),
        "residual": float(residual),
        "bound": 1 / k**k,
    }
    if isinstance(enum, Fraction):
        report["beta_exact"] = str(enum)
    if args.f_table:
        report["f_table"] = [
            {"u": u, "v": v, "w": float(x), "f": float(cycles.path_sum(w, None, k, u, v))} for (u, v), x in w.items()
        ]
    _emit(report, args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    config = exchange.OptimizerConfig(tol=args.tol, pair_strategy=args.strategy, seed=args.seed)
    results = exchange.multistart(
        args.n, args.k, restarts=args.restarts, seed=args.seed, config=config, workers=args.workers, escape=not args.no_escape
    )
    best = exchange.best_result(results)
    report = exchange.stationarity_check(best.weights, args.k)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotStationary)
        cert = certificates.certify_mu_bound(best.weights, args.k)
    summary = {
        "n": args.n,
        "k": args.k,
        "seed": args.seed,
        "restarts": args.restarts,
        "strategy": args.strategy,
        "escape": not args.no_escape,
        "bound": 1 / args.k**args.k,
        "best_restart": best.restart,
        "best_beta": best.beta,
        "best_support": [list(e) for e in best.weights.support()],
        "runs": [
            {
                "restart": r.restart,
                "beta": r.beta,
                "termination": r.trace.termination,
                "steps": len(r.trace.steps),
                "jumps": [
                    {"step": j.step, "deleted_vertex": j.deleted_vertex, "beta_before": j.beta_before, "beta_after": j.beta_after}
                    for j in r.trace.jumps
                ],
            }
            for r in results
        ],
        "stationarity": report.to_json_dict(),
        "certificate_slack": float(cert.slack),
    }
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "best_weights.json").write_text(best.weights.to_json() + "\n")
        (out / "trace.csv").write_text(best.trace.to_csv())
        (out / "stationarity.json").write_text(_dump(report.to_json_dict()) + "\n")
        (out / "certificate.json").write_text(_dump(cert.to_json_dict()) + "\n")
        (out / "summary.json").write_text(_dump(summary) + "\n")
    if args.format == "csv":
        sys.stdout.write(best.trace.to_csv())
    else:
        sys.stdout.write(_dump(summary) + "\n")
    return EXIT_OK


def cmd_certify(args) -> int:
    w = load_weights(args.inp)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotStationary)
        cert = certificates.certify_mu_bound(w, args.k, tol=args.tol)
    _emit(cert.to_json_dict(), args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    c = planar.build_blowup(args.n, args.k)
    meta = c.metadata()
    if args.n <= BRUTE_FORCE_MAX_N:
        brute = cycles.count_cycles(c.graph, 2 * args.k)
        meta["brute_force_count"] = brute
        if args.k >= 3 and brute != meta["closed_form_count"]:
            raise InvariantViolation(f"brute force found {brute} cycles, closed form says {meta['closed_form_count']}")
    else:
        meta["brute_force_count"] = None
        meta["notice"] = f"brute-force counting disabled above n = {BRUTE_FORCE_MAX_N}"
    meta["ratio"] = planar.asymptotic_ratio(args.n, args.k)
    meta["ratio_table"] = [{"n": m, "ratio": planar.asymptotic_ratio(m, args.k)} for m in (args.n, 10 * args.n, 100 * args.n)]
    meta["embedding"] = {str(v): list(p) for v, p in sorted(c.embedding().items())}
    if args.out is not None:
        Path(args.out).write_text(write_edge_list(c.graph))
    sys.stdout.write(_dump(meta) + "\n")
    return EXIT_OK


def _random_instances(rng, count, n_min, n_max):
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        yield n, random_weight_function(n, rng)


def cmd_sweep(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst = None
    if args.kind == "identity":
        for n, w in _random_instances(rng, args.count, args.n_min, args.n_max):
            k = int(rng.integers(3, n + 1))
            b = cycles.beta(w, k, "enumeration")
            err = abs(b - cycles.beta_via_identity(w, k)) / max(1.0, b)
            worst = err if worst is None else max(worst, err)
        result = {"kind": "identity", "max_relative_residual": worst, "passed": worst <= 1e-12}
    elif args.kind == "path-amgm":
        for n, w in _random_instances(rng, args.count, args.n_min, args.n_max):
            for r in range(2, n + 1):
                for v in range(n):
                    s = float(certificates.verify_lemma33(w, r, v))
                    worst = s if worst is None else min(worst, s)
        result = {"kind": "path-amgm", "min_slack": worst, "passed": worst >= -1e-12}
    elif args.kind == "greedy-product":
        for n, w in _random_instances(rng, args.count, args.n_min, args.n_max):
            r = int(rng.integers(3, n + 1))
            v1, u = (int(x) for x in rng.choice(n, size=2, replace=False))
            s = float(certificates.greedy_sequence(w, r, v1, u).min_slack)
            worst = s if worst is None else min(worst, s)
        result = {"kind": "greedy-product", "min_slack": worst, "passed": worst >= -1e-12}
    elif args.kind == "upper-bound":
        for n, w in _random_instances(rng, args.count, args.n_min, args.n_max):
            for k in range(3, min(6, n) + 1):
                s = 1 / k**k - cycles.beta(w, k)
                worst = s if worst is None else min(worst, s)
        result = {"kind": "upper-bound", "min_slack": worst, "passed": worst >= -1e-12}
    else:
        raise ValidationError(f"unknown sweep kind {args.kind!r}")
    result.update(count=args.count, seed=args.seed, n_min=args.n_min, n_max=args.n_max)
    _emit(result, args.out)
    return EXIT_OK if result["passed"] else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclepoly", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n=False, k=True):
        if n:
            p.add_argument("--n", type=int, required=True, help="number of vertices")
        if k:
            p.add_argument("--k", type=int, required=True, help="cycle length")
        p.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", type=Path, default=None, help="output path")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("eval", help="evaluate the cycle polynomial of a weight file")
    common(p)
    p.add_argument("--in", dest="inp", type=Path, required=True)
    p.add_argument("--exact", action="store_true", help="parse weights as exact rationals")
    p.add_argument("--f-table", action="store_true", help="include f(k, u, v) for every support edge")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimize", help="multi-start exchange ascent")
    common(p, n=True)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--strategy", choices=["sweep", "greedy", "random"], default="sweep")
    p.add_argument("--no-escape", action="store_true", help="skip the support-reduction escape phase")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_optimize, tol_default=1e-12)

    p = sub.add_parser("certify", help="build the mu-bound certificate for a weight file")
    common(p)
    p.add_argument("--in", dest="inp", type=Path, required=True)
    p.set_defaults(func=cmd_certify, tol_default=1e-9)

    p = sub.add_parser("construct", help="blown-up C_2k and its cycle counts")
    common(p, n=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("sweep", help="randomised property sweeps")
    common(p, k=False)
    p.add_argument("--kind", choices=["identity", "greedy-product", "path-amgm", "upper-bound"], required=True)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=8)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = getattr(args, "tol_default", 1e-12)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except CyclePolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
