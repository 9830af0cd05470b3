"""Command-line interface: decomposition, symbols, and verification runs.

All commands read a JSON job file (or inline flags for the verification
commands) and write a JSON report, deterministically: fixed key order, no
timestamps, seeded randomness.  Exit codes: 0 success, 1 verification
failure (a residual above tolerance), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

VERSION = "ccsymbol 0.1.0"

from .algebra import (
    AlgebraError,
    algebra_new,
    descriptor_from_json,
    element_from_json,
    element_to_json,
)
from .laurent import (
    series1d_from_json,
    series1d_to_json,
    series2d_from_json,
    series2d_to_json,
)
from . import iterint, symbol1d, symbol2d, torusverify, witt


class InputError(ValueError):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise InputError(
            "malformed JSON in %s at line %d column %d: %s"
            % (path, exc.lineno, exc.colno, exc.msg)
        )


def _emit(report, out_path):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _with_version(report):
    report["version"] = VERSION
    return report


def cmd_decompose1d(args):
    job = _load_json(args.input)
    algebra = descriptor_from_json(job["algebra"])
    series = series1d_from_json(algebra, job["series"])
    T = int(job.get("T", 8))
    d = witt.witt_decompose_1d(series, T)
    _emit(_with_version(witt.decomposition1d_to_json(d)), args.out)
    return 0


def cmd_decompose2d(args):
    job = _load_json(args.input)
    algebra = descriptor_from_json(job["algebra"])
    series = series2d_from_json(algebra, job["series"])
    T1 = int(job.get("T1", 6))
    T2 = int(job.get("T2", 6))
    d = witt.witt_decompose_2d(series, T1, T2)
    _emit(_with_version(witt.decomposition2d_to_json(d)), args.out)
    return 0


def cmd_symbol1d(args):
    job = _load_json(args.input)
    algebra = descriptor_from_json(job["algebra"])
    f = series1d_from_json(algebra, job["f"])
    g = series1d_from_json(algebra, job["g"])
    sym = symbol1d.cc_symbol_1d(f, g)
    _emit(_with_version(symbol1d.symbol1d_to_json(sym)), args.out)
    return 0


def cmd_symbol2d(args):
    job = _load_json(args.input)
    algebra = descriptor_from_json(job["algebra"])
    f1 = series2d_from_json(algebra, job["f1"])
    f2 = series2d_from_json(algebra, job["f2"])
    f3 = series2d_from_json(algebra, job["f3"])
    P1 = element_from_json(algebra, job["P1"])
    P2 = element_from_json(algebra, job["P2"])
    conventions = job.get("conventions")
    T1 = int(job.get("T1", 6))
    T2 = int(job.get("T2", 6))
    sym = symbol2d.cc_symbol_2d(f1, f2, f3, P1, P2, T1, T2, conventions)
    _emit(_with_version(symbol2d.symbol2d_to_json(sym)), args.out)
    return 0


def _factored_from_json(algebra, obj):
    zeros = [
        (element_from_json(algebra, z["point"]), int(z["mult"])) for z in obj["zeros"]
    ]
    return symbol1d.FactoredRational(element_from_json(algebra, obj["leading"]), zeros)


def cmd_weil(args):
    job = _load_json(args.input)
    algebra = descriptor_from_json(job["algebra"])
    fsp = _factored_from_json(algebra, job["f"])
    gsp = _factored_from_json(algebra, job["g"])
    total, contributions = symbol1d.weil_product(fsp, gsp, algebra)
    report = {
        "product": element_to_json(total),
        "is_one": total == total.one(algebra) if False else None,
        "contributions": [
            {"at": str(at), "value": element_to_json(sym.value)}
            for at, sym in contributions
        ],
    }
    from .algebra import AlgebraElement

    report["is_one"] = bool(total == AlgebraElement.one(algebra))
    _emit(_with_version(report), args.out)
    return 0


def cmd_verify_cases(args):
    if args.params:
        params = _load_json(args.params)
        cases = [(args.case, [params])]
    else:
        rng = random.Random(args.seed)
        if args.case == 0:
            case_ids = [1, 2, 3, 4, 5, 6, 7, 8]
        else:
            case_ids = [args.case]
        cases = []
        for cid in case_ids:
            draws = [
                torusverify.random_case_params(cid, rng) for _ in range(args.draws)
            ]
            cases.append((cid, draws))
    reports = []
    all_pass = True
    for cid, draws in cases:
        for params in draws:
            rep = torusverify.verify_case(cid, params, N=args.grid, tol=args.tol)
            reports.append(rep)
            all_pass = all_pass and rep.get("pass", False)
    summary = {
        "grid": args.grid,
        "tol": args.tol,
        "count": len(reports),
        "max_best_residual": max(
            (r["best_residual"] for r in reports if "best_residual" in r), default=0.0
        ),
        "all_pass": all_pass,
        "reports": reports,
    }
    _emit(_with_version(summary), args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("case,best_residual,best_flags\n")
            for r in reports:
                fh.write(
                    "%s,%.3e,%s\n"
                    % (
                        r["case"],
                        r.get("best_residual", float("nan")),
                        ";".join(
                            "%s=%s" % kv for kv in sorted(r.get("best_flags", {}).items())
                        ),
                    )
                )
    return 0 if all_pass else 1


def cmd_verify_iterint(args):
    rng = random.Random(args.seed)
    worst = {"shuffle": 0.0, "reversal": 0.0, "composition": 0.0, "commutator": 0.0}

    def rand_path(n=4):
        pts = [complex(rng.uniform(2.0, 3.0), rng.uniform(-1.0, 1.0))]
        for _ in range(n - 1):
            pts.append(pts[-1] + complex(rng.uniform(0.1, 0.6), rng.uniform(-0.5, 0.5)))
        return iterint.PathSpec(pts)

    def rand_forms(n):
        out = []
        for _ in range(n):
            if rng.random() < 0.6:
                pole = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                out.append(iterint.FormSpec.dlog([(pole, rng.choice([-2, -1, 1, 2]))]))
            else:
                out.append(
                    iterint.FormSpec.rational([rng.uniform(-1, 1) for _ in range(3)])
                )
        return out

    for _ in range(args.instances):
        worst["shuffle"] = max(
            worst["shuffle"],
            iterint.check_shuffle(rand_path(), rand_forms(rng.randint(1, 2)), rand_forms(rng.randint(1, 2))),
        )
        worst["reversal"] = max(
            worst["reversal"], iterint.check_reversal(rand_path(), rand_forms(rng.randint(1, 3)))
        )
        p1 = rand_path()
        pts = [p1.vertices[-1]]
        for _ in range(3):
            pts.append(pts[-1] + complex(rng.uniform(0.1, 0.5), rng.uniform(-0.4, 0.4)))
        worst["composition"] = max(
            worst["composition"],
            iterint.check_composition(p1, iterint.PathSpec(pts), rand_forms(rng.randint(1, 3))),
        )
        base = 1.0 + 0j
        c1 = complex(rng.uniform(2.2, 3.0), rng.uniform(-0.3, 0.3))
        c2 = complex(rng.uniform(-2.0, -1.4), rng.uniform(-0.3, 0.3))
        alpha = iterint.loop_through(c1, base)
        beta = iterint.loop_through(c2, base)
        w1 = iterint.FormSpec.dlog([(c1, 1)])
        w2 = iterint.FormSpec.dlog([(c2, 1)])
        worst["commutator"] = max(
            worst["commutator"], iterint.check_commutator(alpha, beta, w1, w2)
        )
    moments = {}
    moment_worst = 0.0
    for k in list(range(-8, 0)) + list(range(1, 9)):
        v = iterint.fourier_moment(k)
        exact = 1.0 / (2j * 3.141592653589793 * k)
        err = abs(v - exact)
        moments[str(k)] = err
        moment_worst = max(moment_worst, err)
    ok = max(worst.values()) <= args.tol and moment_worst <= 1e-10
    report = {
        "seed": args.seed,
        "instances": args.instances,
        "tol": args.tol,
        "worst_residuals": worst,
        "moment_worst": moment_worst,
        "all_pass": ok,
    }
    _emit(_with_version(report), args.out)
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ccsymbol",
        description="Witt decompositions, Contou-Carrere symbols, and the "
        "numeric verification layer",
    )
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (
        ("decompose1d", cmd_decompose1d),
        ("decompose2d", cmd_decompose2d),
        ("symbol1d", cmd_symbol1d),
        ("symbol2d", cmd_symbol2d),
        ("weil", cmd_weil),
    ):
        p = sub.add_parser(name)
        p.add_argument("input", help="JSON job file")
        p.add_argument("--out", help="output path (default stdout)")
        p.set_defaults(fn=fn)

    p = sub.add_parser("verify-cases")
    p.add_argument("--case", type=int, default=0, help="1..8, or 0 for all")
    p.add_argument("--params", help="JSON file with explicit case parameters")
    p.add_argument("--grid", type=int, default=128)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--draws", type=int, default=5, help="random draws per case")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="also write a CSV residual table")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=cmd_verify_cases)

    p = sub.add_parser("verify-iterint")
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=cmd_verify_iterint)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return 2
    except (AlgebraError, KeyError, ValueError) as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
