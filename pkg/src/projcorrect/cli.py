"""Command-line interface.

Subcommands: gen, corrupt, estimate-eps, correct, reconstruct, bounds,
experiment.  Exit codes: 0 on success, 2 on precondition errors
(bad arguments, degenerate inputs), 3 on I/O errors.  The environment
variable PROJCORRECT_THREADS caps parallelism; PROJCORRECT_BACKEND
selects the kernel backend.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bounds import hypotheses, parse_fraction
from .corrector import (
    ExactMode,
    SampledMode,
    correct_map,
    preserved_line_fraction_exact,
    preserved_line_fraction_sampled,
    reconstruct_semilinear,
)
from .field import GF
from .harness import ExperimentSpec, corrupt_swap, emit_report, gen_semilinear, run_experiment
from .projspace import PointMap, proj_space


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_map(path: str) -> PointMap:
    with open(path, "r", encoding="utf-8") as fh:
        return PointMap.from_json_dict(json.load(fh))


def _frac_dict(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _cmd_gen(args) -> int:
    field = GF(args.p, args.k, args.modulus)
    space = proj_space(field, args.n)
    sigma = "random" if args.sigma == "random" else int(args.sigma)
    planted = gen_semilinear(space, args.seed, sigma)
    _write(args.out, planted.as_point_map(space).dumps())
    if args.semilinear_out:
        _write(args.semilinear_out, _dump(planted.to_json_dict()))
    return 0


def _cmd_corrupt(args) -> int:
    f = _load_map(args.map)
    _write(args.out, corrupt_swap(f, args.count, args.seed).dumps())
    return 0


def _cmd_estimate_eps(args) -> int:
    f = _load_map(args.map)
    if args.exact:
        eps = 1 - preserved_line_fraction_exact(f)
        _write(args.out, _dump({"eps": _frac_dict(eps), "exact": True}))
    else:
        est, stderr = preserved_line_fraction_sampled(f, args.samples, args.seed)
        _write(
            args.out,
            _dump(
                {
                    "eps_estimate": 1.0 - est,
                    "stderr": stderr,
                    "samples": args.samples,
                    "seed": args.seed,
                    "exact": False,
                }
            ),
        )
    return 0


def _cmd_correct(args) -> int:
    f = _load_map(args.map)
    if args.mode == "exact":
        mode = ExactMode()
    else:
        mode = SampledMode(samples=args.samples, threshold=args.threshold, seed=args.seed)
    corrected, report = correct_map(f, mode)
    _write(args.out, corrected.dumps())
    if args.report:
        doc = {
            "mode": args.mode,
            "eps": _frac_dict(report.eps) if report.eps_is_exact else report.eps,
            "eps_is_exact": report.eps_is_exact,
            "eps_stderr": report.eps_stderr,
            "agreement_with_input": _frac_dict(report.agreement_with_input),
            "uncorrectable_count": report.uncorrectable_count,
            "bounds": report.bound_report.to_json_dict(),
            "guarantee_applicable": report.guarantee_applicable,
            "outcomes": [
                {
                    "x": xi,
                    "z": f.codomain.point_index(o.z) if o.z is not None else None,
                    "fraction": (
                        _frac_dict(o.majority_fraction)
                        if isinstance(o.majority_fraction, Fraction)
                        else o.majority_fraction
                    ),
                    "pairs_examined": o.quadruples_examined,
                }
                for xi, o in enumerate(report.outcomes)
            ],
            "elapsed": report.elapsed,
        }
        _write(args.report, _dump(doc))
    return 0


def _cmd_reconstruct(args) -> int:
    f = _load_map(args.map)
    rec = reconstruct_semilinear(f)
    _write(args.out, _dump(rec.to_json_dict()))
    return 0


def _cmd_bounds(args) -> int:
    report = hypotheses(args.q, args.n, parse_fraction(args.eps))
    _write(args.out, _dump(report.to_json_dict()))
    return 0


def _cmd_experiment(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = ExperimentSpec.from_json_dict(json.load(fh))
    results = run_experiment(spec)
    emit_report(results, args.format, args.out, spec=spec, include_timing=args.timing)
    return 0


def _int_or_random(value: str) -> str:
    if value != "random":
        int(value)
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projcorrect",
        description="Self-correction of almost-collineations of finite projective spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random semilinear point map")
    p.add_argument("--p", type=int, required=True, help="field characteristic")
    p.add_argument("--k", type=int, default=1, help="extension degree")
    p.add_argument("--modulus", type=int, nargs="+", default=None,
                   help="k+1 little-endian modulus coefficients (default: built-in table)")
    p.add_argument("--n", type=int, required=True, help="projective dimension")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sigma", type=_int_or_random, default="random",
                   help="Frobenius exponent or 'random'")
    p.add_argument("--out", required=True, help="output point-map JSON (- for stdout)")
    p.add_argument("--semilinear-out", default=None,
                   help="also save the planted (sigma, matrix)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("corrupt", help="swap the images of disjoint point pairs")
    p.add_argument("--map", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("estimate-eps", help="fraction of lines not sent to lines")
    p.add_argument("--map", required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_estimate_eps)

    p = sub.add_parser("correct", help="majority-vote correction of a point map")
    p.add_argument("--map", required=True)
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--threshold", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_correct)

    p = sub.add_parser("reconstruct", help="recover (sigma, matrix) from a collineation")
    p.add_argument("--map", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("bounds", help="exact hypothesis report for (q, n, eps)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", required=True, help="exact rational, e.g. 3/1000")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("experiment", help="run a seeded experiment spec")
    p.add_argument("--spec", required=True, help="ExperimentSpec JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock fields (breaks byte determinism)")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage already; normalize other codes
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
