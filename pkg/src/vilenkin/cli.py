"""Command-line harness.

Exit codes: 0 success, 1 certificate failure, 2 bad input or guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .construction import (
    ConstructionError,
    PointRule,
    certify,
    rebuild,
    run_pipeline,
)
from .core import GroupPoint, RadixSequence
from .io import (
    SpecError,
    load_spec,
    read_plan,
    read_samples_csv,
    spectrum_from_json,
    write_artifacts,
    write_complex_csv,
)
from .spectral import (
    SUMMATION_GUARD,
    characters_below,
    fejer_mean,
    forward,
    inverse,
    paley_dirichlet,
)

KERNEL_CELL_GUARD = 10**5


class UsageError(Exception):
    pass


def parse_radix(text: str) -> RadixSequence:
    """``2`` / ``2,3`` (a repeating period) or a JSON object ``{"prefix": [...], "period": [...]}``."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return RadixSequence.from_json(json.loads(text))
        return RadixSequence(period=tuple(int(t) for t in text.split(",")))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad radix {text!r}: {exc}") from exc


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


def cmd_kernels(args) -> int:
    radix = parse_radix(args.radix)
    M = radix.scale(args.depth)
    if M > KERNEL_CELL_GUARD:
        raise UsageError(f"M_{args.depth} = {M} exceeds the cell guard {KERNEL_CELL_GUARD}")
    n = args.n
    if n < 1:
        raise UsageError("n must be >= 1")
    if n > SUMMATION_GUARD:
        raise UsageError(f"n = {n} exceeds the summation guard {SUMMATION_GUARD}")
    weights = np.ones(n) if args.kind == "dirichlet" else (n - np.arange(n)) / n
    values = []
    for t in range(M):
        x = GroupPoint.from_cell(radix, t, args.depth)
        values.append(complex((weights * characters_below(n, x)).sum()))
    if args.kind == "dirichlet":
        # Paley closed form whenever n is a scale M_k
        depth = next((k for k in range(args.depth + 64) if radix.scale(k) >= n), None)
        if depth is not None and radix.scale(depth) == n:
            for t, v in enumerate(values):
                x = GroupPoint.from_cell(radix, t, max(args.depth, depth))
                if abs(v - paley_dirichlet(depth, x)) > 1e-10:
                    print(f"kernels: Paley check failed at cell {t}", file=sys.stderr)
                    return 1
    out, close = _open_out(args.out)
    try:
        write_complex_csv(values, out, "cell_index")
    finally:
        if close:
            out.close()
    return 0


def cmd_transform(args) -> int:
    radix = parse_radix(args.radix)
    try:
        with open(args.input, newline="") as src:
            f = read_samples_csv(src, radix)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    coeffs = forward(f)
    out, close = _open_out(args.out)
    try:
        write_complex_csv(coeffs, out, "index")
    finally:
        if close:
            out.close()
    if args.roundtrip:
        err = float(np.max(np.abs(inverse(coeffs, radix).values - f.values)))
        print(f"roundtrip max error: {err!r}", file=sys.stderr)
    return 0


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def cmd_construct(args) -> int:
    _require(args, "spec", "out")
    spec = load_spec(args.spec)
    out = Path(args.out)
    try:
        if args.verify_only:
            try:
                plan_obj = json.loads((out / "plan.json").read_text())
                spec_obj = json.loads((out / "spectrum.json").read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise SpecError(f"cannot read artifacts in {out}: {exc}") from exc
            cover, plan = read_plan(plan_obj, spec.radix)
            if plan_obj.get("stages") != spec.stages:
                raise SpecError("plan was built for a different number of stages")
            result = rebuild(spec.null_set(), cover, plan, spectrum_from_json(spec_obj, spec.radix))
        else:
            result = run_pipeline(spec.null_set())
            write_artifacts(result, out)
        failures = certify(result, ps=sorted({1.0, 2.0, 4.0, spec.p}))
    except ConstructionError as exc:
        failures = [str(exc)]
    if failures:
        for msg in failures:
            print(f"construct: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_trace(args) -> int:
    _require(args, "spec", "point")
    spec = load_spec(args.spec)
    try:
        rule = PointRule(tuple(int(t) for t in args.point.split(",")))
    except ValueError as exc:
        raise UsageError(f"bad point {args.point!r}") from exc
    null_set = spec.null_set()
    idx = null_set.contains(rule)
    if idx is None:
        raise UsageError(f"point {args.point} is not in E")
    result = run_pipeline(null_set)
    x = null_set.points[idx].point(spec.radix, result.point_level)
    out, close = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["stage", "n", "abs_sigma"])
        for j in range(1, len(result.polys)):
            for n in (result.plan.n_lo(j), result.plan.n_hi(j)):
                w.writerow([j, str(n), repr(abs(fejer_mean(result.spectrum, n, x)))])
    finally:
        if close:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="experiment spec JSON")
    common.add_argument("--out", help="output directory (construct) or file (others); default stdout")
    common.add_argument("--verify-only", action="store_true", help="re-check existing artifacts in --out")

    parser = argparse.ArgumentParser(prog="vilenkin", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernels", parents=[common], help="tabulate a Dirichlet or Fejer kernel")
    p.add_argument("--radix", default="2")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--kind", choices=["dirichlet", "fejer"], default="dirichlet")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("transform", parents=[common], help="forward Vilenkin transform of a samples CSV")
    p.add_argument("input")
    p.add_argument("--radix", default="2")
    p.add_argument("--roundtrip", action="store_true")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("construct", parents=[common], help="build f and certify divergence on E")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("trace", parents=[common], help="|sigma_n f(x)| along the construction's indices")
    p.add_argument("--point", help="comma-separated digits of a point of E")
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SpecError, ValueError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
