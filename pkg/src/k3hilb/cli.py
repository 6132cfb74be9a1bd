"""Command-line front end.

    k3hilb matrix "[e(delta), ft(delta)]" --n 2
    k3hilb rho "e^delta - 1/2*v1^f" --n 2
    k3hilb verify relations --n 2
    k3hilb rank --n 3
    k3hilb spectrum --n 2
    k3hilb closure --n 2 --depth 4

Exit status is 0 on success, 1 when a verification fails and 2 on invalid
input (bad expression, configuration or isotropic class).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import verify as V
from .lie_wedge import parse_wedge, rho
from .cache import OperatorCache, atomic_write
from .operators import ConcreteOperator, instantiate
from .parser import ParseError, parse_expr, to_text
from .surface import Mode, SurfaceModel, format_rational

log = logging.getLogger("k3hilb")

DEFAULT_GRAM = [[2]]


class UsageError(Exception):
    pass


def load_model(args, points: int = 0) -> SurfaceModel:
    """The model from --model or --gram, with --points and --mode applied on top."""
    try:
        if args.model:
            model = SurfaceModel.load(args.model)
        else:
            model = SurfaceModel.from_gram(json.loads(args.gram) if args.gram else DEFAULT_GRAM, points)
        if args.points is not None:
            model = SurfaceModel(model.divisors, args.points, model.mode)
        if args.mode:
            model = model.with_mode(args.mode)
    except (OSError, ValueError, TypeError) as err:
        raise UsageError(f"invalid model configuration: {err}") from None
    return model


def emit(args, text: str) -> None:
    if args.out:
        atomic_write(Path(args.out), text)
    else:
        sys.stdout.write(text)


def _format(args, default: str = "table") -> str:
    if args.format:
        return args.format
    if args.out:
        suffix = Path(args.out).suffix.lower()
        return {".json": "json", ".csv": "csv"}.get(suffix, default)
    return default


# -- matrix ------------------------------------------------------------------------

def matrix_text(op: ConcreteOperator, fmt: str, expr_text: str) -> str:
    if fmt == "csv":
        lines = ["row,col,value"] + [f"{r},{c},{format_rational(v)}" for r, c, v in op.triplets()]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        data = op.to_dict()
        data["expr"] = expr_text
        data["model"] = op.model.to_config()
        return json.dumps(data, sort_keys=True, indent=1) + "\n"
    src = op.source_basis.labels()
    tgt = op.target_basis.labels()
    lines = [f"{expr_text} on weight {op.source_weight} -> weight {op.target_weight}  "
             f"({op.shape[0]}x{op.shape[1]}, {op.nnz()} nonzero)"]
    for r, c, v in op.triplets():
        lines.append(f"  {src[c]} -> {format_rational(v)} * {tgt[r]}")
    return "\n".join(lines) + "\n"


def cmd_matrix(args) -> int:
    model = load_model(args)
    try:
        expr = parse_expr(args.expr, model)
    except ParseError as err:
        raise UsageError(str(err)) from None
    if args.cache_dir:
        cache = OperatorCache(args.cache_dir)
        op = cache.get(expr, model, args.n, args.slack)
        log.info("cache: %d hit(s), %d miss(es), %d corrupt", cache.hits, cache.misses, cache.corrupt)
    else:
        op = instantiate(expr, model, args.n, args.slack)
    emit(args, matrix_text(op, _format(args), to_text(expr)))
    return 0


def cmd_rho(args) -> int:
    model = load_model(args)
    try:
        x = parse_wedge(args.wedge, model, args.n)
    except ValueError as err:
        raise UsageError(str(err)) from None
    expr = rho(x, model, args.n)
    op = instantiate(expr, model, args.n)
    emit(args, matrix_text(op, _format(args), f"rho({x.text()}) = {to_text(expr)}"))
    return 0


# -- reports ---------------------------------------------------------------------------

def report_out(args, report: V.Report) -> int:
    fmt = _format(args)
    text = report.to_json() if fmt == "json" else report.to_table()
    emit(args, text)
    if args.out and fmt == "json":
        sys.stdout.write(report.to_table())
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    model = load_model(args)
    suite = args.suite
    if suite == "relations":
        report = V.relation_suite(model, args.n)
    elif suite == "grading":
        report = V.grading_suite(model, args.n)
    elif suite == "heisenberg":
        report = V.heisenberg_suite(model, max_weight=args.n)
    elif suite == "lemma_tt":
        report = V.lemma_tt_suite(model, count=args.count, seed=args.seed, max_weight=args.n)
    else:
        report = V.t_bracket_suite(model, ns=tuple(range(1, args.n + 1)), count=args.count, seed=args.seed)
    return report_out(args, report)


def cmd_rank(args) -> int:
    return report_out(args, V.injectivity_rank(load_model(args), args.n))


def cmd_spectrum(args) -> int:
    model = load_model(args, points=args.n)
    if model.mode is not Mode.CHOW:
        raise UsageError("the zero-cycle spectrum is computed in chow mode")
    return report_out(args, V.zero_cycle_spectrum(model, args.n))


def cmd_closure(args) -> int:
    return report_out(args, V.lie_closure_dimension(load_model(args), args.n, args.depth))


# -- entry point ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="JSON surface model: {rank, gram, points, mode}")
    common.add_argument("--gram", help="Gram matrix as JSON when no --model is given (default [[2]])")
    common.add_argument("--points", type=int, help="number of formal point symbols")
    common.add_argument("--mode", choices=[m.value for m in Mode], help="override the model's mode")
    common.add_argument("--n", type=int, default=2, help="number of points (Fock weight)")
    common.add_argument("--out", help="write the result to this file")
    common.add_argument("--format", choices=["table", "json", "csv"], help="output format")
    common.add_argument("--cache-dir", help="directory for cached operator matrices")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised suites")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="k3hilb", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    m = sub.add_parser("matrix", parents=[common], help="exact matrix of an operator expression")
    m.add_argument("expr")
    m.add_argument("--slack", type=int, default=0, help="widen the summation window")
    m.set_defaults(func=cmd_matrix)
    w = sub.add_parser("rho", parents=[common], help="matrix of the operator attached to a wedge element")
    w.add_argument("wedge", help='e.g. "e^delta", "f^v1", "v1^delta + 1/2*e^f"')
    w.set_defaults(func=cmd_rho)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=V.SUITES)
    v.add_argument("--count", type=int, default=25, help="instances for randomised suites")
    v.set_defaults(func=cmd_verify)
    sub.add_parser("rank", parents=[common], help="divisor subring ranks, Chow vs cohomology"
                   ).set_defaults(func=cmd_rank)
    sub.add_parser("spectrum", parents=[common], help="spectrum of h on zero cycles"
                   ).set_defaults(func=cmd_spectrum)
    c = sub.add_parser("closure", parents=[common], help="dimension of the generated Lie algebra")
    c.add_argument("--depth", type=int, default=4, help="maximal bracket depth")
    c.set_defaults(func=cmd_closure)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.n < 0:
        parser.error("--n must be non-negative")
    try:
        return args.func(args)
    except (UsageError, ValueError) as err:  # IsotropicClassError is a ValueError
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
