"""Command-line front end.

Exit codes: 0 success/true, 1 checked-false, 2 parse or input error,
3 precondition or evaluation error, 4 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, oracle, render, sampling, tape
from .codebook import CodebookError, codebook_to_dict, read_codebook
from .core import QOperator, QVector, identity_operator
from .dsl import DslEvalError, DslSyntaxError, parse
from .dsl.evaluator import evaluate, norm_annotation
from .dsl.parser import parse_index_set
from .errors import GuardError, OrthonormalityError, PreconditionError, QPrefixError
from .settings import default_tolerance

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_GUARD = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(args, text_lines, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def _num(x: float) -> str:
    return render.format_number(x)


# bindings and expressions


def _load_bindings(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_INPUT) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})", EXIT_INPUT) from None
    if isinstance(data, dict) and "format_version" in data:
        book = read_codebook(path)
        return {book.code.label(i): v for i, v in enumerate(book.code)}
    if not isinstance(data, dict):
        raise CliError(f"{path}: bindings must be a JSON object", EXIT_INPUT)
    env: dict = {}
    for name, value in data.items():
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            env[name] = complex(value)
        elif isinstance(value, str):
            env[name] = evaluate(parse(value), env)
        else:
            raise CliError(f"{path}: binding {name!r} must be an expression string or number", EXIT_INPUT)
    return env


def _value(source: str, env: dict):
    return evaluate(parse(source), env)


def _as_operator(x) -> QOperator:
    if isinstance(x, QVector):
        return QOperator.outer(x, x)
    if isinstance(x, QOperator):
        return x
    raise CliError("expected a vector or an operator, got a scalar", EXIT_PRECONDITION)


def _value_payload(value) -> dict:
    payload = render.to_json(value)
    payload["rendered"] = render.render(value)
    norm = norm_annotation(value)
    if norm is not None:
        payload["norm"] = norm
    if isinstance(value, QVector) and value:
        payload["codebook"] = codebook_to_dict(analysis.CodeSet((value,), ("value",)))
    return payload


# commands


def cmd_eval(args) -> int:
    env = _load_bindings(args.bindings)
    value = _value(args.expr, env)
    lines = [render.render(value)]
    norm = norm_annotation(value)
    if norm is not None:
        lines.append(f"norm: {_num(norm)}")
    _emit(args, lines, _value_payload(value))
    return EXIT_OK


def cmd_check(args) -> int:
    book = read_codebook(args.codebook)
    code = book.code
    tol = args.tolerance
    conditions = analysis.CONDITIONS if args.condition == "all" else (int(args.condition),)
    defect = code.orthonormality_defect(tol)
    lines = []
    if defect is None:
        lines.append("orthonormal: yes")
    else:
        i, j, ip = defect
        lines.append(
            f"orthonormal: no (<{code.label(i)}|{code.label(j)}> = {render.format_scalar(ip)})"
        )
    verdicts = {}
    for c in conditions:
        v = analysis.check_prefix_free(code, c, args.max_suffix_len, tol)
        verdicts[c] = v
        if v.is_prefix_free:
            lines.append(f"condition {c}: prefix-free")
        else:
            lines.append(f"condition {c}: not prefix-free, witness {v.witness.describe(code)}")
    ok = all(v.is_prefix_free for v in verdicts.values())
    span = f"conditions {conditions[0]}-{conditions[-1]}" if len(conditions) > 1 else f"condition {conditions[0]}"
    if ok:
        lines.append(f"prefix-free under {span}")
    elif len({v.is_prefix_free for v in verdicts.values()}) > 1:
        lines.append("conditions disagree (numerical tolerance?)")
    else:
        lines.append(f"not prefix-free under {span}")
    payload = {
        "orthonormal": defect is None,
        "prefix_free": ok,
        "conditions": {
            str(c): {
                "prefix_free": v.is_prefix_free,
                "max_suffix_len": v.max_suffix_len,
                "witness": None if v.witness is None else v.witness.as_dict(),
            }
            for c, v in verdicts.items()
        },
    }
    _emit(args, lines, payload)
    return EXIT_OK if ok else EXIT_FALSE


def _relation(a: float, b: float, tol: float) -> str:
    if abs(a - b) <= tol:
        return "="
    return "≤" if a < b else ">"


def cmd_kraft(args) -> int:
    book = read_codebook(args.codebook)
    tol = args.tolerance
    report = analysis.kraft_report(book.code, tol)
    chain = (
        f"{_num(report.sum_base)} {_relation(report.sum_base, report.sum_avg, tol)} "
        f"{_num(report.sum_avg)} {_relation(report.sum_avg, report.trace_term, tol)} "
        f"{_num(report.trace_term)} {'≤' if report.bounded_by_one else '>'} 1"
    )
    yes = {True: "yes", False: "no"}
    lines = [
        chain,
        f"sum_base:      {_num(report.sum_base)}",
        f"sum_avg:       {_num(report.sum_avg)}",
        f"trace_term:    {_num(report.trace_term)}",
        f"chain holds:   {yes[report.chain_holds]}",
        f"bounded by 1:  {yes[report.bounded_by_one]}",
        f"prefix-free:   {yes[report.prefix_free]}",
        f"equality case: {yes[report.equality_case]}"
        + ("" if report.equality_case else " (some vector is not a length eigenstate)"),
    ]
    for w in report.witnesses:
        lines.append(
            f"  {w.label}: base length {w.base_length}, average length {_num(w.average_length)}, "
            f"2^-l = {_num(w.base_term)}, 2^-avg = {_num(w.average_term)}, weight = {_num(w.length_weight)}"
        )
    _emit(args, lines, report.as_dict())
    return EXIT_OK


def cmd_restrict(args) -> int:
    rho = _as_operator(_value(args.expr, _load_bindings(args.bindings)))
    index = tape.IndexSet.interval(1, args.prefix) if args.prefix is not None else parse_index_set(args.index)
    result = tape.restrict(rho, index)
    lines = [render.render(result), f"trace: {_num(result.trace.real)} (input {_num(rho.trace.real)})"]
    payload = _value_payload(result)
    payload.update(index=str(index), trace=result.trace.real, input_trace=rho.trace.real)
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_concat(args) -> int:
    env = _load_bindings(args.bindings)
    v, w = _value(args.left, env), _value(args.right, env)
    if not (isinstance(v, QVector) and isinstance(w, QVector)):
        raise CliError("concat needs two vectors", EXIT_PRECONDITION)
    out = tape.concat(v, w)
    report = tape.normalization_report([v, w], out)
    lines = [
        render.render(out),
        f"input norms: {', '.join(_num(n) for n in report.input_norms)}",
        f"output norm: {_num(report.output_norm)}",
        f"lost weight: {_num(report.lost_weight)}",
    ]
    payload = _value_payload(out)
    payload["normalization"] = report.as_dict()
    _emit(args, lines, payload)
    return EXIT_OK


def _deviation(a: QOperator, b: QOperator) -> float:
    return a.distance(b)


def _fixed_cases(args, cells: int) -> list[tuple[str, QOperator]]:
    cases = []
    if args.expr is not None:
        cases.append((args.expr, _as_operator(_value(args.expr, {}))))
    if args.codebook is not None:
        book = read_codebook(args.codebook)
        cases += [(book.code.label(i), _as_operator(v)) for i, v in enumerate(book.code)]
    for name, rho in cases:
        if rho and max(len(k) for k, _ in rho.entries) > cells:
            raise GuardError(f"{name} has strings longer than {cells} cells")
    return cases


def _index_sets(args, cells: int) -> list[tape.IndexSet]:
    if args.index is not None:
        return [parse_index_set(args.index)]
    return [tape.IndexSet.interval(1, n) for n in range(cells + 1)]


def cmd_oracle(args) -> int:
    cells = args.cells
    if not 1 <= cells <= oracle.MAX_CELLS:
        raise GuardError(f"--cells must be between 1 and {oracle.MAX_CELLS}, got {cells}")
    fixed = []
    for name, rho in _fixed_cases(args, cells):
        for index in _index_sets(args, cells):
            dev = _deviation(tape.restrict(rho, index), oracle.oracle_restrict(rho, index, cells))
            fixed.append({"input": name, "index": str(index), "deviation": dev})

    max_len = min(3, cells)
    restrict_dev = 0.0
    duality_dev = 0.0
    for t in range(args.trials):
        rng = np.random.default_rng([args.seed, t])
        rho = sampling.random_density(rng, max_len, n_terms=int(rng.integers(1, 4)), rank=int(rng.integers(1, 3)))
        index = sampling.random_index_set(rng, cells)
        restrict_dev = max(
            restrict_dev, _deviation(tape.restrict(rho, index), oracle.oracle_restrict(rho, index, cells))
        )
        size = index.count(cells)
        a = sampling.random_hermitian(rng, size)
        lhs = (tape.restrict(rho, index) @ a).trace
        lifted = tape.tensor_at(a, index, identity_operator(cells - size), cell_count=cells)
        rhs = (rho @ lifted).trace
        duality_dev = max(duality_dev, abs(lhs - rhs))

    fixed_dev = max((f["deviation"] for f in fixed), default=0.0)
    worst = max(restrict_dev, duality_dev, fixed_dev)
    passed = worst < args.tolerance
    lines = [
        f"cells: {cells}, trials: {args.trials}, seed: {args.seed}",
        f"restrict vs oracle, max deviation: {restrict_dev:.3g}",
        f"duality, max deviation: {duality_dev:.3g}",
    ]
    for f in fixed:
        lines.append(f"{f['input']} on {f['index']}: deviation {f['deviation']:.3g}")
    lines.append(f"max deviation: {worst:.3g} ({'pass' if passed else 'FAIL'})")
    payload = {
        "cells": cells,
        "trials": args.trials,
        "seed": args.seed,
        "restrict_max_deviation": restrict_dev,
        "duality_max_deviation": duality_dev,
        "fixed": fixed,
        "max_deviation": worst,
        "passed": passed,
    }
    _emit(args, lines, payload)
    return EXIT_OK if passed else EXIT_FALSE


# parser


def _tolerance(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _add_globals(p: argparse.ArgumentParser, top: bool) -> None:
    # Accepted both before and after the subcommand; subparser copies never
    # override a value given at the top level.
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--tolerance", type=_tolerance, default=default(None),
                   help="numerical tolerance (default: $QPREFIX_TOLERANCE or 1e-9)")
    p.add_argument("--json", action="store_true", default=default(False),
                   help="machine-readable output")
    p.add_argument("--seed", type=int, default=default(0), help="random seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qprefix", description="Indeterminate-length qubit strings: evaluate, restrict, check codes."
    )
    _add_globals(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        _add_globals(p, top=False)
        p.set_defaults(func=func)
        return p

    p = command("eval", cmd_eval, "evaluate an expression")
    p.add_argument("expr")
    p.add_argument("--bindings", help="codebook file or JSON object of name: expression")

    p = command("check", cmd_check, "check whether a codebook is prefix-free")
    p.add_argument("codebook")
    p.add_argument("--condition", choices=["1", "2", "3", "4", "all"], default="all")
    p.add_argument("--max-suffix-len", type=int, default=None,
                   help="longest suffix to try (default: largest base length)")

    p = command("kraft", cmd_kraft, "Kraft sums of an orthonormal codebook")
    p.add_argument("codebook")

    p = command("restrict", cmd_restrict, "restrict a qubit string to a set of cells")
    p.add_argument("expr")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--index", help="index set, e.g. '[1,3]', '{1,3}' or '[2,inf)'")
    group.add_argument("--prefix", type=int, help="keep the first N cells")
    p.add_argument("--bindings")

    p = command("concat", cmd_concat, "concatenate two qubit strings")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--bindings")

    p = command("oracle", cmd_oracle, "compare restrictions against the dense tape oracle")
    p.add_argument("--cells", type=int, default=5)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--expr")
    p.add_argument("--codebook")
    p.add_argument("--index", help="index set for --expr/--codebook (default: every prefix)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tolerance is None:
        try:
            args.tolerance = default_tolerance()
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DslSyntaxError, CodebookError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OrthonormalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (DslEvalError, PreconditionError, QPrefixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
