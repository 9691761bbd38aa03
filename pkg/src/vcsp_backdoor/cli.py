"""Command line front end.

Exit codes: 0 success, 1 a definite NO (no backdoor, not a backdoor),
2 usage or parse errors, 3 an operation refused its input (solver
preconditions, enumeration budgets). Results go to stdout as JSON;
``--report PATH`` also writes a run report with search statistics and
wall time.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from . import __version__
from .backdoor import (
    SearchStats,
    detect_backdoor_branching,
    detect_backdoor_exhaustive,
    is_backdoor,
    node_bound,
    solve_with_backdoor,
)
from .costs import format_cost
from .fileformat import ParseError, emit_instance, load_instance
from .generators import GENERATORS, GeneratorError, generate
from .languages import BUILTIN_NAMES, LanguageError, LanguageFamily, builtin_language
from .solvers import BudgetExceeded, Solution, SolverError, brute_force_solve
from .transform import PreconditionError, finitize, pipeline_solve, vcsp_to_csp

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _parse_languages(text: str | None, document) -> LanguageFamily:
    if not text:
        raise UsageError("--languages is required for this command")
    d = document.instance.domain_size
    langs = []
    for item in text.split(","):
        name, _, q = item.strip().partition(":")
        if name in document.languages:
            langs.append(document.languages[name])
        elif name in BUILTIN_NAMES:
            try:
                langs.append(builtin_language(name, d, int(q) if q else 2))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        else:
            raise UsageError(f"unknown language {name!r}")
    try:
        return LanguageFamily(langs)
    except LanguageError as exc:
        raise UsageError(str(exc)) from None


def _solution_dict(sol: Solution) -> dict[str, Any]:
    return {"cost": format_cost(sol.cost), "assignment": [sol.assignment[x] for x in sorted(sol.assignment)]}


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for {args.command}")
    return value


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args, stats):
    doc = load_instance(_need(args, "instance"))
    if args.mode == "exhaustive":
        return EXIT_OK, _solution_dict(brute_force_solve(doc.instance))
    family = _parse_languages(args.languages, doc)
    k = _need(args, "k")
    if args.scattered:
        X = detect_backdoor_exhaustive(doc.instance, k, family, scattered=True, stats=stats)
    else:
        X = detect_backdoor_branching(doc.instance, k, family, stats=stats)
    if X is None:
        return EXIT_NO, {"result": "NO"}
    sol = solve_with_backdoor(doc.instance, X, family, args.scattered, stats=stats)
    return EXIT_OK, {"backdoor": sorted(X), **_solution_dict(sol)}


def cmd_detect(args, stats):
    doc = load_instance(_need(args, "instance"))
    family = _parse_languages(args.languages, doc)
    k = _need(args, "k")
    if args.mode == "branching":
        if args.scattered:
            raise UsageError("branching detection targets the union class; use --mode exhaustive with --scattered")
        X = detect_backdoor_branching(doc.instance, k, family, stats=stats)
    else:
        X = detect_backdoor_exhaustive(doc.instance, k, family, scattered=args.scattered, stats=stats)
    result: dict[str, Any] = {"backdoor": None if X is None else sorted(X)}
    if args.mode == "branching":
        result["node_bound"] = node_bound(family, k)
    return (EXIT_NO if X is None else EXIT_OK), result


def cmd_verify(args, stats):
    doc = load_instance(_need(args, "instance"))
    family = _parse_languages(args.languages, doc)
    raw = _need(args, "backdoor")
    try:
        X = [int(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--backdoor expects comma-separated variables, got {raw!r}") from None
    try:
        ok = is_backdoor(doc.instance, X, family, scattered=args.scattered, stats=stats)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return (EXIT_OK if ok else EXIT_NO), {"backdoor": sorted(set(X)), "is_backdoor": ok}


def _finitized(args):
    doc = load_instance(_need(args, "instance"))
    family = _parse_languages(args.languages, doc)
    k = _need(args, "k")
    return doc, family, k, finitize(doc.instance, family, k)


def cmd_finitize(args, stats):
    doc, family, k, fin = _finitized(args)
    if fin is None:
        return EXIT_NO, {"result": "NO", "reason": "a constraint has more than q + k variables"}
    meta = {"transform": "finitize", "k": k, "representatives": [fin.representatives[t] for t in fin.types]}
    _write(args.out, emit_instance(fin.instance, fin.languages, meta))
    return EXIT_OK, {"types": len(fin.representatives), "language_sizes": [len(lang) for lang in fin.languages]}


def cmd_to_csp(args, stats):
    doc, family, k, fin = _finitized(args)
    if fin is None:
        return EXIT_NO, {"result": "NO", "reason": "a constraint has more than q + k variables"}
    red = vcsp_to_csp(fin, k, include_infinity=not args.no_infinity)
    meta = {
        "transform": "vcsp_to_csp",
        "k": k,
        "domain": [str(v) for v in red.domain],
        "original_variables": sorted(red.original_variables),
        "fresh": {str(j): list(vs) for j, vs in red.fresh.items()},
    }
    _write(args.out, emit_instance(red.instance, red.languages, meta))
    return EXIT_OK, {"domain_size": len(red.domain), "num_variables": red.instance.num_variables}


def cmd_pipeline(args, stats):
    doc = load_instance(_need(args, "instance"))
    family = _parse_languages(args.languages, doc)
    res = pipeline_solve(doc.instance, family, _need(args, "k"), include_infinity=not args.no_infinity, stats=stats)
    if res is None:
        return EXIT_NO, {"result": "NO"}
    return EXIT_OK, {"backdoor": sorted(res.backdoor), **_solution_dict(res.solution)}


def cmd_gen(args, stats):
    sizes = {}
    for item in args.size or []:
        key, eq, value = item.partition("=")
        if not eq:
            raise UsageError(f"--size expects NAME=INT, got {item!r}")
        try:
            sizes[key] = int(value)
        except ValueError:
            raise UsageError(f"--size expects NAME=INT, got {item!r}") from None
    try:
        inst, meta = generate(args.kind, args.seed, **sizes)
    except GeneratorError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, emit_instance(inst, metadata=meta))
    return EXIT_OK, None


COMMANDS = {
    "solve": cmd_solve,
    "detect": cmd_detect,
    "verify": cmd_verify,
    "finitize": cmd_finitize,
    "to-csp": cmd_to_csp,
    "pipeline": cmd_pipeline,
    "gen": cmd_gen,
}


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vcsp-backdoor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--report", metavar="PATH", help="write a JSON run report here")
        if name == "gen":
            p.add_argument("kind", choices=sorted(GENERATORS))
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--size", action="append", metavar="NAME=INT", help="generator size parameter")
            p.add_argument("--out", metavar="PATH")
            continue
        p.add_argument("--instance", metavar="PATH")
        p.add_argument("--k", type=int)
        p.add_argument("--languages", metavar="LIST", help="comma-separated, e.g. min_closed,submodular or NAME:q")
        p.add_argument(
            "--scattered", type=_bool, nargs="?", const=True, default=False, help="target the scattered class"
        )
        p.add_argument("--mode", choices=("branching", "exhaustive"), default="exhaustive")
        p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; the algorithms are deterministic")
        p.add_argument("--out", metavar="PATH")
        if name == "verify":
            p.add_argument("--backdoor", metavar="LIST", help="comma-separated variables")
        if name in ("to-csp", "pipeline"):
            p.add_argument("--no-infinity", action="store_true", help="leave the infinite cost out of T")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "k", None) is not None and args.k < 0:
        print("error: --k must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    stats = SearchStats()
    start = time.perf_counter()
    try:
        code, result = COMMANDS[args.command](args, stats)
    except (UsageError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, BudgetExceeded, PreconditionError, LanguageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    elapsed = time.perf_counter() - start
    if result is not None:
        print(json.dumps(result))
    if args.report:
        params = {k: v for k, v in vars(args).items() if k not in ("command", "report")}
        report = {
            "command": args.command,
            "parameters": params,
            "exit_code": code,
            "result": result,
            "stats": stats.as_dict(),
            "wall_time_seconds": elapsed,
        }
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
