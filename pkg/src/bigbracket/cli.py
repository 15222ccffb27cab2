"""Command line entry point: ``bigbracket <subcommand>``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import builtin_examples, get_example
from .fileformat import ParseError, SetupDefinition, emit_definition, emit_report, jsonable, parse_definition
from .hierarchy import Bounds, build_pn_hierarchy
from .runner import builtin_definitions, example_definition, run_definitions
from .tensors import classify_pair

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_STRICT = 0, 1, 2, 3


def _bounds(args) -> Bounds:
    return Bounds(max_k=args.max_k, max_n=args.max_n, experimental=args.experimental)


def _add_run_flags(p):
    p.add_argument("--max-k", type=int, default=3, help="deepest deformation Theta_k (default 3)")
    p.add_argument("--max-n", type=int, default=3, help="largest power / word length (default 3)")
    p.add_argument("--strict", action="store_true", help="exit 3 when any check is not applicable")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--experimental", action="store_true", help="enable the weakened torsion gate")
    p.add_argument("--format", choices=("json", "text"), default="json")


def _load(args) -> SetupDefinition:
    if getattr(args, "example", None):
        return example_definition(get_example(args.example))
    if not args.file:
        raise SystemExit("a definition file or --example is required")
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    return parse_definition(text)


def _finish(report: dict, args) -> int:
    sys.stdout.write(emit_report(report, args.format))
    s = report["summary"]
    if s["failed"]:
        return EXIT_FAILED
    if args.strict and s["not-applicable"]:
        return EXIT_STRICT
    return EXIT_OK


def cmd_check(args) -> int:
    defn = _load(args)
    return _finish(run_definitions([defn], _bounds(args), args.jobs), args)


def cmd_verify_all(args) -> int:
    defns = builtin_definitions()
    if args.only:
        defns = [d for d in defns if d.name in set(args.only)]
    return _finish(run_definitions(defns, _bounds(args), args.jobs), args)


def _role(defn: SetupDefinition, args, role: str):
    name = getattr(args, role) or defn.roles.get(role)
    if name is None or name not in defn.tensors:
        raise SystemExit(f"no tensor bound to role {role}")
    return defn.tensors[name]


def cmd_classify(args) -> int:
    defn = _load(args)
    c = classify_pair(defn.theta, _role(defn, args, "I"), _role(defn, args, "J"))
    out = {"instance": defn.name, **c.as_dict()}
    if args.format == "json":
        sys.stdout.write(json.dumps(jsonable(out), sort_keys=True, indent=2) + "\n")
    else:
        for k, v in sorted(out.items()):
            sys.stdout.write(f"{k}: {v}\n")
    return EXIT_OK


def cmd_hierarchy(args) -> int:
    defn = _load(args)
    h = build_pn_hierarchy(defn.theta, _role(defn, args, "J"), _role(defn, args, "I"), args.n_max, args.k_max)
    out = {
        "instance": defn.name,
        "status": h.status,
        "notes": h.notes,
        "entries": [{"n": e.n, "tensor": str(e.tensor), "poisson": {str(k): v for k, v in sorted(e.poisson.items())}} for e in h.entries],
        "compatible": {f"k={k} m={m} n={n}": v for (k, m, n), v in sorted(h.compatibility.items())},
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(f"{defn.name}: {h.status}\n")
        for note in h.notes:
            sys.stdout.write(f"  {note}\n")
        for e in h.entries:
            flags = " ".join(f"k={k}:{'P' if v else '-'}" for k, v in sorted(e.poisson.items()))
            sys.stdout.write(f"  I^{e.n}J = {e.tensor}  [{flags}]\n")
    return EXIT_OK if h.status != "failed" else EXIT_FAILED


def cmd_examples(args) -> int:
    if args.dump:
        sys.stdout.write(emit_definition(example_definition(get_example(args.dump))))
        return EXIT_OK
    for ex in builtin_examples():
        sys.stdout.write(f"{ex.name:22s} {ex.summary}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bigbracket", description="Exact big-bracket checks for pre-Courant algebroids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the tasks listed in a definition file")
    p.add_argument("file", nargs="?", help="definition file, or - for stdin")
    p.add_argument("--example", help="use a builtin example instead of a file")
    _add_run_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-all", help="run T-01..T-21 over the builtin catalog")
    p.add_argument("--only", nargs="*", help="restrict to these builtin names")
    _add_run_flags(p)
    p.set_defaults(func=cmd_verify_all)

    for name, func, extra in (("classify", cmd_classify, False), ("hierarchy", cmd_hierarchy, True)):
        p = sub.add_parser(name, help="classify the pair (I, J)" if not extra else "build the Poisson-Nijenhuis hierarchy")
        p.add_argument("file", nargs="?")
        p.add_argument("--example")
        p.add_argument("--I", dest="I", help="tensor name for the role I")
        p.add_argument("--J", dest="J", help="tensor name for the role J")
        p.add_argument("--format", choices=("json", "text"), default="json")
        if extra:
            p.add_argument("--n-max", type=int, default=3)
            p.add_argument("--k-max", type=int, default=3)
        p.set_defaults(func=func)

    p = sub.add_parser("examples", help="list builtin examples or dump one as a definition file")
    p.add_argument("--dump", metavar="NAME")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except KeyError as exc:
        sys.stderr.write(f"error: {exc.args[0]}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
