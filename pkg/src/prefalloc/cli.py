"""Command line front end: solve, eval, classify, generate.

Output on stdout is JSON by default and is byte-stable for a fixed
input and seed; anything informational (thresholds, seeds, warnings)
goes to stderr.  Exit codes: 0 solved or decision "yes", 1 decision
"no", 2 bad input, 3 unsupported request, 4 size refusal.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import classify, exact, junction, polyalgos, randgen, reductions
from .core import (
    Allocation,
    Instance,
    ParseError,
    PreconditionError,
    SizeGuardError,
    parse_allocation,
    parse_instance,
    profile,
    serialize_instance,
    serialize_profile,
    validate_allocation,
)

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_TOO_LARGE = 4

# Forceable solver names, keyed by the objective each one minimizes.
SUM_SOLVERS = {
    "minsum-matchings": polyalgos.minsum_directed_matchings,
    "minsum-paths": polyalgos.minsum_paths,
    "minsum-disjoint-paths": polyalgos.minsum_disjoint_paths,
    "minsum-two-star-forests": polyalgos.minsum_two_star_forests,
    "minsum-junctions": junction.minsum_few_junctions,
}
MAX_SOLVERS = {
    "minmax-paths": polyalgos.minmax_paths,
    "minmax-two-matchings": polyalgos.minmax_two_matchings,
}

# generate --reduction name -> (source parser, generator, objectives)
REDUCTIONS = {
    "x3c-stars": (reductions.parse_x3c, reductions.gen_minmax_outstars, ("max",)),
    "x3c-trees": (reductions.parse_x3c, reductions.gen_minsum_outtrees, ("sum",)),
    "sat-2agents": (
        reductions.parse_dimacs,
        reductions.gen_two_agents_sat,
        ("sum", "max"),
    ),
    "x3c-matchings": (
        reductions.parse_x3c,
        reductions.gen_minmax_matchings,
        ("max",),
    ),
    "sat-paths": (
        reductions.parse_dimacs,
        reductions.gen_minmax_two_paths_sat,
        ("max",),
    ),
}


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from None


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(_read_text(path))
    except ParseError as exc:
        raise _CliError(EXIT_INPUT, f"bad instance: {exc}") from None


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _alloc_payload(alloc: Allocation) -> dict:
    return {agent: sorted(items) for agent, items in alloc.pairs}


def _run_solver(inst: Instance, objective: str, name: str):
    """Invoke one registered solver and return its (value, witness)."""
    if name == "oracle":
        res = exact.minimize(inst, objective)
    elif objective == "sum":
        res = SUM_SOLVERS[name](inst)
    else:
        res = MAX_SOLVERS[name](inst)
    return res.value, res.witness


def _pick_algorithm(inst: Instance, objective: str, requested: str) -> tuple[str, str]:
    if requested == "auto":
        choice = classify.dispatch(inst, objective)
        if choice.name == "oracle-too-large":
            raise _CliError(EXIT_TOO_LARGE, choice.reason)
        return choice.name, choice.reason
    if requested == "oracle":
        return "oracle", "forced by --algorithm"
    table = SUM_SOLVERS if objective == "sum" else MAX_SOLVERS
    if requested in table:
        return requested, "forced by --algorithm"
    other = MAX_SOLVERS if objective == "sum" else SUM_SOLVERS
    if requested in other:
        raise _CliError(
            EXIT_UNSUPPORTED,
            f"algorithm {requested!r} does not minimize objective {objective!r}",
        )
    raise _CliError(EXIT_UNSUPPORTED, f"unknown algorithm {requested!r}")


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    name, reason = _pick_algorithm(inst, args.objective, args.algorithm)
    started = time.perf_counter()
    try:
        value, witness = _run_solver(inst, args.objective, name)
    except SizeGuardError as exc:
        raise _CliError(EXIT_TOO_LARGE, str(exc)) from None
    except PreconditionError as exc:
        raise _CliError(EXIT_UNSUPPORTED, f"{name}: {exc}") from None
    elapsed = time.perf_counter() - started

    # Recompute the objective from the witness so the report can never
    # drift from the allocation it carries.
    prof = profile(inst, witness)
    checked = prof.total if args.objective == "sum" else prof.maximum
    if checked != value:
        raise AssertionError(
            f"solver {name} reported {value} but its witness evaluates to {checked}"
        )

    report = {
        "objective": args.objective,
        "algorithm": name,
        "reason": reason,
        "value": checked,
        "profile": {a: v for a, v in zip(prof.agents, prof.values)},
        "sum": prof.total,
        "max": prof.maximum,
        "allocation": _alloc_payload(witness),
    }
    code = EXIT_OK
    if args.threshold is not None:
        answer = checked <= args.threshold
        report["decision"] = {
            "threshold": args.threshold,
            "answer": "yes" if answer else "no",
        }
        if not answer:
            code = EXIT_NO
    if args.timing:
        report["wall_ms"] = round(elapsed * 1000.0, 3)

    if args.table:
        lines = [
            f"objective  {report['objective']}",
            f"algorithm  {report['algorithm']}",
            f"value      {report['value']}",
            f"sum        {report['sum']}",
            f"max        {report['max']}",
        ]
        if "decision" in report:
            dec = report["decision"]
            lines.append(f"decision   {dec['answer']} (threshold {dec['threshold']})")
        if "wall_ms" in report:
            lines.append(f"wall_ms    {report['wall_ms']}")
        for agent in prof.agents:
            bundle = ", ".join(sorted(witness.get(agent))) or "-"
            lines.append(f"agent {agent}: delta {prof[agent]}, holds {bundle}")
        _emit("\n".join(lines) + "\n")
    else:
        _emit(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return code


def cmd_eval(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    try:
        alloc = parse_allocation(_read_text(args.allocation), inst)
    except ParseError as exc:
        raise _CliError(EXIT_INPUT, f"bad allocation: {exc}") from None
    violations = validate_allocation(inst, alloc)
    if violations:
        for line in violations:
            print(f"invalid: {line}", file=sys.stderr)
        return EXIT_INPUT
    _emit(serialize_profile(profile(inst, alloc)))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    summary = classify.junction_summary(inst)
    recommended = {}
    for objective in ("sum", "max"):
        choice = classify.dispatch(inst, objective)
        recommended[objective] = choice.name
    report = {
        "agents": {
            a: sorted(label.value for label in classify.graph_classes(inst.graph(a)))
            for a in inst.agents
        },
        "instance_class": classify.instance_class(inst).value,
        "junctions": {a: sorted(js) for a, js in summary.per_agent.items()},
        "gamma": summary.gamma,
        "recommended": recommended,
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _generate_reduction(args: argparse.Namespace) -> int:
    parse, generate, objectives = REDUCTIONS[args.reduction]
    try:
        source = parse(_read_text(args.source))
        built = generate(source)
    except (ParseError, PreconditionError) as exc:
        raise _CliError(EXIT_INPUT, str(exc)) from None
    inst, bounds = built[0], built[1:]
    _emit(serialize_instance(inst))
    pairs = " ".join(f"{o}<={b}" for o, b in zip(objectives, bounds))
    print(f"reduction {args.reduction}: decide {pairs}", file=sys.stderr)
    return EXIT_OK


def _generate_random(args: argparse.Namespace) -> int:
    if args.items is None or args.agents is None:
        raise _CliError(EXIT_INPUT, "--random requires --items and --agents")
    rng = random.Random(args.seed)
    try:
        inst = randgen.random_instance(rng, args.random, args.items, args.agents)
    except PreconditionError as exc:
        raise _CliError(EXIT_INPUT, str(exc)) from None
    _emit(serialize_instance(inst))
    print(
        f"random {args.random}: items={args.items} agents={args.agents}"
        f" seed={args.seed}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    if args.reduction is not None:
        return _generate_reduction(args)
    return _generate_random(args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefalloc",
        description="Dissatisfaction-minimizing allocation toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="minimize an objective over an instance")
    solve.add_argument("instance", help="instance JSON path, or - for stdin")
    solve.add_argument("--objective", choices=("sum", "max"), required=True)
    solve.add_argument(
        "--algorithm",
        default="auto",
        help="auto, oracle, or a specific solver name (default: auto)",
    )
    solve.add_argument(
        "--threshold",
        type=int,
        default=None,
        help="decide value <= threshold: exit 0 on yes, 1 on no",
    )
    style = solve.add_mutually_exclusive_group()
    style.add_argument("--json", action="store_true", help="JSON report (default)")
    style.add_argument("--table", action="store_true", help="plain text report")
    solve.add_argument(
        "--timing",
        action="store_true",
        help="include wall time in the report (breaks byte determinism)",
    )
    solve.set_defaults(func=cmd_solve)

    ev = sub.add_parser("eval", help="evaluate an allocation against an instance")
    ev.add_argument("instance", help="instance JSON path, or - for stdin")
    ev.add_argument("allocation", help="allocation JSON path")
    ev.set_defaults(func=cmd_eval)

    cls = sub.add_parser("classify", help="report graph classes and routing")
    cls.add_argument("instance", help="instance JSON path, or - for stdin")
    cls.set_defaults(func=cmd_classify)

    gen = sub.add_parser("generate", help="emit an instance on stdout")
    mode = gen.add_mutually_exclusive_group(required=True)
    mode.add_argument(
        "--reduction",
        choices=sorted(REDUCTIONS),
        help="build a hardness instance from a source problem file",
    )
    mode.add_argument(
        "--random",
        choices=randgen.SHAPES,
        metavar="SHAPE",
        help=f"random instance shape: one of {', '.join(randgen.SHAPES)}",
    )
    gen.add_argument(
        "source",
        nargs="?",
        help="source problem path for --reduction (X3C JSON or DIMACS CNF)",
    )
    gen.add_argument("--items", type=int, default=None)
    gen.add_argument("--agents", type=int, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(func=cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "generate" and args.reduction is not None and not args.source:
        parser.error("--reduction requires a source path (or -)")
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
