"""Command line entry point.

Exit codes: 0 when a check passes, 1 when it fails or cannot decide, 2 for
usage and parse errors.
"""
from __future__ import annotations

import argparse
import io
import sys

from .cones import parse_cone_spec, parse_word
from .errors import OrdGraphError, ParseError, ValidationFailed
from .filters import ultrafilters
from .formats import parse_graph_file, parse_hom_spec, read_graph, read_input
from .pgraph import validate_graph
from .reductions import check_hereditary, check_reduction, submonoid_member
from .repmat import (
    build_rep,
    builtin_grading,
    check_relators,
    grading_check,
    is_faithful,
    is_tight,
    span_dim,
)
from .report import FAIL, PASS, Report, verdict
from .semilattice import is_e_tight


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _load(path: str):
    return parse_graph_file(read_input(path))


def _emit(out, report: Report, command: str, as_json: bool, extra_lines=()) -> int:
    if as_json:
        out.write(report.to_json(command) + "\n")
    else:
        for line in extra_lines:
            out.write(line + "\n")
        out.write(report.to_text() + "\n")
    return 0 if report.status == PASS else 1


def _render_filter(U) -> str:
    return "{" + ", ".join(U.render()) + "}"


# ---------------------------------------------------------------- commands


def cmd_validate(args, out):
    g = read_graph(read_input(args.file))
    return _emit(out, validate_graph(g), "validate", args.json)


def cmd_ultrafilters(args, out):
    g = _load(args.file)
    found = ultrafilters(g)
    lines = [f"U_{max(U.paths, key=g.order_key)} = {_render_filter(U)}" for U in found]
    report = verdict([], {"ultrafilters": len(found)})
    if args.json:
        report = Report(PASS, (), {"ultrafilters": [U.render() for U in found]})
    return _emit(out, report, "ultrafilters", args.json, lines)


def _rep(args):
    return build_rep(_load(args.file), args.kind)


def cmd_rep(args, out):
    rep = _rep(args)
    lines = [f"kind {rep.kind}", "basis"] + ["  " + x for x in rep.legend()]
    for pid in rep.graph.all_paths():
        lines.append(f"t_{pid}")
        lines += ["  " + row for row in rep[pid].to_text().splitlines()]
    stats = {"dim": rep.dim, "basis": list(rep.labels)}
    if args.json:
        stats["matrices"] = {pid: rep[pid].to_text() for pid in rep.graph.all_paths()}
    return _emit(out, Report(PASS, (), stats), "rep", args.json, lines)


def cmd_relators(args, out):
    return _emit(out, check_relators(_rep(args)), "relators", args.json)


def cmd_tight(args, out):
    return _emit(out, is_tight(_rep(args)), "tight", args.json)


def cmd_etight(args, out):
    mode = "full" if args.full else "restricted"
    report = is_e_tight(_rep(args), mode, args.cap)
    return _emit(out, report, "etight", args.json)


def cmd_span(args, out):
    mode = "balanced" if args.balanced else "full"
    dim = span_dim(_rep(args), mode)
    return _emit(out, Report(PASS, (), {"mode": mode, "span_dim": dim}), "span", args.json)


def cmd_grading(args, out):
    rep = _rep(args)
    ok = grading_check(rep, builtin_grading(rep))
    report = verdict([] if ok else [("grading", rep.kind)], {"kind": rep.kind})
    return _emit(out, report, "grading", args.json)


def cmd_reduce(args, out):
    phi = parse_hom_spec(read_input(args.hom))
    mode = "strong" if args.strong else "criteria" if args.criteria else "reduction"
    report = check_reduction(phi, args.depth, mode)
    return _emit(out, report, "reduce", args.json, [f"hom {phi.name} mode {mode}"])


def cmd_hereditary(args, out):
    cone = parse_cone_spec(args.cone)
    gens = [parse_word(cone, w) for w in args.gens]
    radius = args.radius if args.radius is not None else 2 * args.depth
    member = submonoid_member(cone, gens, radius)
    report = check_hereditary(cone, member, args.depth)
    return _emit(out, report, "hereditary", args.json)


def cmd_demo(args, out):
    g = _load(f"{args.name}.pgraph")
    rep = build_rep(g, "ultrafilter")
    lines = ["ultrafilters"]
    for label, U in zip(rep.labels, ultrafilters(g)):
        lines.append(f"  {label} = {_render_filter(U)}")
    lines.append("generators")
    for pid in g.all_paths():
        units = " + ".join(f"E{i + 1}{j + 1}" for (i, j) in sorted(rep[pid].entries)) or "0"
        lines.append(f"  f_{pid} = {units}")
    checks = {
        "relators": check_relators(rep).status,
        "faithful": PASS if is_faithful(rep) else FAIL,
        "tight": is_tight(rep).status,
        "grading": PASS if grading_check(rep, builtin_grading(rep)) else FAIL,
    }
    failed = [(name,) for name, status in checks.items() if status != PASS]
    stats = dict(checks, span_dim=span_dim(rep), ultrafilters=len(rep.labels))
    return _emit(out, verdict(failed, stats), "demo", args.json, lines)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    parser = _Parser(prog="ordgraph", description="Checks for finite P-graphs and ordered groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_command(name, func, help_text, with_kind=False):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("file")
        if with_kind:
            p.add_argument("--kind", required=True, choices=["ultrafilter", "leftregular", "left_regular"])
        p.set_defaults(func=func)
        return p

    graph_command("validate", cmd_validate, "check the graph laws")
    graph_command("ultrafilters", cmd_ultrafilters, "list the ultrafilters")
    graph_command("rep", cmd_rep, "print a representation", True)
    graph_command("relators", cmd_relators, "check the relators", True)
    graph_command("tight", cmd_tight, "check that every bolt vanishes", True)
    p = graph_command("etight", cmd_etight, "check tightness through the semilattice", True)
    p.add_argument("--full", action="store_true")
    p.add_argument("--cap", type=int, default=2, help="largest X and Y in full mode")
    p = graph_command("span", cmd_span, "dimension of the generated algebra", True)
    p.add_argument("--balanced", action="store_true")
    graph_command("grading", cmd_grading, "check the degree grading", True)

    p = sub.add_parser("reduce", parents=[common], help="check a homomorphism up to a depth")
    p.add_argument("--hom", required=True)
    p.add_argument("--depth", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strong", action="store_true")
    mode.add_argument("--criteria", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("hereditary", parents=[common], help="check a finitely generated submonoid")
    p.add_argument("--cone", required=True)
    p.add_argument("--gens", nargs="+", required=True, help="generator words, one argument each")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--radius", type=int)
    p.set_defaults(func=cmd_hereditary)

    p = sub.add_parser("demo", parents=[common], help="worked example")
    p.add_argument("name", choices=["m5"])
    p.set_defaults(func=cmd_demo)
    return parser


def run_command(argv, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except ValidationFailed as exc:
        return _emit(out, exc.report, args.command, args.json)
    except (ParseError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except OrdGraphError as exc:
        err.write(f"error: {exc}\n")
        return 2


def run(argv) -> tuple[int, str, str]:
    """Run a command and capture its streams."""
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
