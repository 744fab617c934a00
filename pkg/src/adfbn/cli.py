"""Command-line entry point: ``adfbn <command> <file> [options]``.

Results go to stdout (or ``--output``), diagnostics to stderr.  Exit status is
0 on success, 1 when the analysis fails (parse error, budget exceeded,
precondition violated, a failing ``check``) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import textio
from .correspondence import check
from .dynamics import Scheme, attractors, basins, build_stg, trap_spaces
from .errors import AdfBnError, ParseError
from .model import POS, Adf, BooleanNetwork, adf_to_bn, bn_to_adf, classify
from .semantics import Budget, Semantics, enumerate_models, render
from .structure import count_two_valued, existence_report, signed_cycles

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    path: Path
    fmt: str | None
    budget: Budget
    scheme: Scheme
    json: bool
    output: Path | None


def _as_bn(model: Adf | BooleanNetwork) -> BooleanNetwork:
    return adf_to_bn(model) if isinstance(model, Adf) else model


def _as_adf(model: Adf | BooleanNetwork) -> Adf:
    return bn_to_adf(model) if isinstance(model, BooleanNetwork) else model


# --------------------------------------------------------------------------
# commands; each returns (text, exit code)


def cmd_semantics(model, cfg: RunConfig, args) -> tuple[str, int]:
    D = _as_adf(model)
    models = enumerate_models(D, args.sem, cfg.budget)
    if cfg.json:
        return textio.to_json({"atoms": list(D.atoms), "semantics": args.sem, "models": [render(m) for m in models]}), 0
    return "".join(render(m) + "\n" for m in models), 0


def cmd_stg(model, cfg: RunConfig, args) -> tuple[str, int]:
    G = build_stg(_as_bn(model), cfg.scheme, cfg.budget)
    if args.dot:
        return textio.stg_to_dot(G), 0
    edges = [(G.label(i), G.label(j)) for i, j in sorted(G.edges())]
    if cfg.json:
        return textio.to_json({"variables": list(G.variables), "scheme": G.scheme.value, "edges": edges}), 0
    return "".join(f"{a} -> {b}\n" for a, b in edges), 0


def cmd_traps(model, cfg: RunConfig, args) -> tuple[str, int]:
    report = trap_spaces(_as_bn(model), cfg.scheme, cfg.budget)
    if cfg.json:
        return textio.to_json(report), 0
    spaces = report.minimal if args.minimal else report.maximal if args.maximal else report.trap_spaces
    return "".join(line + "\n" for line in sorted(render(m, "-") for m in spaces)), 0


def cmd_attractors(model, cfg: RunConfig, args) -> tuple[str, int]:
    G = build_stg(_as_bn(model), cfg.scheme, cfg.budget)
    if cfg.json:
        doc = {
            "variables": list(G.variables),
            "scheme": G.scheme.value,
            "attractors": sorted(sorted(a) for a in attractors(G)),
            "basins": sorted(({"attractor": sorted(a), "basin": sorted(b)} for a, b in basins(G)),
                             key=lambda d: d["attractor"]),
        }
        return textio.to_json(doc), 0
    return "".join(" ".join(a) + "\n" for a in sorted(sorted(a) for a in attractors(G))), 0


def cmd_convert(model, cfg: RunConfig, args) -> tuple[str, int]:
    if args.to == "adf":
        return textio.format_adf(_as_adf(model)), 0
    return textio.format_bnet(_as_bn(model)), 0


def cmd_classify(model, cfg: RunConfig, args) -> tuple[str, int]:
    c = classify(model)
    if cfg.json:
        return textio.to_json(textio.classification_dict(c)), 0
    lines = [f"bipolar: {'yes' if c.bipolar else 'no'}"]
    lines += [f"{u} -> {v}: {t.value}" for (u, v), t in c.per_link.items()]
    return "\n".join(lines) + "\n", 0


def cmd_structure(model, cfg: RunConfig, args) -> tuple[str, int]:
    M = _as_bn(model)
    cycles = signed_cycles(M, cfg.budget)
    rep = existence_report(M, cfg.budget)
    if cfg.json:
        doc = rep.as_dict()
        doc["cycles"] = [{"vertices": list(c.vertices), "signs": list(c.signs), "sign": c.sign} for c in cycles]
        return textio.to_json(doc), 0
    lines = ["cycles:"]
    for c in cycles:
        path = " ".join(f"{v} {'->' if s == POS else '-|'}" for v, s in zip(c.vertices, c.signs)) + f" {c.vertices[0]}"
        lines.append(f"  {c.sign}: {path}")
    lines.append(f"fvs: {rep.fvs_size} {{{', '.join(sorted(rep.fvs_witness))}}}")
    for key in ("acyclic", "has_positive_cycle", "has_negative_cycle", "negative_closed_scc"):
        lines.append(f"{key}: {getattr(rep, key)}")
    lines.append(f"conclusions: {', '.join(rep.conclusions) or 'none drawn'}")
    lines.append(f"conclusion: {rep.conclusion}")
    lines.append(f"exact_count: {rep.exact_count}")
    lines += [f"note: {n}" for n in rep.notes]
    return "\n".join(lines) + "\n", 0


def cmd_count(model, cfg: RunConfig, args) -> tuple[str, int]:
    return f"{count_two_valued(model, cfg.budget)}\n", 0


def cmd_check(model, cfg: RunConfig, args) -> tuple[str, int]:
    report = check(model, cfg.budget, seed=args.seed)
    code = EXIT_OK if report.passed else EXIT_ANALYSIS
    if cfg.json:
        return textio.to_json(report), code
    return "\n".join(report.lines()) + "\n", code


def cmd_report(model, cfg: RunConfig, args) -> tuple[str, int]:
    return textio.to_json(textio.analysis_report(model, cfg.scheme, cfg.budget)), 0


COMMANDS: dict[str, Callable] = {
    "semantics": cmd_semantics,
    "stg": cmd_stg,
    "traps": cmd_traps,
    "attractors": cmd_attractors,
    "convert": cmd_convert,
    "classify": cmd_classify,
    "structure": cmd_structure,
    "count": cmd_count,
    "check": cmd_check,
    "report": cmd_report,
}


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's exit status but route through one place
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    env = Budget.from_env()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="input model (.adf or .bnet)")
    common.add_argument("--format", choices=("adf", "bnet"), help="input format (default: from the extension)")
    common.add_argument("--max-3n", type=int, default=env.interp_atoms, metavar="N",
                        help="largest atom count for 3^n scans (env ADFBN_MAX_3N, default %(default)s)")
    common.add_argument("--max-2n", type=int, default=env.state_atoms, metavar="N",
                        help="largest atom count for 2^n scans (env ADFBN_MAX_2N, default %(default)s)")
    common.add_argument("--max-cycles", type=int, default=env.max_cycles, metavar="N",
                        help="cap on enumerated cycles (env ADFBN_MAX_CYCLES, default %(default)s)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of plain text")
    common.add_argument("-o", "--output", type=Path, help="write results to this file")

    scheme = argparse.ArgumentParser(add_help=False)
    scheme.add_argument("--scheme", choices=("sync", "async"), default="sync")
    scheme.add_argument("--general", action="store_true",
                        help="with --scheme async: allow any non-empty set of updates per step")

    parser = _Parser(prog="adfbn", description="ADF semantics and Boolean network dynamics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("semantics", parents=[common], help="enumerate the models of one semantics")
    p.add_argument("--sem", choices=[s.value for s in Semantics], required=True)
    p = sub.add_parser("stg", parents=[common, scheme], help="state transition graph")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    p = sub.add_parser("traps", parents=[common, scheme], help="trap spaces")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--minimal", action="store_true")
    g.add_argument("--maximal", action="store_true")
    sub.add_parser("attractors", parents=[common, scheme], help="attractors (terminal SCCs of the STG)")
    p = sub.add_parser("convert", parents=[common], help="convert between .adf and .bnet")
    p.add_argument("--to", choices=("adf", "bnet"), required=True)
    sub.add_parser("classify", parents=[common], help="link types and bipolarity")
    sub.add_parser("structure", parents=[common], help="signed cycles, FVS and existence criteria")
    sub.add_parser("count", parents=[common], help="number of two-valued models")
    p = sub.add_parser("check", parents=[common], help="verify every correspondence on the instance")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled subspace pairs")
    sub.add_parser("report", parents=[common, scheme], help="every analysis as one JSON document")
    return parser


def _config(args) -> RunConfig:
    try:
        budget = Budget(args.max_3n, args.max_2n, args.max_cycles)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    scheme = Scheme(getattr(args, "scheme", "sync"))
    if getattr(args, "general", False):
        if scheme is not Scheme.ASYNC:
            raise UsageError("--general requires --scheme async")
        scheme = Scheme.GENERAL
    return RunConfig(Path(args.file), args.format, budget, scheme, args.json, args.output)


def run(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
    except ValueError as exc:
        print(f"adfbn: error: bad budget in the environment: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        fmt = cfg.fmt or textio.detect_format(cfg.path)
    except (UsageError, ValueError) as exc:
        print(f"adfbn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            model = textio.load(cfg.path, fmt)
            text, code = COMMANDS[args.command](model, cfg, args)
        except ParseError as exc:
            where = f"{exc.line}:{exc.column}:" if exc.line is not None else ""
            print(f"{cfg.path}:{where} error: {exc.message}", file=sys.stderr)
            return EXIT_ANALYSIS
        except (AdfBnError, OSError) as exc:
            print(f"adfbn: error: {exc}", file=sys.stderr)
            return EXIT_ANALYSIS
    for w in dict.fromkeys(str(w.message) for w in caught):
        print(f"adfbn: warning: {w}", file=sys.stderr)

    if cfg.output is not None:
        cfg.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
