"""
Command-line entry point.

Every command prints a line-oriented ``key: value`` report on stdout, or a
single JSON object with ``--machine``. Logs go to stderr or ``--log-file``.

Exit codes: 0 success, 1 a valid negative verdict, 2 bad input or usage,
3 an internal invariant failure.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import structlog
from pydantic import ValidationError

from .config import Config
from .exceptions import ColouringError, InvariantFailure, LiftPreconditionError, PermFileError
from .graph3 import export_dimacs, verify_proper
from .groups import FiniteGroup, build_from_spec, center, format_subgroup, parse_generators, subgroup_generated
from .lifting import lift
from .logging_setup import setup_logging
from .perm_maps import (
    Perm,
    automorphism_orbit,
    identity_perm,
    is_colouring_bijection,
    parse_perm,
    perm_header,
    save_perm,
    square_map,
)
from .pipeline import ColouringPipeline
from .quotients import quotient
from .search_engine import (
    TARGET_PREDICATES,
    BranchOrder,
    SearchConfig,
    SearchMode,
    SearchTarget,
    scm_census,
    search,
)
from .structure import LiftingSubgroup, automorphisms, classify, enumerate_lifting_subgroups, find_isomorphism, transport_perm
from .tables import verify_tables
from .utils import generate_run_id, numbered_paths

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1

Report = List[Tuple[str, Any]]
Handler = Callable[[argparse.Namespace, Config], Tuple[Report, int]]

PROPERTY_NAMES = {
    SearchTarget.COLOURING_BIJECTION: "colouring bijection",
    SearchTarget.STRONG_COMPLETE_MAPPING: "strong complete mapping",
    SearchTarget.COMPLETE_MAPPING: "complete mapping",
}


# --------------------------------------------------------------------------
# Rendering

def _text(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    if isinstance(value, dict):
        return " ".join(f"{k}={_text(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_text(v) for v in value) + "]"
    return str(value)


def render(report: Report, machine: bool = False) -> str:
    """Text report, one ``key: value`` line per entry; lists become ``key[i]:`` lines."""
    if machine:
        return json.dumps({key: value for key, value in report}, indent=2, default=str)
    lines = []
    for key, value in report:
        if isinstance(value, list):
            if not value:
                lines.append(f"{key}: none")
            for i, item in enumerate(value):
                lines.append(f"{key}[{i}]: {_text(item)}")
        else:
            lines.append(f"{key}: {_text(value)}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# Permutation arguments

def read_perm(group: FiniteGroup, path: Path) -> Perm:
    """
    Load a permutation file onto group.

    A file written for a different spec is accepted when that spec builds a
    group isomorphic to this one; the map is transported along the first
    isomorphism found.
    """
    if not path.exists():
        raise PermFileError(f"Permutation file not found: {path}")
    text = path.read_text()
    header = perm_header(text)
    if header is None or header == group.name:
        return parse_perm(text, group=group)
    source = parse_perm(text)
    iso = find_isomorphism(source.group, group) if source.group.order == group.order else None
    if iso is None:
        raise PermFileError(f"{path} is for {header}, which is not isomorphic to {group.name}")
    logger.info("Transported permutation", path=str(path), source=header, target=group.name)
    return transport_perm(source, iso, group)


def resolve_perm(group: FiniteGroup, source: str) -> Perm:
    """``identity``, ``square`` or a permutation file."""
    if source == "identity":
        return identity_perm(group)
    if source == "square":
        return square_map(group)
    return read_perm(group, Path(source))


def write_perm(perm: Perm, path: Path) -> str:
    if not is_colouring_bijection(perm.group, perm):
        raise InvariantFailure(f"refusing to write {path}: not a colouring bijection")
    return str(save_perm(perm, path))


# --------------------------------------------------------------------------
# Commands

def cmd_group_show(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.spec)
    report: Report = [
        ("group", group.name),
        ("order", group.order),
        ("exponent", group.exponent),
        ("center size", center(group).order),
        ("classification", str(classify(group))),
    ]
    if group.prime_factors.keys() == {3} and group.order <= config.groups.max_lifting_order:
        report.append((
            "lifting subgroups",
            [
                {
                    "kind": entry.kind.value,
                    "subgroup": format_subgroup(group, entry.subgroup),
                    "quotient": "noncyclic" if entry.quotient_noncyclic else "cyclic",
                }
                for entry in enumerate_lifting_subgroups(group)
            ],
        ))
    return report, EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.group)
    sigma = resolve_perm(group, args.perm)
    flags = ((SearchTarget.COLOURING_BIJECTION, args.cb),
             (SearchTarget.STRONG_COMPLETE_MAPPING, args.scm),
             (SearchTarget.COMPLETE_MAPPING, args.cm))
    selected = [target for target, flag in flags if flag] or [SearchTarget.COLOURING_BIJECTION]

    report: Report = [("group", group.name), ("perm", args.perm)]
    holds = True
    for target in selected:
        verdict = TARGET_PREDICATES[target](group, sigma)
        holds = holds and verdict
        report.append((PROPERTY_NAMES[target], verdict))
    return report, EXIT_OK if holds else EXIT_NEGATIVE


def cmd_search(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.group)
    if args.count:
        mode, limit = SearchMode.COUNT, None
    elif args.enumerate is not None:
        mode, limit = SearchMode.ENUMERATE, args.enumerate
    else:
        mode, limit = SearchMode.FIRST, None
    options: Dict[str, Any] = dict(
        target=SearchTarget(args.target),
        mode=mode,
        limit=limit,
        fix_identity=args.fix_identity,
        node_budget=args.budget,
        order=BranchOrder(args.order),
        restarts=not args.no_restarts,
        jobs=args.jobs or config.processing.default_jobs,
    )
    if args.seed is not None:
        options["seed"] = args.seed
    search_config = SearchConfig(**options)
    result = search(group, search_config)

    report: Report = [
        ("group", group.name),
        ("target", search_config.target.value),
        ("mode", mode.value),
        ("found", len(result.found)),
        ("count", result.count),
        ("nodes explored", result.nodes_explored),
        ("exhausted", result.exhausted),
        ("restarts", result.restarts),
        ("elapsed seconds", round(result.elapsed_seconds, 3)),
        ("solutions", [perm.as_list() for perm in result.found]),
    ]
    if args.out and result.found:
        predicate = TARGET_PREDICATES[search_config.target]
        written = []
        for perm, path in zip(result.found, numbered_paths(args.out, len(result.found))):
            if not predicate(group, perm):
                raise InvariantFailure(f"refusing to write {path}: fails the {search_config.target.value} predicate")
            written.append(str(save_perm(perm, path)))
        report.append(("written", written))

    if mode is SearchMode.COUNT:
        return report, EXIT_OK
    return report, EXIT_OK if result.found else EXIT_NEGATIVE


def select_lifting_subgroup(group: FiniteGroup, choice: str, config: Config) -> LiftingSubgroup:
    """``auto`` takes the preferred kind with a noncyclic quotient; otherwise generator labels."""
    entries = enumerate_lifting_subgroups(group)
    if choice == "auto":
        rank = {kind: i for i, kind in enumerate(config.colour.lift_preference)}
        candidates = sorted(
            (entry for entry in entries if entry.quotient_noncyclic and entry.kind in rank),
            key=lambda entry: rank[entry.kind],
        )
        if not candidates:
            raise LiftPreconditionError(f"{group.name} has no lifting subgroup with a noncyclic quotient")
        return candidates[0]
    wanted = subgroup_generated(group, parse_generators(group, choice)).element_set
    for entry in entries:
        if entry.subgroup.element_set == wanted:
            return entry
    raise LiftPreconditionError(f"{choice} is not a lifting subgroup of {group.name}")


def cmd_lift(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.group)
    entry = select_lifting_subgroup(group, args.subgroup, config)
    decomposition = quotient(group, entry.subgroup)
    report: Report = [
        ("group", group.name),
        ("subgroup", format_subgroup(group, entry.subgroup)),
        ("kind", entry.kind.value),
        ("quotient order", decomposition.quotient.order),
    ]

    if args.quotient_perm == "auto":
        coloured = ColouringPipeline(config).colour(decomposition.quotient)
        report.append(("quotient colouring", coloured.outcome.value))
        if not coloured.success:
            report.append(("message", coloured.message))
            return report, EXIT_NEGATIVE
        Phi = coloured.sigma
    else:
        Phi = read_perm(decomposition.quotient, Path(args.quotient_perm))

    outcome = lift(group, entry, Phi)
    verified = is_colouring_bijection(group, outcome.sigma)
    if not verified:
        raise InvariantFailure(f"lift over {outcome.subgroup} did not produce a colouring bijection")
    report.extend([
        ("construction", outcome.construction),
        ("colouring bijection", verified),
    ])
    if args.out:
        report.append(("written", write_perm(outcome.sigma, Path(args.out))))
    return report, EXIT_OK


def cmd_colour(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.group)
    result = ColouringPipeline(config).colour(group)
    report: Report = [
        ("group", group.name),
        ("outcome", result.outcome.value),
        ("nodes explored", result.nodes_explored),
        ("elapsed seconds", round(result.execution_time, 3)),
    ]
    if result.message:
        report.append(("message", result.message))
    if args.trace:
        report.append(("trace", [step.as_dict() for step in result.trace]))
    if result.success:
        report.append(("colouring bijection", True))
        if args.out:
            report.append(("written", write_perm(result.sigma, Path(args.out))))
    return report, EXIT_OK if result.success else EXIT_NEGATIVE


def cmd_graph_check(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.group)
    sigma = resolve_perm(group, args.perm)
    certificate = verify_proper(group, sigma, jobs=args.jobs or config.processing.default_jobs)
    if certificate.is_colouring_bijection and not certificate.proper:
        u, v = certificate.violation
        raise InvariantFailure(f"colouring bijection gives equal colours on {u.format(group)} and {v.format(group)}")

    violation = None
    if certificate.violation is not None:
        u, v = certificate.violation
        violation = f"{u.format(group)} ~ {v.format(group)}"
    report: Report = [
        ("group", group.name),
        ("colouring bijection", certificate.is_colouring_bijection),
        ("proper", certificate.proper),
        ("colours used", certificate.colours_used),
        ("class sizes uniform", certificate.class_sizes_uniform),
        ("vertices checked", certificate.vertices_checked),
        ("moves checked", certificate.moves_checked),
        ("clique size", len(certificate.clique)),
        ("clique verified", certificate.clique_verified),
        ("violation", violation),
        ("chromatic number", certificate.conclusion),
        ("notes", list(certificate.notes)),
    ]
    if args.export_dimacs:
        report.append(("dimacs", str(export_dimacs(group, args.export_dimacs))))
    return report, EXIT_OK if certificate.conclusion is not None else EXIT_NEGATIVE


def cmd_aut(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.group)
    auts = automorphisms(group)
    report: Report = [("group", group.name), ("automorphisms", len(auts))]
    if args.orbit:
        sigma = resolve_perm(group, args.orbit)
        orbit, stabiliser = automorphism_orbit(group, sigma, auts)
        report.extend([
            ("orbit size", len(orbit)),
            ("stabiliser order", stabiliser),
            ("colouring bijections in orbit", sum(is_colouring_bijection(group, p) for p in orbit)),
        ])
    return report, EXIT_OK


def cmd_tables_verify(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    if args.data_dir:
        data_dir: Optional[Path] = Path(args.data_dir)
    else:
        data_dir = config.get_data_dir() if config.get_data_dir().is_dir() else None
    outcome = verify_tables(strict=args.strict, data_dir=data_dir)
    report: Report = [
        ("tables", [
            {
                "table": check.table,
                "passed": check.passed,
                "cells": check.cells_checked,
                "permutations": check.permutations_checked,
            }
            for check in outcome.checks
        ]),
        ("failures", [failure for check in outcome.checks for failure in check.failures]),
        ("data dir", str(data_dir) if data_dir else None),
        ("passed", outcome.passed),
    ]
    return report, EXIT_OK if outcome.passed else EXIT_NEGATIVE


def cmd_census(args: argparse.Namespace, config: Config) -> Tuple[Report, int]:
    group = build_from_spec(args.group)
    result = scm_census(
        group,
        budget=args.budget,
        fix_identity=args.fix_identity,
        jobs=args.jobs or config.processing.default_jobs,
    )
    report: Report = [
        ("group", group.name),
        ("fix identity", args.fix_identity),
        ("strong complete mappings", result.scm_count),
        ("colouring bijections", result.cb_count),
        ("ratio", None if result.ratio is None else round(result.ratio, 6)),
        ("nodes explored", result.nodes_explored),
        ("exhausted", result.exhausted),
    ]
    return report, EXIT_OK


# --------------------------------------------------------------------------
# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colouring-bijections",
        description="Colouring bijections of finite 3-groups: search, lifting and chromatic certificates.",
    )
    parser.add_argument("--machine", action="store_true", help="Print the report as one JSON object")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Console log level (default from COLOURING_LOG_LEVEL, else WARNING)",
    )
    parser.add_argument("--log-file", help="Append JSON log lines to this file instead of stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    group_parser = commands.add_parser("group", help="Inspect a group")
    group_commands = group_parser.add_subparsers(dest="group_command", required=True)
    show = group_commands.add_parser("show", help="Order, center, classification and lifting subgroups")
    show.add_argument("spec", help="Group spec, e.g. H3xC3")
    show.set_defaults(handler=cmd_group_show)

    verify = commands.add_parser("verify", help="Check a permutation against the mapping predicates")
    verify.add_argument("--group", required=True)
    verify.add_argument("--perm", required=True, help="identity, square or a permutation file")
    verify.add_argument("--cb", action="store_true", help="Colouring bijection (default)")
    verify.add_argument("--scm", action="store_true", help="Strong complete mapping")
    verify.add_argument("--cm", action="store_true", help="Complete mapping")
    verify.set_defaults(handler=cmd_verify)

    search_parser = commands.add_parser("search", help="Backtracking search for bijections")
    search_parser.add_argument("--group", required=True)
    search_parser.add_argument("--target", choices=[t.value for t in SearchTarget], default="cb")
    mode = search_parser.add_mutually_exclusive_group()
    mode.add_argument("--first", action="store_true", help="Stop at the first solution (default)")
    mode.add_argument("--count", action="store_true", help="Count all solutions")
    mode.add_argument("--enumerate", type=int, metavar="N", help="Collect up to N solutions")
    search_parser.add_argument("--fix-identity", action="store_true")
    search_parser.add_argument("--budget", type=int, help="Node budget")
    search_parser.add_argument(
        "--order", choices=[o.value for o in BranchOrder], default=BranchOrder.ASCENDING.value
    )
    search_parser.add_argument("--no-restarts", action="store_true", help="No restarts for --order most-constrained")
    search_parser.add_argument("--seed", type=int)
    search_parser.add_argument("--jobs", type=int)
    search_parser.add_argument("--out", help="Write found permutations here")
    search_parser.set_defaults(handler=cmd_search)

    lift_parser = commands.add_parser("lift", help="Lift a quotient colouring bijection across a normal subgroup")
    lift_parser.add_argument("--group", required=True)
    lift_parser.add_argument("--subgroup", default="auto", help="auto or generator labels, e.g. '(0,0,1),(0,1,0)'")
    lift_parser.add_argument("--quotient-perm", default="auto", help="auto or a permutation file for G/H")
    lift_parser.add_argument("--out")
    lift_parser.set_defaults(handler=cmd_lift)

    colour_parser = commands.add_parser("colour", help="Recursively construct a colouring bijection")
    colour_parser.add_argument("--group", required=True)
    colour_parser.add_argument("--out")
    colour_parser.add_argument("--trace", action="store_true", help="Include the recursion trace")
    colour_parser.set_defaults(handler=cmd_colour)

    graph_parser = commands.add_parser("graph", help="Cayley graph of G^3")
    graph_commands = graph_parser.add_subparsers(dest="graph_command", required=True)
    check = graph_commands.add_parser("check", help="Certify chi = |G| with a proper colouring and a clique")
    check.add_argument("--group", required=True)
    check.add_argument("--perm", required=True, help="identity, square or a permutation file")
    check.add_argument("--jobs", type=int)
    check.add_argument("--export-dimacs", metavar="FILE")
    check.set_defaults(handler=cmd_graph_check)

    aut_parser = commands.add_parser("aut", help="Automorphism group and orbits")
    aut_parser.add_argument("--group", required=True)
    aut_parser.add_argument("--orbit", metavar="FILE", help="Orbit of this permutation under conjugation")
    aut_parser.set_defaults(handler=cmd_aut)

    tables_parser = commands.add_parser("tables", help="Embedded reference tables")
    tables_commands = tables_parser.add_subparsers(dest="tables_command", required=True)
    tables_verify = tables_commands.add_parser("verify", help="Recompute and cross-check every table")
    tables_verify.add_argument("--data-dir", help="Also compare the permutation files here")
    tables_verify.add_argument("--strict", action="store_true", help="Stop at the first mismatch")
    tables_verify.set_defaults(handler=cmd_tables_verify)

    census = commands.add_parser("census", help="Count strong complete mappings and colouring bijections")
    census.add_argument("--group", required=True)
    census.add_argument("--fix-identity", action="store_true")
    census.add_argument("--budget", type=int)
    census.add_argument("--jobs", type=int)
    census.set_defaults(handler=cmd_census)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = Config.from_env()
        setup_logging(
            args.log_level or config.log_level,
            Path(args.log_file) if args.log_file else None,
            run_id=generate_run_id(),
        )
        handler: Handler = args.handler
        report, code = handler(args, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ColouringError as exc:
        logger.error("Command failed", command=args.command, error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    print(render(report, args.machine))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
