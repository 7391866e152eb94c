"""Command-line entry point for the bipartite supersaturation toolkit.

Every subcommand prints one JSON document (or CSV with ``--csv``) on stdout.
Errors are reported as an ErrorResponse JSON on stderr. Exit codes: 0 success,
1 verification failure, 2 usage error, 3 inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from src import __version__
from src.config import Settings, get_settings
from src.logging_config import setup_logging
from src.models.bounds import fraction_str
from src.models.difference import CyclicSubset, DifferenceClassification, StructureKind
from src.models.errors import ErrorCode, ErrorResponse, SupersatError
from src.models.graph import BipartiteGraph, Side
from src.models.group import AbelianGroup
from src.models.mors import MorsParams
from src.models.oracle import OracleStatus
from src.services.acceptance import run_acceptance
from src.services.bounds import (
    bound_report,
    c4_regime,
    equality_conditions,
    improved_lower_bound,
    plain_lower_bound,
)
from src.services.counting import codegree_histogram, count_c4, count_k2t, count_kab
from src.services.difference_sets import (
    classify_difference_structure,
    completion_elements,
    completion_report,
    design_params,
    development,
    difference_counts,
    non_completion_structure,
    singer_difference_set,
)
from src.services.graph_io import load_difference_set, load_graph, save_difference_set, save_graph
from src.services.groups import build_cayley_bipartite, group_subset_stats, psi2_search
from src.services.manifest import build_manifest, log_manifest, write_manifest
from src.services.mors import build_mors, verify_mors
from src.services.oracle import (
    bound_vs_oracle_table,
    check_plane_supergraph,
    min_c4_exhaustive,
    table_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class CommandOutput:
    """What a handler produced: the stdout payload, its exit code and written files."""

    payload: str
    exit_code: int = EXIT_OK
    written: list[Path] = field(default_factory=list)


Handler = Callable[[argparse.Namespace, Settings], CommandOutput]


def _dump(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _model(model: BaseModel, **kwargs: Any) -> dict[str, Any]:
    return model.model_dump(mode="json", by_alias=True, **kwargs)


def _verdict(passed: bool) -> int:
    return EXIT_OK if passed else EXIT_FAILED


# ── Input helpers ───────────────────────────────────────────────────────


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _side(text: str) -> Side:
    try:
        return Side.parse(text)
    except SupersatError as exc:
        raise argparse.ArgumentTypeError(exc.message) from None


def _add_subset_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--q", type=int, help="Use the Singer difference set of order q")
    source.add_argument("--set", dest="residues", help="Comma-separated residues of Z_n")
    source.add_argument("--set-file", type=Path, help="Difference-set file (one residue line)")
    parser.add_argument("--n", type=int, help="Group order for --set / --set-file")


def _subset(args: argparse.Namespace) -> CyclicSubset:
    if args.q is not None:
        return singer_difference_set(args.q)
    if args.n is None:
        raise argparse.ArgumentTypeError("--n is required with --set or --set-file")
    if args.set_file is not None:
        return load_difference_set(args.set_file, args.n)
    return CyclicSubset.from_line(args.residues, args.n)


def _group_and_set(args: argparse.Namespace) -> tuple[AbelianGroup, list[int]]:
    group = AbelianGroup(args.orders)
    return group, [group.parse_element(tok) for tok in args.elements.split(",") if tok.strip()]


def _graph_summary(graph: BipartiteGraph) -> dict[str, Any]:
    return {
        "n_x": graph.n_x,
        "n_y": graph.n_y,
        "m": graph.m,
        "regular_degree": graph.is_regular(),
        "codegree_histogram": codegree_histogram(graph),
        "c4": count_c4(graph),
    }


def _save(graph: BipartiteGraph, out: Path | None) -> list[Path]:
    if out is None:
        return []
    save_graph(graph, out)
    return [out]


# ── construct ──────────────────────────────────────────────────────────


def _construct_singer(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    subset = singer_difference_set(args.q)
    written: list[Path] = []
    if args.out is not None:
        save_difference_set(subset, args.out)
        written.append(args.out)
    data = {
        "q": args.q,
        "n": subset.n,
        "D": list(subset.elements),
        "classification": classify_difference_structure(subset).label,
    }
    return CommandOutput(_dump(data), written=written)


def _construct_development(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    subset = _subset(args)
    graph = development(subset)
    data = {"n": subset.n, "D": list(subset.elements), **_graph_summary(graph)}
    return CommandOutput(_dump(data), written=_save(graph, args.out))


def _construct_complete(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    subset = _subset(args)
    completions = completion_elements(subset)
    if not 0 <= args.index < len(completions):
        raise argparse.ArgumentTypeError(f"--index must lie in [0, {len(completions)})")
    g = completions[args.index]
    completed = subset.with_element(g)
    graph = development(completed)
    data = {
        "n": subset.n,
        "D": list(subset.elements),
        "g": g,
        "completed": list(completed.elements),
        "classification": classify_difference_structure(completed, relaxed=True).label,
        "improved_bound": improved_lower_bound(subset.n, graph.m, 2, 2),
        **_graph_summary(graph),
    }
    return CommandOutput(_dump(data), written=_save(graph, args.out))


def _mors_params(args: argparse.Namespace) -> MorsParams:
    return MorsParams(q=args.q, k=args.k, delta=args.delta, root_index=args.root)


def _construct_mors(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    params = _mors_params(args)
    report = verify_mors(params)
    written = _save(build_mors(params), args.out) if args.out is not None else []
    return CommandOutput(_dump(_model(report)), _verdict(report.passed), written)


def _construct_cayley(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    group, members = _group_and_set(args)
    graph = build_cayley_bipartite(group, members)
    data = {"orders": list(group.orders), "subset": sorted(members), **_graph_summary(graph)}
    return CommandOutput(_dump(data), written=_save(graph, args.out))


# ── count ──────────────────────────────────────────────────────────────


def _count_c4(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    graph = load_graph(args.graph)
    return CommandOutput(_dump({"m": graph.m, "c4": count_c4(graph)}))


def _count_k2t(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    graph = load_graph(args.graph)
    unordered = count_k2t(graph, args.t, args.side)
    data = {"t": args.t, "side": args.side.value, "unordered": unordered, "ordered": 2 * unordered}
    return CommandOutput(_dump(data))


def _count_kab(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    graph = load_graph(args.graph)
    count = count_kab(graph, args.a, args.b, args.side)
    return CommandOutput(_dump({"a": args.a, "b": args.b, "side": args.side.value, "count": count}))


def _count_codegrees(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    graph = load_graph(args.graph)
    histogram = codegree_histogram(graph, args.side)
    return CommandOutput(_dump({"side": args.side.value, "histogram": histogram}))


# ── bound ──────────────────────────────────────────────────────────────


def _bound_plain(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    plain = plain_lower_bound(args.n, args.m, args.a, args.b)
    data = {"n": args.n, "m": args.m, "a": args.a, "b": args.b, "plain_bound": fraction_str(plain)}
    return CommandOutput(_dump(data))


def _bound_improved(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    report = bound_report(args.n, args.m, args.a, args.b)
    data = _model(report, include={"n", "m", "a", "b", "plain_bound", "improved_bound"})
    return CommandOutput(_dump(data))


def _bound_regime(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    return CommandOutput(_dump(_model(c4_regime(args.n, args.m))))


def _bound_equality(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    report = equality_conditions(load_graph(args.graph), improved=args.mode == "improved", a=args.a)
    return CommandOutput(_dump(_model(report)), _verdict(report.passed))


# ── verify ─────────────────────────────────────────────────────────────


def _classification_payload(
    subset: CyclicSubset, relaxed: bool
) -> tuple[dict[str, Any], DifferenceClassification]:
    classification = classify_difference_structure(subset, relaxed=relaxed)
    profile = difference_counts(subset)
    params = design_params(subset)
    data = {
        "n": subset.n,
        "D": list(subset.elements),
        "classification": classification.label,
        "lambda": classification.lam,
        "counts": profile.counts,
        "design": None if params is None else _model(params),
    }
    return data, classification


def _verify_difference_set(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    data, classification = _classification_payload(_subset(args), relaxed=False)
    passed = classification.kind is StructureKind.DIFFERENCE_SET
    data["pass"] = passed
    return CommandOutput(_dump(data), _verdict(passed))


def _verify_adesign(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    data, classification = _classification_payload(_subset(args), relaxed=args.relaxed)
    passed = classification.accepted_as_almost
    data["pass"] = passed
    return CommandOutput(_dump(data), _verdict(passed))


def _verify_completion(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    report = completion_report(_subset(args))
    return CommandOutput(_dump(_model(report)), _verdict(report.passed))


def _verify_geometry(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    _, report = non_completion_structure(_subset(args))
    return CommandOutput(_dump(_model(report)), _verdict(report.passed))


def _verify_mors(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    report = verify_mors(_mors_params(args))
    return CommandOutput(_dump(_model(report)), _verdict(report.passed))


# ── search / group ────────────────────────────────────────────────────


def _search_psi2(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    result = psi2_search(
        AbelianGroup(args.orders),
        args.k,
        mode=args.mode,
        seed=args.seed,
        budget=args.budget if args.budget is not None else settings.local_budget,
        restarts=args.restarts if args.restarts is not None else settings.local_restarts,
        cap=args.cap if args.cap is not None else settings.exhaustive_cap,
        threads=settings.threads,
    )
    return CommandOutput(_dump(_model(result)))


def _group(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    group, members = _group_and_set(args)
    stats = group_subset_stats(group, members)
    if args.report:
        data = _model(stats)
    else:
        data = _model(stats, include={"h1", "h2", "psi2", "c4_formula", "c4_direct"})
    return CommandOutput(_dump(data))


# ── oracle ─────────────────────────────────────────────────────────────


def _oracle_cap(args: argparse.Namespace, settings: Settings) -> int:
    return args.cap if args.cap is not None else settings.oracle_node_cap


def _oracle_min(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    contain = load_graph(args.contain) if args.contain is not None else None
    result = min_c4_exhaustive(
        args.n,
        args.m,
        must_contain=contain,
        cap=_oracle_cap(args, settings),
        symmetry=not args.no_symmetry,
        bound_cut=args.bound_cut,
        shuffle_seed=args.shuffle_seed,
        threads=settings.threads,
    )
    code = EXIT_INCONCLUSIVE if result.status is OracleStatus.INCONCLUSIVE else EXIT_OK
    return CommandOutput(_dump(_model(result, exclude={"elapsed_ms"})), code)


def _oracle_table(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    rows = bound_vs_oracle_table(args.n, cap=_oracle_cap(args, settings), threads=settings.threads)
    payload = table_csv(rows) if args.csv else _dump([_model(r) for r in rows])
    inconclusive = any(r.status is OracleStatus.INCONCLUSIVE for r in rows)
    return CommandOutput(payload, EXIT_INCONCLUSIVE if inconclusive else EXIT_OK)


def _oracle_supergraph(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    report = check_plane_supergraph(
        args.q, args.extra, cap=_oracle_cap(args, settings), threads=settings.threads
    )
    code = EXIT_INCONCLUSIVE if report.status is OracleStatus.INCONCLUSIVE else EXIT_OK
    return CommandOutput(_dump(_model(report)), code)


# ── repro ──────────────────────────────────────────────────────────────


def _repro(args: argparse.Namespace, settings: Settings) -> CommandOutput:
    report = run_acceptance(args.filter, threads=settings.threads)
    data = {**_model(report), "matrix": report.matrix()}
    return CommandOutput(_dump(data), _verdict(report.passed))


# ── parser ─────────────────────────────────────────────────────────────


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="Worker processes (output does not depend on it)")
    common.add_argument("--log-level", default="WARNING", help="Log level for JSON logs on stderr")
    common.add_argument("--manifest", type=Path, help="Write the run manifest to this file")
    return common


def _leaf(
    subparsers: Any,
    name: str,
    handler: Handler,
    subcommand: str,
    common: argparse.ArgumentParser,
    help_text: str,
    aliases: tuple[str, ...] = (),
) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(
        name, parents=[common], help=help_text, aliases=list(aliases)
    )
    parser.set_defaults(handler=handler, subcommand=subcommand)
    return parser


def create_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every subcommand."""
    common = _common()
    parser = argparse.ArgumentParser(prog="supersat", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    # construct
    construct = commands.add_parser("construct", help="Build extremal graphs").add_subparsers(
        dest="action", required=True
    )
    p = _leaf(construct, "singer", _construct_singer, "construct singer", common, "Singer difference set")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out", type=Path, help="Write the difference set to this file")
    p = _leaf(construct, "development", _construct_development, "construct development", common, "Development graph")
    _add_subset_source(p)
    p.add_argument("--out", type=Path, help="Write the graph to this file")
    p = _leaf(construct, "complete", _construct_complete, "construct complete", common, "Completed development")
    _add_subset_source(p)
    p.add_argument("--index", type=int, default=0, help="Which completion element to add (sorted order)")
    p.add_argument("--out", type=Path, help="Write the graph to this file")
    p = _leaf(construct, "mors", _construct_mors, "construct mors", common, "Finite-field graph G^(q,k)")
    _add_mors_args(p)
    p.add_argument("--out", type=Path, help="Write the graph to this file")
    p = _leaf(construct, "cayley", _construct_cayley, "construct cayley", common, "Abelian-group bipartite graph")
    _add_group_args(p)
    p.add_argument("--out", type=Path, help="Write the graph to this file")

    # count
    count = commands.add_parser("count", help="Count subgraphs of a graph file").add_subparsers(
        dest="action", required=True
    )
    p = _leaf(count, "c4", _count_c4, "count c4", common, "4-cycles")
    p.add_argument("--graph", type=Path, required=True)
    p = _leaf(count, "k2t", _count_k2t, "count k2t", common, "K_{2,t} copies")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--side", type=_side, default=Side.X, help="Class holding the 2-side (X or Y)")
    p = _leaf(count, "kab", _count_kab, "count kab", common, "K_{a,b} copies")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--side", type=_side, default=Side.X, help="Class holding the a-side (X or Y)")
    p = _leaf(count, "codegrees", _count_codegrees, "count codegrees", common, "Codegree histogram")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--side", type=_side, default=Side.X)

    # bound
    bound = commands.add_parser("bound", help="Lower bounds on K_{a,b} counts").add_subparsers(
        dest="action", required=True
    )
    for name, handler, help_text in (
        ("plain", _bound_plain, "Plain bound"),
        ("improved", _bound_improved, "Two-stage discrete Jensen bound"),
    ):
        p = _leaf(bound, name, handler, f"bound {name}", common, help_text)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--a", type=int, default=2)
        p.add_argument("--b", type=int, default=2)
    p = _leaf(bound, "regime", _bound_regime, "bound regime", common, "C4 regime report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = _leaf(bound, "equality", _bound_equality, "bound equality", common, "Equality conditions of a graph")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--mode", choices=["plain", "improved"], default="improved")
    p.add_argument("--a", type=int, default=2)

    # verify
    verify = commands.add_parser("verify", help="Check structural claims").add_subparsers(
        dest="action", required=True
    )
    p = _leaf(verify, "difference-set", _verify_difference_set, "verify difference-set", common, "Difference set")
    _add_subset_source(p)
    p = _leaf(verify, "adesign", _verify_adesign, "verify adesign", common, "Almost difference set")
    _add_subset_source(p)
    p.add_argument("--relaxed", action="store_true", help="Accept counts within {lam, lam+1} without both")
    p = _leaf(verify, "completion", _verify_completion, "verify completion", common, "Completion elements")
    _add_subset_source(p)
    p = _leaf(verify, "geometry", _verify_geometry, "verify geometry", common, "Non-completion blocks")
    _add_subset_source(p)
    p = _leaf(verify, "mors", _verify_mors, "verify mors", common, "G^(q,k) against its closed forms")
    _add_mors_args(p)

    # search
    search = commands.add_parser("search", help="Optimisation searches").add_subparsers(
        dest="action", required=True
    )
    p = _leaf(search, "psi2", _search_psi2, "search psi2", common, "Minimise Psi_2 over k-subsets")
    p.add_argument("--orders", type=_int_list, required=True, help="Cyclic factor orders, e.g. 13 or 3,5")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "local"], default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, help="Local search evaluations in total")
    p.add_argument("--restarts", type=int, help="Local search restarts")
    p.add_argument("--cap", type=int, help="Largest C(n, k) for exhaustive mode")

    # group
    p = _leaf(commands, "group", _group, "group", common, "Difference statistics of a group subset")
    _add_group_args(p)
    p.add_argument("--report", action="store_true", help="Include per-element counts and the mean")

    # oracle
    oracle = commands.add_parser("oracle", help="Exact minimum C4 at tiny n").add_subparsers(
        dest="action", required=True
    )
    p = _leaf(oracle, "min", _oracle_min, "oracle min", common, "Minimum C4 over m-edge subgraphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--contain", type=Path, help="Only supergraphs of this graph file")
    p.add_argument("--cap", type=int, help="Search node budget")
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--bound-cut", action="store_true", help="Stop once the improved bound is met")
    p.add_argument("--shuffle-seed", type=int)
    p = _leaf(oracle, "table", _oracle_table, "oracle table", common, "Oracle against bounds for all m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, help="Search node budget per row")
    p.add_argument("--csv", action="store_true")
    p = _leaf(
        oracle,
        "supergraph",
        _oracle_supergraph,
        "oracle supergraph",
        common,
        "Plane development plus extra edges",
        aliases=("prop34",),
    )
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--extra", type=int, default=8)
    p.add_argument("--cap", type=int, help="Search node budget")

    # repro
    p = _leaf(commands, "repro", _repro, "repro", common, "Run the acceptance suite")
    p.add_argument("--filter", help="Run only criteria whose id contains this text")

    return parser


def _add_mors_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", type=int, required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--delta", type=int, default=0)
    parser.add_argument("--root", type=int, help="Canonical index of the primitive root")


def _add_group_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--orders", type=_int_list, required=True, help="Cyclic factor orders, e.g. 13 or 3,5")
    parser.add_argument("--set", dest="elements", required=True, help="Elements as indices or a:b coordinates")


# ── entry point ────────────────────────────────────────────────────────


def _error(code: ErrorCode, message: str, line: int | None = None) -> None:
    response = ErrorResponse(error=code, message=message, line=line)
    print(response.model_dump_json(exclude_none=True), file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        settings = get_settings(log_level=args.log_level.upper(), threads=args.threads)
    except ValidationError as exc:
        _error(ErrorCode.INVALID_PARAMETER, str(exc.errors()[0]["msg"]))
        return EXIT_USAGE
    setup_logging(settings.log_level)

    handler: Handler = args.handler
    try:
        output = handler(args, settings)
    except SupersatError as exc:
        logger.warning("Command failed", extra={"subcommand": args.subcommand, "status": exc.code.value})
        print(exc.to_response().model_dump_json(exclude_none=True), file=sys.stderr)
        return exc.exit_code
    except (ValidationError, argparse.ArgumentTypeError) as exc:
        message = str(exc.errors()[0]["msg"]) if isinstance(exc, ValidationError) else str(exc)
        _error(ErrorCode.INVALID_PARAMETER, message)
        return EXIT_USAGE

    sys.stdout.write(output.payload)
    manifest = build_manifest(args.subcommand, vars(args), output.payload, output.written, output.exit_code)
    log_manifest(manifest)
    if args.manifest is not None:
        try:
            write_manifest(manifest, args.manifest)
        except SupersatError as exc:
            print(exc.to_response().model_dump_json(exclude_none=True), file=sys.stderr)
            return exc.exit_code
    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())
