"""
Command-line surface for ZDGVerify.

    zdg ring <spec> --emit zdg|compressed|ann|elements --format json|dot
    zdg invariants <spec> [--exhaustive-limit N] [--json]
    zdg verify zn|semisimple|boolean|join|gap|all [--max-n N] [--max-order N] [--max-k K]
    zdg gap --k K [--exact]

Exit status: 0 when everything checked passes, 1 when a theorem check fails,
2 on usage, ring-spec, domain or export-write errors.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence, Union

from app.app_logging import setup_logging
from app.config import settings
from app.exporters import export, write_text
from app.graph_core import Graph, all_pairs_distances, boutin_gap_graph, twin_classes, twin_lower_bound
from app.invariants import (
    InvariantResult,
    boolean_separating_set,
    determining_number,
    exhaustive_metric_dimension,
    greedy_resolving_set,
    metric_dimension,
    pair_packing_bound,
    semisimple_canonical_set,
    zn_canonical_set,
)
from app.models import ZdgError, UsageError
from app.ring_core import ProductRing, RingModel, ZnRing, make_ring, zero_divisors
from app.suites import FLAGSHIP_N, SUITES, SuiteParams, run_suite
from app.zdg_build import annihilating_ideal_graph, compressed_graph, vertex_ids, zero_divisor_graph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker threads for suite cases (default: {settings.WORKERS})")
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    common.add_argument("--seedless", action="store_true",
                        help="assert that no random source is used (always true)")

    parser = _Parser(prog="zdg", description="Zero-divisor graph toolkit and theorem verifier")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    ring = commands.add_parser("ring", parents=[common], help="build a graph from a ring")
    ring.add_argument("spec", help="zn:N, gf:Q, bool:N or prod:fQ1,fQ2,...")
    ring.add_argument("--emit", choices=["zdg", "compressed", "ann", "elements"], default="zdg")
    ring.add_argument("--format", choices=["json", "dot"], default="json")

    inv = commands.add_parser("invariants", parents=[common], help="Det and dim_M of Γ(R)")
    inv.add_argument("spec")
    inv.add_argument("--exhaustive-limit", type=int, default=None,
                     help=f"candidate budget (default: {settings.EXHAUSTIVE_LIMIT})")
    inv.add_argument("--json", action="store_true", help="emit JSON records")

    verify = commands.add_parser("verify", parents=[common], help="run a theorem suite")
    verify.add_argument("suite", choices=list(SUITES) + ["all"])
    verify.add_argument("--max-n", type=int, default=None, help="zn: largest n; boolean: largest n")
    verify.add_argument("--max-order", type=int, default=None, help="semisimple: largest ring order")
    verify.add_argument("--max-k", type=int, default=None, help="gap: largest k searched exhaustively")
    verify.add_argument("--exhaustive-limit", type=int, default=None)
    verify.add_argument("--format", choices=["json", "csv"], default="json")

    gap = commands.add_parser("gap", parents=[common], help="Det and dim_M of the gap family graph")
    gap.add_argument("--k", type=int, required=True)
    gap.add_argument("--exact", action="store_true", help="run the exhaustive dim_M search")
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# ring
# ---------------------------------------------------------------------------

def cmd_ring(args: argparse.Namespace) -> int:
    ring = make_ring(args.spec)
    if args.emit == "elements":
        if args.format != "json":
            raise UsageError("elements can only be exported as json")
        payload = {"ring": ring.spec(), "order": ring.order,
                   "zero_divisors": [ring.render(x) for x in zero_divisors(ring)]}
        _emit(export(payload, "json", args.out), args.out)
        return EXIT_OK

    if args.emit == "zdg":
        graph = zero_divisor_graph(ring)
    elif args.emit == "compressed":
        graph, _ = compressed_graph(ring)
    else:
        graph = annihilating_ideal_graph(ring)
    _emit(export(graph, args.format, args.out, name=f"{args.emit}({ring.spec()})"), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def canonical_certificates(ring: RingModel) -> List[List[int]]:
    """Closed-form certificates (as Γ(R) vertex ids) for the ring families that have one."""
    if isinstance(ring, ZnRing):
        return [vertex_ids(ring, zn_canonical_set(ring.n))]
    if isinstance(ring, ProductRing) and ring.is_field_product and ring.width >= 2:
        if all(c.order == 2 for c in ring.components):
            return [vertex_ids(ring, boolean_separating_set(ring.width))]
        return [vertex_ids(ring, semisimple_canonical_set(ring))]
    return []


def _result_line(name: str, result: InvariantResult) -> str:
    if result.exact:
        return f"{name} = {result.value} ({result.method})"
    return f"{result.lower} <= {name} <= {result.upper} ({result.method})"


def cmd_invariants(args: argparse.Namespace) -> int:
    ring = make_ring(args.spec)
    graph = zero_divisor_graph(ring)
    certificates = canonical_certificates(ring)
    det = determining_number(graph, args.exhaustive_limit, certificates)
    dim = metric_dimension(graph, args.exhaustive_limit, certificates)
    if args.json:
        payload = {"ring": ring.spec(), "vertices": graph.vertex_count,
                   "Det": det.to_record(graph).model_dump(mode="json"),
                   "MetricDim": dim.to_record(graph).model_dump(mode="json")}
        _emit(export(payload, "json", args.out), args.out)
        return EXIT_OK
    lines = [f"Γ({ring.spec()}): {graph.vertex_count} vertices, {graph.edge_count} edges",
             _result_line("Det", det), _result_line("dim_M", dim)]
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        write_text(text, args.out)
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def suite_params(args: argparse.Namespace) -> SuiteParams:
    overrides: Dict[str, Union[int, bool]] = {}
    if args.max_n is not None:
        if args.suite == "boolean":
            overrides["boolean_max_n"] = args.max_n
        else:
            overrides["max_n"] = args.max_n
            overrides["aut_max_n"] = min(args.max_n, SuiteParams.model_fields["aut_max_n"].default)
            overrides["flagship"] = args.max_n >= FLAGSHIP_N
    if args.max_order is not None:
        overrides["max_order"] = args.max_order
    if args.max_k is not None:
        overrides["max_k"] = args.max_k
    if args.exhaustive_limit is not None:
        overrides["exhaustive_limit"] = args.exhaustive_limit
    try:
        return SuiteParams(**overrides)
    except ValueError as e:
        raise UsageError(f"invalid suite parameters: {e}") from e


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(args.suite, suite_params(args), args.workers)
    _emit(export(report, args.format, args.out), args.out)
    summary = report.summary
    print(f"{args.suite}: {summary.cases} cases, {summary.passed} passed, {summary.failed} failed, "
          f"{summary.expected_deviations} expected deviations, {summary.skipped} skipped",
          file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# gap
# ---------------------------------------------------------------------------

def gap_report(k: int, exact: bool = False, exhaustive_limit: Optional[int] = None) -> dict:
    graph: Graph = boutin_gap_graph(k)
    v1 = graph.index_of("v1")
    det = determining_number(graph, exhaustive_limit, certificates=[[v1]])
    if exact:
        dim = exhaustive_metric_dimension(graph, exhaustive_limit)
        dim_bounds = {"lower": dim.lower, "upper": dim.upper, "exact": True}
    else:
        dist = all_pairs_distances(graph)
        lower = max(twin_lower_bound(twin_classes(graph)), pair_packing_bound(dist))
        upper = len(greedy_resolving_set(dist))
        dim_bounds = {"lower": lower, "upper": upper, "exact": lower == upper}
    return {"k": k, "vertices": graph.vertex_count,
            "Det": {"lower": det.lower, "upper": det.upper, "exact": det.exact},
            "MetricDim": dim_bounds}


def cmd_gap(args: argparse.Namespace) -> int:
    payload = gap_report(args.k, args.exact)
    _emit(export(payload, "json", args.out), args.out)
    return EXIT_OK


COMMANDS = {
    "ring": cmd_ring,
    "invariants": cmd_invariants,
    "verify": cmd_verify,
    "gap": cmd_gap,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
        if args.workers is not None and args.workers < 1:
            raise UsageError(f"--workers must be positive, got {args.workers}")
        if args.seedless:
            logger.info("Seedless run: no random source is used by any command")
        return COMMANDS[args.command](args)
    except ZdgError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
