"""
Command-line surface: one subcommand per computation plus ``verify``, ``sweep``,
``render`` and ``runs``. Reports go to stdout, diagnostics to the log.
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from app.errors import CheckFailure, InputError, InteriorError
from app.instances import InstanceFile, InstanceKind, parse_instance, render
from app.models import CommandOptions, Report
from app.services import CommandService, ReportService, SweepService

logger = logging.getLogger(__name__)

INSTANCE_COMMANDS = (
    "interior",
    "dijoin",
    "minfas",
    "parking",
    "greedoid",
    "matroid-interior",
    "dual",
    "facets",
    "orient-scan",
    "verify",
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

# short mathematical context printed with each error code
ERROR_CONTEXT = {
    "PARSE_ERROR": "instance files start with 'digraph n m', 'ugraph n m' or 'matrix r c'",
    "RANGE_ERROR": "vertices are numbered 0..n-1",
    "KIND_MISMATCH": "the command is not defined for this kind of instance",
    "DISCONNECTED_INPUT": "interior polynomials are defined for weakly connected digraphs",
    "NOT_ROOT_CONNECTED": "parking functions and branchings need every vertex reachable from the root",
    "NOT_EULERIAN": "the dual-matroid comparison holds for connected Eulerian digraphs",
    "TOO_LARGE": "exhaustive searches are capped; raise --max-edges or APP_MAX_EDGES",
    "NON_TU_MATRIX": "oriented regular matroids are given by totally unimodular matrices",
    "THEOREM_VIOLATION": "a computed identity did not hold",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interior",
        description="Interior polynomials of digraphs and regular matroids, dijoins, parking functions, greedoids.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in INSTANCE_COMMANDS:
        sub = commands.add_parser(name)
        sub.add_argument("instance", type=Path, help="instance file (a directory for batch verify)")
        sub.add_argument("--root", type=int, default=None)
        sub.add_argument("--order", default=None, help="comma separated permutation of edge indices")
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--max-edges", type=int, default=None)
        sub.add_argument("--trust-tu", action="store_true", help="skip the total unimodularity test")
        sub.add_argument("--json", action="store_true", help="stable machine-readable report")
        sub.add_argument("--store", action="store_true", help="record the run in the report ledger")
        sub.add_argument("--jobs", type=int, default=1, help="worker processes for batch verify")

    sweep = commands.add_parser("sweep")
    sweep.add_argument("family", choices=SweepService.FAMILIES)
    sweep.add_argument("--limit", type=int, default=None)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--json", action="store_true")

    render_cmd = commands.add_parser("render")
    render_cmd.add_argument("instance", type=Path)

    runs = commands.add_parser("runs")
    runs.add_argument("--limit", type=int, default=20)
    runs.add_argument("--digest", default=None)
    return parser


def parse_order(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InputError(f"--order expects comma separated integers, got {text!r}", "PARSE_ERROR") from e


def read_instance(path: Path) -> InstanceFile:
    if not path.is_file():
        raise InputError(f"no such instance file: {path}", "PARSE_ERROR")
    instance = parse_instance(path.read_text())
    logger.info(f"parsed {instance.kind} instance from {path.name}")
    return instance


def check_order(order: Optional[List[int]], instance: InstanceFile) -> None:
    if order is None:
        return
    size = instance.digraph.m if instance.kind == InstanceKind.DIGRAPH and instance.digraph else instance.columns
    if sorted(order) != list(range(size)):
        raise InputError(f"--order must be a permutation of 0..{size - 1}", "RANGE_ERROR")


def options_from(args: argparse.Namespace) -> CommandOptions:
    return CommandOptions(
        root=args.root,
        order=parse_order(args.order),
        seed=args.seed,
        max_edges=args.max_edges,
        trust_tu=args.trust_tu,
    )


def run_file(command: str, path: Path, options: CommandOptions) -> Report:
    instance = read_instance(path)
    check_order(options.order, instance)
    return CommandService.run(command, instance, options)


def format_report(report: Report, as_json: bool) -> str:
    return ReportService.stable_json(report) if as_json else ReportService.render_text(report)


def verify_worker(path: str, options: dict, as_json: bool) -> tuple[str, int]:
    """Batch unit of work; returns the rendered report and its exit code."""
    try:
        report = run_file("verify", Path(path), CommandOptions(**options))
    except CheckFailure as e:
        logger.error(f"{path}: {e}")
        return f"{Path(path).name}: {describe(e)}\n", EXIT_CHECK_FAILED
    except InteriorError as e:
        logger.error(f"{path}: {e}")
        return f"{Path(path).name}: {describe(e)}\n", EXIT_INPUT_ERROR
    return f"== {Path(path).name}\n" + format_report(report, as_json), report.exit_code


def describe(error: InteriorError) -> str:
    context = ERROR_CONTEXT.get(error.code)
    return f"{error} ({context})" if context else str(error)


def run_batch(directory: Path, options: CommandOptions, as_json: bool, jobs: int) -> int:
    paths = sorted(str(p) for p in directory.glob("*.txt"))
    if not paths:
        raise InputError(f"no *.txt instances in {directory}", "PARSE_ERROR")
    payload = options.model_dump()
    with ProcessPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(verify_worker, paths, [payload] * len(paths), [as_json] * len(paths)))
    for text, _ in results:
        sys.stdout.write(text)
    worst = max(code for _, code in results)
    logger.info(f"batch verify over {len(paths)} instances finished with exit code {worst}")
    return worst


def dispatch(args: argparse.Namespace) -> int:
    match args.command:
        case "render":
            sys.stdout.write(render(read_instance(args.instance)))
            return EXIT_OK
        case "runs":
            for run in ReportService.list_runs(args.limit, args.digest):
                sys.stdout.write(
                    f"{run.id}\t{run.created_at}\t{run.command}\t{run.instance_kind}\t"
                    f"{run.instance_digest[:12]}\texit {run.exit_code}\t{run.wall_time:.3f} s\n"
                )
            return EXIT_OK
        case "sweep":
            report = SweepService.run(args.family, args.limit, args.seed)
            sys.stdout.write(format_report(report, args.json))
            return report.exit_code
        case _:
            options = options_from(args)
            if args.command == "verify" and args.instance.is_dir():
                return run_batch(args.instance, options, args.json, args.jobs)
            report = run_file(args.command, args.instance, options)
            if args.store:
                ReportService.store_report(report)
            sys.stdout.write(format_report(report, args.json))
            return report.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return dispatch(args)
    except CheckFailure as e:
        logger.error(f"check failed: {e}")
        sys.stderr.write(f"error: {describe(e)}\n")
        return EXIT_CHECK_FAILED
    except InteriorError as e:
        logger.error(f"input rejected: {e}")
        sys.stderr.write(f"error: {describe(e)}\n")
        return EXIT_INPUT_ERROR
