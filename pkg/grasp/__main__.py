"""
Command line interface of the GRASP library.

Payloads are written to stdout, diagnostics and logging to stderr.
"""

import argparse
import json
import logging
import os
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Final

from .grade_codes import GradeCell
from .grasp_catalog import (
    Catalog,
    GraspCorpusError,
    GraspRecordNotFoundError,
    QueryFilter,
    load_corpus,
    query_catalog,
)
from .grasp_engine import GraspInvalidRecordError, minimal_uplift, whatif
from .grasp_evidence import Automation, Category, Severity
from .grasp_record import GraspRecordError, canonical_json, parse_evidence_item
from .grasp_report import ReportFormat, render_detailed_report, render_measures, render_summary

_LOGGER = logging.getLogger(__name__)

CORPUS_ENVIRONMENT_VARIABLE: Final = "GRASP_CORPUS"

EXIT_OK: Final = 0
EXIT_USAGE: Final = 1
EXIT_INVALID: Final = 2
EXIT_NOT_FOUND: Final = 3


class GraspUsageError(Exception):
    """
    GRASP Usage Error.

    When the command line can not be parsed.
    """


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise GraspUsageError(f"{self.prog}: {message}")


def _grades(value: str) -> frozenset[GradeCell]:
    try:
        return frozenset(GradeCell(grade.strip().upper()) for grade in value.split(","))
    except ValueError as ex:
        raise argparse.ArgumentTypeError(
            f"invalid grade list {value!r}, expected e.g. A1,A2"
        ) from ex


def _lowercase(enum_type):
    def convert(value: str):
        return enum_type(value.lower())

    convert.__name__ = enum_type.__name__
    return convert


def _add_root(parser: argparse.ArgumentParser):
    parser.add_argument(
        "root",
        nargs="?",
        default=os.environ.get(CORPUS_ENVIRONMENT_VARIABLE),
        help=f"corpus directory, defaults to ${CORPUS_ENVIRONMENT_VARIABLE}",
    )


def _add_format(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--format",
        type=ReportFormat,
        choices=list(ReportFormat),
        default=ReportFormat.MARKDOWN,
    )


def _build_parser() -> argparse.ArgumentParser:
    argparser = _ArgumentParser(prog="grasp", description="GRASP grading of predictive tools")
    argparser.add_argument("--debug", dest="debugLogging", action="store_true")

    subparsers = argparser.add_subparsers(dest="command", required=True)

    validate_parser = subparsers.add_parser("validate", help="validate every record")
    _add_root(validate_parser)

    grade_parser = subparsers.add_parser("grade", help="print the grade of a tool")
    _add_root(grade_parser)
    grade_parser.add_argument("slug")

    report_parser = subparsers.add_parser("report", help="detailed report of a tool")
    _add_root(report_parser)
    report_parser.add_argument("slug")
    _add_format(report_parser)

    summary_parser = subparsers.add_parser("summary", help="summary of every tool")
    _add_root(summary_parser)
    _add_format(summary_parser)

    measures_parser = subparsers.add_parser("measures", help="reported measures of a tool")
    _add_root(measures_parser)
    measures_parser.add_argument("slug")
    _add_format(measures_parser)

    whatif_parser = subparsers.add_parser("whatif", help="grade with hypothetical evidence")
    _add_root(whatif_parser)
    whatif_parser.add_argument("slug")
    whatif_parser.add_argument("--add", required=True, type=Path, dest="hypothetical")
    _add_format(whatif_parser)

    uplift_parser = subparsers.add_parser("uplift", help="evidence needed for higher grades")
    _add_root(uplift_parser)
    uplift_parser.add_argument("slug")
    _add_format(uplift_parser)

    query_parser = subparsers.add_parser("query", help="find tools")
    _add_root(query_parser)
    query_parser.add_argument("--category", type=_lowercase(Category), choices=list(Category))
    query_parser.add_argument("--grade", type=_grades, dest="grades")
    query_parser.add_argument("--area", dest="clinical_area")
    query_parser.add_argument(
        "--automation", type=_lowercase(Automation), choices=list(Automation)
    )
    query_parser.add_argument("--since", type=int, dest="min_year")
    query_parser.add_argument("--endorsement")
    _add_format(query_parser)

    return argparser


def _write(text: str):
    sys.stdout.write(text)


def _validate(catalog: Catalog, _args) -> int:
    for diagnostic in catalog.diagnostics:
        print(diagnostic, file=sys.stderr)
    _write(f"{len(catalog.records)} records valid, {len(catalog.quarantined)} quarantined\n")
    if catalog.quarantined or any(
        diagnostic.severity is Severity.ERROR for diagnostic in catalog.diagnostics
    ):
        return EXIT_INVALID
    return EXIT_OK


def _grade(catalog: Catalog, args) -> int:
    result = catalog.result(args.slug)
    markers = " ".join(
        f"{cell}:{marker}" for cell, marker in result.markers().items() if marker
    )
    _write(f"{result.grade}\n{markers}\n")
    return EXIT_OK


def _report(catalog: Catalog, args) -> int:
    record = catalog.record(args.slug)
    _write(render_detailed_report(record, catalog.result(args.slug), args.format).body)
    return EXIT_OK


def _summary(catalog: Catalog, args) -> int:
    _write(render_summary(catalog, args.format).body)
    return EXIT_OK


def _measures(catalog: Catalog, args) -> int:
    _write(render_measures(catalog.record(args.slug), args.format).body)
    return EXIT_OK


def _whatif(catalog: Catalog, args) -> int:
    record = catalog.record(args.slug)
    hypothetical = parse_evidence_item(args.hypothetical.read_bytes())
    outcome = whatif(record, hypothetical)
    if args.format is ReportFormat.JSON:
        _write(
            canonical_json(
                {
                    "before": outcome.before.grade,
                    "after": outcome.after.grade,
                    "delta": outcome.delta,
                    "changes": list(outcome.changes),
                    "justification": outcome.after.justification.splitlines(),
                }
            )
        )
    else:
        lines = [outcome.delta, *outcome.changes, "", outcome.after.justification]
        _write("\n".join(lines) + "\n")
    return EXIT_OK


def _uplift(catalog: Catalog, args) -> int:
    targets = minimal_uplift(catalog.record(args.slug))
    if args.format is ReportFormat.JSON:
        _write(
            canonical_json(
                [
                    {
                        "target": str(target.target),
                        "evaluation_type": str(target.evaluation_type),
                        "count": target.count,
                        "required": target.description,
                    }
                    for target in targets
                ]
            )
        )
        return EXIT_OK
    if not targets:
        _LOGGER.info("%s is at the top of the ladder", args.slug)
    for target in targets:
        _write(f"{target.target}: {target.description}\n")
    return EXIT_OK


def _query(catalog: Catalog, args) -> int:
    query = QueryFilter(
        category=args.category,
        clinical_area=args.clinical_area,
        grades=args.grades,
        automation=args.automation,
        min_year=args.min_year,
        endorsement=args.endorsement,
    )
    entries = query_catalog(catalog, query)
    if args.format is ReportFormat.JSON:
        _write(
            canonical_json(
                [
                    {
                        "slug": entry.slug,
                        "name": entry.name,
                        "category": str(entry.category),
                        "clinical_area": entry.clinical_area,
                        "year": entry.year,
                        "grade": entry.grade,
                    }
                    for entry in entries
                ]
            )
        )
        return EXIT_OK
    for entry in entries:
        _write(f"{entry.slug}\t{entry.name}\t{entry.grade}\n")
    return EXIT_OK


_COMMANDS: Final = {
    "validate": _validate,
    "grade": _grade,
    "report": _report,
    "summary": _summary,
    "measures": _measures,
    "whatif": _whatif,
    "uplift": _uplift,
    "query": _query,
}


def main(argv: Sequence[str] | None = None) -> int:
    """
    Runs the command line interface and returns the exit code.
    """
    try:
        args = _build_parser().parse_args(argv)
    except GraspUsageError as ex:
        print(ex, file=sys.stderr)
        return EXIT_USAGE

    if args.debugLogging:
        logging.basicConfig(
            format="%(asctime)s %(levelname)-8s %(filename)s:%(lineno)d %(message)s",
            level=logging.DEBUG,
        )
    else:
        logging.basicConfig(format="%(message)s", level=logging.INFO)

    if args.root is None:
        print(
            f"grasp: no corpus given and ${CORPUS_ENVIRONMENT_VARIABLE} is not set",
            file=sys.stderr,
        )
        return EXIT_USAGE

    try:
        catalog = load_corpus(args.root)
        return _COMMANDS[args.command](catalog, args)
    except GraspRecordNotFoundError as ex:
        print(ex, file=sys.stderr)
        return EXIT_NOT_FOUND
    except (GraspCorpusError, GraspRecordError, GraspInvalidRecordError) as ex:
        print(ex, file=sys.stderr)
        return EXIT_INVALID
    except OSError as ex:
        print(f"grasp: {ex}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
