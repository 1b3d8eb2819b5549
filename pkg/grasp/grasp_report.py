"""
Reports of the GRASP framework: the detailed report of a tool, the summary of a catalog and the
reported measures of a tool. Every report renders as Markdown or JSON and is a pure function of
its input.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Final

from .grade_codes import LADDER, MARKER_CELLS, PHASE_TITLES, Direction
from .grasp_catalog import Catalog
from .grasp_engine import GradingResult
from .grasp_evidence import (
    Conclusion,
    EvaluationType,
    EvidenceItem,
    GraspError,
    InputSourceKind,
    Measure,
    ToolProfile,
    ToolRecord,
)
from .grasp_record import canonical_json, record_digest
from .measure_name import measure_display_name

logger = logging.getLogger(__name__)

NOT_REPORTED: Final = "not reported"


class GraspRecordMismatchError(GraspError):
    """
    GRASP Record Mismatch Error.

    When a grading result is rendered with a record it was not computed from.
    """

    def __init__(self, tool: str):
        super().__init__(tool)
        self.tool = tool

    def __str__(self) -> str:
        return f"Grading result of {self.tool} does not belong to this record"


class ReportFormat(StrEnum):
    """Output formats of the reports."""

    MARKDOWN: Final = "md"
    JSON: Final = "json"


@dataclass(frozen=True)
class RenderedReport:
    """A rendered report."""

    format: ReportFormat
    body: str


_INPUT_SOURCE_LABELS: Final = {
    InputSourceKind.CLINICAL: "Clinical",
    InputSourceKind.NON_CLINICAL: "Non-clinical",
}

_LEGEND: Final = {direction.marker: direction.label for direction in Direction}


def _cell(text: Any) -> str:
    return str(text).replace("|", "\\|").replace("\n", " ")


def _row(cells: Iterable[Any]) -> str:
    return "| " + " | ".join(_cell(cell) for cell in cells) + " |"


def _table(header: list[str], rows: Iterable[Iterable[Any]]) -> list[str]:
    return [_row(header), "|" + "---|" * len(header), *(_row(row) for row in rows)]


def _words(value: str) -> str:
    return value.replace("_", " ")


def _legend_lines() -> list[str]:
    return ["Legend:", "", *(f"- `{marker}` {label}" for marker, label in _LEGEND.items())]


def _markdown(lines: list[str]) -> RenderedReport:
    return RenderedReport(ReportFormat.MARKDOWN, "\n".join(lines) + "\n")


def _json(document: Any) -> RenderedReport:
    return RenderedReport(ReportFormat.JSON, canonical_json(document))


# Detailed report


def _profile_rows(record: ToolRecord) -> list[tuple[str, str]]:
    profile: ToolProfile = record.profile
    input_source = "; ".join(
        _INPUT_SOURCE_LABELS[source.kind]
        + (f" ({', '.join(source.subtypes)})" if source.subtypes else "")
        for source in profile.input_source
    )
    local_context = "No"
    if profile.local_context.dependent:
        local_context = "Yes" + (
            f": {profile.local_context.note}" if profile.local_context.note else ""
        )
    return [
        ("Name", profile.name),
        ("Author", profile.authors),
        ("Country, year", f"{profile.country}, {profile.year}"),
        ("Intended use", profile.intended_use),
        ("Intended user", profile.intended_user),
        ("Category", _words(profile.category).capitalize()),
        ("Clinical area", profile.clinical_area),
        ("Target population", profile.target_population),
        ("Target outcome", profile.target_outcome),
        ("Action", profile.action),
        ("Input source", input_source),
        ("Input type", ", ".join(str(kind).capitalize() for kind in profile.input_type)),
        ("Local context", local_context),
        ("Methodology", profile.methodology),
        ("Endorsements", "; ".join(profile.endorsements) or "None"),
        ("Automation", _words(profile.automation).capitalize()),
        ("Citations", str(profile.citations)),
        ("Studies", str(record.studies_count)),
    ]


def _reference_labels(item: EvidenceItem) -> list[str]:
    finding = "positive" if item.conclusion is Conclusion.POSITIVE else "negative"
    labels = [_words(item.evaluation_type), f"{finding} finding"]
    if item.relevance is not None:
        labels.append(f"{_words(item.relevance)} finding")
    return labels


def _reference_line(item: EvidenceItem) -> str:
    line = f"- {item.citation} [{'; '.join(_reference_labels(item))}]"
    if item.notes:
        line += f": {item.notes}"
    return line


def _detailed_markdown(record: ToolRecord, result: GradingResult) -> RenderedReport:
    lines = [f"# GRASP detailed report: {record.profile.name}", "", "## Tool information", ""]
    lines += _table(["Field", "Value"], _profile_rows(record))

    lines += ["", "## Phases and levels of evidence"]
    for phase, title in PHASE_TITLES.items():
        rows = []
        for cell in LADDER:
            if cell.phase != phase:
                continue
            resolution = result.cells.get(cell)
            if resolution is None:
                rows.append([cell, cell.definition, "", ""])
            else:
                rows.append(
                    [cell, cell.definition, resolution.marker, "; ".join(resolution.citations)]
                )
        lines += ["", f"### {title}", ""]
        lines += _table(["Level", "Definition", "Direction", "Studies"], rows)

    markers = result.markers()
    lines += ["", "## Final grade", ""]
    lines += _table([str(cell) for cell in MARKER_CELLS], [markers.values()])
    lines += ["", f"**Grade {result.grade}**"]

    lines += ["", "## Justification", ""]
    lines += [f"- {line}" for line in result.justification.splitlines()]

    lines += ["", "## References", ""]
    lines += [_reference_line(item) for item in record.evidence] or [NOT_REPORTED]

    lines += [""] + _legend_lines()
    return _markdown(lines)


def _detailed_json(record: ToolRecord, result: GradingResult) -> RenderedReport:
    levels = []
    for cell in LADDER:
        resolution = result.cells.get(cell)
        level: dict[str, Any] = {"cell": cell.value, "definition": cell.definition}
        if resolution is not None:
            level |= {
                "computed": resolution.computed.value,
                "direction": resolution.direction.value,
                "marker": resolution.marker,
                "studies": list(resolution.items),
                "trace": list(resolution.trace),
            }
            if resolution.override is not None:
                level["override"] = resolution.override.model_dump(mode="json")
        levels.append(level)

    return _json(
        {
            "tool": record.profile.name,
            "profile": record.profile.model_dump(mode="json"),
            "citations": record.profile.citations,
            "studies": record.studies_count,
            "levels": levels,
            "markers": {str(cell): marker for cell, marker in result.markers().items()},
            "final_grade": result.grade,
            "justification": result.justification.splitlines(),
            "references": [
                {
                    "id": item.id,
                    "citation": item.citation,
                    "labels": _reference_labels(item),
                    "notes": item.notes,
                }
                for item in record.evidence
            ],
            "legend": _LEGEND,
        }
    )


def render_detailed_report(
    record: ToolRecord, result: GradingResult, format: ReportFormat = ReportFormat.MARKDOWN
) -> RenderedReport:
    # pylint: disable=redefined-builtin
    """
    Renders the detailed report of a tool.

    Throws GraspRecordMismatchError when the result was not computed from the record.
    """
    if result.digest != record_digest(record):
        raise GraspRecordMismatchError(result.tool)
    if format is ReportFormat.JSON:
        return _detailed_json(record, result)
    return _detailed_markdown(record, result)


# Summary


def render_summary(
    catalog: Catalog, format: ReportFormat = ReportFormat.MARKDOWN
) -> RenderedReport:
    # pylint: disable=redefined-builtin
    """
    Renders the summary table of every tool in a catalog.
    """
    tools = []
    for slug in catalog.slugs:
        record = catalog.records[slug]
        result = catalog.results[slug]
        tools.append(
            {
                "slug": slug,
                "name": record.profile.name,
                "country": record.profile.country,
                "year": record.profile.year,
                "citations": record.profile.citations,
                "studies": record.studies_count,
                "grade": result.grade,
                "markers": {str(cell): marker for cell, marker in result.markers().items()},
            }
        )

    if format is ReportFormat.JSON:
        return _json({"tools": tools, "legend": _LEGEND})

    header = ["Tool", "Country", "Year", "Citations", "Studies", "Grade"]
    header += [str(cell) for cell in MARKER_CELLS]
    rows = [
        [
            tool["name"],
            tool["country"],
            tool["year"],
            tool["citations"],
            tool["studies"],
            tool["grade"],
            *tool["markers"].values(),
        ]
        for tool in tools
    ]
    lines = ["# GRASP summary", ""] + _table(header, rows) + [""] + _legend_lines()
    return _markdown(lines)


# Measures

_MEASURE_SECTIONS: Final = (
    (
        "Predictive performance: discrimination and calibration",
        (EvaluationType.INTERNAL_VALIDATION, EvaluationType.EXTERNAL_VALIDATION),
        "P",
    ),
    (
        "Usability and potential effect",
        (EvaluationType.USABILITY, EvaluationType.POTENTIAL_EFFECT),
        "p",
    ),
    (
        "Post-implementation impact",
        (
            EvaluationType.IMPACT_EXPERIMENTAL,
            EvaluationType.IMPACT_OBSERVATIONAL,
            EvaluationType.IMPACT_SUBJECTIVE,
        ),
        "p",
    ),
)


def format_number(value: float) -> str:
    """
    Formats a stored number without superfluous trailing zeros.
    """
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def _with_unit(value: float, unit: str | None) -> str:
    if not unit:
        return format_number(value)
    if unit == "%":
        return format_number(value) + "%"
    return f"{format_number(value)} {unit}"


def format_measure(measure: Measure, p_label: str = "p") -> str:
    """
    Formats a measure, e.g. "Efficiency of CTPA utilisation 17.4% vs 30.7% (p=0.036)".
    """
    text = f"{measure.label or measure_display_name(measure.name)} "
    text += _with_unit(measure.value, measure.unit)
    if measure.comparator is not None:
        text += f" vs {_with_unit(measure.comparator, measure.unit)}"

    details = []
    if measure.ci_low is not None or measure.ci_high is not None:
        low = "?" if measure.ci_low is None else format_number(measure.ci_low)
        high = "?" if measure.ci_high is None else format_number(measure.ci_high)
        details.append(f"95% CI {low}-{high}")
    if measure.p_value is not None:
        details.append(f"{p_label}={format_number(measure.p_value)}")
    if measure.cutoff is not None:
        details.append(f"cut-off {format_number(measure.cutoff)}")
    if details:
        text += f" ({', '.join(details)})"
    return text


def render_measures(
    record: ToolRecord, format: ReportFormat = ReportFormat.MARKDOWN
) -> RenderedReport:
    # pylint: disable=redefined-builtin
    """
    Renders the reported measures of a tool in three sections.
    """
    sections = []
    for title, evaluation_types, p_label in _MEASURE_SECTIONS:
        measures = [
            {
                "id": item.id,
                "citation": item.citation,
                "name": measure.name,
                "text": format_measure(measure, p_label),
            }
            for item in record.evidence
            if item.evaluation_type in evaluation_types
            for measure in item.measures
        ]
        sections.append({"title": title, "measures": measures})

    if format is ReportFormat.JSON:
        return _json({"tool": record.profile.name, "sections": sections})

    lines = [f"# Reported measures: {record.profile.name}"]
    for section in sections:
        lines += ["", f"## {section['title']}", ""]
        if not section["measures"]:
            lines.append(NOT_REPORTED)
        for measure in section["measures"]:
            lines.append(f"- {measure['citation']}: {measure['text']}")
    return _markdown(lines)
