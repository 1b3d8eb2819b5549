"""
Grading engine of the GRASP framework.

Evidence items are assigned to grade cells, every populated cell gets a direction and the final
grade is the highest cell on the ladder whose direction is positive or mixed positive.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Final

from .grade_codes import (
    LADDER,
    MARKER_CELLS,
    Direction,
    GradeCell,
    grade_code,
    grade_rank,
)
from .grasp_direction import GraspNoEvidenceError, RawDirection, resolve_raw_direction
from .grasp_evidence import (
    CELL_EVALUATION_TYPES,
    Conclusion,
    EvaluationType,
    EvidenceItem,
    GraspError,
    MatchingProfile,
    MatchValue,
    Override,
    QualityProfile,
    QualityValue,
    Severity,
    ToolRecord,
    ValidationIssue,
    ValidationReport,
    validate_evidence_item,
    validate_tool_record,
)
from .grasp_mixed_protocol import resolve_mixed
from .grasp_record import record_digest

logger = logging.getLogger(__name__)

MAX_UPLIFT_ITEMS: Final = 64


class GraspInvalidRecordError(GraspError):
    """
    GRASP Invalid Record Error.

    When a record or a hypothetical evidence item fails validation.
    """

    def __init__(self, report: ValidationReport):
        super().__init__(report)
        self.report = report

    def __str__(self) -> str:
        return "record invalid: " + "; ".join(str(issue) for issue in self.report.errors)


@dataclass(frozen=True)
class CellResolution:
    # pylint: disable=too-many-instance-attributes
    """
    Direction of one grade cell.

    The computed direction follows from the evidence, the effective direction is the one used for
    grading and differs from the computed one only when an expert override is present.
    """

    cell: GradeCell
    items: tuple[str, ...]
    citations: tuple[str, ...]
    computed: Direction
    direction: Direction
    override: Override | None
    trace: tuple[str, ...]

    @property
    def marker(self) -> str:
        """Marker of the effective direction."""
        return self.direction.marker


@dataclass(frozen=True)
class GradingResult:
    """
    Grade of a tool with the resolution of every populated cell.
    """

    tool: str
    digest: str
    cells: Mapping[GradeCell, CellResolution]
    final_grade: GradeCell | None
    justification: str

    @property
    def grade(self) -> str:
        """Final grade code, "Ungraded" when there is none."""
        return grade_code(self.final_grade)

    def markers(self) -> dict[GradeCell, str]:
        """
        Markers of the final grade row, A1 up to C3.

        C2 stays blank when C1 is positive, the validation shown at C2 is then part of C1. When C1
        is not positive C2 may still carry the grade and is shown.
        """
        c1 = self.cells.get(GradeCell.C1)
        c1_positive = c1 is not None and c1.direction.is_positive
        markers = {}
        for cell in MARKER_CELLS:
            resolution = self.cells.get(cell)
            if resolution is None or (cell is GradeCell.C2 and c1_positive):
                markers[cell] = ""
            else:
                markers[cell] = resolution.marker
        return markers


@dataclass(frozen=True)
class WhatIf:
    """
    Grade of a tool before and after adding hypothetical evidence.
    """

    before: GradingResult
    after: GradingResult
    delta: str
    changes: tuple[str, ...]


@dataclass(frozen=True)
class UpliftTarget:
    """
    Smallest amount of positive Class A evidence which makes a cell positive.

    The count is None when no amount of evidence can make the cell positive.
    """

    target: GradeCell
    evaluation_type: EvaluationType
    count: int | None
    description: str


def assign_cells(evidence: Iterable[EvidenceItem]) -> dict[GradeCell, list[EvidenceItem]]:
    """
    Assigns evidence items to grade cells, only populated cells are returned.

    External validations are ordered by year, ties keep their record order. The earliest one is
    graded at C2, all of them are graded at C1 when together they cover at least two datasets.
    """
    cells: dict[GradeCell, list[EvidenceItem]] = {cell: [] for cell in LADDER}
    external: list[EvidenceItem] = []
    for item in evidence:
        match item.evaluation_type:
            case EvaluationType.INTERNAL_VALIDATION:
                cells[GradeCell.C3 if item.sufficient else GradeCell.C0].append(item)
            case EvaluationType.EXTERNAL_VALIDATION:
                external.append(item)
            case _:
                cell = next(
                    cell
                    for cell, evaluation_type in CELL_EVALUATION_TYPES.items()
                    if evaluation_type is item.evaluation_type
                )
                cells[cell].append(item)

    if external:
        external.sort(key=lambda item: item.year)
        cells[GradeCell.C2].append(external[0])
        if sum(item.studies for item in external) >= 2:
            cells[GradeCell.C1].extend(external)

    return {cell: items for cell, items in cells.items() if items}


def _override_problem(override: Override, raw_direction: RawDirection | None) -> str | None:
    if raw_direction is None:
        return f"no evidence graded at cell {override.cell}"
    if override.direction.is_mixed and raw_direction is not RawDirection.MIXED:
        return (
            f"direction {override.direction} needs mixed evidence, "
            + f"cell {override.cell} is {raw_direction}"
        )
    return None


def validate_overrides(record: ToolRecord) -> ValidationReport:
    """
    Checks every expert override against the evidence graded at its cell.

    An override needs evidence at its cell, and a mixed direction needs mixed evidence there.
    """
    cells = assign_cells(record.evidence)
    issues = []
    for index, override in enumerate(record.overrides):
        items = cells.get(override.cell)
        raw_direction = resolve_raw_direction(item.conclusion for item in items) if items else None
        problem = _override_problem(override, raw_direction)
        if problem is not None:
            issues.append(ValidationIssue(Severity.ERROR, f"overrides[{index}].cell", problem))
    return ValidationReport(tuple(issues))


def resolve_cell(
    cell: GradeCell, items: list[EvidenceItem], override: Override | None = None
) -> CellResolution:
    """
    Resolves the direction of a populated cell.

    Throws GraspNoEvidenceError when there are no items and GraspInvalidRecordError when the
    override does not fit the evidence.
    """
    if not items:
        raise GraspNoEvidenceError()

    raw_direction = resolve_raw_direction(item.conclusion for item in items)
    if override is not None:
        problem = _override_problem(override, raw_direction)
        if problem is not None:
            raise GraspInvalidRecordError(
                ValidationReport((ValidationIssue(Severity.ERROR, "override", problem),))
            )

    studies = "1 study" if len(items) == 1 else f"{len(items)} studies"
    trace = [f"{studies}, raw direction {raw_direction}"]
    match raw_direction:
        case RawDirection.POSITIVE:
            computed = Direction.POSITIVE
        case RawDirection.NEGATIVE:
            computed = Direction.NEGATIVE
        case _:
            resolved = resolve_mixed(items)
            computed = resolved.value
            trace.extend(resolved.trace[1:])

    direction = computed
    if override is not None:
        direction = override.direction
        trace.append(
            f"expert override sets {direction.label.lower()}, computed was "
            + f"{computed.label.lower()}: {override.justification}"
        )

    return CellResolution(
        cell=cell,
        items=tuple(item.id for item in items),
        citations=tuple(item.citation for item in items),
        computed=computed,
        direction=direction,
        override=override,
        trace=tuple(trace),
    )


def _justification(
    cells: Mapping[GradeCell, CellResolution], final_grade: GradeCell | None
) -> str:
    if final_grade is None:
        summary = "Ungraded: no cell holds positive evidence"
    elif final_grade is GradeCell.C0:
        summary = "Grade C0: the tool is insufficiently internally validated"
    else:
        resolution = cells[final_grade]
        summary = (
            f"Grade {final_grade}: {final_grade.definition.lower()}, "
            + f"{resolution.direction.label.lower()}"
        )
    lines = [summary]
    for cell, resolution in cells.items():
        lines.append(
            f"{cell} {resolution.direction.label.lower()}: " + "; ".join(resolution.trace)
        )
    return "\n".join(lines)


def final_grade(record: ToolRecord) -> GradingResult:
    """
    Grades a tool.

    Throws GraspInvalidRecordError when the record does not validate.
    """
    report = validate_tool_record(record)
    if report.ok:
        report += validate_overrides(record)
    if not report.ok:
        raise GraspInvalidRecordError(report)

    assigned = assign_cells(record.evidence)
    cells = {
        cell: resolve_cell(cell, items, record.override_for(cell))
        for cell, items in assigned.items()
    }

    grade = next(
        (cell for cell in MARKER_CELLS if cell in cells and cells[cell].direction.is_positive),
        None,
    )
    if grade is None and GradeCell.C0 in cells:
        grade = GradeCell.C0

    logger.debug("%s graded %s", record.profile.name, grade_code(grade))
    return GradingResult(
        tool=record.profile.name,
        digest=record_digest(record),
        cells=cells,
        final_grade=grade,
        justification=_justification(cells, grade),
    )


def _with_evidence(record: ToolRecord, items: Iterable[EvidenceItem]) -> ToolRecord:
    return record.model_copy(update={"evidence": record.evidence + tuple(items)})


def whatif(record: ToolRecord, hypothetical: EvidenceItem) -> WhatIf:
    """
    Grades a tool with and without a hypothetical evidence item.

    Throws GraspInvalidRecordError when the hypothetical item, or the record it is added to, does
    not validate.
    """
    report = validate_evidence_item(hypothetical)
    if not report.ok:
        raise GraspInvalidRecordError(report)

    before = final_grade(record)
    after = final_grade(_with_evidence(record, [hypothetical]))

    changes = []
    for cell in LADDER:
        old = before.cells.get(cell)
        new = after.cells.get(cell)
        old_marker = old.marker if old else "empty"
        new_marker = new.marker if new else "empty"
        if old_marker != new_marker or (old and new and old.items != new.items):
            changes.append(f"{cell}: {old_marker} → {new_marker}")

    return WhatIf(
        before=before,
        after=after,
        delta=f"{before.grade} → {after.grade}",
        changes=tuple(changes),
    )


def _hypothetical(
    evaluation_type: EvaluationType, year: int, identifier: str
) -> EvidenceItem:
    return EvidenceItem(
        id=identifier,
        citation=f"Hypothetical {evaluation_type.replace('_', ' ')} study",
        year=year,
        evaluation_type=evaluation_type,
        dataset_count=1 if evaluation_type is EvaluationType.EXTERNAL_VALIDATION else None,
        conclusion=Conclusion.POSITIVE,
        matching=MatchingProfile(
            **{name: MatchValue.MATCH for name in MatchingProfile.model_fields}
        ),
        quality=QualityProfile(
            **{name: QualityValue.ADEQUATE for name in QualityProfile.model_fields}
        ),
    )


def _uplift_count(record: ToolRecord, cell: GradeCell) -> int | None:
    if record.override_for(cell) is not None:
        return None

    years = [record.profile.year] + [item.year for item in record.evidence]
    year = max(years) + 1
    ids = {item.id for item in record.evidence}
    evaluation_type = CELL_EVALUATION_TYPES[cell]

    added: list[EvidenceItem] = []
    for count in range(1, MAX_UPLIFT_ITEMS + 1):
        identifier = f"uplift-{cell.lower()}-{count}"
        while identifier in ids:
            identifier += "-x"
        added.append(_hypothetical(evaluation_type, year, identifier))
        result = final_grade(_with_evidence(record, added))
        resolution = result.cells.get(cell)
        if resolution is not None and resolution.direction.is_positive:
            return count
    return None


def minimal_uplift(record: ToolRecord) -> list[UpliftTarget]:
    """
    For every cell above the current grade, the smallest number of positive Class A studies which
    would make that cell positive. Found by simulation.
    """
    current = final_grade(record)
    targets = []
    for cell in MARKER_CELLS:
        if cell.rank >= grade_rank(current.final_grade):
            break
        evaluation_type = CELL_EVALUATION_TYPES[cell]
        count = _uplift_count(record, cell)
        kind = evaluation_type.replace("_", " ")
        if count is None:
            description = f"cannot be reached with additional {kind} studies"
        else:
            plural = "study" if count == 1 else "studies"
            description = f"{count} additional positive Class A {kind} {plural}"
        targets.append(UpliftTarget(cell, evaluation_type, count, description))
    return targets
