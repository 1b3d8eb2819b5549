# pylint: disable=too-few-public-methods
"""
Data classes used by the GRASP library.

Tool profiles and evidence items are immutable pydantic models. The models only enforce the
structure of a record (types, enums, known fields), the framework invariants are checked by the
validate functions which report problems instead of raising them.
"""

import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass
from datetime import date
from enum import StrEnum
from typing import Any, Final

import semver
from pydantic import (
    BaseModel,
    ConfigDict,
    StrictBool,
    StrictFloat,
    StrictInt,
    ValidationError,
    field_validator,
)

from .grade_codes import Direction, GradeCell
from .measure_name import MeasureName, is_measure_name

logger = logging.getLogger(__name__)

FORMAT_VERSION: Final = "1.0.0"
SUPPORTED_FORMAT_VERSIONS: Final = (">=1.0.0", "<2.0.0")

MIN_YEAR: Final = 1900

_MODEL_CONFIG: Final = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class GraspError(Exception):
    """
    GRASP Base Error
    """


# Controlled vocabularies


class Category(StrEnum):
    """Clinical category of a predictive tool."""

    DIAGNOSTIC: Final = "diagnostic"
    PROGNOSTIC: Final = "prognostic"
    THERAPEUTIC: Final = "therapeutic"
    PREVENTIVE: Final = "preventive"


class InputSourceKind(StrEnum):
    """Where the input variables of a tool come from."""

    CLINICAL: Final = "clinical"
    NON_CLINICAL: Final = "non_clinical"


class InputType(StrEnum):
    """Kind of input variables of a tool."""

    OBJECTIVE: Final = "objective"
    SUBJECTIVE: Final = "subjective"


class Automation(StrEnum):
    """Whether a tool is applied by hand or computed by a system."""

    MANUAL: Final = "manual"
    AUTOMATED: Final = "automated"


class EvaluationType(StrEnum):
    """
    Evaluation study types.
    """

    INTERNAL_VALIDATION: Final = "internal_validation"
    EXTERNAL_VALIDATION: Final = "external_validation"
    USABILITY: Final = "usability"
    POTENTIAL_EFFECT: Final = "potential_effect"
    IMPACT_EXPERIMENTAL: Final = "impact_experimental"
    IMPACT_OBSERVATIONAL: Final = "impact_observational"
    IMPACT_SUBJECTIVE: Final = "impact_subjective"

    @property
    def allows_impact_category(self) -> bool:
        """Whether studies of this type may report an impact category."""
        return self not in (
            EvaluationType.INTERNAL_VALIDATION,
            EvaluationType.EXTERNAL_VALIDATION,
        )


class Conclusion(StrEnum):
    """
    Bottom-line finding of a study.

    Equivocal means the tool is acceptable, but not superior to other methods or tools.
    """

    POSITIVE: Final = "positive"
    EQUIVOCAL: Final = "equivocal"
    NEGATIVE: Final = "negative"


class ImpactCategory(StrEnum):
    """Area in which a tool's potential effect or impact is measured."""

    CLINICAL_EFFECTIVENESS: Final = "clinical_effectiveness"
    PATIENT_SAFETY: Final = "patient_safety"
    HEALTHCARE_EFFICIENCY: Final = "healthcare_efficiency"


class MatchValue(StrEnum):
    """Agreement of one study condition with the tool's intended conditions."""

    MATCH: Final = "match"
    MISMATCH: Final = "mismatch"
    UNREPORTED: Final = "unreported"


class QualityValue(StrEnum):
    """Assessment of one quality criterion of a study."""

    ADEQUATE: Final = "adequate"
    INADEQUATE: Final = "inadequate"
    UNREPORTED: Final = "unreported"


class Relevance(StrEnum):
    """Reviewer annotation of a reference."""

    IMPORTANT: Final = "important"
    LESS_RELEVANT: Final = "less_relevant"


# Cell each evaluation type is graded at, external validation populates C2 and C1.
CELL_EVALUATION_TYPES: Final = {
    GradeCell.A1: EvaluationType.IMPACT_EXPERIMENTAL,
    GradeCell.A2: EvaluationType.IMPACT_OBSERVATIONAL,
    GradeCell.A3: EvaluationType.IMPACT_SUBJECTIVE,
    GradeCell.B1: EvaluationType.USABILITY,
    GradeCell.B2: EvaluationType.POTENTIAL_EFFECT,
    GradeCell.C1: EvaluationType.EXTERNAL_VALIDATION,
    GradeCell.C2: EvaluationType.EXTERNAL_VALIDATION,
    GradeCell.C3: EvaluationType.INTERNAL_VALIDATION,
    GradeCell.C0: EvaluationType.INTERNAL_VALIDATION,
}


# Models


class InputSource(BaseModel):
    """Input source of a tool with free text subtypes, e.g. clinical: vital signs."""

    model_config = _MODEL_CONFIG

    kind: InputSourceKind
    subtypes: tuple[str, ...] = ()


class LocalContext(BaseModel):
    """Whether the tool's inputs depend on location specific data."""

    model_config = _MODEL_CONFIG

    dependent: StrictBool = False
    note: str = ""


class ToolProfile(BaseModel):
    """
    Tool information block of the detailed report.
    """

    model_config = _MODEL_CONFIG

    name: str
    authors: str = ""
    country: str = ""
    year: StrictInt
    intended_use: str = ""
    intended_user: str = ""
    category: Category
    clinical_area: str = ""
    target_population: str = ""
    target_outcome: str = ""
    action: str = ""
    input_source: tuple[InputSource, ...] = ()
    input_type: tuple[InputType, ...] = ()
    local_context: LocalContext = LocalContext()
    methodology: str = ""
    endorsements: tuple[str, ...] = ()
    automation: Automation
    citations: StrictInt

    @field_validator("input_source")
    @classmethod
    def _sort_input_source(cls, value: tuple[InputSource, ...]) -> tuple[InputSource, ...]:
        return tuple(sorted(value, key=lambda source: (source.kind, source.subtypes)))

    @field_validator("input_type")
    @classmethod
    def _sort_input_type(cls, value: tuple[InputType, ...]) -> tuple[InputType, ...]:
        return tuple(sorted(set(value)))


class MatchingProfile(BaseModel):
    """
    Degree of matching between the study conditions and the tool's intended conditions.
    """

    model_config = _MODEL_CONFIG

    predictive_task: MatchValue = MatchValue.UNREPORTED
    outcome: MatchValue = MatchValue.UNREPORTED
    intended_use: MatchValue = MatchValue.UNREPORTED
    intended_users: MatchValue = MatchValue.UNREPORTED
    clinical_specialty: MatchValue = MatchValue.UNREPORTED
    healthcare_settings: MatchValue = MatchValue.UNREPORTED
    target_population: MatchValue = MatchValue.UNREPORTED
    age_group: MatchValue = MatchValue.UNREPORTED

    def dimensions(self) -> dict[str, MatchValue]:
        """All eight dimensions by name."""
        return {name: getattr(self, name) for name in type(self).model_fields}


class QualityProfile(BaseModel):
    """
    Quality of an evaluation study.
    """

    model_config = _MODEL_CONFIG

    sample_size: QualityValue = QualityValue.UNREPORTED
    data_collection: QualityValue = QualityValue.UNREPORTED
    study_methods: QualityValue = QualityValue.UNREPORTED
    credibility: QualityValue = QualityValue.UNREPORTED

    def criteria(self) -> dict[str, QualityValue]:
        """All four criteria by name."""
        return {name: getattr(self, name) for name in type(self).model_fields}


class Measure(BaseModel):
    """
    A reported measure, stored as published and never computed.

    The label overrides the measure's display name, the comparator holds the control or "before"
    value of a comparison.
    """

    model_config = _MODEL_CONFIG

    name: str
    value: StrictFloat
    unit: str | None = None
    ci_low: StrictFloat | None = None
    ci_high: StrictFloat | None = None
    p_value: StrictFloat | None = None
    cutoff: StrictFloat | None = None
    label: str | None = None
    comparator: StrictFloat | None = None

    @field_validator("name")
    @classmethod
    def _check_name(cls, value: str) -> str:
        if not is_measure_name(value):
            raise ValueError(
                f'unknown measure name "{value}", allowed values: '
                + ", ".join(MeasureName)
                + ", other:<text>"
            )
        return value


class EvidenceItem(BaseModel):
    """
    One evaluation study of a tool.
    """

    model_config = _MODEL_CONFIG

    id: str
    citation: str
    year: StrictInt
    evaluation_type: EvaluationType
    sufficient: StrictBool = True
    dataset_count: StrictInt | None = None
    conclusion: Conclusion
    impact_category: ImpactCategory | None = None
    matching: MatchingProfile = MatchingProfile()
    quality: QualityProfile = QualityProfile()
    measures: tuple[Measure, ...] = ()
    sample_size: StrictInt | None = None
    notes: str = ""
    relevance: Relevance | None = None

    @property
    def studies(self) -> int:
        """Number of studies this item stands for."""
        if self.evaluation_type is EvaluationType.EXTERNAL_VALIDATION and self.dataset_count:
            return self.dataset_count
        return 1


class Override(BaseModel):
    """
    Expert adjudication of a grade cell's direction.
    """

    model_config = _MODEL_CONFIG

    cell: GradeCell
    direction: Direction
    justification: str


class ToolRecord(BaseModel):
    """
    A tool profile with all its evidence and expert overrides.
    """

    model_config = _MODEL_CONFIG

    profile: ToolProfile
    evidence: tuple[EvidenceItem, ...] = ()
    overrides: tuple[Override, ...] = ()
    format_version: str = FORMAT_VERSION

    @field_validator("format_version")
    @classmethod
    def _check_format_version(cls, value: str) -> str:
        try:
            version = semver.Version.parse(value)
        except ValueError as ex:
            raise ValueError(f'invalid format version "{value}"') from ex
        if not all(version.match(condition) for condition in SUPPORTED_FORMAT_VERSIONS):
            raise ValueError(
                f"unsupported format version {value}, expected "
                + ",".join(SUPPORTED_FORMAT_VERSIONS)
            )
        return value

    @property
    def studies_count(self) -> int:
        """Number of studies the evidence reports on."""
        return sum(item.studies for item in self.evidence)

    def override_for(self, cell: GradeCell) -> Override | None:
        """The expert override of a cell, if any."""
        return next((override for override in self.overrides if override.cell is cell), None)


# Validation


class Severity(StrEnum):
    """Severity of a validation issue."""

    ERROR: Final = "error"
    WARNING: Final = "warning"


@dataclass(frozen=True)
class ValidationIssue:
    """A single problem found while validating."""

    severity: Severity
    field: str
    message: str

    def __str__(self) -> str:
        if self.field:
            return f"{self.severity}: {self.field}: {self.message}"
        return f"{self.severity}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    """
    Outcome of a validation.
    """

    issues: tuple[ValidationIssue, ...] = ()

    @property
    def errors(self) -> tuple[ValidationIssue, ...]:
        """Issues which make the validated object unusable for grading."""
        return tuple(issue for issue in self.issues if issue.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[ValidationIssue, ...]:
        """Issues worth a look which do not block grading."""
        return tuple(issue for issue in self.issues if issue.severity is Severity.WARNING)

    @property
    def ok(self) -> bool:
        """True when there are no errors."""
        return not self.errors

    def prefixed(self, prefix: str) -> "ValidationReport":
        """The same report with every field name prefixed."""
        return ValidationReport(
            tuple(
                ValidationIssue(issue.severity, prefix + issue.field, issue.message)
                for issue in self.issues
            )
        )

    def __add__(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.issues + other.issues)


def field_path(location: tuple[int | str, ...]) -> str:
    """
    Formats a pydantic error location, ("evidence", 0, "year") => evidence[0].year
    """
    path = ""
    for part in location:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else part
    return path


def error_message(error: Mapping[str, Any]) -> str:
    """
    Human readable message of a pydantic error, without its location.
    """
    match error["type"]:
        case "missing":
            return "missing required field"
        case "extra_forbidden":
            return "unknown field"
        case "enum":
            allowed = re.findall(r"'([^']*)'", error.get("ctx", {}).get("expected", ""))
            return f'invalid value "{error["input"]}", allowed values: ' + ", ".join(allowed)
        case "value_error":
            return str(error.get("ctx", {}).get("error", error["msg"]))
        case _:
            return error["msg"]


def describe_error(error: Mapping[str, Any]) -> str:
    """
    Human readable description of a pydantic error, including its location.
    """
    path = field_path(error["loc"])
    if error["type"] in ("missing", "extra_forbidden"):
        return f'{error_message(error)} "{path}"'
    if not path:
        return error_message(error)
    return f"{path}: {error_message(error)}"


def _coerce(model_type: type[BaseModel], value: Any, issues: list[ValidationIssue]) -> Any:
    if isinstance(value, model_type):
        return value
    try:
        return model_type.model_validate(value)
    except ValidationError as ex:
        for error in ex.errors():
            issues.append(
                ValidationIssue(Severity.ERROR, field_path(error["loc"]), error_message(error))
            )
    return None


def _error(issues: list[ValidationIssue], field: str, message: str):
    issues.append(ValidationIssue(Severity.ERROR, field, message))


def _warning(issues: list[ValidationIssue], field: str, message: str):
    issues.append(ValidationIssue(Severity.WARNING, field, message))


_PROFILE_TEXT_FIELDS: Final = (
    "authors",
    "country",
    "intended_use",
    "intended_user",
    "clinical_area",
    "target_population",
    "target_outcome",
    "action",
    "methodology",
)


def validate_tool_profile(profile: ToolProfile | Mapping[str, Any]) -> ValidationReport:
    """
    Validates a tool profile.

    Accepts a profile or its JSON mapping. Problems are reported, never raised.
    """
    issues: list[ValidationIssue] = []
    profile = _coerce(ToolProfile, profile, issues)
    if profile is None:
        return ValidationReport(tuple(issues))

    if not profile.name.strip():
        _error(issues, "name", "name must not be empty")
    if not MIN_YEAR <= profile.year <= date.today().year:
        _error(
            issues,
            "year",
            f"year {profile.year} outside of {MIN_YEAR}-{date.today().year}",
        )
    if profile.citations < 0:
        _error(issues, "citations", f"citations {profile.citations} must not be negative")

    kinds = [source.kind for source in profile.input_source]
    for kind in sorted(set(kinds)):
        if kinds.count(kind) > 1:
            _error(issues, "input_source", f'input source "{kind}" listed more than once')

    for name in _PROFILE_TEXT_FIELDS:
        if not getattr(profile, name).strip():
            _warning(issues, name, f"{name} is empty")
    if profile.local_context.dependent and not profile.local_context.note.strip():
        _warning(issues, "local_context.note", "local context dependency is not described")

    return ValidationReport(tuple(issues))


def _validate_measure(measure: Measure, prefix: str, issues: list[ValidationIssue]):
    if (
        measure.ci_low is not None
        and measure.ci_high is not None
        and measure.ci_low > measure.ci_high
    ):
        _error(
            issues,
            f"{prefix}.ci_low",
            f"confidence interval {measure.ci_low}-{measure.ci_high} is reversed",
        )
    if measure.p_value is not None and not 0 <= measure.p_value <= 1:
        _error(issues, f"{prefix}.p_value", f"p-value {measure.p_value} outside of [0, 1]")


def validate_evidence_item(item: EvidenceItem | Mapping[str, Any]) -> ValidationReport:
    """
    Validates a single evidence item.

    Accepts an item or its JSON mapping. Problems are reported, never raised.
    """
    issues: list[ValidationIssue] = []
    item = _coerce(EvidenceItem, item, issues)
    if item is None:
        return ValidationReport(tuple(issues))

    if not item.id.strip():
        _error(issues, "id", "id must not be empty")
    if not item.citation.strip():
        _warning(issues, "citation", "citation is empty")

    if item.evaluation_type is EvaluationType.EXTERNAL_VALIDATION:
        if item.dataset_count is None:
            _error(issues, "dataset_count", "dataset_count is required for external validation")
        elif item.dataset_count < 1:
            _error(
                issues,
                "dataset_count",
                f"dataset_count {item.dataset_count} must be at least 1",
            )
    elif item.dataset_count is not None:
        _error(
            issues,
            "dataset_count",
            f"dataset_count is not allowed for {item.evaluation_type}",
        )

    if item.impact_category is not None and not item.evaluation_type.allows_impact_category:
        _error(
            issues,
            "impact_category",
            f"impact_category is not allowed for {item.evaluation_type}",
        )
    if not item.sufficient and item.evaluation_type is not EvaluationType.INTERNAL_VALIDATION:
        _warning(issues, "sufficient", "sufficient only applies to internal validation")
    if item.sample_size is not None and item.sample_size < 1:
        _error(issues, "sample_size", f"sample_size {item.sample_size} must be positive")

    for index, measure in enumerate(item.measures):
        _validate_measure(measure, f"measures[{index}]", issues)

    return ValidationReport(tuple(issues))


def validate_tool_record(record: ToolRecord | Mapping[str, Any]) -> ValidationReport:
    """
    Validates a complete record: its profile, every evidence item and the expert overrides.

    Whether an override fits the evidence graded at its cell is checked by
    grasp_engine.validate_overrides.
    """
    issues: list[ValidationIssue] = []
    record = _coerce(ToolRecord, record, issues)
    if record is None:
        return ValidationReport(tuple(issues))

    report = validate_tool_profile(record.profile).prefixed("profile.")
    for index, item in enumerate(record.evidence):
        report += validate_evidence_item(item).prefixed(f"evidence[{index}].")

    seen_ids: set[str] = set()
    for index, item in enumerate(record.evidence):
        if item.id in seen_ids:
            _error(issues, f"evidence[{index}].id", f'duplicate evidence id "{item.id}"')
        seen_ids.add(item.id)

    seen_cells: set[GradeCell] = set()
    for index, override in enumerate(record.overrides):
        field = f"overrides[{index}]"
        if override.cell in seen_cells:
            _error(issues, f"{field}.cell", f"cell {override.cell} overridden more than once")
        seen_cells.add(override.cell)
        if override.direction is Direction.UNRESOLVED:
            _error(issues, f"{field}.direction", "an override must resolve the cell")
        if not override.justification.strip():
            _error(issues, f"{field}.justification", "an override needs a justification")

    return report + ValidationReport(tuple(issues))
