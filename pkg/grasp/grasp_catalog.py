"""
File backed catalog of GRASP records.

A corpus is a directory holding one record per tool:

  <root>/catalog.json         optional, {"order": [slug, ...]} for the summary report
  <root>/tools/<slug>.json    records, nested directories are scanned as well

Records which fail to parse or validate are quarantined, the other records still load.
"""

import asyncio
import json
import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Final

from .grade_codes import GradeCell, grade_code, grade_rank
from .grasp_engine import GradingResult, final_grade, validate_overrides
from .grasp_evidence import (
    Automation,
    Category,
    GraspError,
    Severity,
    ToolRecord,
    validate_tool_record,
)
from .grasp_record import GraspRecordError, parse_record

logger = logging.getLogger(__name__)

TOOLS_DIRECTORY: Final = "tools"
MANIFEST_FILE: Final = "catalog.json"

_SLUG_PATTERN: Final = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")


class GraspCorpusError(GraspError):
    """
    GRASP Corpus Error.

    When a corpus can not be loaded at all.
    """

    def __init__(self, path: Path, reason: str):
        super().__init__(path, reason)
        self.path = path
        self.reason = reason

    def __str__(self) -> str:
        return f"Corpus {self.path}: {self.reason}"


class GraspDuplicateSlugError(GraspCorpusError):
    """
    GRASP Duplicate Slug Error.

    When two record files in a corpus share the same slug.
    """

    def __init__(self, slug: str, first: Path, second: Path):
        super().__init__(second, f'duplicate slug "{slug}", also used by {first}')
        self.slug = slug
        self.first = first
        self.second = second

    def __str__(self) -> str:
        return f'Duplicate slug "{self.slug}": {self.first} and {self.second}'


class GraspQuarantinedRecordError(GraspCorpusError):
    """
    GRASP Quarantined Record Error.

    When a record is requested which failed to load.
    """


class GraspRecordNotFoundError(GraspError):
    """
    GRASP Record Not Found Error.
    """

    def __init__(self, slug: str):
        super().__init__(slug)
        self.slug = slug

    def __str__(self) -> str:
        return f'No record with slug "{self.slug}"'


@dataclass(frozen=True)
class LoadDiagnostic:
    """A problem found while loading a corpus."""

    path: Path
    severity: Severity
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.severity}: {self.message}"


@dataclass(frozen=True)
class Catalog:
    """
    Records of a corpus by slug, immutable once loaded.

    Grades are computed on first use and cached.
    """

    root: Path
    records: Mapping[str, ToolRecord]
    diagnostics: tuple[LoadDiagnostic, ...] = ()
    quarantined: tuple[str, ...] = ()
    order: tuple[str, ...] = ()

    @cached_property
    def results(self) -> dict[str, GradingResult]:
        """Grading result per slug."""
        return {slug: final_grade(record) for slug, record in self.records.items()}

    @property
    def slugs(self) -> tuple[str, ...]:
        """Slugs in listing order, the manifest order first."""
        listed = tuple(slug for slug in self.order if slug in self.records)
        return listed + tuple(slug for slug in sorted(self.records) if slug not in listed)

    def record(self, slug: str) -> ToolRecord:
        """
        Record of a tool.

        Throws GraspRecordNotFoundError for an unknown slug and GraspQuarantinedRecordError when
        the record failed to load.
        """
        if slug in self.records:
            return self.records[slug]
        if slug in self.quarantined:
            raise GraspQuarantinedRecordError(self.root, f'record "{slug}" is quarantined')
        raise GraspRecordNotFoundError(slug)

    def result(self, slug: str) -> GradingResult:
        """Grading result of a tool."""
        self.record(slug)
        return self.results[slug]


@dataclass(frozen=True)
class QueryFilter:
    # pylint: disable=too-many-instance-attributes
    """
    Predicates a catalog query filters on, an empty filter matches everything.

    Text predicates are case insensitive substring matches.
    """

    category: Category | None = None
    clinical_area: str | None = None
    grades: frozenset[GradeCell] | None = None
    automation: Automation | None = None
    min_year: int | None = None
    endorsement: str | None = None

    def matches(self, record: ToolRecord, result: GradingResult) -> bool:
        """Whether a record passes every predicate."""
        profile = record.profile
        if self.category is not None and profile.category is not self.category:
            return False
        if (
            self.clinical_area is not None
            and self.clinical_area.casefold() not in profile.clinical_area.casefold()
        ):
            return False
        if self.grades is not None and result.final_grade not in self.grades:
            return False
        if self.automation is not None and profile.automation is not self.automation:
            return False
        if self.min_year is not None and profile.year < self.min_year:
            return False
        if self.endorsement is not None and not any(
            self.endorsement.casefold() in endorsement.casefold()
            for endorsement in profile.endorsements
        ):
            return False
        return True


@dataclass(frozen=True)
class CatalogEntry:
    """A query result row."""

    slug: str
    name: str
    category: Category
    clinical_area: str
    country: str
    year: int
    grade: str


@dataclass
class _LoadedFile:
    path: Path
    slug: str
    record: ToolRecord | None = None
    diagnostics: list[LoadDiagnostic] = field(default_factory=list)


def _load_file(path: Path) -> _LoadedFile:
    loaded = _LoadedFile(path, path.stem)
    if not _SLUG_PATTERN.match(loaded.slug):
        loaded.diagnostics.append(
            LoadDiagnostic(path, Severity.ERROR, f'invalid slug "{loaded.slug}"')
        )
        return loaded

    try:
        record = parse_record(path.read_bytes())
    except OSError as ex:
        loaded.diagnostics.append(LoadDiagnostic(path, Severity.ERROR, str(ex)))
        return loaded
    except GraspRecordError as ex:
        loaded.diagnostics.append(LoadDiagnostic(path, Severity.ERROR, str(ex)))
        return loaded

    report = validate_tool_record(record)
    if report.ok:
        report += validate_overrides(record)
    loaded.diagnostics.extend(
        LoadDiagnostic(path, issue.severity, f"{issue.field}: {issue.message}")
        for issue in report.issues
    )
    if report.ok:
        loaded.record = record
    return loaded


def _load_manifest(root: Path) -> tuple[tuple[str, ...], list[LoadDiagnostic]]:
    path = root / MANIFEST_FILE
    if not path.is_file():
        return (), []
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        order = document["order"]
        if not isinstance(order, list) or not all(isinstance(slug, str) for slug in order):
            raise ValueError("order must be a list of slugs")
    except (OSError, ValueError, KeyError, TypeError) as ex:
        logger.warning("Ignoring manifest %s: %s", path, ex)
        return (), [LoadDiagnostic(path, Severity.WARNING, f"manifest ignored: {ex}")]
    return tuple(order), []


async def async_load_corpus(root: Path | str) -> Catalog:
    """
    Loads a corpus, reading the record files concurrently.

    Throws GraspCorpusError when the root can not be read and GraspDuplicateSlugError when two
    files share a slug.
    """
    root = Path(root)
    logger.debug("Loading corpus %s", root)
    try:
        if not root.is_dir():
            raise GraspCorpusError(root, "not a directory")
        # Fails when the directory can not be listed.
        next(root.iterdir(), None)
        tools = root / TOOLS_DIRECTORY
        paths = sorted(tools.rglob("*.json")) if tools.is_dir() else []
    except OSError as ex:
        logger.error("Failed to read corpus %s: %s", root, ex)
        raise GraspCorpusError(root, str(ex)) from ex

    seen: dict[str, Path] = {}
    for path in paths:
        if path.stem in seen:
            raise GraspDuplicateSlugError(path.stem, seen[path.stem], path)
        seen[path.stem] = path

    loaded_files = await asyncio.gather(*(asyncio.to_thread(_load_file, path) for path in paths))
    loaded_files = sorted(loaded_files, key=lambda loaded: loaded.slug)

    order, diagnostics = _load_manifest(root)
    records = {}
    quarantined = []
    for loaded in loaded_files:
        diagnostics.extend(loaded.diagnostics)
        if loaded.record is None:
            logger.warning("Quarantined %s", loaded.path)
            quarantined.append(loaded.slug)
        else:
            records[loaded.slug] = loaded.record

    for slug in order:
        if slug not in seen:
            diagnostics.append(
                LoadDiagnostic(
                    root / MANIFEST_FILE, Severity.WARNING, f'no record for listed slug "{slug}"'
                )
            )

    logger.debug("Loaded %d records, %d quarantined", len(records), len(quarantined))
    return Catalog(
        root=root,
        records=records,
        diagnostics=tuple(diagnostics),
        quarantined=tuple(quarantined),
        order=order,
    )


def load_corpus(root: Path | str) -> Catalog:
    """
    Loads a corpus.
    """
    return asyncio.run(async_load_corpus(root))


def query_catalog(catalog: Catalog, query: QueryFilter | None = None) -> list[CatalogEntry]:
    """
    Records matching a filter, sorted by grade and then by name.
    """
    query = query or QueryFilter()
    entries = []
    for slug, record in catalog.records.items():
        result = catalog.results[slug]
        if not query.matches(record, result):
            continue
        entries.append(
            (
                grade_rank(result.final_grade),
                record.profile.name,
                slug,
                CatalogEntry(
                    slug=slug,
                    name=record.profile.name,
                    category=record.profile.category,
                    clinical_area=record.profile.clinical_area,
                    country=record.profile.country,
                    year=record.profile.year,
                    grade=grade_code(result.final_grade),
                ),
            )
        )
    return [entry for *_, entry in sorted(entries, key=lambda entry: entry[:3])]
