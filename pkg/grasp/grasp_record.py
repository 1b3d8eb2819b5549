"""
Record format used by the GRASP library.

A record is a UTF-8 JSON document holding a tool profile, its evidence and the expert
overrides:

  {"profile": {...}, "evidence": [...], "overrides": [...]}

The canonical form has its keys sorted, is indented with 2 spaces, leaves out fields which hold
their default value and writes numbers without superfluous trailing zeros.
"""

import hashlib
import json
import logging
from typing import Any

from pydantic import BaseModel, ValidationError

from .grasp_evidence import EvidenceItem, GraspError, ToolRecord, describe_error

logger = logging.getLogger(__name__)


class GraspRecordError(GraspError):
    """
    GRASP Base Record Error
    """


class GraspParseError(GraspRecordError):
    """
    GRASP Parse Error.

    When a document is no valid UTF-8 JSON.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is None:
            return f"Parse error: {self.message}"
        return f"Parse error at line {self.line}, column {self.column}: {self.message}"


class GraspSchemaError(GraspRecordError):
    """
    GRASP Schema Error.

    When a document does not follow the record schema.
    """

    def __init__(self, problems: list[str]):
        super().__init__(problems)
        self.problems = problems

    def __str__(self) -> str:
        return "Schema error: " + "; ".join(self.problems)


def _load_json(text: str | bytes) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as ex:
            raise GraspParseError(f"invalid UTF-8 at byte {ex.start}") from ex
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise GraspParseError(ex.msg, ex.lineno, ex.colno) from ex
    except RecursionError as ex:
        raise GraspParseError("document is nested too deeply") from ex
    except ValueError as ex:
        # e.g. integer literals beyond the int conversion limit
        raise GraspParseError(str(ex)) from ex


def _validate(model_type: type[BaseModel], document: Any) -> Any:
    if not isinstance(document, dict):
        raise GraspSchemaError(["document must be a JSON object"])
    try:
        return model_type.model_validate(document)
    except ValidationError as ex:
        raise GraspSchemaError([describe_error(error) for error in ex.errors()]) from ex


def parse_record(text: str | bytes) -> ToolRecord:
    """
    Parses a record document.

    Throws GraspParseError on malformed JSON and GraspSchemaError when the document does not
    follow the record schema.
    """
    return _validate(ToolRecord, _load_json(text))


def parse_evidence_item(text: str | bytes) -> EvidenceItem:
    """
    Parses a document holding a single evidence item, as used for hypothetical evidence.
    """
    return _validate(EvidenceItem, _load_json(text))


def _normalise_numbers(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _normalise_numbers(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_normalise_numbers(item) for item in value]
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def canonical_json(document: Any) -> str:
    """
    Canonical JSON text of a document.
    """
    return (
        json.dumps(_normalise_numbers(document), sort_keys=True, indent=2, ensure_ascii=False)
        + "\n"
    )


def serialize_record(record: ToolRecord) -> str:
    """
    Serializes a record to its canonical form.
    """
    return canonical_json(record.model_dump(mode="json", exclude_defaults=True))


def serialize_evidence_item(item: EvidenceItem) -> str:
    """
    Serializes an evidence item to its canonical form.
    """
    return canonical_json(item.model_dump(mode="json", exclude_defaults=True))


def record_digest(record: ToolRecord) -> str:
    """
    SHA-256 of the canonical form of a record.
    """
    return hashlib.sha256(serialize_record(record).encode("utf-8")).hexdigest()
