"""
Mixed evidence protocol.

Studies are classified by how well their conditions match the tool's intended conditions and by
their quality:

  Class A: matching evidence of high quality
  Class B: matching evidence of low quality, or non-matching evidence of high quality
  Class C: non-matching evidence of low quality

A mixed cell is decided by the highest class present. Within a class the positive conclusions
are counted against the equivocal and negative ones, a tie descends to the next class present.
When every class ties the cell stays unresolved and needs an expert override.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from .grade_codes import Direction, EvidenceClass
from .grasp_direction import GraspNoEvidenceError, RawDirection, resolve_raw_direction
from .grasp_evidence import (
    Conclusion,
    EvidenceItem,
    GraspError,
    MatchingProfile,
    MatchValue,
    QualityProfile,
    QualityValue,
)

logger = logging.getLogger(__name__)


class GraspProtocolError(GraspError):
    """
    GRASP Protocol Error.

    When the mixed evidence protocol is applied to evidence which is not mixed.
    """

    def __str__(self) -> str:
        return "protocol applies to mixed evidence only"


@dataclass(frozen=True)
class ResolvedDirection:
    """
    Direction of a cell together with the steps which lead to it.
    """

    value: Direction
    trace: tuple[str, ...] = ()


def is_matching(matching: MatchingProfile) -> bool:
    """
    True when no dimension is a mismatch, unreported dimensions do not count against a study.
    """
    return MatchValue.MISMATCH not in matching.dimensions().values()


def is_high_quality(quality: QualityProfile) -> bool:
    """
    True when no criterion is inadequate, unreported criteria do not count against a study.
    """
    return QualityValue.INADEQUATE not in quality.criteria().values()


def classify_study(item: EvidenceItem) -> EvidenceClass:
    """
    Evidence class of a study.
    """
    matching = is_matching(item.matching)
    high_quality = is_high_quality(item.quality)
    if matching and high_quality:
        return EvidenceClass.A
    if matching or high_quality:
        return EvidenceClass.B
    return EvidenceClass.C


def resolve_mixed(items: Sequence[EvidenceItem]) -> ResolvedDirection:
    """
    Resolves a mixed cell to mixed positive, mixed negative or unresolved.

    Raises GraspProtocolError when the conclusions of the items are not mixed.
    """
    try:
        raw_direction = resolve_raw_direction(item.conclusion for item in items)
    except GraspNoEvidenceError as ex:
        raise GraspProtocolError() from ex
    if raw_direction is not RawDirection.MIXED:
        raise GraspProtocolError()

    classes = [classify_study(item) for item in items]
    trace = [f"mixed evidence across {len(items)} studies"]
    for evidence_class in EvidenceClass:
        members = [item for item, cls in zip(items, classes) if cls is evidence_class]
        if not members:
            continue
        positive = sum(1 for item in members if item.conclusion is Conclusion.POSITIVE)
        other = len(members) - positive
        counts = f"Class {evidence_class}: {positive} positive vs {other} equivocal or negative"
        if positive > other:
            trace.append(f"{counts}, supports positive conclusion")
            direction = Direction.MIXED_POSITIVE
            break
        if positive < other:
            trace.append(f"{counts}, supports negative conclusion")
            direction = Direction.MIXED_NEGATIVE
            break
        trace.append(f"{counts}, tie")
    else:
        trace.append("all classes tie, unresolved until expert adjudication")
        direction = Direction.UNRESOLVED

    logger.debug("Mixed evidence resolved to %s: %s", direction, "; ".join(trace))
    return ResolvedDirection(direction, tuple(trace))
