"""
Raw direction of the evidence at a grade cell.

The conclusions of all studies at a cell reduce to one of three raw directions:

  positive only                          => positive
  equivocal and/or negative, no positive => negative
  positive with equivocal and/or negative => mixed

Mixed cells are refined by the mixed evidence protocol.
"""

from collections.abc import Iterable
from enum import StrEnum
from typing import Final

from .grasp_evidence import Conclusion, GraspError


class GraspNoEvidenceError(GraspError):
    """
    GRASP No Evidence Error.

    When a direction is requested for a cell without any evidence.
    """

    def __str__(self) -> str:
        return "no evidence at this cell"


class RawDirection(StrEnum):
    """
    Direction of a cell before the mixed evidence protocol is applied.
    """

    POSITIVE: Final = "positive"
    NEGATIVE: Final = "negative"
    MIXED: Final = "mixed"

    def __repr__(self) -> str:
        return self.name


def resolve_raw_direction(conclusions: Iterable[Conclusion]) -> RawDirection:
    """
    Maps the conclusions of the studies at a cell to a raw direction.

    Only which conclusions are present matters, neither their order nor their multiplicity.
    """
    present = set(conclusions)
    if not present:
        raise GraspNoEvidenceError()
    if Conclusion.POSITIVE not in present:
        return RawDirection.NEGATIVE
    if present == {Conclusion.POSITIVE}:
        return RawDirection.POSITIVE
    return RawDirection.MIXED
