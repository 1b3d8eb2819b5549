"""
Codes used by the GRASP framework.
"""

from enum import StrEnum
from typing import Final


class GradeCell(StrEnum):
    """
    GRASP grade cells, declared in ladder order from best to worst.
    """

    A1: Final = "A1"
    A2: Final = "A2"
    A3: Final = "A3"
    B1: Final = "B1"
    B2: Final = "B2"
    C1: Final = "C1"
    C2: Final = "C2"
    C3: Final = "C3"
    C0: Final = "C0"

    @property
    def rank(self) -> int:
        """Position on the ladder, 0 being the best grade."""
        return LADDER.index(self)

    @property
    def phase(self) -> str:
        """Phase letter of the cell."""
        return self.value[0]

    @property
    def definition(self) -> str:
        """Level definition as shown in the detailed report."""
        return _CELL_DEFINITIONS[self]

    def __repr__(self) -> str:
        return self.name


LADDER: Final = tuple(GradeCell)

# Cells shown in the final grade row, C0 never is.
MARKER_CELLS: Final = LADDER[:-1]

UNGRADED: Final = "Ungraded"

PHASE_TITLES: Final = {
    "A": "Phase A: After implementation, post-implementation impact",
    "B": "Phase B: During implementation, planning for implementation",
    "C": "Phase C: Before implementation, pre-implementation",
}

_CELL_DEFINITIONS: Final = {
    GradeCell.A1: "Post-implementation impact reported by experimental studies",
    GradeCell.A2: "Post-implementation impact reported by observational studies",
    GradeCell.A3: "Post-implementation impact reported by subjective studies",
    GradeCell.B1: "Tested for usability",
    GradeCell.B2: "Tested for potential effect",
    GradeCell.C1: "Tested for external validity multiple times",
    GradeCell.C2: "Tested for external validity once",
    GradeCell.C3: "Tested for internal validity",
    GradeCell.C0: "Insufficiently internally validated",
}


def grade_rank(grade: GradeCell | None) -> int:
    """
    Ladder rank of a final grade, Ungraded (None) sorts below C0.
    """
    if grade is None:
        return len(LADDER)
    return grade.rank


def grade_code(grade: GradeCell | None) -> str:
    """Printable code of a final grade."""
    if grade is None:
        return UNGRADED
    return grade.value


class Direction(StrEnum):
    """
    Effective direction of evidence at a grade cell.
    """

    POSITIVE: Final = "positive"
    NEGATIVE: Final = "negative"
    MIXED_POSITIVE: Final = "mixed_positive"
    MIXED_NEGATIVE: Final = "mixed_negative"
    UNRESOLVED: Final = "unresolved"

    @property
    def is_positive(self) -> bool:
        """Whether the direction supports a grade."""
        return self in (Direction.POSITIVE, Direction.MIXED_POSITIVE)

    @property
    def is_mixed(self) -> bool:
        """Whether the direction came out of the mixed evidence protocol."""
        return self in (
            Direction.MIXED_POSITIVE,
            Direction.MIXED_NEGATIVE,
            Direction.UNRESOLVED,
        )

    @property
    def marker(self) -> str:
        """Marker used in report grade rows."""
        return {
            Direction.POSITIVE: "+",
            Direction.NEGATIVE: "-",
            Direction.MIXED_POSITIVE: "±+",
            Direction.MIXED_NEGATIVE: "±-",
            Direction.UNRESOLVED: "?",
        }[self]

    @property
    def label(self) -> str:
        """Legend wording of the direction."""
        return {
            Direction.POSITIVE: "Positive evidence",
            Direction.NEGATIVE: "Negative evidence",
            Direction.MIXED_POSITIVE: "Mixed evidence supporting positive conclusion",
            Direction.MIXED_NEGATIVE: "Mixed evidence supporting negative conclusion",
            Direction.UNRESOLVED: "Mixed evidence, unresolved, needs expert adjudication",
        }[self]

    def __repr__(self) -> str:
        return self.name


class EvidenceClass(StrEnum):
    """
    Evidence classes of the mixed evidence protocol, strongest first.
    """

    A: Final = "A"
    B: Final = "B"
    C: Final = "C"

    def __repr__(self) -> str:
        return self.name
