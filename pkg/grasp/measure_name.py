"""
Measure names used to report the evaluation of predictive tools.
"""

from enum import StrEnum
from typing import Final

OTHER_PREFIX: Final = "other:"


class MeasureName(StrEnum):
    """
    Measure Names

    The list is open ended, measures outside of it are recorded as "other:<text>".
    """

    # Predictive performance
    SENSITIVITY: Final = "sensitivity"
    SPECIFICITY: Final = "specificity"
    AUC_C_STATISTIC: Final = "auc_c_statistic"
    D_STATISTIC: Final = "d_statistic"
    LOG_RANK: Final = "log_rank"
    CALIBRATION_SLOPE: Final = "calibration_slope"
    CALIBRATION_INTERCEPT: Final = "calibration_intercept"
    HOSMER_LEMESHOW_P: Final = "hosmer_lemeshow_p"
    BRIER: Final = "brier"

    # Usability
    EFFECTIVENESS: Final = "effectiveness"
    EFFICIENCY: Final = "efficiency"
    SATISFACTION: Final = "satisfaction"
    LEARNABILITY: Final = "learnability"
    MEMORABILITY: Final = "memorability"
    ERROR_FREEDOM: Final = "error_freedom"

    # Potential effect and impact
    EFFECT_SIZE: Final = "effect_size"
    COST_SAVING: Final = "cost_saving"

    @property
    def display_name(self) -> str:
        """Name as printed in the measures report."""
        return {
            MeasureName.SENSITIVITY: "Sensitivity",
            MeasureName.SPECIFICITY: "Specificity",
            MeasureName.AUC_C_STATISTIC: "AUC (c-statistic)",
            MeasureName.D_STATISTIC: "D-statistic",
            MeasureName.LOG_RANK: "Log-rank",
            MeasureName.CALIBRATION_SLOPE: "Calibration slope",
            MeasureName.CALIBRATION_INTERCEPT: "Calibration intercept",
            MeasureName.HOSMER_LEMESHOW_P: "Hosmer-Lemeshow",
            MeasureName.BRIER: "Brier score",
            MeasureName.EFFECTIVENESS: "Effectiveness",
            MeasureName.EFFICIENCY: "Efficiency",
            MeasureName.SATISFACTION: "Satisfaction",
            MeasureName.LEARNABILITY: "Learnability",
            MeasureName.MEMORABILITY: "Memorability",
            MeasureName.ERROR_FREEDOM: "Freedom of errors",
            MeasureName.EFFECT_SIZE: "Effect size",
            MeasureName.COST_SAVING: "Cost saving",
        }[self]

    def __repr__(self) -> str:
        return self.name


def is_measure_name(name: str) -> bool:
    """
    Whether a name is in the vocabulary or uses the "other:<text>" escape.
    """
    if name.startswith(OTHER_PREFIX):
        return bool(name[len(OTHER_PREFIX) :].strip())
    return name in {member.value for member in MeasureName}


def measure_display_name(name: str) -> str:
    """Printable name of a measure name."""
    if name.startswith(OTHER_PREFIX):
        return name[len(OTHER_PREFIX) :].strip()
    return MeasureName(name).display_name
