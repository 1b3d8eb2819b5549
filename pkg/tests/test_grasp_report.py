# pylint: disable=R0801
# pylint: disable=missing-function-docstring
"""
Test rendering GRASP reports.
"""

import json
import logging
import unittest

from grasp.grasp_catalog import load_corpus
from grasp.grasp_engine import final_grade
from grasp.grasp_evidence import (
    Conclusion,
    EvaluationType,
    EvidenceItem,
    MatchingProfile,
    Measure,
    QualityProfile,
)
from grasp.grasp_record import parse_record
from grasp.grasp_report import (
    GraspRecordMismatchError,
    ReportFormat,
    format_measure,
    format_number,
    render_detailed_report,
    render_measures,
    render_summary,
)

from . import FIXTURES, fixture_bytes

_LOGGER = logging.getLogger(__name__)


def _detailed(slug: str, report_format: ReportFormat = ReportFormat.MARKDOWN) -> str:
    record = parse_record(fixture_bytes(slug))
    return render_detailed_report(record, final_grade(record), report_format).body


class Test(unittest.TestCase):
    """
    Test GRASP reports.
    """

    def test_detailed_report(self):
        body = _detailed("lace-index")
        lines = body.splitlines()
        self.assertEqual(lines[0], "# GRASP detailed report: LACE Index for Readmission")
        self.assertIn("| Citations | 455 |", lines)
        self.assertIn("| Studies | 7 |", lines)
        self.assertIn("| Category | Prognostic |", lines)
        self.assertIn("| A1 | A2 | A3 | B1 | B2 | C1 | C2 | C3 |", lines)
        self.assertIn("|  |  |  |  |  | ±+ |  | + |", lines)
        self.assertIn("**Grade C1**", lines)
        self.assertIn(
            "- Gruneir et al, 2011 [external validation; positive finding; important finding]: "
            + "26,045 patients from six hospitals in Toronto",
            lines,
        )
        self.assertIn(
            "- Yu et al, 2015 [external validation; negative finding; less relevant finding]: "
            + "Institution specific models performed better",
            lines,
        )
        self.assertIn("- `±+` Mixed evidence supporting positive conclusion", lines)
        self.assertTrue(body.endswith("\n"))

    def test_references(self):
        lines = _detailed("ottawa-knee-rule").splitlines()
        self.assertIn("- Stiell et al, 1995 [internal validation; positive finding]", lines)
        self.assertIn(
            "- Bachmann et al, 2004 [external validation; positive finding]: "
            + "Systematic review of eleven validation studies",
            lines,
        )

        document = json.loads(_detailed("ottawa-knee-rule", ReportFormat.JSON))
        self.assertEqual(
            document["references"][1],
            {
                "id": "bachmann-2004",
                "citation": "Bachmann et al, 2004",
                "labels": ["external validation", "positive finding"],
                "notes": "Systematic review of eleven validation studies",
            },
        )

    def test_grade_c2_is_shown(self):
        def external(identifier: str, year: int, conclusion: Conclusion, low: bool) -> EvidenceItem:
            return EvidenceItem(
                id=identifier,
                citation=identifier,
                year=year,
                evaluation_type=EvaluationType.EXTERNAL_VALIDATION,
                dataset_count=1,
                conclusion=conclusion,
                matching=MatchingProfile(age_group="mismatch" if low else "match"),
                quality=QualityProfile(credibility="inadequate" if low else "adequate"),
            )

        derivation = EvidenceItem(
            id="derivation",
            citation="Derivation study",
            year=2000,
            evaluation_type=EvaluationType.INTERNAL_VALIDATION,
            sufficient=True,
            conclusion=Conclusion.POSITIVE,
        )
        evidence = (
            derivation,
            external("early", 2001, Conclusion.POSITIVE, True),
            external("later", 2005, Conclusion.NEGATIVE, False),
            external("latest", 2008, Conclusion.NEGATIVE, False),
        )
        record = parse_record(fixture_bytes("ottawa-knee-rule"))
        record = record.model_copy(update={"evidence": evidence})
        result = final_grade(record)
        lines = render_detailed_report(record, result).body.splitlines()
        self.assertIn("**Grade C2**", lines)
        self.assertIn("|  |  |  |  |  | ±- | + | + |", lines)
        document = json.loads(render_detailed_report(record, result, ReportFormat.JSON).body)
        self.assertEqual(document["markers"]["C2"], "+")

    def test_detailed_report_levels(self):
        lines = _detailed("centor-score").splitlines()
        self.assertIn("### Phase A: After implementation, post-implementation impact", lines)
        self.assertIn(
            "| A2 | Post-implementation impact reported by observational studies | - "
            + "| Poses, Cebul & Wigton, 1995 |",
            lines,
        )
        self.assertIn("| B2 | Tested for potential effect |  |  |", lines)
        self.assertIn("**Grade B1**", lines)

    def test_detailed_report_json(self):
        document = json.loads(_detailed("modified-early-warning-score", ReportFormat.JSON))
        self.assertEqual(document["tool"], "Modified Early Warning Score (MEWS)")
        self.assertEqual(document["final_grade"], "A2")
        self.assertEqual(document["citations"], 1176)
        self.assertEqual(document["studies"], 13)
        self.assertEqual(document["markers"]["A2"], "±+")
        self.assertEqual(document["markers"]["C2"], "")
        levels = {level["cell"]: level for level in document["levels"]}
        self.assertEqual(levels["A2"]["direction"], "mixed_positive")
        self.assertEqual(
            levels["A2"]["studies"], ["subbe-2003", "moon-2011", "de-meester-2013", "hammond-2013"]
        )
        self.assertNotIn("direction", levels["A1"])
        self.assertEqual(
            document["legend"]["?"], "Mixed evidence, unresolved, needs expert adjudication"
        )

    def test_detailed_report_is_deterministic(self):
        for report_format in ReportFormat:
            with self.subTest(report_format=report_format):
                self.assertEqual(
                    _detailed("wells-criteria", report_format),
                    _detailed("wells-criteria", report_format),
                )

    def test_record_mismatch(self):
        record = parse_record(fixture_bytes("centor-score"))
        result = final_grade(parse_record(fixture_bytes("lace-index")))
        self.assertRaises(GraspRecordMismatchError, render_detailed_report, record, result)

    def test_summary(self):
        lines = render_summary(load_corpus(FIXTURES)).body.splitlines()
        self.assertEqual(lines[0], "# GRASP summary")
        self.assertEqual(
            lines[2],
            "| Tool | Country | Year | Citations | Studies | Grade "
            + "| A1 | A2 | A3 | B1 | B2 | C1 | C2 | C3 |",
        )
        self.assertEqual(
            lines[4],
            "| LACE Index for Readmission | Canada | 2010 | 455 | 7 | C1 "
            + "|  |  |  |  |  | ±+ |  | + |",
        )
        self.assertEqual(
            lines[8],
            "| Ottawa Knee Rule | Canada | 1995 | 227 | 15 | A1 "
            + "| + |  |  |  |  | + |  | + |",
        )

    def test_summary_json(self):
        document = json.loads(render_summary(load_corpus(FIXTURES), ReportFormat.JSON).body)
        tools = document["tools"]
        self.assertEqual(
            [tool["slug"] for tool in tools],
            [
                "lace-index",
                "centor-score",
                "wells-criteria",
                "modified-early-warning-score",
                "ottawa-knee-rule",
            ],
        )
        self.assertEqual([tool["citations"] for tool in tools], [455, 715, 1260, 1176, 227])
        self.assertEqual([tool["studies"] for tool in tools], [7, 15, 13, 13, 15])
        self.assertEqual([tool["grade"] for tool in tools], ["C1", "B1", "A2", "A2", "A1"])
        self.assertEqual(tools[1]["markers"]["A1"], "±-")

    def test_measures(self):
        body = render_measures(parse_record(fixture_bytes("wells-criteria"))).body
        self.assertIn(
            "- Murthy et al, 2016: Efficiency of CTPA utilisation 17.4% vs 30.7% (p=0.036)",
            body.splitlines(),
        )
        self.assertIn("- Gibson et al, 2008: AUC (c-statistic) 0.74 (95% CI 0.72-0.76)", body)

    def test_measures_sections(self):
        lines = render_measures(parse_record(fixture_bytes("lace-index"))).body.splitlines()
        self.assertEqual(lines[0], "# Reported measures: LACE Index for Readmission")
        self.assertIn("- van Walraven et al, 2010: Hosmer-Lemeshow 14.1 (P=0.59)", lines)
        self.assertIn("- Low et al, 2015: Sensitivity 66.3%", lines)
        self.assertEqual(lines.count("not reported"), 2)

    def test_measures_json(self):
        record = parse_record(fixture_bytes("ottawa-knee-rule"))
        document = json.loads(render_measures(record, ReportFormat.JSON).body)
        self.assertEqual(
            [section["title"] for section in document["sections"]],
            [
                "Predictive performance: discrimination and calibration",
                "Usability and potential effect",
                "Post-implementation impact",
            ],
        )
        texts = [measure["text"] for measure in document["sections"][2]["measures"]]
        self.assertEqual(
            texts,
            [
                "Reduced time spent by patient 85.7 minutes vs 118.8 minutes",
                "Cost savings per patient 80 USD vs 183 USD",
                "Reduced proportion of knee injury patients referred to radiology 77.6% vs 57.1%",
                "Cost saving 31 USD (95% CI 22-44)",
            ],
        )

    def test_format_measure(self):
        measure = Measure(name="sensitivity", value=88.0, unit="%", cutoff=3.0)
        self.assertEqual(format_measure(measure), "Sensitivity 88% (cut-off 3)")
        measure = Measure(name="other:waiting time", value=12.5, ci_low=10)
        self.assertEqual(format_measure(measure), "waiting time 12.5 (95% CI 10-?)")
        self.assertEqual(format_number(0.1), "0.1")
        self.assertEqual(format_number(42.0), "42")


if __name__ == "__main__":
    unittest.main()
