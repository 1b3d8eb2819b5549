# pylint: disable=R0801
# pylint: disable=missing-function-docstring
"""
Test loading and querying a corpus of GRASP records.
"""

import json
import logging
import shutil
import tempfile
import unittest
from pathlib import Path

from grasp.grade_codes import GradeCell
from grasp.grasp_catalog import (
    GraspCorpusError,
    GraspDuplicateSlugError,
    GraspQuarantinedRecordError,
    GraspRecordNotFoundError,
    QueryFilter,
    async_load_corpus,
    load_corpus,
    query_catalog,
)
from grasp.grasp_evidence import Automation, Category, Severity

from . import FIXTURES, async_test

_LOGGER = logging.getLogger(__name__)

ORDER = (
    "lace-index",
    "centor-score",
    "wells-criteria",
    "modified-early-warning-score",
    "ottawa-knee-rule",
)


class Test(unittest.TestCase):
    """
    Test GRASP catalog.
    """

    def setUp(self):
        self._directory = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with
        self.corpus = Path(self._directory.name) / "corpus"
        shutil.copytree(FIXTURES, self.corpus)

    def tearDown(self):
        self._directory.cleanup()

    def _slugs(self, query: QueryFilter) -> list[str]:
        return [entry.slug for entry in query_catalog(load_corpus(FIXTURES), query)]

    def test_load_fixtures(self):
        catalog = load_corpus(FIXTURES)
        self.assertEqual(set(catalog.records), set(ORDER))
        self.assertEqual(catalog.quarantined, ())
        self.assertEqual(catalog.diagnostics, ())
        self.assertEqual(catalog.slugs, ORDER)
        self.assertEqual(catalog.result("wells-criteria").grade, "A2")

    @async_test
    async def test_async_load(self):
        catalog = await async_load_corpus(str(FIXTURES))
        self.assertEqual(len(catalog.records), 5)
        self.assertEqual(catalog.root, FIXTURES)

    def test_load_is_deterministic(self):
        path = self.corpus / "tools" / "wells-criteria.json"
        path.write_bytes(path.read_bytes()[:200])
        first = load_corpus(self.corpus)
        second = load_corpus(self.corpus)
        self.assertEqual(first, second)
        self.assertEqual(list(first.records), list(second.records))
        self.assertEqual(first.diagnostics, second.diagnostics)
        self.assertEqual(first.results, second.results)

    def test_override_without_evidence(self):
        path = self.corpus / "tools" / "lace-index.json"
        document = json.loads(path.read_text(encoding="utf-8"))
        document["overrides"] = [
            {"cell": "A1", "direction": "positive", "justification": "Expert panel"}
        ]
        path.write_text(json.dumps(document), encoding="utf-8")
        catalog = load_corpus(self.corpus)
        self.assertEqual(catalog.quarantined, ("lace-index",))
        self.assertEqual(
            [diagnostic.message for diagnostic in catalog.diagnostics],
            ["overrides[0].cell: no evidence graded at cell A1"],
        )

    def test_empty_corpus(self):
        shutil.rmtree(self.corpus / "tools")
        (self.corpus / "catalog.json").unlink()
        catalog = load_corpus(self.corpus)
        self.assertEqual(dict(catalog.records), {})
        self.assertEqual(catalog.slugs, ())

    def test_missing_corpus(self):
        self.assertRaises(GraspCorpusError, load_corpus, self.corpus / "missing")

    def test_corrupted_record(self):
        path = self.corpus / "tools" / "wells-criteria.json"
        path.write_bytes(path.read_bytes()[:200])
        catalog = load_corpus(self.corpus)
        self.assertEqual(len(catalog.records), 4)
        self.assertEqual(catalog.quarantined, ("wells-criteria",))
        self.assertEqual(len(catalog.diagnostics), 1)
        self.assertEqual(catalog.diagnostics[0].path, path)
        self.assertIs(catalog.diagnostics[0].severity, Severity.ERROR)
        self.assertIn("Parse error", catalog.diagnostics[0].message)
        self.assertRaises(GraspQuarantinedRecordError, catalog.record, "wells-criteria")
        self.assertNotIn("wells-criteria", catalog.slugs)

    def test_unparsable_records(self):
        documents = {
            "deep-nesting": "[" * 100000,
            "huge-year": '{"profile": {"year": ' + "9" * 5000 + "}}",
        }
        for slug, text in documents.items():
            with self.subTest(slug=slug):
                path = self.corpus / "tools" / f"{slug}.json"
                path.write_text(text, encoding="utf-8")
                try:
                    catalog = load_corpus(self.corpus)
                finally:
                    path.unlink()
                self.assertEqual(len(catalog.records), 5)
                self.assertEqual(catalog.quarantined, (slug,))
                self.assertEqual(len(catalog.diagnostics), 1)
                self.assertEqual(catalog.diagnostics[0].path, path)
                self.assertIn("Parse error", catalog.diagnostics[0].message)

    def test_invalid_record(self):
        path = self.corpus / "tools" / "lace-index.json"
        path.write_text(
            path.read_text(encoding="utf-8").replace('"year": 2010', '"year": 1850'),
            encoding="utf-8",
        )
        catalog = load_corpus(self.corpus)
        self.assertEqual(catalog.quarantined, ("lace-index",))
        self.assertEqual(len(catalog.records), 4)
        self.assertEqual(len(catalog.diagnostics), 1)
        self.assertTrue(
            catalog.diagnostics[0].message.startswith("profile.year: year 1850 outside of 1900-")
        )

    def test_nested_layout(self):
        nested = self.corpus / "tools" / "cardiology"
        nested.mkdir()
        (self.corpus / "tools" / "wells-criteria.json").rename(nested / "wells-criteria.json")
        catalog = load_corpus(self.corpus)
        self.assertEqual(catalog.slugs, ORDER)

    def test_duplicate_slug(self):
        nested = self.corpus / "tools" / "copies"
        nested.mkdir()
        shutil.copy(self.corpus / "tools" / "lace-index.json", nested / "lace-index.json")
        with self.assertRaises(GraspDuplicateSlugError) as context:
            load_corpus(self.corpus)
        self.assertEqual(context.exception.slug, "lace-index")

    def test_invalid_slug(self):
        shutil.copy(
            self.corpus / "tools" / "lace-index.json", self.corpus / "tools" / "LACE_Index.json"
        )
        catalog = load_corpus(self.corpus)
        self.assertEqual(len(catalog.records), 5)
        self.assertEqual(catalog.quarantined, ("LACE_Index",))

    def test_manifest(self):
        (self.corpus / "catalog.json").write_text(
            '{"order": ["ottawa-knee-rule", "heart-score"]}', encoding="utf-8"
        )
        catalog = load_corpus(self.corpus)
        self.assertEqual(catalog.slugs[0], "ottawa-knee-rule")
        self.assertEqual(
            catalog.slugs[1:],
            (
                "centor-score",
                "lace-index",
                "modified-early-warning-score",
                "wells-criteria",
            ),
        )
        self.assertEqual(len(catalog.diagnostics), 1)
        self.assertIs(catalog.diagnostics[0].severity, Severity.WARNING)
        self.assertIn("heart-score", catalog.diagnostics[0].message)

    def test_broken_manifest(self):
        (self.corpus / "catalog.json").write_text('{"order": "lace-index"}', encoding="utf-8")
        catalog = load_corpus(self.corpus)
        self.assertEqual(len(catalog.records), 5)
        self.assertEqual(catalog.order, ())
        self.assertEqual(catalog.slugs, tuple(sorted(ORDER)))

    def test_unknown_record(self):
        catalog = load_corpus(FIXTURES)
        self.assertRaises(GraspRecordNotFoundError, catalog.record, "heart-score")
        self.assertRaises(GraspRecordNotFoundError, catalog.result, "heart-score")

    def test_query_everything(self):
        self.assertEqual(
            self._slugs(QueryFilter()),
            [
                "ottawa-knee-rule",
                "modified-early-warning-score",
                "wells-criteria",
                "centor-score",
                "lace-index",
            ],
        )

    def test_query_category(self):
        self.assertEqual(
            set(self._slugs(QueryFilter(category=Category.PROGNOSTIC))),
            {"lace-index", "modified-early-warning-score"},
        )

    def test_query_grades(self):
        query = QueryFilter(grades=frozenset({GradeCell.A1, GradeCell.A2}))
        self.assertEqual(
            self._slugs(query),
            ["ottawa-knee-rule", "modified-early-warning-score", "wells-criteria"],
        )

    def test_query_text(self):
        self.assertEqual(self._slugs(QueryFilter(clinical_area="CARDIO")), ["wells-criteria"])
        self.assertEqual(
            self._slugs(QueryFilter(endorsement="royal")),
            ["ottawa-knee-rule", "wells-criteria"],
        )

    def test_query_automation_and_year(self):
        self.assertEqual(
            self._slugs(QueryFilter(automation=Automation.AUTOMATED)),
            ["modified-early-warning-score"],
        )
        self.assertEqual(
            self._slugs(QueryFilter(min_year=2001, category=Category.PROGNOSTIC)),
            ["modified-early-warning-score", "lace-index"],
        )

    def test_query_entry(self):
        entry = query_catalog(load_corpus(FIXTURES), QueryFilter(clinical_area="ortho"))[0]
        self.assertEqual(entry.name, "Ottawa Knee Rule")
        self.assertEqual(entry.country, "Canada")
        self.assertEqual(entry.year, 1995)
        self.assertEqual(entry.grade, "A1")


if __name__ == "__main__":
    unittest.main()
