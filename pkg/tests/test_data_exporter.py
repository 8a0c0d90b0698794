#!/usr/bin/env python3
"""
Unit tests for the result exporter
"""

import csv
import json
import unittest
from datetime import datetime
from pathlib import Path
from tempfile import TemporaryDirectory

from data_exporter import SWEEP_FIELDS, ResultExporter, dumps


class TestDumps(unittest.TestCase):
    def test_canonical_text(self):
        text = dumps({"b": 1, "a": [1, 2]})
        self.assertTrue(text.endswith("\n"))
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(text, dumps({"a": [1, 2], "b": 1}))


class TestResultExporter(unittest.TestCase):
    def setUp(self):
        self.tmp = TemporaryDirectory()
        self.exporter = ResultExporter(datetime(2024, 1, 2, 3, 4, 5), Path(self.tmp.name))
        self.document = {
            "family": "singer",
            "d": 2,
            "seed": 0,
            "rows": [
                {"family": "singer", "label": "q=2,d=2", "v": 7, "k": 3, "lambda": 1, "error": ""},
                {"family": "singer", "label": "4", "error": "q must be prime"},
            ],
        }

    def tearDown(self):
        self.tmp.cleanup()

    def test_session_id(self):
        self.assertEqual(self.exporter.session_id, "20240102_030405")

    def test_export_json(self):
        path = self.exporter.export_json({"x": 1}, Path(self.tmp.name) / "sub" / "out.json")
        self.assertEqual(json.loads(path.read_text(encoding="utf-8")), {"x": 1})

    def test_export_sweep_writes_both_files(self):
        files = self.exporter.export_sweep(self.document)

        self.assertEqual(files["csv"].name, "diffset_singer_sweep_20240102_030405.csv")
        self.assertEqual(files["json"].parent, self.exporter.json_dir)
        with open(files["csv"], newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        self.assertEqual(list(rows[0].keys()), SWEEP_FIELDS)
        self.assertEqual(rows[0]["v"], "7")
        self.assertEqual(rows[1]["error"], "q must be prime")
        self.assertEqual(rows[1]["v"], "")
        self.assertEqual(json.loads(files["json"].read_text(encoding="utf-8")), self.document)


if __name__ == "__main__":
    unittest.main()
