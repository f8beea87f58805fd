"""
Unit tests for the report models.
"""

import json
import math
import sys
import unittest
import warnings
from pathlib import Path

import numpy as np

# Add project root to path for testing
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.generators import sphere_sample  # noqa: E402
from src.core.markov_chain import random_weight_chain  # noqa: E402
from src.core.reports import CheckReport, RatioReport, SuiteReport, dumps_json  # noqa: E402
from src.verify import suites  # noqa: E402


class TestReportModels(unittest.TestCase):
    """Numpy scalars coming out of the numerics become plain Python values."""

    def test_numpy_bool_verdict(self):
        margin = np.float64(-0.5)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            report = CheckReport(check="demo", passed=margin >= -1.0, margin=margin, tolerance=1.0)
        self.assertIs(type(report.passed), bool)
        self.assertIs(report.to_dict()["passed"], True)

    def test_suite_verdict_plain(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            report = suites.verify_lemma_half(sphere_sample(6, seed=0), random_weight_chain(6, seed=0), L=4)
        self.assertIs(type(report.passed), bool)
        self.assertTrue(all(type(c.passed) is bool for c in report.cases))

    def test_unverified_cases_not_counted(self):
        good = CheckReport(check="a", passed=True, margin=1.0, tolerance=0.0)
        bad = CheckReport(check="b", passed=False, margin=-2.0, tolerance=0.0, tags=["hypothesis-unverified"])
        suite = SuiteReport.from_cases("demo", [good, bad])
        self.assertTrue(suite.passed)
        self.assertEqual(suite.worst_margin, 1.0)

    def test_ratio_report_from_sums(self):
        report = RatioReport.from_sums("demo", 9.0, 4.0)
        self.assertEqual(report.ratio, 2.25)
        self.assertEqual(report.sqrt_ratio, 1.5)

    def test_json_floats_keep_seventeen_digits(self):
        data = {"x": 0.1, "third": 1 / 3, "n": 3, "flag": True, "label": "a", "inf": math.inf,
                "nested": [np.float64(2.5e-20)]}
        text = dumps_json(data)
        self.assertIn("0.10000000000000001", text)
        self.assertIn("0.33333333333333331", text)
        self.assertIn("e-20", text)
        self.assertEqual(json.loads(text), data)
        report = CheckReport(check="demo", passed=True, margin=0.1, tolerance=0.0)
        self.assertIn("0.10000000000000001", report.to_json())


if __name__ == '__main__':
    unittest.main()
