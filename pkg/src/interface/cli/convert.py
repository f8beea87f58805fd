"""Flatten JSON reports into CSV tables (emission only; JSON stays the round-trip format)."""

import io
import logging
from typing import Any, Dict, List, Optional, TextIO

import pandas as pd

from ...core.errors import MalformedReport

logger = logging.getLogger(__name__)

COLUMNS = ["suite", "case", "check", "l", "alpha", "numerator", "denominator", "ratio", "margin", "passed"]
FLOAT_FORMAT = "%.17g"


def _row(suite: Optional[str], report: Dict[str, Any]) -> Dict[str, Any]:
    if not isinstance(report, dict) or "check" not in report:
        raise MalformedReport(f"MalformedReport: case without a 'check' field: {report!r:.80}")
    return {
        "suite": suite,
        "case": report.get("case"),
        "check": report["check"],
        "l": report.get("l"),
        "alpha": report.get("alpha"),
        "numerator": report.get("numerator"),
        "denominator": report.get("denominator"),
        "ratio": report.get("ratio"),
        "margin": report.get("margin"),
        "passed": report.get("passed"),
    }


def _suite_rows(suite: Dict[str, Any]) -> List[Dict[str, Any]]:
    if not isinstance(suite, dict):
        raise MalformedReport(f"MalformedReport: expected a suite object, got {type(suite).__name__}")
    cases = suite.get("cases")
    if not isinstance(cases, list):
        raise MalformedReport("MalformedReport: suite 'cases' must be a list")
    return [_row(suite.get("suite"), c) for c in cases]


def report_rows(report: Any) -> List[Dict[str, Any]]:
    """
    One row per case. Accepts corpus reports ({"suites": [...]}), suite
    reports ({"suite", "cases"}), single check/ratio reports, search results
    ({"report": {...}}) and lists of any of these.
    """
    if isinstance(report, list):
        return [row for item in report for row in report_rows(item)]
    if not isinstance(report, dict):
        raise MalformedReport(f"MalformedReport: expected a JSON object, got {type(report).__name__}")
    if not report:
        return []
    if "suites" in report:
        if not isinstance(report["suites"], list):
            raise MalformedReport("MalformedReport: 'suites' must be a list")
        return [row for s in report["suites"] for row in _suite_rows(s)]
    if "cases" in report:
        return _suite_rows(report)
    if "check" in report:
        return [_row(None, report)]
    if isinstance(report.get("report"), dict):
        return report_rows(report["report"])
    raise MalformedReport(f"MalformedReport: unrecognised report with keys {sorted(report)}")


def to_frame(report: Any) -> pd.DataFrame:
    return pd.DataFrame(report_rows(report), columns=COLUMNS)


def to_csv(report: Any, out: Optional[TextIO] = None) -> str:
    """CSV text with floats at 17 significant digits; also written to `out` when given."""
    buffer = io.StringIO()
    to_frame(report).to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    text = buffer.getvalue()
    if out is not None:
        out.write(text)
    return text
