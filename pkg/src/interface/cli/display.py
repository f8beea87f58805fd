"""Display utilities for human-readable CLI summaries.

Everything here prints to stderr; stdout is reserved for reports.
"""

from typing import Any, Dict

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text


class ReportDisplay:
    """Display manager for report summaries."""

    # Color scheme
    PASS_COLOR = "green"
    FAIL_COLOR = "red"
    UNVERIFIED_COLOR = "yellow"
    INFO_COLOR = "blue"
    ERROR_COLOR = "red"

    def __init__(self, console: Console = None, quiet: bool = False):
        self.console = console or Console(stderr=True)
        self.quiet = quiet

    def _verdict(self, passed: bool) -> Text:
        return Text("pass", style=self.PASS_COLOR) if passed else Text("FAIL", style=f"bold {self.FAIL_COLOR}")

    def show_error(self, message: str):
        """Display error message (always shown)."""
        self.console.print(f"[{self.ERROR_COLOR}]error:[/{self.ERROR_COLOR}] {message}", highlight=False)

    def show_info(self, message: str):
        if not self.quiet:
            self.console.print(f"[{self.INFO_COLOR}]{message}[/{self.INFO_COLOR}]", highlight=False)

    def show_check(self, report: Dict[str, Any]):
        """One-line verdict for a single check."""
        if self.quiet:
            return
        line = Text(f"{report['check']}: ")
        line.append_text(self._verdict(report["passed"]))
        line.append(f"  margin {report['margin']:.6g} (tolerance {report['tolerance']:.3g})")
        self.console.print(line)

    def show_ratio(self, report: Dict[str, Any]):
        if self.quiet:
            return
        self.console.print(
            f"{report['check']}: K^2 >= {report['ratio']:.10g}  (K >= {report['sqrt_ratio']:.10g})",
            highlight=False,
        )

    def show_suites(self, report: Dict[str, Any]):
        """Table of suites with case counts and worst margins."""
        if self.quiet:
            return
        table = Table(title="Verification", box=box.SIMPLE_HEAVY)
        table.add_column("suite", style="bold")
        table.add_column("cases", justify="right")
        table.add_column("report-only", justify="right", style=self.UNVERIFIED_COLOR)
        table.add_column("failed", justify="right")
        table.add_column("worst margin", justify="right")
        table.add_column("verdict")
        for suite in report.get("suites", []):
            cases = suite.get("cases", [])
            unverified = sum(1 for c in cases if "hypothesis-unverified" in c.get("tags", []))
            failed = sum(1 for c in cases if not c["passed"] and "hypothesis-unverified" not in c.get("tags", []))
            worst = suite.get("worst_margin")
            table.add_row(suite["suite"], str(len(cases)), str(unverified), str(failed),
                          "-" if worst is None else f"{worst:.3g}", self._verdict(suite["passed"]))
        self.console.print(table)
        style = self.PASS_COLOR if report.get("passed") else self.FAIL_COLOR
        self.console.print(Panel(Text("all suites passed" if report.get("passed") else "some suites failed",
                                      style=f"bold {style}"), border_style=style, box=box.ROUNDED))

    def show(self, report: Dict[str, Any]):
        """Pick a summary for any report shape."""
        if "suites" in report:
            self.show_suites(report)
        elif "cases" in report:
            self.show_suites({"suites": [report], "passed": report.get("passed")})
        elif "passed" in report and "margin" in report:
            self.show_check(report)
        elif "sqrt_ratio" in report:
            self.show_ratio(report)
        elif isinstance(report.get("report"), dict):
            self.show(report["report"])
