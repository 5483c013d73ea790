"""
Reporter module for analysis results.
"""

import json
from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional


@dataclass
class CheckResult:
    """
    Represents the outcome of one check.
    """
    check_id: str  # e.g., 'scheduling'
    check_name: str  # e.g., 'Scheduling criterion'
    subject: str  # what was checked, e.g. a switching or a position
    passed: bool
    witness: Any = None  # counterexample, JSON-friendly
    details: str = ""


class AnalysisReporter:
    """
    Reporter class for analysis results.

    This class collects check results, and provides methods to generate
    reports in various formats.
    """

    def __init__(self, title: str = "Analysis Report"):
        """Initialize the reporter."""
        self.title = title
        self.results: List[CheckResult] = []
        self.errors: Dict[str, str] = {}  # Check ID -> error message
        self.subject: Optional[str] = None
        self.extra: Dict[str, Any] = {}  # additional report sections
        self.execution_time: float = 0

    def clear(self):
        """Clear all results and errors."""
        self.results = []
        self.errors = {}
        self.subject = None
        self.extra = {}
        self.execution_time = 0

    def add_result(self, result: CheckResult):
        """
        Add a check result.

        Args:
            result: The result to add.
        """
        self.results.append(result)

    def add_error(self, check_id: str, error_message: str):
        """
        Add an error that occurred while checking.

        Args:
            check_id: ID of the check where the error occurred.
            error_message: Error message.
        """
        self.errors[check_id] = error_message

    def get_results_by_check(self) -> Dict[str, List[CheckResult]]:
        """
        Group results by check ID, keeping insertion order.

        Returns:
            Dictionary mapping check ID to list of results.
        """
        result = defaultdict(list)
        for item in self.results:
            result[item.check_id].append(item)
        return dict(result)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    @property
    def has_failures(self) -> bool:
        return any(not r.passed for r in self.results)

    @property
    def total_failures(self) -> int:
        return len(self.failures())

    @property
    def has_errors(self) -> bool:
        return len(self.errors) > 0

    @property
    def passed(self) -> bool:
        """True when every check passed and none raised."""
        return not self.has_failures and not self.has_errors

    def to_dict(self) -> Dict:
        """
        Convert report to dictionary.

        Returns:
            Dictionary representation of the report.
        """
        return {
            "title": self.title,
            "subject": self.subject,
            "passed": self.passed,
            "total_failures": self.total_failures,
            "results_by_check": {
                check: [asdict(r) for r in results]
                for check, results in self.get_results_by_check().items()
            },
            "errors": dict(sorted(self.errors.items())),
            **self.extra,
        }

    def to_json(self) -> str:
        """
        Convert report to JSON.

        Returns:
            JSON string representation of the report.
        """
        return json.dumps(self.to_dict(), indent=2, default=str)

    def to_markdown(self) -> str:
        """
        Generate a Markdown report.

        Returns:
            Markdown string representation of the report.
        """
        md = f"# {self.title}\n\n"

        md += "## Summary\n\n"
        md += f"- **Subject:** {self.subject or 'N/A'}\n"
        md += f"- **Verdict:** {'pass' if self.passed else 'fail'}\n"
        md += f"- **Failures:** {self.total_failures}\n\n"

        if self.has_errors:
            md += "## Errors\n\n"
            for check_id, error_message in sorted(self.errors.items()):
                md += f"- **{check_id}:** {error_message}\n"
            md += "\n"

        md += "## Results\n\n"
        md += "| Check | Subject | Result | Witness |\n"
        md += "|-------|---------|--------|---------|\n"
        for item in self.results:
            witness = "" if item.witness is None else f"`{item.witness}`"
            md += f"| {item.check_name} | {item.subject} | {'pass' if item.passed else 'FAIL'} | {witness} |\n"
        md += "\n"

        for key, value in self.extra.items():
            md += f"## {key.replace('_', ' ').capitalize()}\n\n"
            if isinstance(value, dict):
                for name, entry in value.items():
                    md += f"- **{name}:** {entry}\n"
            elif isinstance(value, list):
                for entry in value:
                    md += f"- {entry}\n"
            else:
                md += f"{value}\n"
            md += "\n"
        return md

    def summary(self) -> str:
        """
        Generate a plain-text summary, one line per check result.

        Returns:
            String containing the summary.
        """
        summary = f"{self.title}\n"
        summary += "=" * len(self.title) + "\n\n"
        if self.subject:
            summary += f"Subject: {self.subject}\n\n"

        width = max([len(r.check_name) for r in self.results] + [5])
        for item in self.results:
            mark = "pass" if item.passed else "FAIL"
            line = f"{item.check_name.ljust(width)}  {item.subject:<16} {mark}"
            if not item.passed and item.witness is not None:
                line += f"  witness: {item.witness}"
            elif item.details:
                line += f"  ({item.details})"
            summary += line + "\n"

        for key, value in self.extra.items():
            summary += f"\n{key.replace('_', ' ').capitalize()}:\n"
            if isinstance(value, dict):
                for name, entry in value.items():
                    summary += f"  {name}: {entry}\n"
            elif isinstance(value, list):
                for entry in value:
                    summary += f"  {entry}\n"
            else:
                summary += f"  {value}\n"

        if self.has_errors:
            summary += "\nErrors:\n"
            for check_id, error_message in sorted(self.errors.items()):
                summary += f"- {check_id}: {error_message}\n"

        summary += f"\nVerdict: {'pass' if self.passed else 'fail'}\n"
        return summary
