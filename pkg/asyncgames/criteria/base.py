"""
Base class for strategy criteria.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..config import AnalysisConfig
from ..formula import Formula
from ..games import GameEnvironment
from ..reporter import CheckResult
from ..strategies import Strategy


@dataclass
class CriterionContext:
    """
    What a criterion checks, plus the outcomes of the criteria run so far.
    """
    strategy: Strategy
    formula: Optional[Formula] = None
    env: Optional[GameEnvironment] = None
    config: AnalysisConfig = field(default_factory=AnalysisConfig)
    outcomes: Dict[str, Any] = field(default_factory=dict)  # criterion ID -> structured verdict


class BaseCriterion(ABC):
    """
    Base class for all strategy criteria.

    Each criterion must implement the check method, store its structured
    verdict in the context and return one CheckResult per checked subject.
    """

    order = 100  # criteria run by increasing order

    def __init__(self):
        """Initialize the criterion."""
        # These will be set by implementing classes
        self.id = ""  # e.g., "scheduling"
        self.name = ""  # e.g., "Scheduling criterion"
        self.description = ""

    @abstractmethod
    def check(self, context: CriterionContext) -> List[CheckResult]:
        """
        Check the strategy of the context against this criterion.

        Args:
            context: Strategy, formula and configuration.

        Returns:
            List of CheckResult objects, failures included.
        """

    def create_result(self, subject: str, passed: bool, witness: Any = None, details: str = "") -> CheckResult:
        """
        Create a CheckResult for this criterion.

        Args:
            subject: What was checked (a flag, a switching, ...).
            passed: Outcome.
            witness: Counterexample when the check fails.
            details: Free-form explanation.

        Returns:
            CheckResult object.
        """
        return CheckResult(
            check_id=self.id,
            check_name=self.name,
            subject=subject,
            passed=passed,
            witness=witness,
            details=details,
        )
