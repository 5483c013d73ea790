"""
Innocence checking: runs every criterion on a strategy.
"""

import importlib
import inspect
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from .asyncgraph import Verdict
from .config import AnalysisConfig
from .criteria import BaseCriterion, CriterionContext
from .criteria.switching import SwitchingVerdicts
from .formula import Formula
from .games import GameEnvironment
from .reporter import AnalysisReporter
from .strategies import IngenuityReport, Strategy

# Modules of the criteria package that hold helpers, not criteria
_HELPER_MODULES = {"__init__", "base", "switching"}


@dataclass
class InnocenceReport:
    """
    Verdicts of all criteria on one strategy.

    A criterion that was not run is None. A verdict that depends on it is
    None too, unless another criterion it depends on already failed.
    """
    ingenuous: Optional[IngenuityReport] = None
    receptive: Optional[Verdict] = None
    scheduling: Optional[SwitchingVerdicts] = None
    directed_acyclicity: Optional[SwitchingVerdicts] = None  # None unless the formula is MLL with lifts
    clustered: Optional[SwitchingVerdicts] = None
    errors: Dict[str, str] = field(default_factory=dict)  # criterion ID -> error message
    reporter: Optional[AnalysisReporter] = None

    @staticmethod
    def _holds(value) -> bool:
        if isinstance(value, IngenuityReport):
            return value.ingenuous
        return bool(value)

    def _conjunction(self, *parts) -> Optional[bool]:
        if self.errors or any(v is not None and not self._holds(v) for v in parts):
            return False
        if any(v is None for v in parts):
            return None
        return True

    @property
    def asynchronous(self) -> Optional[bool]:
        """Ingenuous, receptive, and passing the scheduling criterion; None if undetermined."""
        return self._conjunction(self.ingenuous, self.receptive, self.scheduling)

    @property
    def innocent(self) -> Optional[bool]:
        """Ingenuous, receptive, and passing the clustered criterion; None if undetermined."""
        return self._conjunction(self.ingenuous, self.receptive, self.clustered)

    @property
    def criteria_agree(self) -> Optional[bool]:
        """Whether scheduling and directed acyclicity give the same overall verdict."""
        if self.scheduling is None or self.directed_acyclicity is None:
            return None
        return self.scheduling.passed == self.directed_acyclicity.passed

    def to_dict(self) -> Dict:
        def part(value):
            if value is None:
                return None
            if isinstance(value, Verdict):
                return {"passed": value.passed, "witness": None if value.witness is None else str(value.witness)}
            return value.to_dict()

        return {
            "ingenuous": part(self.ingenuous),
            "receptive": part(self.receptive),
            "scheduling": part(self.scheduling),
            "directed_acyclicity": part(self.directed_acyclicity),
            "clustered": part(self.clustered),
            "asynchronous": self.asynchronous,
            "innocent": self.innocent,
            "errors": dict(sorted(self.errors.items())),
        }


class InnocenceChecker:
    """
    Main checker class for strategy criteria.

    This class loads all criteria modules and runs them against a strategy
    and the formula of its game.
    """

    def __init__(self, config: Optional[AnalysisConfig] = None):
        """
        Initialize the checker.

        Args:
            config: Analysis configuration (criteria selection, parallelism).
        """
        self.config = config or AnalysisConfig()
        self.logger = logging.getLogger(__name__)
        self.reporter = AnalysisReporter("Innocence Report")
        self.criteria = self._load_criteria()

    def _load_criteria(self) -> List[BaseCriterion]:
        """
        Load all criteria modules selected by the configuration.

        Returns:
            List of initialized criteria objects, in running order.
        """
        criteria = []
        criteria_dir = Path(__file__).parent / "criteria"

        for module_file in sorted(criteria_dir.glob("*.py")):
            if module_file.stem in _HELPER_MODULES:
                continue

            module_name = f".criteria.{module_file.stem}"
            try:
                module = importlib.import_module(module_name, package="asyncgames")

                for name, obj in inspect.getmembers(module):
                    if (inspect.isclass(obj) and issubclass(obj, BaseCriterion) and
                            obj is not BaseCriterion and obj.__module__ == module.__name__):
                        criterion = obj()
                        if self.config.wants(criterion.id):
                            criteria.append(criterion)
                            self.logger.debug(f"Loaded criterion: {criterion.id}")

            except (ImportError, AttributeError) as e:
                self.logger.error(f"Error loading criterion module {module_name}: {e}")

        criteria.sort(key=lambda c: (c.order, c.id))
        self.logger.info(f"Loaded {len(criteria)} criteria")
        return criteria

    def check(
        self,
        strategy: Strategy,
        formula: Optional[Formula] = None,
        env: Optional[GameEnvironment] = None,
    ) -> InnocenceReport:
        """
        Run every loaded criterion on a strategy.

        Args:
            strategy: The strategy to check.
            formula: Formula of the strategy's game; defaults to the
                strategy's own formula.
            env: Environment binding the formula's identifiers.

        Returns:
            The innocence report, with its filled reporter.
        """
        start = time.time()
        self.reporter.clear()
        self.reporter.subject = strategy.name or repr(strategy)
        context = CriterionContext(strategy, formula or strategy.formula, env, self.config)

        for criterion in self.criteria:
            try:
                self.logger.debug(f"Checking criterion {criterion.id}: {criterion.name}")
                for result in criterion.check(context):
                    self.reporter.add_result(result)
            except Exception as e:
                self.logger.error(f"Error checking criterion {criterion.id}: {e}")
                self.reporter.add_error(criterion.id, str(e))

        report = InnocenceReport(
            ingenuous=context.outcomes.get("ingenuity"),
            receptive=context.outcomes.get("receptivity"),
            scheduling=context.outcomes.get("scheduling"),
            directed_acyclicity=context.outcomes.get("acyclicity"),
            clustered=context.outcomes.get("clustered"),
            errors=dict(self.reporter.errors),
            reporter=self.reporter,
        )
        self.reporter.extra["verdict"] = {
            "asynchronous": report.asynchronous,
            "innocent": report.innocent,
        }
        self.reporter.execution_time = time.time() - start
        return report


def innocence_check(
    strategy: Strategy,
    formula: Optional[Formula] = None,
    env: Optional[GameEnvironment] = None,
    config: Optional[AnalysisConfig] = None,
) -> InnocenceReport:
    """
    Check whether a strategy is innocent.

    Args:
        strategy: The strategy.
        formula: Formula of its game.
        env: Environment for the formula's identifiers.
        config: Analysis configuration.

    Returns:
        The report; its innocent property is the final verdict.
    """
    return InnocenceChecker(config).check(strategy, formula, env)
