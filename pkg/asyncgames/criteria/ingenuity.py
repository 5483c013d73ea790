"""
Ingenuity: positionality, compatibility preservation, concurrent
determinism and courtesy.
"""

from typing import List

from ..reporter import CheckResult
from ..strategies import check_ingenuous
from .base import BaseCriterion, CriterionContext


class IngenuityCriterion(BaseCriterion):
    """
    Implements the five structural properties of ingenuous strategies.
    """

    order = 10

    def __init__(self):
        super().__init__()
        self.id = "ingenuity"
        self.name = "Ingenuity"
        self.description = """
        The strategy is positional, preserves forward and backward
        compatibility, is concurrently deterministic and courteous.
        """

    def check(self, context: CriterionContext) -> List[CheckResult]:
        report = check_ingenuous(context.strategy)
        context.outcomes[self.id] = report
        return [
            self.create_result(
                flag,
                getattr(report, flag),
                None if getattr(report, flag) else report.witnesses.get(flag),
            )
            for flag in report.FLAGS
        ]
