"""
Receptivity: every Opponent move available at a reached position is accepted.
"""

from typing import List

from ..reporter import CheckResult
from ..strategies import is_receptive
from .base import BaseCriterion, CriterionContext


class ReceptivityCriterion(BaseCriterion):

    order = 20

    def __init__(self):
        super().__init__()
        self.id = "receptivity"
        self.name = "Receptivity"
        self.description = "Opponent moves are never refused."

    def check(self, context: CriterionContext) -> List[CheckResult]:
        verdict = is_receptive(context.strategy)
        context.outcomes[self.id] = verdict
        witness = None if verdict.witness is None else [list(verdict.witness[0]), verdict.witness[1]]
        return [self.create_result("receptive", verdict.passed, witness, verdict.message)]
