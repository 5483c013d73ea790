"""
Scheduling criterion.

Every play of the strategy must be homotopic to a play of the strategy
that respects the order chosen by the tensor switching.
"""

import logging
from typing import List, Optional

from ..asyncgraph import Verdict, canonical_key
from ..config import AnalysisConfig
from ..games import Play
from ..reporter import CheckResult
from ..strategies import Strategy
from .base import BaseCriterion, CriterionContext
from .switching import (
    Switching,
    SwitchingVerdicts,
    restrict_to_switching,
    run_per_switching,
    switching_label,
    tensor_switchings,
)

logger = logging.getLogger(__name__)


def _edges_of(play: Play):
    edges = []
    position = frozenset()
    for move in play:
        edges.append((position, move))
        position = position | {move}
    return tuple(edges)


def witness_order(play: Play):
    """Longest failing plays first, then canonical order."""
    return (-len(play), canonical_key(play))


def check_switching(strategy: Strategy, switching: Switching) -> Verdict:
    """Scheduling check for a single switching."""
    game = strategy.game
    switched = restrict_to_switching(game, switching)
    failing = []
    for play in strategy.plays:
        homotopy = game.graph.homotopy_class(game.path_of(play))
        position = strategy.position_of(play)
        if not any(
            switched.is_play(other) and _edges_of(other) in homotopy
            for other in strategy.plays_to(position)
        ):
            failing.append(play)
    if not failing:
        return Verdict(True)
    witness = min(failing, key=witness_order)
    return Verdict(False, witness, "not homotopic to any play of the strategy in the switched game")


def scheduling_check(
    strategy: Strategy,
    config: Optional[AnalysisConfig] = None,
) -> SwitchingVerdicts:
    """
    Check the scheduling criterion for every tensor switching.

    Args:
        strategy: The strategy.
        config: Analysis configuration.

    Returns:
        One verdict per switching, with the longest failing play as witness.
    """
    _ = strategy.game.graph  # built once, before worker threads share it
    return run_per_switching(
        tensor_switchings(strategy.game),
        switching_label,
        lambda sw: check_switching(strategy, sw),
        config,
    )


class SchedulingCriterion(BaseCriterion):
    """
    Implements the scheduling criterion over tensor switchings.
    """

    order = 30

    def __init__(self):
        super().__init__()
        self.id = "scheduling"
        self.name = "Scheduling"
        self.description = """
        Every play is homotopic, inside the strategy, to a play that respects
        the before/after order of each tensor switching.
        """

    def check(self, context: CriterionContext) -> List[CheckResult]:
        verdicts = scheduling_check(context.strategy, context.config)
        context.outcomes[self.id] = verdicts
        return [
            self.create_result(label, v.passed, None if v.witness is None else list(v.witness), v.message)
            for label, v in verdicts.verdicts.items()
        ]
