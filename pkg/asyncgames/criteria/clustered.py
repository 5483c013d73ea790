"""
Clustered scheduling criterion.

An Opponent move and a Proponent move it immediately causes are played
synchronously. The resulting clusters may be permuted as wholes but never
split, which makes this criterion stricter than plain scheduling.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from ..asyncgraph import MovePartialOrder, Verdict
from ..config import AnalysisConfig
from ..games import Game, Play, Position
from ..reporter import CheckResult
from ..strategies import Strategy, causality_order
from .base import BaseCriterion, CriterionContext
from .scheduling import witness_order
from .switching import (
    Switching,
    SwitchingVerdicts,
    restrict_to_switching,
    run_per_switching,
    switching_label,
    tensor_switchings,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusteredPlay:
    """
    A play cut into contiguous blocks of synchronized moves.
    """
    clusters: Tuple[Tuple[str, ...], ...]

    @property
    def play(self) -> Play:
        return tuple(m for cluster in self.clusters for m in cluster)

    @property
    def classes(self) -> FrozenSet[FrozenSet[str]]:
        return frozenset(frozenset(c) for c in self.clusters)

    def equivalent(self, other: "ClusteredPlay") -> bool:
        """Equality up to permutation of whole clusters."""
        return self.classes == other.classes

    def __len__(self) -> int:
        return len(self.clusters)

    def __str__(self) -> str:
        return " ".join("[" + " ".join(c) + "]" for c in self.clusters)

    def to_dict(self) -> Dict:
        return {"clusters": [list(c) for c in self.clusters]}


def _cluster_graph(game: Game, order: MovePartialOrder) -> Tuple[List[FrozenSet[str]], nx.DiGraph]:
    sync = nx.Graph()
    sync.add_nodes_from(order.elements)
    sync.add_edges_from(
        (m, n) for m, n in order.covering_pairs() if game.is_opponent(m) and game.is_proponent(n)
    )
    blocks = [frozenset(c) for c in nx.connected_components(sync)]
    owner = {m: i for i, block in enumerate(blocks) for m in block}

    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(blocks)))
    dag.add_edges_from((owner[a], owner[b]) for a, b in order.pairs if owner[a] != owner[b])
    if nx.is_directed_acyclic_graph(dag):
        return blocks, dag

    # mutually dependent clusters are merged
    condensed = nx.condensation(dag)
    merged = [frozenset().union(*(blocks[i] for i in condensed.nodes[c]["members"])) for c in condensed.nodes]
    merged_dag = nx.DiGraph()
    merged_dag.add_nodes_from(condensed.nodes)
    merged_dag.add_edges_from(condensed.edges())
    return merged, merged_dag


def clusterize(strategy: Strategy, play: Sequence[str]) -> ClusteredPlay:
    """
    Reorganize a play into its sequence of maximal clusters.

    Synchronization is the equivalence generated by the covering pairs
    m < n of the causality order where m is an Opponent move and n a
    Proponent move. Clusters are ordered as close to the given play as the
    causality order allows; inside a cluster the play's order is kept.

    Args:
        strategy: An ingenuous receptive strategy.
        play: A play of the strategy.

    Returns:
        The clustered play.
    """
    play = tuple(play)
    if not play:
        return ClusteredPlay(())
    index = {m: i for i, m in enumerate(play)}
    order = causality_order(strategy, strategy.position_of(play))
    blocks, dag = _cluster_graph(strategy.game, order)
    ranked = nx.lexicographical_topological_sort(dag, key=lambda c: min(index[m] for m in blocks[c]))
    return ClusteredPlay(tuple(tuple(sorted(blocks[c], key=index.get)) for c in ranked))


def _schedulable(switched: Game, order: MovePartialOrder, blocks: List[FrozenSet[str]], dag: nx.DiGraph) -> bool:
    block_orders = [order.restrict(block) for block in blocks]

    def extend(position: Position, rest: FrozenSet[str], sub: MovePartialOrder):
        # all ways to play one cluster from a position
        if not rest:
            yield position
            return
        for m in sorted(rest):
            if any(sub.less(other, m) for other in rest if other != m):
                continue
            if switched.has_edge(position, m):
                yield from extend(position | {m}, rest - {m}, sub)

    def place(position: Position, remaining: FrozenSet[int]) -> bool:
        if not remaining:
            return True
        for c in sorted(remaining):
            if any(p in remaining for p in dag.predecessors(c)):
                continue
            for after in extend(position, blocks[c], block_orders[c]):
                if place(after, remaining - {c}):
                    return True
        return False

    return place(frozenset(), frozenset(range(len(blocks))))


def check_switching(strategy: Strategy, switching: Switching) -> Verdict:
    """Clustered scheduling check for a single switching."""
    switched = restrict_to_switching(strategy.game, switching)
    failing = []
    for position in strategy.positions:
        representative = min(strategy.plays_to(position), key=witness_order)
        order = causality_order(strategy, position)
        blocks, dag = _cluster_graph(strategy.game, order)
        if not _schedulable(switched, order, blocks, dag):
            failing.append(representative)
    if not failing:
        return Verdict(True)
    witness = min(failing, key=witness_order)
    return Verdict(False, witness, f"clusters {clusterize(strategy, witness)} cannot follow the switching")


def clustered_scheduling_check(
    strategy: Strategy,
    config: Optional[AnalysisConfig] = None,
) -> SwitchingVerdicts:
    """
    Check the clustered scheduling criterion for every tensor switching.

    Args:
        strategy: An ingenuous receptive strategy.
        config: Analysis configuration.

    Returns:
        One verdict per switching.
    """
    return run_per_switching(
        tensor_switchings(strategy.game),
        switching_label,
        lambda sw: check_switching(strategy, sw),
        config,
    )


class ClusteredCriterion(BaseCriterion):
    """
    Implements the clustered scheduling criterion.
    """

    order = 50

    def __init__(self):
        super().__init__()
        self.id = "clustered"
        self.name = "Clustered scheduling"
        self.description = """
        Every clustered play can be reorganized, permuting whole clusters
        only, into a play that respects each tensor switching.
        """

    def check(self, context: CriterionContext) -> List[CheckResult]:
        verdicts = clustered_scheduling_check(context.strategy, context.config)
        context.outcomes[self.id] = verdicts
        return [
            self.create_result(label, v.passed, None if v.witness is None else list(v.witness), v.message)
            for label, v in verdicts.verdicts.items()
        ]
