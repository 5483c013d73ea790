"""
Finite event structures with binary hereditary conflict.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from .asyncgraph import MovePartialOrder, canonical_sorted
from .errors import ValidationError

logger = logging.getLogger(__name__)

Configuration = FrozenSet[str]


@dataclass(frozen=True)
class EventStructure:
    """
    Events with a causality order and a binary conflict relation.

    Build instances with EventStructure.build, which closes causality
    transitively and conflict hereditarily.
    """
    events: Tuple[str, ...]
    causality: FrozenSet[Tuple[str, str]]  # strict pairs a < b, transitively closed
    conflict: FrozenSet[FrozenSet[str]]  # symmetric pairs, hereditary
    polarity: Tuple[Tuple[str, int], ...] = ()  # event -> -1 (Opponent) / +1 (Proponent)
    labels: Tuple[Tuple[str, str], ...] = ()  # event -> move address

    @classmethod
    def build(
        cls,
        events: Iterable[str],
        causes: Iterable[Tuple[str, str]] = (),
        conflicts: Iterable[Tuple[str, str]] = (),
        polarity: Optional[Dict[str, int]] = None,
        labels: Optional[Dict[str, str]] = None,
    ) -> "EventStructure":
        """
        Validate and close a declared event structure.

        Args:
            events: Event names, in declaration order.
            causes: Declared pairs (a, b) meaning a precedes b.
            conflicts: Declared conflicting pairs.
            polarity: Optional polarity of each event.
            labels: Optional move address of each event.

        Returns:
            The closed event structure.

        Raises:
            ValidationError: On unknown events, causality cycles or an
                event in conflict with its own causal history.
        """
        events = tuple(events)
        if len(set(events)) != len(events):
            raise ValidationError("Duplicate event names")
        known = set(events)
        causes = list(causes)
        conflicts = list(conflicts)
        for a, b in causes + conflicts:
            for name in (a, b):
                if name not in known:
                    raise ValidationError(f"Unknown event: {name}")

        order = MovePartialOrder.from_relation(events, causes)
        above: Dict[str, Set[str]] = {e: {e} for e in events}
        for a, b in order.pairs:
            above[a].add(b)

        closed: Set[FrozenSet[str]] = set()
        for a, b in conflicts:
            if a == b:
                raise ValidationError(f"Event {a} conflicts with itself")
            for x in above[a]:
                for y in above[b]:
                    closed.add(frozenset((x, y)))
        for pair in closed:
            if len(pair) == 1:
                (name,) = tuple(pair)
                raise ValidationError(f"Conflict violating heredity: {name} conflicts with its own history")
            a, b = tuple(pair)
            if order.less(a, b) or order.less(b, a):
                raise ValidationError(f"Conflict violating heredity: {a} # {b} but they are causally ordered")

        polarity = dict(polarity or {})
        labels = dict(labels or {})
        for name in list(polarity) + list(labels):
            if name not in known:
                raise ValidationError(f"Unknown event: {name}")
        return cls(
            events,
            order.pairs,
            frozenset(closed),
            tuple(sorted(polarity.items())),
            tuple(sorted(labels.items())),
        )

    @property
    def polarity_map(self) -> Dict[str, int]:
        return dict(self.polarity)

    @property
    def label_map(self) -> Dict[str, str]:
        return dict(self.labels)

    def label(self, event: str) -> str:
        return self.label_map.get(event, event)

    def order(self) -> MovePartialOrder:
        return MovePartialOrder(tuple(canonical_sorted(self.events)), self.causality)

    def causes_of(self, event: str) -> Set[str]:
        """Strict causal history of an event."""
        return {a for a, b in self.causality if b == event}

    def immediate_causes(self, event: str) -> List[str]:
        """Covering predecessors, in declaration order."""
        history = self.causes_of(event)
        direct = {a for a in history if not any((a, b) in self.causality for b in history)}
        return [e for e in self.events if e in direct]

    def in_conflict(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.conflict

    def minimal_conflicts(self) -> List[Tuple[str, str]]:
        """Conflicting pairs not inherited from a conflict lower down, in declaration order."""
        index = {e: i for i, e in enumerate(self.events)}
        result = []
        for pair in self.conflict:
            a, b = sorted(pair, key=index.get)
            inherited = any(
                self.in_conflict(x, y)
                for x in self.causes_of(a) | {a}
                for y in self.causes_of(b) | {b}
                if (x, y) != (a, b)
            )
            if not inherited:
                result.append((a, b))
        return sorted(result, key=lambda p: (index[p[0]], index[p[1]]))

    def is_configuration(self, events: Iterable[str]) -> bool:
        events = set(events)
        for e in events:
            if not self.causes_of(e) <= events:
                return False
        return not any(self.in_conflict(a, b) for a, b in combinations(events, 2))

    def enabled(self, config: Configuration) -> List[str]:
        """Events that extend a configuration to a configuration."""
        result = []
        for e in self.events:
            if e in config:
                continue
            if not self.causes_of(e) <= config:
                continue
            if any(self.in_conflict(e, other) for other in config):
                continue
            result.append(e)
        return result


def configurations(structure: EventStructure) -> Set[Configuration]:
    """
    Enumerate the configurations of an event structure.

    Args:
        structure: The event structure.

    Returns:
        All downward-closed conflict-free subsets.
    """
    found: Set[Configuration] = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        config = frontier.pop()
        for e in structure.enabled(config):
            bigger = config | {e}
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    logger.debug(f"Enumerated {len(found)} configurations over {len(structure.events)} events")
    return found


def game_of(structure: EventStructure, name: str = ""):
    """
    Generate the asynchronous game of an event structure.

    Positions are configurations, moves are the events, and every square
    of configurations is a tile.

    Raises:
        ValidationError: If some event has no polarity.
    """
    from .games import Game

    polarity = structure.polarity_map
    missing = [e for e in structure.events if e not in polarity]
    if missing:
        raise ValidationError(f"Events without polarity: {', '.join(missing)}")
    for e in structure.events:
        if "." in e:
            raise ValidationError(f"Event names of game structures cannot contain '.': {e}")
    configs = configurations(structure)
    return Game(configs, polarity, name=name)


def structure_of(game) -> EventStructure:
    """
    Read an event structure back from a game whose positions are move sets.

    Causality: m < n when every position holding n holds m. Conflict: no
    position holds both.

    Raises:
        ValidationError: If the configurations of the derived structure are
            not exactly the positions of the game.
    """
    moves = canonical_sorted(game.moves)
    positions = game.positions
    causes = []
    conflicts = []
    for m in moves:
        for n in moves:
            if m == n:
                continue
            holding_n = [x for x in positions if n in x]
            if holding_n and all(m in x for x in holding_n):
                causes.append((m, n))
    for m, n in combinations(moves, 2):
        if not any(m in x and n in x for x in positions):
            conflicts.append((m, n))
    structure = EventStructure.build(moves, causes, _minimal_pairs(causes, conflicts), polarity=game.polarity_map)
    if configurations(structure) != set(positions):
        raise ValidationError(f"Game {game.name or '<anonymous>'} is not generated by an event structure")
    return structure


def _minimal_pairs(causes: List[Tuple[str, str]], conflicts: List[Tuple[str, str]]) -> List[Tuple[str, str]]:
    graph = nx.DiGraph(causes)
    below = {n: nx.ancestors(graph, n) if n in graph else set() for pair in conflicts for n in pair}
    pairs = set(frozenset(p) for p in conflicts)
    result = []
    for a, b in conflicts:
        inherited = any(
            frozenset((x, y)) in pairs
            for x in below[a] | {a}
            for y in below[b] | {b}
            if (x, y) != (a, b)
        )
        if not inherited:
            result.append((a, b))
    return result


def disjoint_union(first: EventStructure, second: EventStructure) -> EventStructure:
    """
    Put two event structures side by side, prefixing names with L and R.
    """
    def rename(structure, prefix):
        return {e: f"{prefix}{e}" for e in structure.events}

    left, right = rename(first, "L_"), rename(second, "R_")
    events = [left[e] for e in first.events] + [right[e] for e in second.events]
    causes = [(left[a], left[b]) for a, b in first.causality] + [(right[a], right[b]) for a, b in second.causality]
    conflicts = [tuple(left[e] for e in sorted(p)) for p in first.conflict]
    conflicts += [tuple(right[e] for e in sorted(p)) for p in second.conflict]
    polarity = {left[e]: s for e, s in first.polarity}
    polarity.update({right[e]: s for e, s in second.polarity})
    return EventStructure.build(events, causes, conflicts, polarity=polarity)
