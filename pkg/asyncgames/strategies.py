"""
Strategies as prefix-closed sets of plays, with their structural checks.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from .asyncgraph import AsyncGraph, Edge, MovePartialOrder, Verdict, canonical_key, canonical_sorted
from .errors import PreconditionError, ValidationError
from .events import EventStructure
from .formula import Formula
from .games import Game, GameEdge, Play, Position, format_position

logger = logging.getLogger(__name__)


class Strategy:
    """
    A strategy on a game, given by its prefix-closed set of plays.

    The positions and edges traversed by the plays form the subgraph G_sigma.
    """

    def __init__(
        self,
        game: Game,
        plays: Iterable[Play],
        structure: Optional[EventStructure] = None,
        name: str = "",
        formula: Optional[Formula] = None,
    ):
        self.logger = logging.getLogger(__name__)
        self.game = game
        self.structure = structure  # labelled event structure presentation, if any
        self.name = name
        self.formula = formula
        self.plays: FrozenSet[Play] = frozenset(tuple(p) for p in plays) | {()}

        self._position: Dict[Play, Position] = {}
        self._by_position: Dict[Position, List[Play]] = defaultdict(list)
        self._next: Dict[Play, Set[str]] = defaultdict(set)
        self.edges: Set[GameEdge] = set()
        for play in canonical_sorted(self.plays):
            position = game.position_of(play)
            self._position[play] = position
            self._by_position[position].append(play)
            if play:
                if play[:-1] not in self.plays:
                    raise ValidationError(f"Play set is not prefix-closed at {play}")
                self._next[play[:-1]].add(play[-1])
                self.edges.add((self._position[play[:-1]], play[-1]))
        self.positions: FrozenSet[Position] = frozenset(self._by_position)

    @classmethod
    def from_event_structure(
        cls,
        game: Game,
        structure: EventStructure,
        name: str = "",
        formula: Optional[Formula] = None,
    ) -> "Strategy":
        """
        Materialize the plays of a labelled event structure.

        A play is the label sequence of a linearization of a configuration,
        kept as long as every label is available in the game.

        Raises:
            ValidationError: If an event has no label or labels an unknown move.
        """
        labels = structure.label_map
        for event in structure.events:
            if event not in labels:
                raise ValidationError(f"Event {event} has no move address")
            if labels[event] not in game.polarity_map:
                raise ValidationError(f"Unknown move address: {labels[event]}")

        plays: Set[Play] = set()
        stack = [(frozenset(), (), game.root)]
        seen = set()
        while stack:
            config, play, position = stack.pop()
            if (config, play) in seen:
                continue
            seen.add((config, play))
            plays.add(play)
            for event in structure.enabled(config):
                move = labels[event]
                if game.has_edge(position, move):
                    stack.append((config | {event}, play + (move,), position | {move}))
        logger.debug(f"Strategy {name or '?'} has {len(plays)} plays")
        return cls(game, plays, structure=structure, name=name, formula=formula)

    @classmethod
    def from_plays(
        cls,
        game: Game,
        plays: Iterable[Iterable[str]],
        name: str = "",
        formula: Optional[Formula] = None,
    ) -> "Strategy":
        """
        Build a strategy from explicit plays, closing them under prefixes.

        Raises:
            ValidationError: If a sequence is not a play of the game.
        """
        closed: Set[Play] = set()
        for play in plays:
            play = tuple(play)
            game.position_of(play)
            for i in range(len(play) + 1):
                closed.add(play[:i])
        return cls(game, closed, name=name, formula=formula)

    def __contains__(self, play: Iterable[str]) -> bool:
        return tuple(play) in self.plays

    def position_of(self, play: Play) -> Position:
        return self._position[tuple(play)]

    def next_moves(self, play: Play) -> Set[str]:
        return set(self._next.get(tuple(play), ()))

    def plays_to(self, position: Position) -> List[Play]:
        return list(self._by_position.get(frozenset(position), ()))

    def reaches(self, position: Position) -> bool:
        return frozenset(position) in self._by_position

    def moves_from(self, position: Position) -> List[str]:
        """Moves of G_sigma leaving a position."""
        return sorted(m for x, m in self.edges if x == position)

    def maximal_positions(self) -> List[Position]:
        """Reached positions with no outgoing edge in G_sigma."""
        leaving = {x for x, _ in self.edges}
        return canonical_sorted(x for x in self.positions if x not in leaving)

    def subgraph(self) -> AsyncGraph:
        """G_sigma with the game tiles whose four edges it contains."""
        edges = [Edge((x, m), x, x | {m}) for x, m in self.edges]
        tiles = [
            (((x, m), (x | {m}, n)), ((x, n), (x | {n}, m)))
            for x, m, n in self.game.squares()
            if self._holds_square(x, m, n)
        ]
        return AsyncGraph(self.positions, edges, tiles)

    def _holds_square(self, x: Position, m: str, n: str) -> bool:
        return all(edge in self.edges for edge in _square_edges(x, m, n))

    def __repr__(self) -> str:
        return f"Strategy({self.name or '?'}: {len(self.plays)} plays on {self.game!r})"


def _square_edges(x: Position, m: str, n: str) -> Tuple[GameEdge, ...]:
    return ((x, m), (x, n), (x | {m}, n), (x | {n}, m))


def _edge_tuple(play: Play) -> Tuple[GameEdge, ...]:
    edges = []
    position: Position = frozenset()
    for move in play:
        edges.append((position, move))
        position = position | {move}
    return tuple(edges)


@dataclass
class IngenuityReport:
    """
    The five structural properties of an ingenuous strategy.
    """
    positional: bool = True
    forward_preservation: bool = True
    backward_preservation: bool = True
    deterministic: bool = True
    courteous: bool = True
    witnesses: Dict[str, object] = field(default_factory=dict)  # flag name -> counterexample

    FLAGS = ("positional", "forward_preservation", "backward_preservation", "deterministic", "courteous")

    @property
    def ingenuous(self) -> bool:
        return all(getattr(self, flag) for flag in self.FLAGS)

    def failed(self) -> List[str]:
        return [flag for flag in self.FLAGS if not getattr(self, flag)]

    def to_dict(self) -> Dict:
        result = {flag: getattr(self, flag) for flag in self.FLAGS}
        result["ingenuous"] = self.ingenuous
        result["witnesses"] = {k: repr(v) for k, v in sorted(self.witnesses.items())}
        return result


def _check_positional(strategy: Strategy, report: IngenuityReport):
    graph = strategy.game.graph
    for position in canonical_sorted(strategy.positions):
        group = canonical_sorted(strategy.plays_to(position))
        remaining = list(group)
        while remaining:
            head = remaining.pop(0)
            cls = graph.homotopy_class(strategy.game.path_of(head))
            expected = strategy.next_moves(head)
            rest = []
            for other in remaining:
                if _edge_tuple(other) not in cls:
                    rest.append(other)
                    continue
                differ = expected ^ strategy.next_moves(other)
                if differ:
                    report.positional = False
                    report.witnesses["positional"] = (head, other, min(differ))
                    return
            remaining = rest


def check_ingenuous(strategy: Strategy) -> IngenuityReport:
    """
    Compute the positionality, preservation, determinism and courtesy flags.

    Args:
        strategy: The strategy to check.

    Returns:
        Report with one flag per property and a witness for each failure.
    """
    report = IngenuityReport()
    game = strategy.game
    edges = strategy.edges
    _check_positional(strategy, report)

    for x, m, n in game.squares():
        e_m, e_n, e_mn, e_nm = _square_edges(x, m, n)
        whole = all(e in edges for e in (e_m, e_n, e_mn, e_nm))
        if report.forward_preservation and e_m in edges and e_n in edges and not whole:
            report.forward_preservation = False
            report.witnesses["forward_preservation"] = (format_position(x), m, n)
        if report.backward_preservation and e_mn in edges and e_nm in edges and not whole:
            report.backward_preservation = False
            report.witnesses["backward_preservation"] = (format_position(x), m, n)
        for first, second, e_first, e_then in ((m, n, e_m, e_mn), (n, m, e_n, e_nm)):
            if not report.courteous or whole:
                continue
            if game.is_proponent(first) and e_first in edges and e_then in edges:
                report.courteous = False
                report.witnesses["courteous"] = (format_position(x), first, second)

    for x in canonical_sorted(strategy.positions):
        available = strategy.moves_from(x)
        for m in available:
            if not game.is_proponent(m):
                continue
            for n in available:
                if n == m:
                    continue
                if (x | {m}, n) not in edges or (x | {n}, m) not in edges:
                    report.deterministic = False
                    report.witnesses["deterministic"] = (format_position(x), m, n)
                    break
            if not report.deterministic:
                break
        if not report.deterministic:
            break

    logger.debug(f"Ingenuity of {strategy.name or '?'}: {report.to_dict()}")
    return report


def is_receptive(strategy: Strategy) -> Verdict:
    """
    Check that every Opponent move available at a reached position is accepted.

    Returns:
        Verdict whose witness is (play, refused move).
    """
    game = strategy.game
    for play in canonical_sorted(strategy.plays):
        position = strategy.position_of(play)
        for move in game.moves_at(position):
            if game.is_opponent(move) and play + (move,) not in strategy.plays:
                return Verdict(False, (play, move), f"Opponent move {move} refused after {play}")
    return Verdict(True)


def causality_order(strategy: Strategy, position: Iterable[str]) -> MovePartialOrder:
    """
    The partial order on the moves of a position whose linearizations are
    the plays of the strategy reaching it.

    Raises:
        PreconditionError: If the position is not reached or no such order exists.
    """
    position = frozenset(position)
    plays = strategy.plays_to(position)
    if not plays:
        raise PreconditionError(f"Position {format_position(position)} is not reached by the strategy")
    index = [{m: i for i, m in enumerate(play)} for play in plays]
    pairs = [
        (a, b)
        for a in position
        for b in position
        if a != b and all(pos[a] < pos[b] for pos in index)
    ]
    order = MovePartialOrder.from_relation(position, pairs)
    if set(order.linearizations()) != set(plays):
        raise PreconditionError(
            f"Plays reaching {format_position(position)} are not the linearizations of a partial order"
        )
    return order


def added_causality(strategy: Strategy, position: Iterable[str]) -> List[Tuple[str, str]]:
    """Covering pairs of the causality order that the game does not impose."""
    order = causality_order(strategy, position)
    return [(a, b) for a, b in order.covering_pairs() if not strategy.game.precedes(a, b)]


@dataclass
class InducedEvents:
    """
    Events of a strategy: edges of G_sigma up to the zig-zag relation.
    """
    structure: EventStructure
    edge_events: Dict[GameEdge, str] = field(default_factory=dict)  # edge -> event name

    def events_labelled(self, move: str) -> List[str]:
        labels = self.structure.label_map
        return [e for e in self.structure.events if labels[e] == move]


def induced_events(strategy: Strategy) -> InducedEvents:
    """
    Identify the edges of G_sigma along tiles and read off an event structure.

    Causality: e precedes f when every occurrence of f happens at a position
    already holding e. Conflict: no reached position holds both.
    """
    game = strategy.game
    zigzag = nx.Graph()
    zigzag.add_nodes_from(strategy.edges)
    for x, m, n in game.squares():
        if strategy._holds_square(x, m, n):
            zigzag.add_edge((x, m), (x | {n}, m))
            zigzag.add_edge((x, n), (x | {m}, n))

    classes = canonical_sorted(
        (canonical_sorted(component) for component in nx.connected_components(zigzag)),
    )
    by_move: Dict[str, List[List[GameEdge]]] = defaultdict(list)
    for cls in classes:
        by_move[cls[0][1]].append(cls)

    edge_events: Dict[GameEdge, str] = {}
    names: List[str] = []
    labels: Dict[str, str] = {}
    for move in sorted(by_move):
        group = by_move[move]
        for i, cls in enumerate(group, start=1):
            name = move if len(group) == 1 else f"{move}#{i}"
            names.append(name)
            labels[name] = move
            for edge in cls:
                edge_events[edge] = name

    config: Dict[Position, FrozenSet[str]] = {}
    for position in strategy.positions:
        play = strategy.plays_to(position)[0]
        config[position] = frozenset(edge_events[e] for e in _edge_tuple(play))

    occurrences: Dict[str, List[GameEdge]] = defaultdict(list)
    for edge, name in edge_events.items():
        occurrences[name].append(edge)
    causes = [
        (e, f)
        for f in names
        for e in names
        if e != f and all(e in config[x] for x, _ in occurrences[f])
    ]
    conflicts = [
        (e, f)
        for i, e in enumerate(names)
        for f in names[i + 1:]
        if not any(e in c and f in c for c in config.values())
    ]
    polarity = {name: game.polarity(labels[name]) for name in names}
    structure = EventStructure.build(names, causes, conflicts, polarity=polarity, labels=labels)
    logger.debug(f"Induced {len(names)} events from {len(strategy.edges)} edges")
    return InducedEvents(structure, edge_events)


def is_stable(strategy: Strategy) -> Verdict:
    """
    Check that every reached position carries a causality order.

    The witness is the first position without one. The message lists moves
    carried by several induced events.
    """
    for position in canonical_sorted(strategy.positions):
        try:
            causality_order(strategy, position)
        except PreconditionError as exc:
            return Verdict(False, format_position(position), str(exc))
    induced = induced_events(strategy)
    shared = sorted({m for m in induced.structure.label_map.values() if len(induced.events_labelled(m)) > 1})
    message = f"moves with several events: {', '.join(shared)}" if shared else ""
    return Verdict(True, None, message)


@dataclass
class PlayLevelReport:
    """
    The set-of-plays reading of positionality with preservation.
    """
    internal_homotopy: Verdict
    forward_closure: Verdict

    @property
    def passed(self) -> bool:
        return bool(self.internal_homotopy) and bool(self.forward_closure)


def check_play_level(strategy: Strategy) -> PlayLevelReport:
    """
    Check the play-level characterization.

    Internal homotopy: cofinal plays are connected by tile permutations
    through plays of the strategy. Forward closure: s.m and s.n in the
    strategy, with m and n forming a tile, implies s.m.n and s.n.m are too.
    """
    game = strategy.game
    internal = Verdict(True)
    for position in canonical_sorted(strategy.positions):
        group = set(strategy.plays_to(position))
        start = min(group, key=canonical_key)
        seen = {start}
        frontier = [start]
        while frontier:
            play = frontier.pop()
            for i in range(len(play) - 1):
                x = game.position_of(play[:i])
                m, n = play[i], play[i + 1]
                swapped = play[:i] + (n, m) + play[i + 2:]
                if swapped in group and swapped not in seen and game.has_edge(x, n) and game.has_edge(x | {n}, m):
                    seen.add(swapped)
                    frontier.append(swapped)
        if seen != group:
            internal = Verdict(False, (start, min(group - seen, key=canonical_key)),
                               f"plays to {format_position(position)} are not connected inside the strategy")
            break

    forward = Verdict(True)
    for play in canonical_sorted(strategy.plays):
        x = strategy.position_of(play)
        nexts = sorted(strategy.next_moves(play))
        for i, m in enumerate(nexts):
            for n in nexts[i + 1:]:
                if not (game.has_edge(x | {m}, n) and game.has_edge(x | {n}, m)):
                    continue
                if play + (m, n) not in strategy.plays or play + (n, m) not in strategy.plays:
                    forward = Verdict(False, (play, m, n), "coinitial tile moves are not both continued")
                    break
            if not forward:
                break
        if not forward:
            break
    return PlayLevelReport(internal, forward)
