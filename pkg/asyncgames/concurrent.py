"""
Closure operators on the lattice of positions of a finite game.

A strategy is read as the closure operator whose fixpoints are its halting
positions, provided they are closed under meets. The dynamic domain of a
closure operator gives the strategy back.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Set

import networkx as nx

from .asyncgraph import MovePartialOrder, Verdict, canonical_key, canonical_sorted
from .errors import PreconditionError
from .games import Game, Position, format_position
from .strategies import Strategy

logger = logging.getLogger(__name__)


class _Top:
    """The top element adjoined to a position lattice."""

    def __repr__(self) -> str:
        return "TOP"


TOP = _Top()


def format_element(element) -> str:
    return "TOP" if element is TOP else format_position(element)


def _element_key(element):
    return (1,) if element is TOP else (0, canonical_key(element))


class PositionLattice:
    """
    Positions of a game ordered by reachability, with TOP adjoined.

    Joins of incompatible positions are TOP; the empty meet is TOP.
    """

    def __init__(self, game: Game):
        self.logger = logging.getLogger(__name__)
        self.game = game
        graph = game.digraph()
        self._ups: Dict[Position, Set[Position]] = {x: nx.descendants(graph, x) | {x} for x in game.positions}
        self._downs: Dict[Position, Set[Position]] = {x: nx.ancestors(graph, x) | {x} for x in game.positions}

        proponent = nx.DiGraph()
        proponent.add_nodes_from(game.positions)
        proponent.add_edges_from((x, x | {m}) for x, m in game.edges if game.is_proponent(m))
        self._proponent_ups = {x: nx.descendants(proponent, x) | {x} for x in game.positions}

    @property
    def elements(self) -> List:
        return self.positions + [TOP]

    @property
    def positions(self) -> List[Position]:
        return canonical_sorted(self.game.positions)

    def __len__(self) -> int:
        return len(self._ups) + 1

    def __contains__(self, element) -> bool:
        return element is TOP or element in self._ups

    def leq(self, x, y) -> bool:
        if y is TOP:
            return True
        if x is TOP:
            return False
        return y in self._ups[x]

    def leq_proponent(self, x, y) -> bool:
        """x reaches y by Proponent moves only."""
        if x is TOP or y is TOP:
            return x is y
        return y in self._proponent_ups[x]

    def meet(self, x, y):
        if x is TOP:
            return y
        if y is TOP:
            return x
        common = self._downs[x] & self._downs[y]
        best = max(common, key=lambda v: len(self._downs[v]))
        if not common <= self._downs[best]:
            raise PreconditionError(f"No meet of {format_element(x)} and {format_element(y)}")
        return best

    def join(self, x, y):
        if x is TOP or y is TOP:
            return TOP
        common = self._ups[x] & self._ups[y]
        if not common:
            return TOP
        best = min(common, key=lambda v: len(self._downs[v]))
        if not common <= self._ups[best]:
            raise PreconditionError(f"No join of {format_element(x)} and {format_element(y)}")
        return best

    def meet_all(self, elements: Iterable):
        result = TOP
        for element in elements:
            result = self.meet(result, element)
        return result

    def meet_closure(self, elements: Iterable) -> Set:
        """The least meet-closed set containing the elements and TOP."""
        closed = set(elements) | {TOP}
        frontier = list(closed)
        while frontier:
            x = frontier.pop()
            for y in list(closed):
                z = self.meet(x, y)
                if z not in closed:
                    closed.add(z)
                    frontier.append(z)
        return closed

    def is_meet_closed(self, elements: Iterable) -> bool:
        elements = set(elements)
        return TOP in elements and all(self.meet(x, y) in elements for x, y in combinations(elements, 2))


def build_lattice(game: Game) -> PositionLattice:
    """
    Build the position lattice of a finite game.

    Args:
        game: The game.

    Returns:
        Its positions ordered by reachability, plus TOP.
    """
    lattice = PositionLattice(game)
    logger.debug(f"Lattice of {game.name or '?'} has {len(lattice)} elements")
    return lattice


def proponent_order(game: Game) -> MovePartialOrder:
    """The order x <_P y: y is reached from x by Proponent moves only."""
    graph = nx.DiGraph()
    graph.add_nodes_from(game.positions)
    graph.add_edges_from((x, x | {m}) for x, m in game.edges if game.is_proponent(m))
    return MovePartialOrder.from_relation(game.positions, nx.transitive_closure_dag(graph).edges())


class ClosureOp:
    """
    A map on a position lattice, given by a fixpoint set or by an explicit table.

    From a meet-closed fixpoint set, each element is sent to the least
    fixpoint above it. An explicit table is used as is; check it with
    check_closure_properties.
    """

    def __init__(self, lattice: PositionLattice, fixpoints: Iterable = (), table: Optional[Dict] = None):
        self.logger = logging.getLogger(__name__)
        self.lattice = lattice
        self._table: Dict = {}
        if table is not None:
            for element in lattice.elements:
                if element not in table:
                    raise PreconditionError(f"Closure table misses {format_element(element)}")
                self._table[element] = table[element]
        else:
            fix = set(fixpoints) | {TOP}
            for element in lattice.elements:
                self._table[element] = lattice.meet_all(f for f in fix if lattice.leq(element, f))

    def apply(self, element):
        return self._table[element]

    __call__ = apply

    @property
    def table(self) -> Dict:
        return dict(self._table)

    @property
    def fixpoints(self) -> List:
        return sorted((x for x, y in self._table.items() if x == y), key=_element_key)

    def domain(self) -> List[Position]:
        """Positions not sent to TOP."""
        return canonical_sorted(x for x, y in self._table.items() if x is not TOP and y is not TOP)

    def dynamic_domain(self) -> List[Position]:
        """Positions sent to their image by Proponent moves only."""
        return [x for x in self.domain() if self.lattice.leq_proponent(x, self._table[x])]

    def __repr__(self) -> str:
        return f"ClosureOp({len(self.fixpoints)} fixpoints on {self.lattice.game!r})"


def closure_from_map(lattice: PositionLattice, table: Dict) -> ClosureOp:
    """Wrap an arbitrary self-map of the lattice."""
    return ClosureOp(lattice, table=table)


def identity_closure(lattice: PositionLattice) -> ClosureOp:
    return ClosureOp(lattice, lattice.elements)


def halting(strategy: Strategy) -> List[Position]:
    """
    Reached positions with no Proponent move of the strategy leaving them.
    """
    game = strategy.game
    busy = {x for x, m in strategy.edges if game.is_proponent(m)}
    return canonical_sorted(x for x in strategy.positions if x not in busy)


def halting_meets(strategy: Strategy, lattice: Optional[PositionLattice] = None) -> Verdict:
    """
    Whether the halting positions of a strategy are closed under meets.

    A strategy that plays the same Proponent move after incompatible
    Opponent moves can fail this while being ingenuous: the meet of two
    halting positions then holds that move without the Opponent moves
    that triggered it.

    Returns:
        A verdict whose witness is two halting positions and their meet.
    """
    lattice = lattice or build_lattice(strategy.game)
    stops = halting(strategy)
    inside = set(stops)
    for x, y in combinations(stops, 2):
        z = lattice.meet(x, y)
        if z not in inside:
            return Verdict(False, (x, y, z), f"meet {format_element(z)} of two halting positions is not halting")
    return Verdict(True)


def closure_of(
    strategy: Strategy,
    lattice: Optional[PositionLattice] = None,
    complete_meets: bool = False,
) -> ClosureOp:
    """
    The closure operator of a strategy.

    Its fixpoints are the halting positions.

    Args:
        strategy: An ingenuous strategy whose halting positions are closed
            under meets.
        lattice: Position lattice of the strategy's game, built if omitted.
        complete_meets: Close the halting positions under meets instead of
            failing, giving the least closure operator that fixes them.

    Raises:
        PreconditionError: If the halting positions are not closed under
            meets and complete_meets is not set.
    """
    lattice = lattice or build_lattice(strategy.game)
    stops = halting(strategy)
    closed = halting_meets(strategy, lattice)
    if closed:
        return ClosureOp(lattice, stops)
    if not complete_meets:
        x, y, z = closed.witness
        raise PreconditionError(
            f"Halting positions of {strategy.name or '?'} are not closed under meets: "
            f"{format_element(x)} and {format_element(y)} meet at {format_element(z)}"
        )
    fixpoints = lattice.meet_closure(stops)
    added = len(fixpoints) - len(stops) - 1
    logger.info(f"Closed the halting positions of {strategy.name or '?'} under meets; {added} added")
    return ClosureOp(lattice, fixpoints)


@dataclass
class ClosureReport:
    """
    Closure laws plus the two properties of strategy-induced closures.
    """
    increasing: Verdict
    idempotent: Verdict
    monotone: Verdict
    property1: Verdict  # domain closed under compatible joins
    property2: Verdict  # each step is an Opponent move followed by Proponent completion
    FIELDS = ("increasing", "idempotent", "monotone", "property1", "property2")

    @property
    def is_closure(self) -> bool:
        return bool(self.increasing) and bool(self.idempotent) and bool(self.monotone)

    @property
    def passed(self) -> bool:
        return all(bool(getattr(self, name)) for name in self.FIELDS)

    def to_dict(self) -> Dict:
        return {
            name: {"passed": getattr(self, name).passed, "witness": _describe(getattr(self, name).witness)}
            for name in self.FIELDS
        }


def _describe(witness):
    if witness is None:
        return None
    if isinstance(witness, tuple):
        return [_describe(w) for w in witness]
    if witness is TOP or isinstance(witness, frozenset):
        return format_element(witness)
    return str(witness)


def check_closure_properties(closure: ClosureOp) -> ClosureReport:
    """
    Check the closure laws and the two strategy properties pointwise.

    Args:
        closure: The map to check.

    Returns:
        A report with one verdict per property.
    """
    lattice = closure.lattice
    game = lattice.game
    elements = sorted(lattice.elements, key=_element_key)
    f = closure.apply

    increasing = Verdict(True)
    idempotent = Verdict(True)
    for x in elements:
        if increasing and not lattice.leq(x, f(x)):
            increasing = Verdict(False, x, f"{format_element(x)} is sent below itself")
        if idempotent and f(f(x)) != f(x):
            idempotent = Verdict(False, x, f"image of {format_element(x)} is not a fixpoint")

    monotone = Verdict(True)
    for x in elements:
        for y in elements:
            if lattice.leq(x, y) and not lattice.leq(f(x), f(y)):
                monotone = Verdict(False, (x, y), f"{format_element(x)} <= {format_element(y)} but images are not")
                break
        if not monotone:
            break

    # x and y are compatible when their images have a join below TOP
    domain = closure.domain()
    inside = set(domain)
    property1 = Verdict(True)
    for x, y in combinations(domain, 2):
        if lattice.join(f(x), f(y)) is TOP:
            continue
        if lattice.join(x, y) not in inside:
            property1 = Verdict(False, (x, y), "compatible join leaves the domain")
            break

    property2 = Verdict(True)
    for x in domain:
        for y in domain:
            if x == y or not lattice.leq(x, y) or f(x) == f(y):
                continue
            start = f(x)
            if start is TOP:
                continue
            found = False
            for m in game.moves_at(start):
                if not game.is_opponent(m):
                    continue
                z = start | {m}
                if lattice.leq_proponent(z, f(z)) and lattice.leq(f(z), f(y)):
                    found = True
                    break
            if not found:
                property2 = Verdict(False, (x, y), "no Opponent move leads towards the larger image")
                break
        if not property2:
            break

    report = ClosureReport(increasing, idempotent, monotone, property1, property2)
    logger.debug(f"Closure properties: {report.to_dict()}")
    return report


def strategy_of(closure: ClosureOp, name: str = "") -> Strategy:
    """
    The strategy of a closure operator: the plays that stay in its dynamic domain.

    Raises:
        PreconditionError: If the root lies outside the dynamic domain.
    """
    game = closure.lattice.game
    dynamic = set(closure.dynamic_domain())
    if game.root not in dynamic:
        raise PreconditionError("The root position is outside the dynamic domain")
    plays = []
    stack = [((), game.root)]
    while stack:
        play, position = stack.pop()
        plays.append(play)
        for m in game.moves_at(position):
            if position | {m} in dynamic:
                stack.append((play + (m,), position | {m}))
    logger.debug(f"Dynamic domain has {len(dynamic)} positions and {len(plays)} plays")
    return Strategy(game, plays, name=name)


@dataclass
class FixpointListing:
    """
    Halting positions and fixpoints of a strategy, in canonical order.
    """
    halting: List[Position]
    fixpoints: List = field(default_factory=list)
    dynamic_domain: List[Position] = field(default_factory=list)
    added_meets: List[Position] = field(default_factory=list)  # fixpoints that are not halting

    def to_dict(self) -> Dict[str, List[str]]:
        return {
            "halting": [format_element(x) for x in self.halting],
            "added_meets": [format_element(x) for x in self.added_meets],
            "fixpoints": [format_element(x) for x in self.fixpoints],
            "dynamic_domain": [format_element(x) for x in self.dynamic_domain],
        }


def list_fixpoints(strategy: Strategy) -> FixpointListing:
    """List the fixpoints of a strategy, closing its halting positions under meets if needed."""
    closure = closure_of(strategy, complete_meets=True)
    stops = halting(strategy)
    added = [x for x in closure.fixpoints if x is not TOP and x not in stops]
    return FixpointListing(stops, closure.fixpoints, closure.dynamic_domain(), added)
