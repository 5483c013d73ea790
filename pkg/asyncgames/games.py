"""
Polarized asynchronous games and their connectives.

A game position is the frozen set of move addresses played so far; an edge
is a pair (position, move). Components of products are addressed with the
prefixes "L." and "R.", lifted games with "up." and "dn.".
"""

import logging
from itertools import product as cartesian
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from .asyncgraph import AsyncGraph, Edge, Path, canonical_key, canonical_sorted
from .errors import PreconditionError, ValidationError
from .formula import Bot, Down, Dual, Formula, Limp, One, Par, Tensor, Up, Var

logger = logging.getLogger(__name__)

OPPONENT = -1
PROPONENT = 1

TENSOR = "tensor"
PAR = "par"

LEFT = "left"
RIGHT = "right"

Position = FrozenSet[str]
GameEdge = Tuple[Position, str]
Play = Tuple[str, ...]


def prefix(move: str, head: str) -> str:
    return f"{head}.{move}"


def strip(move: str, head: str) -> Optional[str]:
    """Remove a leading component from an address, or None if absent."""
    marker = f"{head}."
    if move.startswith(marker):
        return move[len(marker):]
    return None


class Game:
    """
    A rooted polarized asynchronous game over move-set positions.

    Tiles are the squares x, x+m, x+n, x+m+n whose four edges are present.
    Tile labels are attached to unordered move pairs.
    """

    def __init__(
        self,
        positions: Iterable[Position],
        polarity: Dict[str, int],
        edges: Optional[Iterable[GameEdge]] = None,
        tile_labels: Optional[Dict[FrozenSet[str], str]] = None,
        name: str = "",
    ):
        """
        Initialize a game.

        Args:
            positions: All positions, the empty position included.
            polarity: Polarity of every move.
            edges: Edges (x, m); defaults to every x -> x + {m} between positions.
            tile_labels: TENSOR/PAR label of independent move pairs.
            name: Display name.
        """
        self.logger = logging.getLogger(__name__)
        self.name = name
        self._positions: FrozenSet[Position] = frozenset(frozenset(x) for x in positions)
        self._polarity: Dict[str, int] = dict(polarity)
        if self.root not in self._positions:
            raise ValidationError("A game needs the empty root position")
        for value in self._polarity.values():
            if value not in (OPPONENT, PROPONENT):
                raise ValidationError(f"Invalid polarity: {value}")

        if edges is None:
            edges = [
                (x, m)
                for x in self._positions
                for m in self._polarity
                if m not in x and x | {m} in self._positions
            ]
        self._edges: FrozenSet[GameEdge] = frozenset((frozenset(x), m) for x, m in edges)
        self._out: Dict[Position, List[str]] = {x: [] for x in self._positions}
        for x, m in self._edges:
            if m in x or m not in self._polarity or x not in self._out or x | {m} not in self._positions:
                raise ValidationError(f"Invalid edge {format_position(x)} -> {m}")
            self._out[x].append(m)
        for x in self._out:
            self._out[x].sort()

        used = {m for x in self._positions for m in x}
        self._tile_labels: Dict[FrozenSet[str], str] = {
            pair: label for pair, label in (tile_labels or {}).items() if pair <= used
        }
        self._graph: Optional[AsyncGraph] = None
        self._requirements: Optional[Dict[str, FrozenSet[str]]] = None

    @property
    def root(self) -> Position:
        return frozenset()

    @property
    def positions(self) -> FrozenSet[Position]:
        return self._positions

    @property
    def moves(self) -> List[str]:
        return sorted(self._polarity)

    @property
    def polarity_map(self) -> Dict[str, int]:
        return dict(self._polarity)

    @property
    def edges(self) -> FrozenSet[GameEdge]:
        return self._edges

    @property
    def tile_labels(self) -> Dict[FrozenSet[str], str]:
        return dict(self._tile_labels)

    def polarity(self, move: str) -> int:
        try:
            return self._polarity[move]
        except KeyError:
            raise ValidationError(f"Unknown move address: {move}")

    def is_opponent(self, move: str) -> bool:
        return self.polarity(move) == OPPONENT

    def is_proponent(self, move: str) -> bool:
        return self.polarity(move) == PROPONENT

    def tile_label(self, m: str, n: str) -> Optional[str]:
        return self._tile_labels.get(frozenset((m, n)))

    def moves_at(self, position: Position) -> List[str]:
        """Moves available at a position."""
        return list(self._out.get(position, ()))

    def has_edge(self, position: Position, move: str) -> bool:
        return (position, move) in self._edges

    def squares(self) -> List[Tuple[Position, str, str]]:
        """Every tile as (x, m, n) with m < n."""
        found = []
        for x in self._positions:
            available = self._out[x]
            for i, m in enumerate(available):
                for n in available[i + 1:]:
                    if self.has_edge(x | {m}, n) and self.has_edge(x | {n}, m):
                        found.append((x, m, n))
        return sorted(found, key=canonical_key)

    @property
    def graph(self) -> AsyncGraph:
        """The underlying asynchronous graph, built on first use."""
        if self._graph is None:
            edges = [Edge((x, m), x, x | {m}) for x, m in self._edges]
            tiles = [
                (((x, m), (x | {m}, n)), ((x, n), (x | {n}, m)))
                for x, m, n in self.squares()
            ]
            self._graph = AsyncGraph(self._positions, edges, tiles)
        return self._graph

    def digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self._positions)
        for x, m in self._edges:
            graph.add_edge(x, x | {m}, move=m)
        return graph

    def position_of(self, play: Iterable[str]) -> Position:
        """
        Replay a sequence of moves from the root.

        Raises:
            ValidationError: If the sequence is not a play of the game.
        """
        position = self.root
        for move in play:
            if not self.has_edge(position, move):
                raise ValidationError(f"Move {move} is not available at {format_position(position)}")
            position = position | {move}
        return position

    def is_play(self, play: Iterable[str]) -> bool:
        try:
            self.position_of(play)
        except ValidationError:
            return False
        return True

    def path_of(self, play: Iterable[str]) -> Path:
        """The graph path of a play."""
        edges = []
        position = self.root
        for move in play:
            edges.append((position, move))
            position = position | {move}
        return self.graph.make_path(edges, start=self.root)

    def plays(self, max_length: Optional[int] = None) -> List[Play]:
        """
        All plays from the root, in canonical order.

        Args:
            max_length: Optional bound on the length of the plays.
        """
        found = []
        stack = [((), self.root)]
        while stack:
            play, position = stack.pop()
            found.append(play)
            if max_length is not None and len(play) >= max_length:
                continue
            for move in self.moves_at(position):
                stack.append((play + (move,), position | {move}))
        return canonical_sorted(found)

    def requirements(self) -> Dict[str, FrozenSet[str]]:
        """For every move, the other moves present in every position holding it."""
        if self._requirements is None:
            result = {}
            for m in self._polarity:
                holding = [x for x in self._positions if m in x]
                common = frozenset.intersection(*holding) if holding else frozenset()
                result[m] = common - {m}
            self._requirements = result
        return self._requirements

    def precedes(self, m: str, n: str) -> bool:
        """Whether the game itself orders m before n."""
        return m in self.requirements().get(n, frozenset())

    def maximal_positions(self) -> List[Position]:
        return canonical_sorted(x for x in self._positions if not self._out[x])

    def restrict(self, keep: Iterable[GameEdge], name: str = "") -> "Game":
        """
        Keep only some edges and the positions they still reach from the root.
        """
        keep = set(keep) & self._edges
        reached = {self.root}
        frontier = [self.root]
        while frontier:
            x = frontier.pop()
            for m in self._out[x]:
                if (x, m) in keep and x | {m} not in reached:
                    reached.add(x | {m})
                    frontier.append(x | {m})
        edges = [(x, m) for x, m in keep if x in reached]
        return Game(reached, self._polarity, edges, self._tile_labels, name=name or self.name)

    def __repr__(self) -> str:
        return f"Game({self.name or '?'}: {len(self._positions)} positions, {len(self._polarity)} moves)"


def format_position(position: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(position)) + "}"


def empty_game(name: str = "one") -> Game:
    return Game([frozenset()], {}, name=name)


def dual(game: Game) -> Game:
    """Same graph, polarities negated, TENSOR and PAR labels swapped."""
    swap = {TENSOR: PAR, PAR: TENSOR}
    return Game(
        game.positions,
        {m: -p for m, p in game.polarity_map.items()},
        game.edges,
        {pair: swap[label] for pair, label in game.tile_labels.items()},
        name=f"{game.name}^" if game.name else "",
    )


def _prefixed_position(x: Position, head: str) -> Position:
    return frozenset(prefix(m, head) for m in x)


def product(first: Game, second: Game, label: str) -> Game:
    """
    Asynchronous product: the components move independently.

    Args:
        first: Left component, addressed "L.".
        second: Right component, addressed "R.".
        label: TENSOR or PAR, attached to every cross pair of moves.
    """
    if label not in (TENSOR, PAR):
        raise ValidationError(f"Invalid tile label: {label}")
    positions = [
        _prefixed_position(x, "L") | _prefixed_position(y, "R")
        for x in first.positions
        for y in second.positions
    ]
    polarity = {prefix(m, "L"): p for m, p in first.polarity_map.items()}
    polarity.update({prefix(m, "R"): p for m, p in second.polarity_map.items()})

    edges = []
    for x, m in first.edges:
        for y in second.positions:
            edges.append((_prefixed_position(x, "L") | _prefixed_position(y, "R"), prefix(m, "L")))
    for y, n in second.edges:
        for x in first.positions:
            edges.append((_prefixed_position(x, "L") | _prefixed_position(y, "R"), prefix(n, "R")))

    labels = {frozenset(prefix(m, "L") for m in pair): lab for pair, lab in first.tile_labels.items()}
    labels.update({frozenset(prefix(m, "R") for m in pair): lab for pair, lab in second.tile_labels.items()})
    for m, n in cartesian(first.moves, second.moves):
        labels[frozenset((prefix(m, "L"), prefix(n, "R")))] = label

    symbol = "*" if label == TENSOR else "|"
    return Game(positions, polarity, edges, labels, name=f"({first.name} {symbol} {second.name})")


def component(game: Game, side: str) -> Game:
    """
    Project a product game onto one component, stripping its prefix.

    Args:
        game: A game whose moves are addressed "L." or "R.".
        side: "L" or "R".
    """
    polarity = {}
    for m, p in game.polarity_map.items():
        inner = strip(m, side)
        if inner is not None:
            polarity[inner] = p
    positions = {frozenset(strip(m, side) for m in x if strip(m, side) is not None) for x in game.positions}
    labels = {}
    for pair, lab in game.tile_labels.items():
        inner = {strip(m, side) for m in pair}
        if None not in inner:
            labels[frozenset(inner)] = lab
    return Game(positions, polarity, None, labels, name=f"{game.name}/{side}")


def restrict_first(game: Game, site: str, first: str) -> Game:
    """
    Restrict a product at a site so that one component plays entirely first.

    Args:
        game: A game containing a product at address prefix `site`.
        site: Address prefix of the product ("" for the root).
        first: "L" or "R", the component that moves first.
    """
    second = "R" if first == "L" else "L"
    head_first = f"{site}.{first}." if site else f"{first}."
    head_second = f"{site}.{second}." if site else f"{second}."
    keep = [
        (x, m) for x, m in game.edges
        if not (m.startswith(head_first) and any(n.startswith(head_second) for n in x))
    ]
    return game.restrict(keep)


def sequentialize(first: Game, second: Game, order: str) -> Game:
    """
    The "before" (order=LEFT) and "after" (order=RIGHT) restrictions of the
    tensor product.
    """
    if order not in (LEFT, RIGHT):
        raise ValidationError(f"Invalid order: {order}")
    joint = product(first, second, TENSOR)
    restricted = restrict_first(joint, "", "L" if order == LEFT else "R")
    symbol = "<" if order == LEFT else ">"
    restricted.name = f"({first.name} {symbol} {second.name})"
    return restricted


def lift(game: Game, polarity: int) -> Game:
    """
    Add one fresh initial move below a game.

    Args:
        game: The game to lift.
        polarity: OPPONENT for "up", PROPONENT for "dn".
    """
    if polarity not in (OPPONENT, PROPONENT):
        raise ValidationError(f"Invalid polarity: {polarity}")
    head = "up" if polarity == OPPONENT else "dn"
    positions = [frozenset()] + [_prefixed_position(x, head) | {head} for x in game.positions]
    moves = {head: polarity}
    moves.update({prefix(m, head): p for m, p in game.polarity_map.items()})
    edges = [(frozenset(), head)]
    edges += [(_prefixed_position(x, head) | {head}, prefix(m, head)) for x, m in game.edges]
    labels = {frozenset(prefix(m, head) for m in pair): lab for pair, lab in game.tile_labels.items()}
    return Game(positions, moves, edges, labels, name=f"{head} {game.name}")


class GameEnvironment:
    """
    Named games available to formulas.

    A name is bound either to a game given directly (for instance one
    generated from an event structure) or to a formula together with its
    interpretation.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.games: Dict[str, Game] = {}
        self.formulas: Dict[str, Formula] = {}

    def bind_game(self, name: str, game: Game):
        self.games[name] = game
        self.formulas.pop(name, None)

    def bind_formula(self, name: str, formula: Formula):
        self.games[name] = interpret_formula(formula, self)
        self.formulas[name] = formula

    def lookup(self, name: str) -> Game:
        try:
            return self.games[name]
        except KeyError:
            raise ValidationError(f"Unbound identifier: {name}")

    def __contains__(self, name: str) -> bool:
        return name in self.games


def interpret_formula(formula: Formula, env: Optional[GameEnvironment] = None) -> Game:
    """
    Interpret a formula as a game.

    Args:
        formula: The formula.
        env: Environment binding identifiers to games.

    Returns:
        The game.

    Raises:
        ValidationError: If an identifier is unbound.
    """
    env = env or GameEnvironment()
    kind = type(formula)
    if kind in (One, Bot):
        return empty_game("one" if kind is One else "bot")
    if kind is Var:
        return env.lookup(formula.name)
    if kind is Dual:
        return dual(interpret_formula(formula.body, env))
    if kind is Up:
        return lift(interpret_formula(formula.body, env), OPPONENT)
    if kind is Down:
        return lift(interpret_formula(formula.body, env), PROPONENT)
    if kind is Tensor:
        return product(interpret_formula(formula.left, env), interpret_formula(formula.right, env), TENSOR)
    if kind is Par:
        return product(interpret_formula(formula.left, env), interpret_formula(formula.right, env), PAR)
    if kind is Limp:
        return product(dual(interpret_formula(formula.left, env)), interpret_formula(formula.right, env), PAR)
    raise PreconditionError(f"Unknown formula node: {formula!r}")


def same_game(first: Game, second: Game) -> bool:
    """Identical positions, polarities, edges and tile labels."""
    return (
        first.positions == second.positions
        and first.polarity_map == second.polarity_map
        and first.edges == second.edges
        and first.tile_labels == second.tile_labels
    )


def isomorphic(first: Game, second: Game) -> bool:
    """Graph isomorphism preserving move polarity."""
    def labelled(game):
        graph = nx.DiGraph()
        graph.add_nodes_from(game.positions)
        for x, m in game.edges:
            graph.add_edge(x, x | {m}, polarity=game.polarity(m))
        return graph

    return nx.is_isomorphic(
        labelled(first), labelled(second),
        edge_match=lambda a, b: a["polarity"] == b["polarity"],
    )


def moves_under(game: Game, head: str) -> Set[str]:
    """Moves whose address lies under a prefix ("" for all)."""
    if not head:
        return set(game.moves)
    return {m for m in game.moves if m.startswith(f"{head}.")}
