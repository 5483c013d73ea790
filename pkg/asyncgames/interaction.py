"""
Interaction and composition of strategies.

A strategy on A -o B lives on the game A^ | B, addressed "L." for A and
"R." for B. A strategy on a bare game A is read as a strategy on 1 -o A.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .asyncgraph import Verdict, canonical_key, canonical_sorted
from .concurrent import TOP, ClosureOp, build_lattice, closure_of, format_element
from .errors import ValidationError
from .events import EventStructure, structure_of
from .formula import Formula, Limp, One
from .games import PAR, Game, Play, Position, component, dual, empty_game, format_position, prefix, product, strip
from .strategies import Strategy

logger = logging.getLogger(__name__)

COMPLETE = "COMPLETE"
DEADLOCK = "DEADLOCK"


@dataclass
class InteractionTrace:
    """
    A maximal joint play, up to homotopy, with its outcome.
    """
    play: Play  # joint play, in the addresses of the second strategy
    position: Position
    status: str  # COMPLETE or DEADLOCK
    reason: str = ""  # "refused" or "waiting" for a deadlock
    expects: Dict[str, List[str]] = field(default_factory=dict)  # side -> moves still awaited
    refused: List[str] = field(default_factory=list)  # offered moves the partner never accepts
    count: int = 1  # joint plays in the class

    @property
    def visible(self) -> Play:
        return tuple(m for m in self.play if m.startswith("R."))

    def to_dict(self) -> Dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "position": format_position(self.position),
            "play": list(self.play),
            "expects": {side: list(moves) for side, moves in sorted(self.expects.items())},
            "refused": list(self.refused),
            "count": self.count,
        }

    def __str__(self) -> str:
        if self.status == DEADLOCK:
            return f"DEADLOCK at {format_position(self.position)} ({self.reason})"
        return f"COMPLETE at {format_position(self.position)}"


def _same_shape(first: Game, second: Game) -> bool:
    return first.positions == second.positions and first.polarity_map == second.polarity_map


def _is_bare(first: Game, second: Game) -> bool:
    """
    Whether the first game is the antecedent of the second as a whole.

    Raises:
        ValidationError: If neither the whole game nor its right component
            matches the antecedent of the second game.
    """
    antecedent = dual(component(second, "L"))
    if _same_shape(first, antecedent):
        return True
    if _same_shape(component(first, "R"), antecedent):
        return False
    raise ValidationError(f"Address mismatch between {first.name or '?'} and {second.name or '?'}")


def unit_game(game: Game) -> Game:
    """The game 1 -o A, addressing A with "R."."""
    return product(empty_game(), game, PAR)


def lift_to_unit(strategy: Strategy) -> Strategy:
    """Read a strategy on A as a strategy on 1 -o A."""
    plays = [tuple(prefix(m, "R") for m in play) for play in strategy.plays]
    return Strategy(unit_game(strategy.game), plays, name=strategy.name, formula=strategy.formula)


def composite_game(first: Game, second: Game) -> Game:
    """The game A -o C of a composition of strategies on A -o B and B -o C."""
    if _is_bare(first, second):
        left = empty_game()
    else:
        left = component(first, "L")
    right = component(second, "R")
    return product(left, right, PAR)


def _waits(strategy: Strategy, play: Play) -> bool:
    game = strategy.game
    for m in strategy.next_moves(play):
        if game.is_opponent(m) and any(game.is_proponent(n) for n in strategy.next_moves(play + (m,))):
            return True
    return False


def _classify(sigma: Strategy, tau: Strategy, sigma_play: Play, tau_play: Play) -> Tuple[str, str, Dict, List]:
    refused = sorted(
        {prefix(a, "L") for a in sigma.next_moves(sigma_play) if sigma.game.is_proponent(a)}
        | {m for m in tau.next_moves(tau_play) if m.startswith("L.") and tau.game.is_proponent(m)}
    )
    expects = {
        "left": sorted(prefix(a, "L") for a in sigma.next_moves(sigma_play) if sigma.game.is_opponent(a)),
        "right": sorted(m for m in tau.next_moves(tau_play) if m.startswith("L.") and tau.game.is_opponent(m)),
    }
    if refused:
        return DEADLOCK, "refused", expects, refused
    if _waits(sigma, sigma_play) and _waits(tau, tau_play):
        return DEADLOCK, "waiting", expects, refused
    return COMPLETE, "", expects, refused


def interact(sigma: Strategy, tau: Strategy) -> List[InteractionTrace]:
    """
    Play a strategy on A against a strategy on A -o C.

    Every joint play is explored; C moves are free, A moves need both
    strategies to agree.

    Args:
        sigma: Strategy on A.
        tau: Strategy on A -o C.

    Returns:
        The maximal traces grouped by final position, in canonical order.

    Raises:
        ValidationError: If sigma's game is not the antecedent of tau's.
    """
    if not _same_shape(sigma.game, dual(component(tau.game, "L"))):
        raise ValidationError(f"Address mismatch between {sigma.name or '?'} and {tau.name or '?'}")

    maximal: Dict[Position, List[Tuple[Play, Play]]] = defaultdict(list)
    stack: List[Tuple[Play, Play]] = [((), ())]
    explored = 0
    while stack:
        tau_play, sigma_play = stack.pop()
        explored += 1
        extended = False
        for move in sorted(tau.next_moves(tau_play)):
            inner = strip(move, "L")
            if inner is None:
                stack.append((tau_play + (move,), sigma_play))
                extended = True
            elif inner in sigma.next_moves(sigma_play):
                stack.append((tau_play + (move,), sigma_play + (inner,)))
                extended = True
        if not extended:
            maximal[tau.position_of(tau_play)].append((tau_play, sigma_play))

    logger.info(f"Explored {explored} joint plays of {sigma.name or '?'} and {tau.name or '?'}")
    traces = []
    for position in canonical_sorted(maximal):
        group = maximal[position]
        tau_play, sigma_play = min(group, key=lambda pair: canonical_key(pair[0]))
        status, reason, expects, refused = _classify(sigma, tau, sigma_play, tau_play)
        traces.append(InteractionTrace(tau_play, position, status, reason, expects, refused, len(group)))
    return traces


def compose(sigma: Strategy, tau: Strategy, name: str = "") -> Strategy:
    """
    Parallel composition followed by hiding.

    Args:
        sigma: Strategy on A -o B, or on a bare game B.
        tau: Strategy on B -o C.
        name: Name of the composite.

    Returns:
        The strategy on A -o C whose plays are the visible parts of the
        joint plays.
    """
    bare = _is_bare(sigma.game, tau.game)
    first = lift_to_unit(sigma) if bare else sigma
    game = product(component(first.game, "L"), component(tau.game, "R"), PAR)

    visible: Set[Play] = set()
    seen = set()
    stack: List[Tuple[Play, Play, Play]] = [((), (), ())]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        left, right, shown = state
        visible.add(shown)
        for move in sorted(first.next_moves(left)):
            if move.startswith("L."):
                stack.append((left + (move,), right, shown + (move,)))
                continue
            shared = prefix(strip(move, "R"), "L")
            if shared in tau.next_moves(right):
                stack.append((left + (move,), right + (shared,), shown))
        for move in sorted(tau.next_moves(right)):
            if move.startswith("R."):
                stack.append((left, right + (move,), shown + (move,)))

    logger.info(f"Composition explored {len(seen)} joint states, {len(visible)} visible plays")
    return Strategy(
        game, visible,
        name=name or f"{sigma.name}_{tau.name}",
        formula=_composite_formula(sigma.formula, tau.formula, bare),
    )


def _composite_formula(first: Optional[Formula], second: Optional[Formula], bare: bool) -> Optional[Formula]:
    if not isinstance(second, Limp):
        return None
    if bare:
        return Limp(One(), second.right)
    if isinstance(first, Limp):
        return Limp(first.left, second.right)
    return None


@dataclass
class RelationalComposite:
    """
    Relational composition of two fixpoint sets.
    """
    closure: ClosureOp
    joint: Dict[Position, List[Tuple[Position, Position]]] = field(default_factory=dict)  # result -> (x, y) pairs

    @property
    def fixpoints(self) -> List:
        return self.closure.fixpoints


def compose_closures(f: ClosureOp, g: ClosureOp) -> RelationalComposite:
    """
    Compose two closure operators through their fixpoint sets.

    A pair (x, y) of fixpoints agreeing on the shared game yields the
    fixpoint made of the A part of x and the C part of y.

    Raises:
        ValidationError: If the shared games do not match.
    """
    first_game, second_game = f.lattice.game, g.lattice.game
    bare = _is_bare(first_game, second_game)
    game = composite_game(first_game, second_game)

    by_shared: Dict[Position, List[Position]] = defaultdict(list)
    for y in g.fixpoints:
        if y is TOP:
            continue
        shared = frozenset(strip(m, "L") for m in y if m.startswith("L."))
        by_shared[shared].append(y)

    joint: Dict[Position, List[Tuple[Position, Position]]] = defaultdict(list)
    for x in f.fixpoints:
        if x is TOP:
            continue
        if bare:
            outer, shared = frozenset(), x
        else:
            outer = frozenset(m for m in x if m.startswith("L."))
            shared = frozenset(strip(m, "R") for m in x if m.startswith("R."))
        for y in by_shared.get(shared, ()):
            result = outer | frozenset(m for m in y if m.startswith("R."))
            joint[result].append((x, y))

    lattice = build_lattice(game)
    fixpoints = lattice.meet_closure(joint)
    if len(fixpoints) != len(joint) + 1:
        logger.warning(f"Relational composite is not closed under meets; {len(fixpoints) - len(joint) - 1} added")
    logger.debug(f"Relational composite has {len(joint)} fixpoints")
    return RelationalComposite(ClosureOp(lattice, fixpoints), dict(joint))


@dataclass
class FunctorialityReport:
    """
    Comparison of the relational composite with the composite strategy.
    """
    lax: Verdict
    strong: Verdict
    relational: List[Position] = field(default_factory=list)
    composite: List[Position] = field(default_factory=list)

    def to_dict(self) -> Dict:
        def listing(positions):
            return [format_element(x) for x in positions] if positions else []

        return {
            "lax": self.lax.passed,
            "strong": self.strong.passed,
            "lax_witnesses": listing(self.lax.witness),
            "strong_witnesses": listing(self.strong.witness),
            "relational": listing(self.relational),
            "composite": listing(self.composite),
        }


def functoriality_check(sigma: Strategy, tau: Strategy) -> FunctorialityReport:
    """
    Check whether fixpoints of the relational composite are fixpoints of
    the composite strategy (lax), and whether the two sets coincide (strong).

    Halting positions that are not closed under meets are completed, so
    each strategy is read as the least closure operator fixing them.
    """
    relational = compose_closures(closure_of(sigma, complete_meets=True), closure_of(tau, complete_meets=True))
    composite = closure_of(compose(sigma, tau), complete_meets=True)
    rel = {x for x in relational.fixpoints if x is not TOP}
    direct = {x for x in composite.fixpoints if x is not TOP}

    missing = canonical_sorted(rel - direct)
    differ = canonical_sorted(rel ^ direct)
    lax = Verdict(not missing, missing or None, "relational fixpoints never reached interactively" if missing else "")
    strong = Verdict(not differ, differ or None, "fixpoint sets differ" if differ else "")
    return FunctorialityReport(lax, strong, canonical_sorted(rel), canonical_sorted(direct))


def copycat(game: Game, name: str = "copycat") -> Strategy:
    """
    The copycat strategy on A -o A.

    Each move is copied from the side where it is an Opponent move to the
    side where it is a Proponent move.

    Raises:
        ValidationError: If the game is not generated by an event structure.
    """
    source = structure_of(game)
    left = {e: prefix(e, "L") for e in source.events}
    right = {e: prefix(e, "R") for e in source.events}
    polarity = game.polarity_map

    events = [left[e] for e in source.events] + [right[e] for e in source.events]
    causes = [(side[a], side[b]) for side in (left, right) for a, b in source.causality]
    for e in source.events:
        if polarity[e] < 0:
            causes.append((right[e], left[e]))
        else:
            causes.append((left[e], right[e]))
    conflicts = [tuple(side[e] for e in sorted(pair)) for side in (left, right) for pair in source.conflict]
    signs = {left[e]: -polarity[e] for e in source.events}
    signs.update({right[e]: polarity[e] for e in source.events})
    labels = {e: e for e in events}

    structure = EventStructure.build(events, causes, conflicts, polarity=signs, labels=labels)
    arena = product(dual(game), game, PAR)
    return Strategy.from_event_structure(arena, structure, name=name)
