"""
Directed acyclicity criterion.

The formula tree is read as a directed graph: skeleton arcs go from each
occurrence to its premises, which is the order the game itself imposes on
moves. Causal dependencies added by the strategy become jump arcs between
modality occurrences. Each effective tensor lets a path cross from one of
its premises to the other, in one direction per cycle. A par switching
keeps only the premise it selects reachable through that crossing.

A strategy fails when, for some par switching, a cycle uses at least one
jump.
"""

import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Dict, List, Optional, Tuple

import networkx as nx

from ..asyncgraph import Verdict
from ..config import AnalysisConfig
from ..errors import ValidationError
from ..formula import Bot, Down, Dual, Formula, Limp, One, Par, Tensor, Up, Var
from ..games import GameEnvironment
from ..reporter import CheckResult
from ..strategies import Strategy, added_causality
from .base import BaseCriterion, CriterionContext
from .switching import SwitchingVerdicts, run_per_switching

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"

Node = Tuple[str, ...]  # path of steps from the root occurrence
ParSwitching = Tuple[Tuple[Node, str], ...]


@dataclass
class Occurrence:
    """
    A subformula occurrence with its effective connective.
    """
    node: Node
    formula: Formula
    kind: str  # "tensor", "par", "up", "dn", "unit" or "dual"
    address: str  # move address prefix of the occurrence
    parent: Optional[Node] = None
    children: List[Node] = field(default_factory=list)


def resolve(formula: Formula, env: Optional[GameEnvironment] = None) -> Formula:
    """
    Substitute formula-bound identifiers.

    Raises:
        ValidationError: If an identifier is bound to a game, or unbound.
    """
    if isinstance(formula, Var):
        if env is not None and formula.name in env.formulas:
            return resolve(env.formulas[formula.name], env)
        raise ValidationError(f"Not an MLL formula with lifts: {formula.name} is not a formula")
    if isinstance(formula, (One, Bot)):
        return formula
    if isinstance(formula, (Dual, Up, Down)):
        return type(formula)(resolve(formula.body, env))
    return type(formula)(resolve(formula.left, env), resolve(formula.right, env))


def is_mll(formula: Formula, env: Optional[GameEnvironment] = None) -> bool:
    try:
        resolve(formula, env)
    except ValidationError:
        return False
    return True


def occurrences(formula: Formula) -> Dict[Node, Occurrence]:
    """Index the occurrences of a resolved formula."""
    found: Dict[Node, Occurrence] = {}

    def visit(node: Formula, path: Node, address: Tuple[str, ...], negated: bool, parent: Optional[Node]):
        kind = type(node)
        if kind in (Tensor, Par, Limp):
            tensor = (kind is Tensor) != negated
            if kind is Limp:
                tensor = negated
            occ = Occurrence(path, node, "tensor" if tensor else "par", ".".join(address), parent)
            found[path] = occ
            left_negated = negated != (kind is Limp)
            visit(node.left, path + ("L",), address + ("L",), left_negated, path)
            visit(node.right, path + ("R",), address + ("R",), negated, path)
            occ.children = [path + ("L",), path + ("R",)]
        elif kind in (Up, Down):
            step = "up" if kind is Up else "dn"
            occ = Occurrence(path, node, step, ".".join(address + (step,)), parent)
            found[path] = occ
            visit(node.body, path + (step,), address + (step,), negated, path)
            occ.children = [path + (step,)]
        elif kind is Dual:
            occ = Occurrence(path, node, "dual", ".".join(address), parent)
            found[path] = occ
            visit(node.body, path + ("^",), address, not negated, path)
            occ.children = [path + ("^",)]
        else:
            found[path] = Occurrence(path, node, "unit", ".".join(address), parent)

    visit(formula, (), (), False, None)
    return found


def par_nodes(formula: Formula) -> List[Node]:
    return sorted(n for n, occ in occurrences(formula).items() if occ.kind == "par")


def par_switchings(formula: Formula) -> List[ParSwitching]:
    nodes = par_nodes(formula)
    return [tuple(zip(nodes, choice)) for choice in cartesian((LEFT, RIGHT), repeat=len(nodes))]


def node_name(node: Node) -> str:
    return ".".join(node) or "root"


def par_label(switching: ParSwitching) -> str:
    if not switching:
        return "(none)"
    return ",".join(f"{node_name(n)}={choice}" for n, choice in switching)


@dataclass
class JumpGraph:
    """
    Directed graph of occurrences, jumps and tensor crossings for one par switching.
    """
    graph: nx.DiGraph
    move_nodes: Dict[str, Node] = field(default_factory=dict)  # move address -> modality occurrence
    jumps: List[Tuple[str, str]] = field(default_factory=list)

    def forbidden_cycle(self) -> Optional[List]:
        """
        The first cycle using a jump and crossing each tensor one way only.
        """
        for cycle in sorted(nx.simple_cycles(self.graph), key=lambda c: (len(c), [str(n) for n in c])):
            kinds = [self.graph.nodes[n].get("kind") for n in cycle]
            if "jump" not in kinds:
                continue
            crossings = [self.graph.nodes[n]["tensor"] for n in cycle if self.graph.nodes[n].get("kind") == "cross"]
            if len(set(crossings)) == len(crossings):
                return cycle
        return None


def _connected(occs: Dict[Node, Occurrence], top: Node, node: Node, choice: Dict[Node, str]) -> bool:
    current = node
    while current != top:
        parent = occs[current].parent
        if occs[parent].kind == "par":
            side = LEFT if current[-1] == "L" else RIGHT
            if choice.get(parent) != side:
                return False
        current = parent
    return True


def build_jump_graph(
    formula: Formula,
    jumps: List[Tuple[str, str]],
    switching: ParSwitching = (),
) -> JumpGraph:
    """
    Build the directed graph of a resolved formula for one par switching.

    Args:
        formula: An MLL formula with lifts, identifiers resolved.
        jumps: Strategy-added causal pairs (m, n) of move addresses.
        switching: Premise kept by each par.

    Returns:
        The jump graph.

    Raises:
        ValidationError: If a jump names a move that is not a modality.
    """
    occs = occurrences(formula)
    choice = dict(switching)
    graph = nx.DiGraph()
    move_nodes: Dict[str, Node] = {}
    for node, occ in occs.items():
        graph.add_node(node, kind=occ.kind, label=node_name(node))
        if occ.kind in ("up", "dn"):
            move_nodes[occ.address] = node
    for node, occ in occs.items():
        for child in occ.children:
            graph.add_edge(node, child)

    for node, occ in occs.items():
        if occ.kind != "tensor":
            continue
        sides = {}
        for side, child in (("L", occ.children[0]), ("R", occ.children[1])):
            sides[side] = [
                n for n, o in occs.items()
                if o.kind in ("up", "dn") and n[:len(child)] == child and _connected(occs, node, n, choice)
            ]
        for source, target in (("L", "R"), ("R", "L")):
            hub = ("cross", node, source)
            graph.add_node(hub, kind="cross", tensor=node, label=f"{node_name(node)}:{source}{target}")
            graph.add_edges_from((n, hub) for n in sides[source])
            graph.add_edges_from((hub, n) for n in sides[target])

    for m, n in jumps:
        if m not in move_nodes or n not in move_nodes:
            raise ValidationError(f"Jump between unknown moves {m} -> {n}")
        hub = ("jump", m, n)
        graph.add_node(hub, kind="jump", label=f"{m} -> {n}")
        graph.add_edge(move_nodes[m], hub)
        graph.add_edge(hub, move_nodes[n])
    return JumpGraph(graph, move_nodes, list(jumps))


def strategy_jumps(strategy: Strategy) -> Dict:
    """Added covering pairs at every maximal position reached by the strategy."""
    return {x: added_causality(strategy, x) for x in strategy.maximal_positions()}


def directed_acyclicity_check(
    strategy: Strategy,
    formula: Formula,
    env: Optional[GameEnvironment] = None,
    config: Optional[AnalysisConfig] = None,
) -> SwitchingVerdicts:
    """
    Check the directed acyclicity criterion for every par switching.

    Args:
        strategy: An ingenuous strategy on the game of the formula.
        formula: An MLL formula with lifts.
        env: Environment for formula-bound identifiers.
        config: Analysis configuration.

    Returns:
        One verdict per par switching; the witness is the cycle found.

    Raises:
        ValidationError: If the formula has game-bound identifiers.
    """
    resolved = resolve(formula, env)
    jumps_at = strategy_jumps(strategy)

    def check(switching: ParSwitching) -> Verdict:
        for position, jumps in jumps_at.items():
            if not jumps:
                continue
            jump_graph = build_jump_graph(resolved, jumps, switching)
            cycle = jump_graph.forbidden_cycle()
            if cycle is not None:
                labels = [jump_graph.graph.nodes[n]["label"] for n in cycle]
                return Verdict(False, labels, "directed cycle through a jump")
        return Verdict(True)

    return run_per_switching(par_switchings(resolved), par_label, check, config)


class AcyclicityCriterion(BaseCriterion):
    """
    Implements the directed acyclicity criterion over par switchings.
    """

    order = 40

    def __init__(self):
        super().__init__()
        self.id = "acyclicity"
        self.name = "Directed acyclicity"
        self.description = """
        For every par switching, the formula graph extended with the jumps
        induced by the strategy has no directed cycle through a jump.
        """

    def check(self, context: CriterionContext) -> List[CheckResult]:
        if context.formula is None or not is_mll(context.formula, context.env):
            context.outcomes[self.id] = None
            return []
        verdicts = directed_acyclicity_check(context.strategy, context.formula, context.env, context.config)
        context.outcomes[self.id] = verdicts
        return [
            self.create_result(label, v.passed, v.witness, v.message)
            for label, v in verdicts.verdicts.items()
        ]
