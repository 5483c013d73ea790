"""
DOT export of games, strategies, causality orders and jump graphs.

Proponent moves are drawn solid and Opponent moves dashed. With tiles
enabled, every tile becomes a small shaded square between its bottom and
top positions.
"""

import logging
from typing import Dict, Optional, Set

from graphviz import Digraph

from .asyncgraph import MovePartialOrder, canonical_sorted
from .criteria.acyclicity import JumpGraph
from .games import Game, GameEdge, Position, format_position
from .strategies import Strategy

logger = logging.getLogger(__name__)


def _edge_style(game: Game, move: str) -> str:
    return "dashed" if game.is_opponent(move) else "solid"


def game_dot(
    game: Game,
    tiles: bool = False,
    highlight: Optional[Set[GameEdge]] = None,
    name: str = "game",
) -> Digraph:
    """
    Draw the position graph of a game.

    Args:
        game: The game.
        tiles: Draw tiles as shaded squares.
        highlight: Edges drawn bold and coloured; the rest is greyed out.
        name: Graph name.

    Returns:
        The graphviz digraph.
    """
    dot = Digraph(name)
    dot.attr(rankdir="BT")
    ids: Dict[Position, str] = {}
    reached = None
    if highlight is not None:
        reached = {x for x, _ in highlight} | {x | {m} for x, m in highlight} | {game.root}

    dot.attr("node", shape="box", style="rounded", fontsize="10")
    for i, position in enumerate(canonical_sorted(game.positions)):
        ids[position] = f"p{i}"
        attrs = {}
        if reached is not None and position not in reached:
            attrs["color"] = "grey"
            attrs["fontcolor"] = "grey"
        dot.node(ids[position], format_position(position), **attrs)

    for x, m in canonical_sorted(game.edges):
        attrs = {"label": m, "style": _edge_style(game, m), "fontsize": "9"}
        if highlight is not None:
            if (x, m) in highlight:
                attrs.update(color="blue", penwidth="2")
            else:
                attrs.update(color="grey", fontcolor="grey")
        dot.edge(ids[x], ids[x | {m}], **attrs)

    if tiles:
        dot.attr("node", shape="square", style="filled", fillcolor="lightgrey", label="", width="0.15")
        for i, (x, m, n) in enumerate(game.squares()):
            tile = f"t{i}"
            dot.node(tile, tooltip=f"{m} ~ {n}")
            dot.edge(ids[x], tile, style="dotted", arrowhead="none")
            dot.edge(tile, ids[x | {m, n}], style="dotted", arrowhead="none")
    logger.debug(f"Drew {len(ids)} positions of {game.name or '?'}")
    return dot


def strategy_dot(strategy: Strategy, tiles: bool = False) -> Digraph:
    """Draw the game with the edges used by the strategy highlighted."""
    return game_dot(strategy.game, tiles=tiles, highlight=set(strategy.edges), name=strategy.name or "strategy")


def order_dot(order: MovePartialOrder, game: Optional[Game] = None, name: str = "order") -> Digraph:
    """Draw the covering pairs of a partial order on moves."""
    dot = Digraph(name)
    dot.attr(rankdir="BT")
    dot.attr("node", shape="plaintext")
    for move in canonical_sorted(order.elements):
        dot.node(str(move), str(move))
    for a, b in canonical_sorted(order.covering_pairs()):
        style = "solid"
        if game is not None and not game.precedes(a, b):
            style = "bold"
        dot.edge(str(a), str(b), style=style)
    return dot


def jumps_dot(jump_graph: JumpGraph, name: str = "jumps") -> Digraph:
    """Draw a jump graph: occurrences, tensor crossings and jumps."""
    dot = Digraph(name)
    shapes = {"cross": "diamond", "jump": "point"}
    ids = {node: f"n{i}" for i, node in enumerate(canonical_sorted(jump_graph.graph.nodes))}
    for node, data in jump_graph.graph.nodes(data=True):
        kind = data.get("kind", "")
        dot.node(ids[node], data.get("label", str(node)), shape=shapes.get(kind, "ellipse"))
    for source, target in canonical_sorted(jump_graph.graph.edges):
        jump = "jump" in (jump_graph.graph.nodes[source].get("kind"), jump_graph.graph.nodes[target].get("kind"))
        dot.edge(ids[source], ids[target], color="red" if jump else "black")
    return dot
