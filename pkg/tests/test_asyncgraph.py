"""
Tests for asynchronous graphs, homotopy and the structural checks.
"""

import pytest

from asyncgames.asyncgraph import (
    AsyncGraph,
    Edge,
    MovePartialOrder,
    check_contractible,
    check_cube,
    check_distributive,
    homotopic,
    homotopy_class,
    linearizations,
    path_order,
    position_order,
    quotient,
    validate_tiles,
)
from asyncgames.errors import PreconditionError, ValidationError


@pytest.fixture
def square():
    """Two independent edges a/d and c/b closing a tile."""
    edges = [Edge("a", 0, 1), Edge("b", 1, 3), Edge("c", 0, 2), Edge("d", 2, 3)]
    return AsyncGraph([0, 1, 2, 3], edges, [(("a", "b"), ("c", "d"))])


def test_linearizations_are_canonically_sorted():
    order = MovePartialOrder.from_relation(["a", "b", "c"], [("a", "c")])
    assert linearizations(order) == [("a", "b", "c"), ("a", "c", "b"), ("b", "a", "c")]


def test_linearizations_of_empty_order():
    assert linearizations(MovePartialOrder(())) == [()]


def test_partial_order_is_closed_and_reduced():
    order = MovePartialOrder.from_relation("abc", [("a", "b"), ("b", "c")])
    assert order.less("a", "c")
    assert order.leq("b", "b")
    assert order.covering_pairs() == [("a", "b"), ("b", "c")]


def test_partial_order_rejects_cycles():
    with pytest.raises(ValidationError):
        MovePartialOrder.from_relation("ab", [("a", "b"), ("b", "a")])


def test_square_is_well_formed(square):
    assert validate_tiles(square) == []
    assert check_cube(square)
    assert check_contractible(square, 0)
    assert check_distributive(square, 0)


def test_homotopy_through_a_tile(square):
    left = square.make_path(["a", "b"])
    right = square.make_path(["c", "d"])
    assert homotopic(square, left, right)
    assert homotopy_class(square, left) == frozenset({("a", "b"), ("c", "d")})


def test_homotopy_needs_coinitial_cofinal_paths(square):
    with pytest.raises(PreconditionError):
        homotopic(square, square.make_path(["a"]), square.make_path(["c"]))


def test_make_path_rejects_broken_chains(square):
    with pytest.raises(PreconditionError):
        square.make_path(["a", "d"])
    with pytest.raises(PreconditionError):
        square.make_path([])


def test_path_order_of_a_tile_is_empty(square):
    order = path_order(square, square.make_path(["a", "b"]))
    assert order.pairs == frozenset()
    assert set(order.linearizations()) == {("a", "b"), ("b", "a")}


def test_validate_tiles_reports_open_squares():
    edges = [Edge("a", 0, 1), Edge("b", 1, 3), Edge("c", 0, 2), Edge("e", 2, 4)]
    graph = AsyncGraph([0, 1, 2, 3, 4], edges, [(("a", "b"), ("c", "e"))])
    assert [v.kind for v in validate_tiles(graph)] == ["not coinitial and cofinal"]


def test_validate_tiles_reports_unknown_edges(square):
    graph = AsyncGraph(square.vertices, square.edges, [(("a", "b"), ("c", "z"))])
    assert [v.kind for v in validate_tiles(graph)] == ["unknown edge"]


def test_missing_face_breaks_the_cube(no_cube):
    graph, root = no_cube
    assert root == "v0"
    assert validate_tiles(graph) == []
    verdict = check_cube(graph)
    assert not verdict
    assert verdict.witness["path"] == ("x0a", "xab", "xabc")
    assert verdict.witness["right"] is None


def test_missing_face_keeps_contractibility(no_cube):
    graph, root = no_cube
    assert check_contractible(graph, root)
    assert len(quotient(graph, root).graph.vertices) == 8


def test_position_order_needs_the_cube(no_cube):
    graph, root = no_cube
    with pytest.raises(PreconditionError):
        position_order(graph, root)


def test_contractibility_needs_reachable_vertices(square):
    graph = AsyncGraph(set(square.vertices) | {9}, square.edges, square.tiles)
    with pytest.raises(ValidationError):
        check_contractible(graph, 0)


def test_fixture_games_pass_every_structural_check(env, and_p):
    for game in (env.lookup("B"), env.lookup("BB"), and_p.game):
        graph = game.graph
        assert validate_tiles(graph) == []
        assert check_cube(graph)
        assert check_contractible(graph, game.root)
        assert check_distributive(graph, game.root)


def test_homotopy_classes_are_linearizations(env, and_p):
    for game in (env.lookup("BB"), and_p.game):
        for play in game.plays(max_length=6):
            path = game.path_of(play)
            by_homotopy = {tuple(m for _, m in edges) for edges in game.graph.homotopy_class(path)}
            by_order = {tuple(m for _, m in edges) for edges in path_order(game.graph, path).linearizations()}
            assert by_homotopy == by_order, play


def test_position_order_of_a_game_is_inclusion(env):
    game = env.lookup("B")
    order = position_order(game.graph, game.root)
    assert set(order.elements) == set(game.positions)
    assert order.less(frozenset(), frozenset({"q", "true"}))
    assert not order.leq(frozenset({"q", "true"}), frozenset({"q", "false"}))
