"""
Tests for game connectives and formula interpretation.
"""

import pytest

from asyncgames.errors import ValidationError
from asyncgames.events import structure_of
from asyncgames.games import (
    LEFT,
    OPPONENT,
    PAR,
    PROPONENT,
    TENSOR,
    GameEnvironment,
    component,
    dual,
    empty_game,
    interpret_formula,
    isomorphic,
    lift,
    product,
    same_game,
    sequentialize,
)
from asyncgames.parsers import parse_formula


def test_units_are_the_empty_game():
    for text in ("one", "bot", "one^"):
        game = interpret_formula(parse_formula(text))
        assert game.positions == {frozenset()}
        assert game.moves == []
        assert game.plays() == [()]


def test_tensor_of_booleans(env):
    game = env.lookup("BB")
    assert len(game.positions) == 16
    assert game.polarity("L.q") == OPPONENT
    assert game.tile_label("L.q", "R.q") == TENSOR
    assert game.tile_label("L.true", "L.false") is None
    assert (frozenset(), "L.q", "R.q") in game.squares()


def test_par_labels_cross_pairs(boolean_game):
    game = product(boolean_game, boolean_game, PAR)
    assert game.tile_label("L.q", "R.true") == PAR
    assert game.name == "(B | B)"


def test_dual_swaps_polarity_and_labels(env):
    game = dual(env.lookup("BB"))
    assert game.polarity("L.q") == PROPONENT
    assert game.tile_label("L.q", "R.q") == PAR
    assert same_game(dual(game), env.lookup("BB"))


def test_linear_implication_duals_the_left(env):
    game = interpret_formula(parse_formula("B -o B"), env)
    assert game.polarity("L.q") == PROPONENT
    assert game.polarity("R.q") == OPPONENT
    assert game.tile_label("L.q", "R.q") == PAR


def test_lift_adds_an_initial_move():
    game = interpret_formula(parse_formula("up dn one"))
    assert game.plays() == [(), ("up",), ("up", "up.dn")]
    assert game.polarity("up") == OPPONENT
    assert game.polarity("up.dn") == PROPONENT


def test_lift_rejects_bad_polarity(boolean_game):
    with pytest.raises(ValidationError):
        lift(boolean_game, 0)


def test_sequentialize_forces_the_left_first(boolean_game):
    game = sequentialize(boolean_game, boolean_game, LEFT)
    assert game.is_play(("L.q", "R.q"))
    assert not game.is_play(("R.q", "L.q"))
    assert game.name == "(B < B)"


def test_component_projects_a_product(env, boolean_game):
    assert same_game(component(env.lookup("BB"), "R"), boolean_game)


def test_unbound_identifier_is_rejected():
    with pytest.raises(ValidationError):
        interpret_formula(parse_formula("A * one"), GameEnvironment())


def test_position_of_rejects_unavailable_moves(boolean_game):
    assert boolean_game.position_of(("q", "true")) == frozenset({"q", "true"})
    with pytest.raises(ValidationError):
        boolean_game.position_of(("true",))


def test_unknown_move_polarity(boolean_game):
    with pytest.raises(ValidationError):
        boolean_game.polarity("R.q")


def test_game_needs_a_root():
    from asyncgames.games import Game

    with pytest.raises(ValidationError):
        Game([frozenset({"a"})], {"a": OPPONENT})


def test_plays_are_bounded(env):
    game = env.lookup("BB")
    assert all(len(p) <= 2 for p in game.plays(max_length=2))
    assert ("L.q", "R.q") in game.plays(max_length=2)


def test_game_precedence(boolean_game):
    assert boolean_game.precedes("q", "true")
    assert not boolean_game.precedes("true", "false")


def test_restrict_drops_unreachable_positions(boolean_game):
    game = boolean_game.restrict([(frozenset(), "q"), (frozenset({"q"}), "true")])
    assert game.maximal_positions() == [frozenset({"q", "true"})]


def test_products_are_generated_by_event_structures(env):
    recovered = structure_of(env.lookup("BB"))
    assert ("L.q", "L.true") in recovered.causality
    assert recovered.in_conflict("R.true", "R.false")


def test_tensor_is_symmetric_up_to_isomorphism(boolean_game):
    lifted = lift(boolean_game, OPPONENT)
    first = product(boolean_game, lifted, TENSOR)
    second = product(lifted, boolean_game, TENSOR)
    assert not same_game(first, second)
    assert isomorphic(first, second)
    assert not isomorphic(first, dual(second))


def test_empty_game_name():
    assert empty_game().name == "one"
