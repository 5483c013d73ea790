"""
Tests for event structures and the games they generate.
"""

import pytest

from asyncgames.errors import ValidationError
from asyncgames.events import EventStructure, configurations, disjoint_union, game_of, structure_of
from asyncgames.games import OPPONENT, PROPONENT


def test_boolean_configurations(boolean_structure):
    assert configurations(boolean_structure) == {
        frozenset(),
        frozenset({"q"}),
        frozenset({"q", "true"}),
        frozenset({"q", "false"}),
    }


def test_causality_is_closed():
    structure = EventStructure.build("abc", [("a", "b"), ("b", "c")])
    assert ("a", "c") in structure.causality
    assert structure.immediate_causes("c") == ["b"]
    assert structure.causes_of("c") == {"a", "b"}


def test_conflict_is_hereditary():
    structure = EventStructure.build("abcd", [("a", "c"), ("b", "d")], [("a", "b")])
    assert structure.in_conflict("c", "d")
    assert structure.in_conflict("a", "d")
    assert structure.minimal_conflicts() == [("a", "b")]


def test_conflict_with_own_history_is_rejected():
    with pytest.raises(ValidationError):
        EventStructure.build("ab", [("a", "b")], [("a", "b")])


def test_unknown_events_are_rejected():
    with pytest.raises(ValidationError):
        EventStructure.build("ab", [("a", "z")])


def test_causality_cycle_is_rejected():
    with pytest.raises(ValidationError):
        EventStructure.build("ab", [("a", "b"), ("b", "a")])


def test_enabled_events(boolean_structure):
    assert boolean_structure.enabled(frozenset()) == ["q"]
    assert boolean_structure.enabled(frozenset({"q"})) == ["true", "false"]
    assert boolean_structure.enabled(frozenset({"q", "true"})) == []
    assert not boolean_structure.is_configuration({"q", "true", "false"})
    assert not boolean_structure.is_configuration({"true"})


def test_game_of_boolean_structure(boolean_structure):
    game = game_of(boolean_structure, name="B")
    assert len(game.positions) == 4
    assert game.polarity("q") == OPPONENT
    assert game.polarity("true") == PROPONENT
    assert game.maximal_positions() == [frozenset({"q", "false"}), frozenset({"q", "true"})]
    assert game.squares() == []


def test_game_of_needs_polarities():
    with pytest.raises(ValidationError):
        game_of(EventStructure.build("ab"))


def test_game_of_rejects_dotted_names():
    structure = EventStructure.build(["a.b"], polarity={"a.b": OPPONENT})
    with pytest.raises(ValidationError):
        game_of(structure)


def test_structure_of_inverts_game_of(boolean_structure, boolean_game):
    recovered = structure_of(boolean_game)
    assert configurations(recovered) == configurations(boolean_structure)
    assert recovered.minimal_conflicts() == [("false", "true")]


def test_disjoint_union_is_independent(boolean_structure):
    union = disjoint_union(boolean_structure, boolean_structure)
    assert len(configurations(union)) == 16
    assert not union.in_conflict("L_true", "R_false")
    assert union.polarity_map["R_q"] == OPPONENT
