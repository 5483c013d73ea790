"""
Tests for the textual formats.
"""

import pytest

from asyncgames.errors import ParseError, ValidationError
from asyncgames.formula import Down, Dual, Limp, One, Par, Tensor, Up, Var, format_formula
from asyncgames.parsers import (
    format_es,
    format_strategy,
    parse_ag,
    parse_env,
    parse_es,
    parse_formula,
    parse_strategy,
    read_text,
)

from conftest import STRATEGY_FILES


def _without_comments(text):
    return [line for line in text.splitlines() if line.strip() and not line.startswith("#")]


def test_formula_precedence():
    assert parse_formula("A * B | C -o D -o E") == Limp(
        Par(Tensor(Var("A"), Var("B")), Var("C")),
        Limp(Var("D"), Var("E")),
    )
    assert parse_formula("up dn one^") == Up(Down(Dual(One())))
    assert parse_formula("(A | B)^") == Dual(Par(Var("A"), Var("B")))


@pytest.mark.parametrize("text", [
    "(B * B) -o B",
    "up dn one * up dn one",
    "(up dn one * up dn one) | up dn one",
    "A -o B -o C",
    "(A -o B) -o C",
    "A * (B * C)",
    "(A | B)^ * bot",
    "up (A * B)",
])
def test_formula_printer_round_trips(text):
    assert format_formula(parse_formula(text)) == text


def test_formula_error_at_end_of_input():
    with pytest.raises(ParseError) as info:
        parse_formula("(B *")
    assert info.value.span.line == 1
    assert info.value.span.column == 5
    assert "end of input" in info.value.message


def test_formula_error_on_bad_character():
    with pytest.raises(ParseError) as info:
        parse_formula("B & B", file_name="f.env", line=3, column=10)
    assert str(info.value.span) == "f.env:3:12"


def test_formula_error_on_trailing_tokens():
    with pytest.raises(ParseError) as info:
        parse_formula("A B")
    assert info.value.span.column == 3


def test_event_structure_round_trip(fixtures_dir):
    text = read_text(fixtures_dir / "b.es")
    structure = parse_es(text)
    assert structure.events == ("q", "true", "false")
    assert _without_comments(format_es(structure)) == _without_comments(text)


def test_event_structure_errors():
    with pytest.raises(ParseError):
        parse_es("event q -\nevent q +\n")
    with pytest.raises(ParseError):
        parse_es("event q -\ncause q < z\n")
    with pytest.raises(ParseError) as info:
        parse_es("event q -\n\nevent r ?\n")
    assert info.value.span.line == 3


def test_environment_bindings(env):
    assert "B" in env
    assert env.formulas["BB"] == Tensor(Var("B"), Var("B"))
    assert len(env.lookup("BB").positions) == 16


def test_environment_errors():
    with pytest.raises(ParseError) as info:
        parse_env("game C = B * (")
    assert str(info.value.span) == "<string>:1:15"
    with pytest.raises(ParseError):
        parse_env("game C = D")
    with pytest.raises(ParseError):
        parse_env("game B\n  event q -\n")
    with pytest.raises(ParseError):
        parse_env("game B\n  event q\nend\n")


def test_parse_errors_are_validation_errors():
    with pytest.raises(ValidationError):
        parse_env("bogus")


@pytest.mark.parametrize("name", STRATEGY_FILES)
def test_strategy_files_round_trip(fixtures_dir, env, name):
    text = read_text(fixtures_dir / f"{name}.str")
    strategy = parse_strategy(text, env)
    assert _without_comments(format_strategy(strategy)) == _without_comments(text)


def test_reparsed_strategy_has_the_same_plays(sigma, env):
    again = parse_strategy(format_strategy(sigma), env)
    assert again.plays == sigma.plays
    assert again.name == "sigma"


def test_header_only_strategy(env):
    strategy = parse_strategy("strategy idle on B\n", env)
    assert strategy.plays == {()}
    assert strategy.formula == Var("B")


def test_unknown_move_address(env):
    with pytest.raises(ParseError) as info:
        parse_strategy("strategy s on B\nevent x = L.q\n", env)
    assert info.value.message == "Unknown move address: L.q"
    assert info.value.span.line == 2


def test_strategy_errors(env):
    with pytest.raises(ParseError):
        parse_strategy("", env)
    with pytest.raises(ParseError):
        parse_strategy("strategy s over B\n", env)
    with pytest.raises(ParseError):
        parse_strategy("strategy s on B * B copycat\n", env)
    with pytest.raises(ParseError):
        parse_strategy("strategy s on B\nevent a = q; deps b\n", env)
    with pytest.raises(ParseError):
        parse_strategy("strategy s on C\n", env)


def test_composite_prints_through_induced_events(sigma, and_l, env):
    from asyncgames.interaction import compose

    text = format_strategy(compose(sigma, and_l))
    assert text.splitlines() == [
        "strategy sigma_and_l on one -o B",
        "event e1 = R.false; deps e2",
        "event e2 = R.q",
    ]
    assert parse_strategy(text, env).plays == {(), ("R.q",), ("R.q", "R.false")}


def test_graph_file(no_cube):
    graph, root = no_cube
    assert len(graph.vertices) == 8
    assert len(graph.edges) == 12
    assert len(graph.tiles) == 5


def test_graph_errors():
    with pytest.raises(ParseError):
        parse_ag("")
    with pytest.raises(ParseError):
        parse_ag("vertex a\nedge x a b\n")
    with pytest.raises(ParseError):
        parse_ag(
            "vertex a\nvertex b\nvertex c\n"
            "edge x a b\nedge y b c\nedge z a c\nedge w a c\n"
            "tile x.y ~ z.w\n"
        )
