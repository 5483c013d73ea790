"""
Tests for strategies: materialization and the structural checks.
"""

import pytest

from asyncgames.errors import PreconditionError, ValidationError
from asyncgames.strategies import (
    IngenuityReport,
    Strategy,
    added_causality,
    causality_order,
    check_ingenuous,
    check_play_level,
    induced_events,
    is_receptive,
    is_stable,
)

from conftest import STRATEGY_FILES

AND_P_TOP = frozenset({"R.q", "L.L.q", "L.R.q", "L.L.true", "L.R.true", "R.true"})


def test_sigma_plays(sigma):
    assert ("L.q", "R.q", "R.false", "L.true") in sigma
    assert ("R.q", "R.false") not in sigma
    assert sigma.next_moves(("R.q",)) == {"L.q"}
    assert sigma.maximal_positions() == [frozenset({"L.q", "L.true", "R.q", "R.false"})]


def test_fixture_strategies_are_ingenuous_and_receptive(strategies):
    for name in ("sigma", "indep", "and_l", "and_r", "and_p"):
        strategy = strategies[name]
        assert check_ingenuous(strategy).ingenuous, name
        assert is_receptive(strategy), name
        assert is_stable(strategy), name
        assert check_play_level(strategy).passed, name


def test_and_p_reaches_its_top_position_by_six_plays(and_p):
    assert len(and_p.plays_to(AND_P_TOP)) == 6


def test_causality_order_of_and_p(and_p):
    order = causality_order(and_p, AND_P_TOP)
    assert order.less("R.q", "R.true")
    assert not order.leq("L.L.true", "L.R.true")
    assert set(added_causality(and_p, AND_P_TOP)) == {
        ("R.q", "L.L.q"),
        ("R.q", "L.R.q"),
        ("L.L.true", "R.true"),
        ("L.R.true", "R.true"),
    }


def test_added_causality_of_sigma_and_indep(sigma, indep):
    position = {"L.q", "R.q", "R.false"}
    assert added_causality(sigma, position) == [("L.q", "R.false")]
    assert added_causality(indep, position) == []


def test_causality_order_needs_a_reached_position(sigma):
    with pytest.raises(PreconditionError):
        causality_order(sigma, {"R.q", "R.false"})


def test_induced_events_of_and_p(and_p):
    induced = induced_events(and_p)
    assert len(induced.structure.events) == 11
    assert len(induced.events_labelled("R.false")) == 3
    assert induced.events_labelled("L.L.true") == ["L.L.true"]
    assert ("L.L.q", "L.L.true") in induced.structure.causality


def test_induced_events_split_repeated_questions(and_l):
    induced = induced_events(and_l)
    assert len(induced.structure.events) == 14
    assert len(induced.events_labelled("L.R.q")) == 2


def test_stability_reports_shared_moves(and_p):
    assert is_stable(and_p).message == "moves with several events: R.false"


def test_discourteous_strategy(env):
    game = env.lookup("BB")
    strategy = Strategy.from_plays(game, [("L.q", "L.true", "R.q"), ("L.q", "R.q")])
    report = check_ingenuous(strategy)
    assert not report.ingenuous
    assert report.failed() == ["forward_preservation", "deterministic", "courteous"]
    assert report.witnesses["courteous"] == ("{L.q}", "L.true", "R.q")
    assert report.to_dict()["ingenuous"] is False


def test_non_positional_strategy(env):
    game = env.lookup("BB")
    strategy = Strategy.from_plays(game, [("L.q", "R.q", "L.true"), ("R.q", "L.q")])
    report = check_ingenuous(strategy)
    assert not report.positional
    assert report.witnesses["positional"][2] == "L.true"


def test_refused_opponent_move(env):
    strategy = Strategy.from_plays(env.lookup("BB"), [("L.q",)])
    verdict = is_receptive(strategy)
    assert not verdict
    assert verdict.witness == ((), "R.q")


def test_unstable_strategy(env):
    game = env.lookup("BB")
    strategy = Strategy.from_plays(game, [("L.q", "R.q", "R.true"), ("R.q", "R.true", "L.q")])
    verdict = is_stable(strategy)
    assert not verdict
    assert verdict.witness == "{L.q, R.q, R.true}"
    assert not check_play_level(strategy).internal_homotopy


def test_forward_closure_failure(env):
    strategy = Strategy.from_plays(env.lookup("BB"), [("L.q", "R.q"), ("R.q",)])
    report = check_play_level(strategy)
    assert report.internal_homotopy
    assert not report.forward_closure
    assert report.forward_closure.witness == ((), "L.q", "R.q")


def test_plays_must_be_prefix_closed(env):
    with pytest.raises(ValidationError):
        Strategy(env.lookup("BB"), [("L.q", "R.q")])


def test_from_plays_rejects_foreign_moves(env):
    with pytest.raises(ValidationError):
        Strategy.from_plays(env.lookup("BB"), [("L.true",)])


def test_empty_strategy_is_ingenuous(env):
    strategy = Strategy(env.lookup("BB"), [])
    assert strategy.plays == {()}
    assert check_ingenuous(strategy).ingenuous
    assert not is_receptive(strategy)


def test_ingenuity_flags_are_ordered():
    assert IngenuityReport().failed() == []
    assert IngenuityReport.FLAGS[0] == "positional"


@pytest.mark.parametrize("name", STRATEGY_FILES)
def test_added_causality_goes_from_opponent_to_proponent(strategies, name):
    strategy = strategies[name]
    game = strategy.game
    for position in strategy.maximal_positions():
        for m, n in added_causality(strategy, position):
            assert game.is_opponent(m), (m, n)
            assert game.is_proponent(n), (m, n)
