"""
Tests for interaction, composition and functoriality.
"""

import pytest

from asyncgames.concurrent import TOP, closure_of
from asyncgames.errors import ValidationError
from asyncgames.formula import Limp, One, Var
from asyncgames.interaction import (
    COMPLETE,
    DEADLOCK,
    compose,
    compose_closures,
    copycat,
    functoriality_check,
    interact,
    lift_to_unit,
)
from asyncgames.strategies import check_ingenuous, is_receptive


def test_right_first_conjunction_deadlocks(sigma, and_r):
    traces = interact(sigma, and_r)
    assert len(traces) == 1
    trace = traces[0]
    assert trace.status == DEADLOCK
    assert trace.reason == "waiting"
    assert trace.position == frozenset({"R.q", "L.R.q"})
    assert trace.expects == {"left": ["L.L.q"], "right": ["L.R.false", "L.R.true"]}
    assert trace.refused == []
    assert str(trace) == "DEADLOCK at {L.R.q, R.q} (waiting)"


def test_left_first_conjunction_completes(sigma, and_l):
    traces = interact(sigma, and_l)
    assert [t.status for t in traces] == [COMPLETE]
    assert traces[0].visible == ("R.q", "R.false")
    assert traces[0].to_dict()["status"] == COMPLETE


def test_parallel_conjunction_completes(sigma, and_p):
    traces = interact(sigma, and_p)
    assert [t.status for t in traces] == [COMPLETE]
    assert traces[0].position == frozenset({"R.q", "L.L.q", "L.R.q", "L.L.true", "L.R.false", "R.false"})
    assert traces[0].count > 1


def test_interaction_checks_addresses(sigma):
    with pytest.raises(ValidationError):
        interact(sigma, sigma)


def test_compose_hides_the_deadlocked_dialogue(sigma, and_r):
    composite = compose(sigma, and_r)
    assert composite.plays == {(), ("R.q",)}
    assert composite.name == "sigma_and_r"
    assert composite.formula == Limp(One(), Var("B"))


def test_compose_with_left_first_conjunction(sigma, and_l):
    composite = compose(sigma, and_l, name="answer")
    assert composite.plays == {(), ("R.q",), ("R.q", "R.false")}
    assert composite.name == "answer"


def test_functoriality_fails_on_deadlock(sigma, and_r):
    report = functoriality_check(sigma, and_r)
    assert not report.lax
    assert not report.strong
    assert frozenset({"R.q", "R.false"}) in report.lax.witness
    assert "{R.false, R.q}" in report.to_dict()["lax_witnesses"]


def test_copycat_on_booleans(boolean_game):
    strategy = copycat(boolean_game)
    assert check_ingenuous(strategy).ingenuous
    assert is_receptive(strategy)
    assert ("R.q", "L.q", "L.true", "R.true") in strategy
    assert ("R.q", "L.q", "L.true", "R.false") not in strategy
    assert len(strategy.maximal_positions()) == 2


def test_copycat_is_a_unit_for_composition(sigma, env):
    composite = compose(sigma, copycat(env.lookup("BB")))
    assert composite.plays == lift_to_unit(sigma).plays


@pytest.mark.parametrize("name", ["and_l", "and_r", "and_p"])
def test_copycat_is_a_two_sided_unit(strategies, env, name):
    strategy = strategies[name]
    assert compose(copycat(env.lookup("BB")), strategy).plays == strategy.plays
    assert compose(strategy, copycat(env.lookup("B"))).plays == strategy.plays


@pytest.mark.parametrize("first", ["sigma", "indep"])
@pytest.mark.parametrize("second", ["and_l", "and_r", "and_p"])
def test_composition_is_associative(strategies, boolean_game, first, second):
    sigma, tau, unit = strategies[first], strategies[second], copycat(boolean_game)
    assert compose(compose(sigma, tau), unit).plays == compose(sigma, compose(tau, unit)).plays


# pairs that pass the scheduling criterion on both sides, or complete their interaction
FUNCTORIAL = [
    ("sigma", "and_l"), ("sigma", "and_p"),
    ("indep", "and_l"), ("indep", "and_r"), ("indep", "and_p"),
]


@pytest.mark.parametrize("first,second", FUNCTORIAL)
def test_functoriality_holds(strategies, first, second):
    report = functoriality_check(strategies[first], strategies[second])
    assert report.lax
    assert report.strong
    assert report.relational == [frozenset(), frozenset({"R.q", "R.false"})]


def test_relational_composite_with_left_first_conjunction(sigma, and_l):
    relational = compose_closures(closure_of(sigma), closure_of(and_l, complete_meets=True))
    assert relational.fixpoints == [frozenset(), frozenset({"R.q", "R.false"}), TOP]
    complete = frozenset({"R.q", "L.L.q", "L.L.true", "L.R.q", "L.R.false", "R.false"})
    assert relational.joint[frozenset({"R.q", "R.false"})] == [
        (frozenset({"L.q", "L.true", "R.q", "R.false"}), complete)
    ]
