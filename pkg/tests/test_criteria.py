"""
Tests for switchings, the correctness criteria and the innocence checker.
"""

import networkx as nx
import pytest

from asyncgames.config import AnalysisConfig
from asyncgames.criteria.acyclicity import (
    LEFT,
    RIGHT,
    build_jump_graph,
    directed_acyclicity_check,
    is_mll,
    occurrences,
    par_label,
    par_switchings,
    resolve,
    strategy_jumps,
)
from asyncgames.criteria.clustered import clusterize, clustered_scheduling_check
from asyncgames.criteria.scheduling import scheduling_check
from asyncgames.criteria.switching import (
    AFTER,
    BEFORE,
    parse_switching,
    restrict_to_switching,
    switching_label,
    tensor_sites,
)
from asyncgames.errors import ValidationError
from asyncgames.formula import Var
from asyncgames.innocence import InnocenceChecker, innocence_check
from asyncgames.parsers import parse_formula
from asyncgames.strategies import causality_order

from conftest import STRATEGY_FILES

SIGMA_WITNESS = ("L.q", "L.true", "R.q", "R.false")

LIFT_VERDICTS = {
    "sigma_lift": False,
    "indep_lift": True,
    "mirror_lift": False,
    "copycat_lift": True,
    "par_sync": True,
    "nested_lift": True,
}


def test_switching_labels_round_trip():
    assert parse_switching("root=before") == (("", BEFORE),)
    assert switching_label((("", AFTER), ("L", BEFORE))) == "root=after,L=before"
    assert parse_switching("root=after,L=before") == (("", AFTER), ("L", BEFORE))
    assert switching_label(()) == "(none)"
    assert parse_switching("(none)") == ()


def test_malformed_switching():
    with pytest.raises(ValidationError):
        parse_switching("root=sideways")
    with pytest.raises(ValidationError):
        parse_switching("root")


def test_tensor_sites(env, and_p, strategies):
    assert tensor_sites(env.lookup("BB")) == [""]
    assert tensor_sites(and_p.game) == []
    assert tensor_sites(strategies["nested_lift"].game) == ["L"]


def test_restriction_to_a_switching(env):
    switched = restrict_to_switching(env.lookup("BB"), (("", AFTER),))
    assert switched.is_play(("R.q", "R.true", "L.q"))
    assert not switched.is_play(("L.q", "R.q"))


def test_sigma_fails_scheduling_right_first(sigma):
    verdicts = scheduling_check(sigma)
    assert list(verdicts.verdicts) == ["root=after", "root=before"]
    assert verdicts["root=before"]
    assert not verdicts["root=after"]
    assert verdicts["root=after"].witness == SIGMA_WITNESS
    assert verdicts.failing() == ["root=after"]


def test_sigma_fails_clustered_scheduling_right_first(sigma):
    verdicts = clustered_scheduling_check(sigma)
    assert verdicts["root=before"]
    assert not verdicts["root=after"]
    assert verdicts["root=after"].witness == SIGMA_WITNESS


def test_parallel_runs_agree(sigma):
    config = AnalysisConfig(parallel=True, max_workers=2)
    assert scheduling_check(sigma, config=config).to_dict() == scheduling_check(sigma).to_dict()


def test_clusterize_synchronizes_answers(sigma, indep):
    clustered = clusterize(sigma, ("L.q", "R.q", "R.false", "L.true"))
    assert clustered.clusters == (("L.q", "R.q", "R.false", "L.true"),)

    first = clusterize(indep, ("L.q", "R.q", "R.false", "L.true"))
    second = clusterize(indep, ("R.q", "L.q", "L.true", "R.false"))
    assert str(first) == "[L.q L.true] [R.q R.false]"
    assert second.clusters == (("R.q", "R.false"), ("L.q", "L.true"))
    assert first.equivalent(second)
    assert first != second
    assert len(clusterize(indep, ())) == 0


def test_sigma_is_not_innocent(sigma, env):
    report = innocence_check(sigma, sigma.formula, env)
    assert report.ingenuous.ingenuous
    assert report.receptive
    assert not report.asynchronous
    assert not report.innocent
    assert report.directed_acyclicity is None
    assert report.criteria_agree is None
    assert report.reporter.has_failures
    assert report.reporter.extra["verdict"] == {"asynchronous": False, "innocent": False}


@pytest.mark.parametrize("name", ["indep", "and_l", "and_r", "and_p"])
def test_innocent_strategies(strategies, env, name):
    report = innocence_check(strategies[name], env=env)
    assert report.asynchronous
    assert report.innocent
    assert report.errors == {}


def test_unrun_criteria_leave_verdict_undetermined(sigma):
    report = innocence_check(sigma, config=AnalysisConfig(include_criteria=["ingenuity"]))
    assert report.scheduling is None
    assert report.clustered is None
    assert report.innocent is None
    assert report.asynchronous is None
    assert report.reporter.extra["verdict"] == {"asynchronous": None, "innocent": None}


def test_failed_criterion_decides_verdict_without_the_rest(sigma):
    report = innocence_check(sigma, config=AnalysisConfig(include_criteria=["ingenuity", "receptivity", "scheduling"]))
    assert report.clustered is None
    assert report.asynchronous is False
    assert report.innocent is None


def test_checker_respects_exclusions():
    checker = InnocenceChecker(AnalysisConfig(exclude_criteria=["acyclicity", "clustered"]))
    assert [c.id for c in checker.criteria] == ["ingenuity", "receptivity", "scheduling"]


def test_resolve_rejects_game_identifiers(env):
    with pytest.raises(ValidationError):
        resolve(Var("BB"), env)
    assert not is_mll(parse_formula("B * B"), env)
    assert is_mll(parse_formula("up dn one * bot"))


def test_par_switchings():
    formula = parse_formula("(up dn one * up dn one) | up dn one")
    switchings = par_switchings(formula)
    assert [par_label(s) for s in switchings] == ["root=left", "root=right"]
    assert par_switchings(parse_formula("up dn one * up dn one")) == [()]


def test_sigma_lift_jumps_close_a_cycle(strategies):
    strategy = strategies["sigma_lift"]
    jumps = strategy_jumps(strategy)
    assert list(jumps.values()) == [[("L.up", "R.up.dn")]]
    graph = build_jump_graph(strategy.formula, jumps[strategy.maximal_positions()[0]])
    cycle = graph.forbidden_cycle()
    assert cycle is not None
    assert "L.up -> R.up.dn" in [graph.graph.nodes[n]["label"] for n in cycle]


def test_jump_graph_rejects_unknown_moves():
    with pytest.raises(ValidationError):
        build_jump_graph(parse_formula("up dn one"), [("up", "R.up")])


def test_par_breaks_the_cycle(strategies):
    strategy = strategies["par_sync"]
    assert directed_acyclicity_check(strategy, strategy.formula).passed


@pytest.mark.parametrize("name", sorted(LIFT_VERDICTS))
def test_criteria_agree_on_lift_formulas(strategies, mll_env, name):
    strategy = strategies[name]
    report = innocence_check(strategy, strategy.formula, mll_env)
    assert report.scheduling.passed == LIFT_VERDICTS[name]
    assert report.directed_acyclicity.passed == LIFT_VERDICTS[name]
    assert report.criteria_agree is True


@pytest.mark.parametrize("name", STRATEGY_FILES)
def test_clusterize_ignores_the_representative_play(strategies, name):
    strategy = strategies[name]
    for position in strategy.maximal_positions():
        plays = sorted(strategy.plays_to(position))
        first = clusterize(strategy, plays[0])
        assert first.play in strategy
        for play in plays[1:]:
            assert clusterize(strategy, play).equivalent(first)


@pytest.mark.parametrize("name", sorted(LIFT_VERDICTS))
def test_game_covering_pairs_as_jumps_keep_the_verdict(strategies, name):
    strategy = strategies[name]
    formula = resolve(strategy.formula)
    for switching in par_switchings(formula):
        acyclic = all(
            build_jump_graph(formula, list(causality_order(strategy, x).covering_pairs()), switching)
            .forbidden_cycle() is None
            for x in strategy.maximal_positions()
        )
        assert acyclic == LIFT_VERDICTS[name]


def _undirected_jump_walk(strategy, formula, switching) -> bool:
    """Closed walk through a jump when skeleton edges are read both ways and each par keeps one premise."""
    occs = occurrences(formula)
    choice = dict(switching)
    graph = nx.DiGraph()
    graph.add_nodes_from(occs)
    for node, occ in occs.items():
        for child in occ.children:
            if occ.kind == "par" and choice[node] != (LEFT if child[-1] == "L" else RIGHT):
                continue
            graph.add_edge(node, child)
            graph.add_edge(child, node)
    moves = {occ.address: node for node, occ in occs.items() if occ.kind in ("up", "dn")}
    jumps = [(moves[m], moves[n]) for pairs in strategy_jumps(strategy).values() for m, n in pairs]
    graph.add_edges_from(jumps)
    return any(nx.has_path(graph, n, m) for m, n in jumps)


@pytest.mark.parametrize("name", ["copycat_lift", "par_sync"])
def test_undirected_skeleton_rejects_scheduled_strategies(strategies, name):
    strategy = strategies[name]
    formula = resolve(strategy.formula)
    assert scheduling_check(strategy).passed
    for switching in par_switchings(formula):
        assert _undirected_jump_walk(strategy, formula, switching)
    assert directed_acyclicity_check(strategy, formula).passed
