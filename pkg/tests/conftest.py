"""
Shared fixtures: the shipped environments and strategies.
"""

from pathlib import Path

import pytest

from asyncgames.parsers import load_ag, load_env, load_es, load_strategy

FIXTURES = Path(__file__).resolve().parent.parent / "asyncgames" / "fixtures"

STRATEGY_FILES = [
    "sigma", "indep", "and_l", "and_r", "and_p",
    "sigma_lift", "indep_lift", "mirror_lift", "copycat_lift", "par_sync", "nested_lift",
]


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def env():
    return load_env(FIXTURES / "bb.env")


@pytest.fixture(scope="session")
def mll_env():
    return load_env(FIXTURES / "mll.env")


@pytest.fixture(scope="session")
def boolean_game(env):
    return env.lookup("B")


@pytest.fixture(scope="session")
def strategies(env):
    """Every shipped strategy, keyed by file stem."""
    return {name: load_strategy(FIXTURES / f"{name}.str", env) for name in STRATEGY_FILES}


@pytest.fixture(scope="session")
def sigma(strategies):
    return strategies["sigma"]


@pytest.fixture(scope="session")
def indep(strategies):
    return strategies["indep"]


@pytest.fixture(scope="session")
def and_l(strategies):
    return strategies["and_l"]


@pytest.fixture(scope="session")
def and_r(strategies):
    return strategies["and_r"]


@pytest.fixture(scope="session")
def and_p(strategies):
    return strategies["and_p"]


@pytest.fixture(scope="session")
def boolean_structure():
    return load_es(FIXTURES / "b.es")


@pytest.fixture(scope="session")
def no_cube():
    return load_ag(FIXTURES / "no-cube.ag")
