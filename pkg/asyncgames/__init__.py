"""
Asynchronous games workbench - Python library for non-alternating game semantics.

This library builds polarized asynchronous games from event structures and
formulas, checks strategies for ingenuity and innocence, translates them to
closure operators, and composes them.
"""

from .games import Game, GameEnvironment, interpret_formula
from .innocence import InnocenceChecker, innocence_check
from .parsers import parse_env, parse_formula, parse_strategy
from .reporter import AnalysisReporter
from .strategies import Strategy

__version__ = "0.1.0"
