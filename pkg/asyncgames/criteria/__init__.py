"""
Correctness criteria for strategies.
"""

from .base import BaseCriterion, CriterionContext
