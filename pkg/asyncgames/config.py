"""
Analysis configuration.
"""

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class AnalysisConfig:
    """
    Knobs shared by the criteria runner and the command-line interface.
    """
    max_workers: int = 4  # thread pool size for per-switching checks
    parallel: bool = False  # run independent checks on a thread pool
    max_path_length: int = 6  # bound for exhaustive homotopy/linearization cross-checks
    include_criteria: Optional[List[str]] = None  # e.g. ["scheduling", "clustered"]
    exclude_criteria: List[str] = field(default_factory=list)

    def wants(self, criterion_id: str) -> bool:
        """
        Check whether a criterion is selected by the include/exclude lists.

        Args:
            criterion_id: Identifier of the criterion.

        Returns:
            True if the criterion should run.
        """
        if self.include_criteria and criterion_id not in self.include_criteria:
            return False
        return criterion_id not in self.exclude_criteria
