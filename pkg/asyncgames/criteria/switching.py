"""
Switchings of tensor and par occurrences.

A tensor switching chooses, for every tensor site of a game, whether the
left component plays entirely before the right one (BEFORE) or after it
(AFTER). A par switching chooses the left or right premise of every par.
"""

import concurrent.futures
import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable, Dict, List, Optional, Tuple

from ..asyncgraph import Verdict
from ..config import AnalysisConfig
from ..errors import ValidationError
from ..games import TENSOR, Game, restrict_first

logger = logging.getLogger(__name__)

BEFORE = "before"
AFTER = "after"

Switching = Tuple[Tuple[str, str], ...]  # sorted (site, choice) pairs


def site_name(site: str) -> str:
    return site or "root"


def switching_label(switching: Switching) -> str:
    """Canonical text of a switching, e.g. "root=before"."""
    if not switching:
        return "(none)"
    return ",".join(f"{site_name(site)}={choice}" for site, choice in switching)


def parse_switching(text: str, choices: Tuple[str, ...] = (BEFORE, AFTER)) -> Switching:
    """
    Parse the text produced by switching_label.

    Raises:
        ValidationError: On a malformed entry or unknown choice.
    """
    text = text.strip()
    if text in ("", "(none)"):
        return ()
    pairs = []
    for entry in text.split(","):
        site, sep, choice = entry.strip().partition("=")
        if not sep or choice not in choices:
            raise ValidationError(f"Invalid switching entry: {entry!r}")
        pairs.append(("" if site == "root" else site, choice))
    return tuple(sorted(pairs))


def _site_of(m: str, n: str) -> Optional[str]:
    a, b = m.split("."), n.split(".")
    i = 0
    while i < min(len(a), len(b)) and a[i] == b[i]:
        i += 1
    if i >= min(len(a), len(b)):
        return None
    if {a[i], b[i]} != {"L", "R"}:
        return None
    return ".".join(a[:i])


def tensor_sites(game: Game) -> List[str]:
    """Address prefixes of the products whose cross pairs are TENSOR-labelled."""
    sites = set()
    for pair, label in game.tile_labels.items():
        if label != TENSOR:
            continue
        m, n = sorted(pair)
        site = _site_of(m, n)
        if site is not None:
            sites.add(site)
    return sorted(sites)


def tensor_switchings(game: Game) -> List[Switching]:
    """All 2^k switchings of the k tensor sites, in canonical order."""
    sites = tensor_sites(game)
    return [tuple(zip(sites, choice)) for choice in cartesian((BEFORE, AFTER), repeat=len(sites))]


def restrict_to_switching(game: Game, switching: Switching) -> Game:
    """
    Restrict a game so that each switched product plays one side first.

    Args:
        game: The game.
        switching: BEFORE (left first) or AFTER (right first) per site.

    Returns:
        The restricted game; tiles across a switched product disappear.
    """
    restricted = game.restrict(game.edges)
    for site, choice in switching:
        restricted = restrict_first(restricted, site, "L" if choice == BEFORE else "R")
    restricted.name = f"{game.name}[{switching_label(switching)}]"
    return restricted


@dataclass
class SwitchingVerdicts:
    """
    One verdict per switching, keyed by switching label.
    """
    verdicts: Dict[str, Verdict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.verdicts.values())

    def __bool__(self) -> bool:
        return self.passed

    def failing(self) -> List[str]:
        return [label for label, v in self.verdicts.items() if not v]

    def __getitem__(self, label: str) -> Verdict:
        return self.verdicts[label]

    def to_dict(self) -> Dict:
        return {
            label: {"passed": v.passed, "witness": None if v.witness is None else str(v.witness), "message": v.message}
            for label, v in self.verdicts.items()
        }


def run_per_switching(
    switchings: List,
    label: Callable,
    check: Callable[..., Verdict],
    config: Optional[AnalysisConfig] = None,
) -> SwitchingVerdicts:
    """
    Run a check once per switching, on a thread pool when configured.

    Args:
        switchings: The switchings to check.
        label: Maps a switching to its label.
        check: The per-switching check.
        config: Analysis configuration.

    Returns:
        Verdicts sorted by label.
    """
    config = config or AnalysisConfig()
    results: Dict[str, Verdict] = {}
    if config.parallel and len(switchings) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.max_workers) as executor:
            future_to_label = {executor.submit(check, sw): label(sw) for sw in switchings}
            for future in concurrent.futures.as_completed(future_to_label):
                name = future_to_label[future]
                results[name] = future.result()
                logger.debug(f"Switching {name}: {'pass' if results[name] else 'fail'}")
    else:
        for sw in switchings:
            results[label(sw)] = check(sw)
            logger.debug(f"Switching {label(sw)}: {'pass' if results[label(sw)] else 'fail'}")
    return SwitchingVerdicts({name: results[name] for name in sorted(results)})
