"""
Command-line interface for the asynchronous games workbench.

Input files are recognized by suffix: ``.env`` environments, ``.str``
strategies, ``.es`` event structures and ``.ag`` asynchronous graphs. When
a command needs an environment and none is given, the shipped ``bb.env``
(the boolean game B and BB = B * B) is used.

Exit status: 0 when every check passes, 1 when a verdict is negative,
2 on unreadable, malformed or invalid input.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .asyncgraph import (
    AsyncGraph,
    check_contractible,
    check_cube,
    check_distributive,
    validate_tiles,
)
from .concurrent import (
    build_lattice,
    check_closure_properties,
    closure_of,
    format_element,
    halting_meets,
    list_fixpoints,
)
from .config import AnalysisConfig
from .criteria.acyclicity import build_jump_graph, par_label, par_switchings, resolve, strategy_jumps
from .criteria.switching import parse_switching, switching_label
from .dot import game_dot, jumps_dot, order_dot, strategy_dot
from .errors import AsyncGamesError, ValidationError
from .events import game_of
from .games import GameEnvironment, format_position
from .innocence import InnocenceChecker, InnocenceReport
from .interaction import DEADLOCK, compose, functoriality_check, interact
from .parsers import format_strategy, load_ag, load_es, parse_env, parse_strategy, read_text
from .reporter import AnalysisReporter, CheckResult
from .strategies import Strategy, causality_order, check_ingenuous, check_play_level, is_receptive, is_stable

logger = logging.getLogger(__name__)

FIXTURES = Path(__file__).parent / "fixtures"
DEFAULT_ENV = FIXTURES / "bb.env"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--format",
        "-f",
        choices=["text", "json", "markdown"],
        default="text",
        help="Output format for the report (default: text)",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="Shorthand for --format json",
    )
    parser.add_argument(
        "--output",
        "-o",
        help="Output file for the report (default: stdout)",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Enable verbose output",
    )


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog="agw",
        description="Asynchronous games workbench - check games and strategies, compose and interact",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    check_game = commands.add_parser("check-game", help="Check tile axioms, cube property and contractibility")
    check_game.add_argument("files", nargs="+", help=".env, .es or .ag files")
    check_game.add_argument("--game", help="Check only this game of the environment")

    check_strategy = commands.add_parser("check-strategy", help="Check ingenuity, receptivity and stability")
    check_strategy.add_argument("files", nargs="+", help="Optional .env files, then a .str file")

    innocence = commands.add_parser("innocence", help="Run the scheduling, acyclicity and clustered criteria")
    innocence.add_argument("files", nargs="+", help="Optional .env files, then a .str file")
    innocence.add_argument("--switching", help="Report a single switching, e.g. root=after")
    innocence.add_argument("--include", "-i", nargs="+", help="Run only these criteria (e.g. scheduling)")
    innocence.add_argument("--exclude", "-e", nargs="+", help="Skip these criteria")
    innocence.add_argument("--parallel", "-p", action="store_true", help="Check switchings on a thread pool")
    innocence.add_argument("--workers", "-w", type=int, default=4, help="Number of worker threads (default: 4)")

    interaction = commands.add_parser("interact", help="Play a strategy on A against one on A -o C")
    interaction.add_argument("files", nargs="+", help="Optional .env files, then two .str files")

    composition = commands.add_parser("compose", help="Compose two strategies and print the composite")
    composition.add_argument("files", nargs="+", help="Optional .env files, then two .str files")
    composition.add_argument("--name", help="Name of the composite strategy")
    composition.add_argument(
        "--functoriality",
        action="store_true",
        help="Compare with the relational composite of the fixpoint sets",
    )

    fixpoints = commands.add_parser("fixpoints", help="List halting positions and closure fixpoints")
    fixpoints.add_argument("files", nargs="+", help="Optional .env files, then a .str file")

    export = commands.add_parser("export-dot", help="Export a graph in DOT format")
    export.add_argument("target", choices=["game", "strategy", "order", "jumps"], help="What to draw")
    export.add_argument("files", nargs="+", help=".env/.es files, and a .str file for strategy targets")
    export.add_argument("--game", help="Game of the environment to draw (default: the last one)")
    export.add_argument("--position", help="Comma-separated moves of the position for the order target")
    export.add_argument("--switching", help="Par switching for the jumps target, e.g. root=left")
    export.add_argument("--tiles", action="store_true", help="Draw tiles as shaded squares")

    for sub in (check_game, check_strategy, innocence, interaction, composition, fixpoints, export):
        _add_common(sub)
    return parser.parse_args(argv)


def _split_files(files: List[str]) -> Dict[str, List[str]]:
    groups: Dict[str, List[str]] = {".env": [], ".str": [], ".es": [], ".ag": []}
    for name in files:
        suffix = Path(name).suffix
        if suffix not in groups:
            raise ValidationError(f"Unsupported input file: {name}")
        groups[suffix].append(name)
    return groups


def _load_env(env_files: List[str]) -> GameEnvironment:
    env = GameEnvironment()
    for name in env_files or [str(DEFAULT_ENV)]:
        parse_env(read_text(name), name, env)
    return env


def _load_strategies(files: List[str], count: int) -> Tuple[List[Strategy], GameEnvironment]:
    groups = _split_files(files)
    if len(groups[".str"]) != count:
        raise ValidationError(f"Expected {count} strategy file(s), got {len(groups['.str'])}")
    env = _load_env(groups[".env"])
    return [parse_strategy(read_text(name), env, name) for name in groups[".str"]], env


def _plain(value):
    """Turn positions and tuples into JSON-friendly text and lists."""
    if isinstance(value, frozenset):
        return format_position(value)
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value if value is None or isinstance(value, (str, int, float, bool)) else str(value)


def _verdict_result(check_id: str, name: str, subject: str, verdict) -> CheckResult:
    return CheckResult(check_id, name, subject, verdict.passed, _plain(verdict.witness), verdict.message)


def _graph_checks(reporter: AnalysisReporter, subject: str, graph: AsyncGraph, root):
    checks = (
        ("cube", "Cube property", lambda: check_cube(graph)),
        ("contractible", "Contractibility", lambda: check_contractible(graph, root)),
        ("distributive", "Distributive positions", lambda: check_distributive(graph, root)),
    )
    violations = validate_tiles(graph)
    reporter.add_result(CheckResult(
        "tiles", "Tile axioms", subject, not violations,
        [f"{v.kind}: {_plain(v.tile)}" for v in violations] or None,
    ))
    for check_id, name, check in checks:
        try:
            reporter.add_result(_verdict_result(check_id, name, subject, check()))
        except AsyncGamesError as e:
            logger.error(f"Error checking {check_id} on {subject}: {e}")
            reporter.add_error(f"{subject}:{check_id}", str(e))


def check_game_command(args) -> Tuple[int, AnalysisReporter]:
    reporter = AnalysisReporter("Game Check Report")
    groups = _split_files(args.files)
    if groups[".str"]:
        raise ValidationError("check-game takes .env, .es and .ag files only")
    subjects = []
    for name in groups[".env"]:
        env = parse_env(read_text(name), name)
        selected = [args.game] if args.game else sorted(env.games)
        subjects += [(game_name, env.lookup(game_name)) for game_name in selected]
    for name in groups[".es"]:
        subjects.append((Path(name).stem, game_of(load_es(name), name=Path(name).stem)))
    for subject, game in subjects:
        _graph_checks(reporter, subject, game.graph, game.root)
    for name in groups[".ag"]:
        graph, root = load_ag(name)
        _graph_checks(reporter, Path(name).stem, graph, root)
    reporter.subject = ", ".join(args.files)
    return (EXIT_OK if reporter.passed else EXIT_NEGATIVE), reporter


def check_strategy_command(args) -> Tuple[int, AnalysisReporter]:
    (strategy,), _ = _load_strategies(args.files, 1)
    reporter = AnalysisReporter("Strategy Check Report")
    reporter.subject = strategy.name

    ingenuity = check_ingenuous(strategy)
    for flag in ingenuity.FLAGS:
        witness = ingenuity.witnesses.get(flag)
        reporter.add_result(CheckResult(
            "ingenuity", "Ingenuity", flag, getattr(ingenuity, flag), None if witness is None else _plain(witness),
        ))
    reporter.add_result(_verdict_result("receptivity", "Receptivity", "opponent moves", is_receptive(strategy)))
    reporter.add_result(_verdict_result("stability", "Stability", "causality orders", is_stable(strategy)))

    plays = check_play_level(strategy)
    reporter.add_result(_verdict_result("play-level", "Play level", "internal homotopy", plays.internal_homotopy))
    reporter.add_result(_verdict_result("play-level", "Play level", "forward closure", plays.forward_closure))
    graph_level = ingenuity.positional and ingenuity.forward_preservation
    reporter.add_result(CheckResult(
        "play-level", "Play level", "agreement", plays.passed == graph_level, None,
        f"plays {'pass' if plays.passed else 'fail'}, graph flags {'pass' if graph_level else 'fail'}",
    ))
    reporter.extra["plays"] = len(strategy.plays)
    return (EXIT_OK if reporter.passed else EXIT_NEGATIVE), reporter


def _switching_row_label(text: str) -> str:
    """Canonical label of a tensor or par switching given on the command line."""
    try:
        return switching_label(parse_switching(text))
    except ValidationError:
        return switching_label(parse_switching(text, ("left", "right")))


def innocence_table(report: InnocenceReport, only: Optional[str] = None) -> str:
    """One row per switching, one column per switching-based criterion."""
    columns = (
        ("scheduling", report.scheduling),
        ("clustered", report.clustered),
        ("acyclicity", report.directed_acyclicity),
    )
    labels = set()
    for _, verdicts in columns:
        if verdicts is not None:
            labels |= set(verdicts.verdicts)
    rows = sorted(labels) if only is None else [only]
    width = max([len(label) for label in rows] + [len("Switching")])

    lines = ["Switching".ljust(width) + "  " + "  ".join(name.ljust(10) for name, _ in columns)]
    witnesses = []
    for label in rows:
        cells = []
        for name, verdicts in columns:
            verdict = None if verdicts is None else verdicts.verdicts.get(label)
            if verdict is None:
                cells.append("-".ljust(10))
                continue
            cells.append(("pass" if verdict else "FAIL").ljust(10))
            if not verdict and verdict.witness is not None:
                witnesses.append(f"{name} {label}: {' '.join(map(str, verdict.witness))}")
        lines.append(label.ljust(width) + "  " + "  ".join(cells))
    if witnesses:
        lines += ["", "Witnesses:"] + [f"- {w}" for w in witnesses]
    return "\n".join(line.rstrip() for line in lines)


def _verdict_word(verdict: Optional[bool]) -> str:
    if verdict is None:
        return "undetermined"
    return "yes" if verdict else "no"


def innocence_command(args) -> Tuple[int, str]:
    (strategy,), env = _load_strategies(args.files, 1)
    config = AnalysisConfig(
        max_workers=args.workers,
        parallel=args.parallel,
        include_criteria=args.include,
        exclude_criteria=args.exclude or [],
    )
    report = InnocenceChecker(config).check(strategy, strategy.formula, env)
    only = _switching_row_label(args.switching) if args.switching else None

    if only is not None:
        row = [v.verdicts.get(only) for v in (report.scheduling, report.clustered, report.directed_acyclicity)
               if v is not None]
        row = [v for v in row if v is not None]
        if not row:
            raise ValidationError(f"Unknown switching: {args.switching}")
        status = EXIT_OK if all(row) and not report.errors else EXIT_NEGATIVE
    else:
        status = EXIT_OK if report.innocent is True else EXIT_NEGATIVE

    if args.format == "json":
        return status, report.reporter.to_json()
    if args.format == "markdown":
        return status, report.reporter.to_markdown()

    title = "Innocence Report"
    text = f"{title}\n{'=' * len(title)}\n\n"
    text += f"Strategy: {strategy.name} on {strategy.formula}\n\n"
    text += innocence_table(report, only) + "\n\n"
    ingenuity = report.ingenuous
    if ingenuity is not None:
        failed = ingenuity.failed()
        text += f"Ingenuous: {'yes' if not failed else 'no (' + ', '.join(failed) + ')'}\n"
    if report.receptive is not None:
        text += f"Receptive: {'yes' if report.receptive else 'no'}\n"
    agree = report.criteria_agree
    if agree is not None:
        text += f"Scheduling and acyclicity agree: {'yes' if agree else 'no'}\n"
    for criterion_id, message in sorted(report.errors.items()):
        text += f"Error in {criterion_id}: {message}\n"
    text += f"Asynchronous: {_verdict_word(report.asynchronous)}\n"
    text += f"Innocent: {_verdict_word(report.innocent)}\n"
    return status, text


def interact_command(args) -> Tuple[int, AnalysisReporter]:
    (sigma, tau), _ = _load_strategies(args.files, 2)
    reporter = AnalysisReporter("Interaction Report")
    reporter.subject = f"{sigma.name} against {tau.name}"
    traces = interact(sigma, tau)
    for trace in traces:
        reporter.add_result(CheckResult(
            "interaction", "Interaction", format_position(trace.position), trace.status != DEADLOCK,
            list(trace.play) if trace.status == DEADLOCK else None,
            str(trace),
        ))
    reporter.extra["outcomes"] = [str(trace) for trace in traces]
    return (EXIT_NEGATIVE if any(t.status == DEADLOCK for t in traces) else EXIT_OK), reporter


def compose_command(args) -> Tuple[int, str]:
    (sigma, tau), _ = _load_strategies(args.files, 2)
    composite = compose(sigma, tau, name=args.name or "")
    text = format_strategy(composite)
    status = EXIT_OK
    if args.functoriality:
        report = functoriality_check(sigma, tau)
        if args.format == "json":
            return (EXIT_OK if report.strong else EXIT_NEGATIVE), _dump({
                "strategy": text, "functoriality": report.to_dict(),
            })
        notes = [
            f"# lax: {'pass' if report.lax else 'FAIL'}",
            f"# strong: {'pass' if report.strong else 'FAIL'}",
        ]
        if not report.strong:
            notes.append("# differing fixpoints: " + " ".join(format_element(x) for x in report.strong.witness))
        text = "\n".join(notes) + "\n" + text
        status = EXIT_OK if report.strong else EXIT_NEGATIVE
    elif args.format == "json":
        return status, _dump({"strategy": text})
    return status, text


def fixpoints_command(args) -> Tuple[int, AnalysisReporter]:
    (strategy,), _ = _load_strategies(args.files, 1)
    reporter = AnalysisReporter("Fixpoint Report")
    reporter.subject = strategy.name
    lattice = build_lattice(strategy.game)
    reporter.add_result(_verdict_result("closure", "Closure", "halting meets", halting_meets(strategy, lattice)))
    properties = check_closure_properties(closure_of(strategy, lattice, complete_meets=True))
    for name in properties.FIELDS:
        reporter.add_result(_verdict_result("closure", "Closure", name, getattr(properties, name)))
    reporter.extra.update(list_fixpoints(strategy).to_dict())
    return (EXIT_OK if reporter.passed else EXIT_NEGATIVE), reporter


def export_dot_command(args) -> Tuple[int, str]:
    groups = _split_files(args.files)
    if args.target == "game":
        if groups[".es"]:
            name = groups[".es"][0]
            game = game_of(load_es(name), name=Path(name).stem)
        else:
            env = _load_env(groups[".env"])
            if args.game:
                game = env.lookup(args.game)
            elif env.games:
                game = env.games[list(env.games)[-1]]
            else:
                raise ValidationError("The environment binds no game")
        return EXIT_OK, game_dot(game, tiles=args.tiles).source

    (strategy,), env = _load_strategies(groups[".env"] + groups[".str"], 1)
    if args.target == "strategy":
        return EXIT_OK, strategy_dot(strategy, tiles=args.tiles).source
    if args.target == "order":
        if args.position is not None:
            position = frozenset(m.strip() for m in args.position.split(",") if m.strip())
        else:
            position = max(strategy.maximal_positions(), key=len)
        return EXIT_OK, order_dot(causality_order(strategy, position), strategy.game).source

    formula = resolve(strategy.formula, env)
    switchings = {par_label(sw): sw for sw in par_switchings(formula)}
    label = _switching_row_label(args.switching) if args.switching else sorted(switchings)[0]
    if label not in switchings:
        raise ValidationError(f"Unknown par switching: {args.switching}")
    jumps = sorted({pair for pairs in strategy_jumps(strategy).values() for pair in pairs})
    return EXIT_OK, jumps_dot(build_jump_graph(formula, jumps, switchings[label])).source


def _dump(data) -> str:
    return json.dumps(data, indent=2, default=str)


HANDLERS = {
    "check-game": check_game_command,
    "check-strategy": check_strategy_command,
    "innocence": innocence_command,
    "interact": interact_command,
    "compose": compose_command,
    "fixpoints": fixpoints_command,
    "export-dot": export_dot_command,
}


def run(args) -> Tuple[int, str]:
    """
    Dispatch a parsed command.

    Returns:
        The exit status and the report text.
    """
    if args.json:
        args.format = "json"
    start_time = time.time()
    try:
        status, result = HANDLERS[args.command](args)
    except (AsyncGamesError, OSError) as e:
        logger.debug(f"{args.command} failed: {e!r}")
        return EXIT_INVALID, f"error: {e}"

    if isinstance(result, AnalysisReporter):
        result.execution_time = time.time() - start_time
        if args.format == "json":
            result = result.to_json()
        elif args.format == "markdown":
            result = result.to_markdown()
        else:
            result = result.summary()
    return status, result


def main(argv: Optional[List[str]] = None):
    """Main entry point for the command-line interface."""
    args = parse_args(argv)

    log_level = logging.DEBUG if args.verbose else logging.WARNING
    logging.basicConfig(
        level=log_level,
        format="%(levelname)s - %(message)s",
    )

    status, report = run(args)

    if status == EXIT_INVALID:
        print(report, file=sys.stderr)
    elif args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(report if report.endswith("\n") else report + "\n")
        print(f"Report saved to {args.output}")
    else:
        print(report.rstrip("\n"))
    sys.exit(status)


if __name__ == "__main__":
    main()
