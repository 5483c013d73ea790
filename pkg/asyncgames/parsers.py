"""
Readers and printers for the textual formats.

Formulas::

    (B * B) -o B        up dn one | bot^

Event structures (``.es``)::

    event q -
    event true +
    cause q < true
    conflict true # false

Environments (``.env``) hold ``game <name>`` ... ``end`` blocks in the
``.es`` syntax, or ``game <name> = <formula>`` lines.

Strategies (``.str``)::

    strategy sigma on B * B
    event qL = L.q
    event tL = L.true; deps qL
    conflict tL # fL

A header ending in ``copycat`` declares the copycat strategy of A -o A.

Asynchronous graphs (``.ag``)::

    vertex x0
    edge a x0 x1
    tile a.b ~ c.d

Lines starting with ``#`` are comments everywhere.
"""

import logging
import re
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Tuple

import ply.lex as lex

from .asyncgraph import AsyncGraph, Edge
from .errors import ParseError, SourceSpan, ValidationError
from .events import EventStructure, game_of
from .formula import Bot, Down, Dual, Formula, Limp, One, Par, Tensor, Up, Var, format_formula
from .games import OPPONENT, PROPONENT, GameEnvironment, component, interpret_formula
from .strategies import Strategy, induced_events

logger = logging.getLogger(__name__)

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_ID = r"[A-Za-z_][A-Za-z0-9_.]*"
_ADDRESS = r"[A-Za-z0-9_.]+"

_SIGNS = {"-": OPPONENT, "+": PROPONENT}
_SIGN_TEXT = {OPPONENT: "-", PROPONENT: "+"}

_ES_EVENT = re.compile(rf"event\s+({_NAME})\s+([+-])")
_ES_CAUSE = re.compile(rf"cause\s+({_NAME})\s*<\s*({_NAME})")
_CONFLICT = re.compile(rf"conflict\s+({_ID})\s*#\s*({_ID})")
_ENV_GAME = re.compile(rf"game\s+({_NAME})\s*(?:=\s*(.*))?")
_STR_HEADER = re.compile(rf"strategy\s+({_NAME})\s+on\s+(.*?)(\s+copycat)?")
_STR_EVENT = re.compile(rf"event\s+({_ID})\s*=\s*({_ADDRESS})\s*(?:;\s*deps\s+(.*))?")
_AG_VERTEX = re.compile(rf"vertex\s+({_ID})")
_AG_EDGE = re.compile(rf"edge\s+({_NAME})\s+({_ID})\s+({_ID})")
_AG_TILE = re.compile(rf"tile\s+({_NAME})\.({_NAME})\s*~\s*({_NAME})\.({_NAME})")


class FormulaLexer:
    """Token rules of the formula syntax."""

    reserved = {
        "one": "ONE",
        "bot": "BOT",
        "up": "UP",
        "dn": "DN",
    }
    tokens = ["NAME", "LPAREN", "RPAREN", "TIMES", "PAR", "LIMP", "DUAL"] + list(reserved.values())

    t_ignore = " \t"
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_TIMES = r"\*"
    t_PAR = r"\|"
    t_LIMP = r"-o"
    t_DUAL = r"\^"

    def __init__(self, file_name: str = "<string>", line: int = 1, column: int = 1):
        self.file_name = file_name
        self.line = line  # line of the first character
        self.column = column  # column of the first character
        self.text = ""
        self.lexer = lex.lex(module=self)

    def t_NAME(self, t):
        r"[A-Za-z_][A-Za-z0-9_]*"
        t.type = self.reserved.get(t.value, "NAME")
        return t

    def t_newline(self, t):
        r"\n+"
        t.lexer.lineno += len(t.value)

    def t_error(self, t):
        raise ParseError(f"Unexpected character {t.value[0]!r}", self.span(t.lexpos))

    def span(self, offset: int, length: int = 1) -> SourceSpan:
        """Source location of a character offset of the lexed text."""
        line_start = self.text.rfind("\n", 0, offset) + 1
        line = self.line + self.text.count("\n", 0, offset)
        column = offset - line_start + 1
        if line == self.line:
            column += self.column - 1
        return SourceSpan(self.file_name, line, column, length)

    def tokenize(self, text: str) -> List:
        self.text = text
        self.lexer.lineno = 1
        self.lexer.input(text)
        return list(iter(self.lexer.token, None))


class FormulaParser:
    """
    Recursive-descent parser for formulas.

    Precedence, loosest first: ``-o`` (right-associative), ``|``, ``*``,
    then the prefix lifts ``up``/``dn`` and the postfix dual ``^``.
    """

    def __init__(self, text: str, file_name: str = "<string>", line: int = 1, column: int = 1):
        self.lexer = FormulaLexer(file_name, line, column)
        self.text = text
        self.tokens = self.lexer.tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos].type if self.pos < len(self.tokens) else None

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, message: str):
        if self.pos < len(self.tokens):
            token = self.tokens[self.pos]
            raise ParseError(f"{message}, found {token.value!r}", self.lexer.span(token.lexpos, len(token.value)))
        raise ParseError(f"{message}, found end of input", self.lexer.span(len(self.text.rstrip("\n"))))

    def expect(self, kind: str, what: str):
        if self.peek() != kind:
            self.error(f"Expected {what}")
        return self.advance()

    def parse(self) -> Formula:
        formula = self.limp()
        if self.peek() is not None:
            self.error("Expected end of formula")
        return formula

    def limp(self) -> Formula:
        left = self.par()
        if self.peek() == "LIMP":
            self.advance()
            return Limp(left, self.limp())
        return left

    def par(self) -> Formula:
        node = self.tensor()
        while self.peek() == "PAR":
            self.advance()
            node = Par(node, self.tensor())
        return node

    def tensor(self) -> Formula:
        node = self.unary()
        while self.peek() == "TIMES":
            self.advance()
            node = Tensor(node, self.unary())
        return node

    def unary(self) -> Formula:
        if self.peek() == "UP":
            self.advance()
            return Up(self.unary())
        if self.peek() == "DN":
            self.advance()
            return Down(self.unary())
        node = self.atom()
        while self.peek() == "DUAL":
            self.advance()
            node = Dual(node)
        return node

    def atom(self) -> Formula:
        kind = self.peek()
        if kind == "ONE":
            self.advance()
            return One()
        if kind == "BOT":
            self.advance()
            return Bot()
        if kind == "NAME":
            return Var(self.advance().value)
        if kind == "LPAREN":
            self.advance()
            inner = self.limp()
            self.expect("RPAREN", "')'")
            return inner
        self.error("Expected a formula")


def parse_formula(text: str, file_name: str = "<string>", line: int = 1, column: int = 1) -> Formula:
    """
    Parse a formula.

    Args:
        text: Formula text.
        file_name: Name used in error locations.
        line: Line of the text inside its file.
        column: Column of the text inside its line.

    Returns:
        The formula.

    Raises:
        ParseError: On a syntax error.
    """
    return FormulaParser(text, file_name, line, column).parse()


def _lines(text: str):
    """Numbered, stripped, non-comment lines, with the column of their first character."""
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield number, len(raw) - len(raw.lstrip()) + 1, stripped


def _span(file_name: str, number: int, column: int, text: str) -> SourceSpan:
    return SourceSpan(file_name, number, column, len(text))


class _EsBuilder:
    """Collects the declarations of one event structure."""

    def __init__(self, file_name: str):
        self.file_name = file_name
        self.events: List[str] = []
        self.polarity: Dict[str, int] = {}
        self.causes: List[Tuple[str, str]] = []
        self.conflicts: List[Tuple[str, str]] = []

    def feed(self, number: int, column: int, line: str) -> bool:
        span = _span(self.file_name, number, column, line)
        match = _ES_EVENT.fullmatch(line)
        if match:
            name, sign = match.groups()
            if name in self.polarity:
                raise ParseError(f"Duplicate event: {name}", span)
            self.events.append(name)
            self.polarity[name] = _SIGNS[sign]
            return True
        match = _ES_CAUSE.fullmatch(line)
        if match:
            self.causes.append(match.groups())
            return True
        match = _CONFLICT.fullmatch(line)
        if match:
            self.conflicts.append(match.groups())
            return True
        return False

    def build(self, span: SourceSpan) -> EventStructure:
        try:
            return EventStructure.build(self.events, self.causes, self.conflicts, polarity=self.polarity)
        except ParseError:
            raise
        except ValidationError as e:
            raise ParseError(str(e), span)


def parse_es(text: str, file_name: str = "<string>") -> EventStructure:
    """
    Parse a polarized event structure.

    Raises:
        ParseError: On a malformed line or an invalid structure.
    """
    builder = _EsBuilder(file_name)
    for number, column, line in _lines(text):
        if not builder.feed(number, column, line):
            raise ParseError(f"Unrecognized line: {line!r}", _span(file_name, number, column, line))
    return builder.build(SourceSpan(file_name, 1, 1))


def format_es(structure: EventStructure) -> str:
    """Print an event structure with immediate causes and minimal conflicts only."""
    polarity = structure.polarity_map
    lines = [f"event {e} {_SIGN_TEXT[polarity[e]]}" for e in structure.events]
    for e in structure.events:
        lines += [f"cause {a} < {e}" for a in structure.immediate_causes(e)]
    lines += [f"conflict {a} # {b}" for a, b in structure.minimal_conflicts()]
    return "\n".join(lines) + "\n"


def parse_env(text: str, file_name: str = "<string>", env: Optional[GameEnvironment] = None) -> GameEnvironment:
    """
    Parse an environment file into named games.

    Args:
        text: Environment text.
        file_name: Name used in error locations.
        env: Environment to extend; a new one by default.

    Returns:
        The environment.

    Raises:
        ParseError: On malformed lines, unterminated blocks or unbound names.
    """
    env = env or GameEnvironment()
    block: Optional[_EsBuilder] = None
    block_name = ""
    block_span = None
    for number, column, line in _lines(text):
        span = _span(file_name, number, column, line)
        if block is not None:
            if line == "end":
                env.bind_game(block_name, game_of(block.build(block_span), name=block_name))
                logger.debug(f"Bound game {block_name}")
                block = None
            elif not block.feed(number, column, line):
                raise ParseError(f"Unrecognized line in game {block_name}: {line!r}", span)
            continue

        match = _ENV_GAME.fullmatch(line)
        if not match:
            raise ParseError(f"Unrecognized line: {line!r}", span)
        name, formula_text = match.groups()
        if formula_text is None:
            block, block_name, block_span = _EsBuilder(file_name), name, span
            continue
        offset = column + match.start(2)
        formula = parse_formula(formula_text, file_name, number, offset)
        try:
            env.bind_formula(name, formula)
        except ValidationError as e:
            raise ParseError(str(e), span)
        logger.debug(f"Bound game {name} = {format_formula(formula)}")

    if block is not None:
        raise ParseError(f"Game {block_name} is missing its 'end'", block_span)
    return env


def parse_ag(text: str, file_name: str = "<string>") -> Tuple[AsyncGraph, Hashable]:
    """
    Parse an asynchronous graph; the first vertex declared is the root.

    Raises:
        ParseError: On malformed lines, unknown vertices or unknown edges.
    """
    vertices: List[str] = []
    edges: Dict[str, Edge] = {}
    tiles = []
    for number, column, line in _lines(text):
        span = _span(file_name, number, column, line)
        match = _AG_VERTEX.fullmatch(line)
        if match:
            vertices.append(match.group(1))
            continue
        match = _AG_EDGE.fullmatch(line)
        if match:
            edge_id, source, target = match.groups()
            for vertex in (source, target):
                if vertex not in vertices:
                    raise ParseError(f"Unknown vertex: {vertex}", span)
            if edge_id in edges:
                raise ParseError(f"Duplicate edge: {edge_id}", span)
            edges[edge_id] = Edge(edge_id, source, target)
            continue
        match = _AG_TILE.fullmatch(line)
        if match:
            a, b, c, d = match.groups()
            for edge_id in (a, b, c, d):
                if edge_id not in edges:
                    raise ParseError(f"Unknown edge: {edge_id}", span)
            if (edges[a].source != edges[c].source or edges[b].target != edges[d].target
                    or edges[a].target != edges[b].source or edges[c].target != edges[d].source):
                raise ParseError(f"Tile {a}.{b} ~ {c}.{d} is not a square", span)
            tiles.append(((a, b), (c, d)))
            continue
        raise ParseError(f"Unrecognized line: {line!r}", span)

    if not vertices:
        raise ParseError("A graph needs at least one vertex", SourceSpan(file_name, 1, 1))
    return AsyncGraph(vertices, edges.values(), tiles), vertices[0]


def parse_strategy(text: str, env: Optional[GameEnvironment] = None, file_name: str = "<string>") -> Strategy:
    """
    Parse a strategy file.

    The header names the strategy and its formula; the body declares a
    labelled event structure whose labels are move addresses of the game.

    Args:
        text: Strategy text.
        env: Environment binding the formula's identifiers.
        file_name: Name used in error locations.

    Returns:
        The strategy with its event structure.

    Raises:
        ParseError: On syntax errors, unknown addresses or an invalid
            event structure.
    """
    from .interaction import copycat

    lines = list(_lines(text))
    if not lines:
        raise ParseError("Missing strategy header", SourceSpan(file_name, 1, 1))
    number, column, header = lines[0]
    span = _span(file_name, number, column, header)
    match = _STR_HEADER.fullmatch(header)
    if not match:
        raise ParseError("Expected 'strategy <name> on <formula>'", span)
    name, formula_text, is_copycat = match.groups()
    formula = parse_formula(formula_text, file_name, number, column + match.start(2))
    try:
        game = interpret_formula(formula, env)
    except ValidationError as e:
        raise ParseError(str(e), span)

    if is_copycat:
        if not isinstance(formula, Limp) or formula.left != formula.right:
            raise ParseError("A copycat strategy needs a formula of the shape A -o A", span)
        if len(lines) > 1:
            raise ParseError("A copycat strategy has no body", _span(file_name, *lines[1]))
        strategy = copycat(component(game, "R"), name=name)
        strategy.formula = formula
        return strategy

    events: List[str] = []
    labels: Dict[str, str] = {}
    causes: List[Tuple[str, str]] = []
    conflicts: List[Tuple[str, str]] = []
    polarity = game.polarity_map
    for number, column, line in lines[1:]:
        span = _span(file_name, number, column, line)
        match = _STR_EVENT.fullmatch(line)
        if match:
            event, address, deps = match.groups()
            if event in labels:
                raise ParseError(f"Duplicate event: {event}", span)
            if address not in polarity:
                raise ParseError(f"Unknown move address: {address}", span)
            events.append(event)
            labels[event] = address
            for dep in (deps or "").split(","):
                dep = dep.strip()
                if dep:
                    causes.append((dep, event))
            continue
        match = _CONFLICT.fullmatch(line)
        if match:
            conflicts.append(match.groups())
            continue
        raise ParseError(f"Unrecognized line: {line!r}", span)

    whole = SourceSpan(file_name, lines[0][0], 1)
    try:
        structure = EventStructure.build(
            events, causes, conflicts,
            polarity={e: polarity[labels[e]] for e in events},
            labels=labels,
        )
        return Strategy.from_event_structure(game, structure, name=name, formula=formula)
    except ParseError:
        raise
    except ValidationError as e:
        raise ParseError(str(e), whole)


def _is_copycat(strategy: Strategy) -> bool:
    from .interaction import copycat

    formula = strategy.formula
    if not isinstance(formula, Limp) or formula.left != formula.right:
        return False
    try:
        return copycat(component(strategy.game, "R")).plays == strategy.plays
    except ValidationError:
        return False


def format_strategy(strategy: Strategy) -> str:
    """
    Print a strategy in the strategy file format.

    Strategies without an event structure (composites, for instance) are
    printed through their induced events, named e1, e2, ...
    """
    formula = format_formula(strategy.formula) if strategy.formula is not None else "?"
    header = f"strategy {strategy.name or 'anonymous'} on {formula}"
    if _is_copycat(strategy):
        return f"{header} copycat\n"

    structure = strategy.structure
    rename: Dict[str, str] = {}
    if structure is None:
        structure = induced_events(strategy).structure
        rename = {e: f"e{i}" for i, e in enumerate(structure.events, start=1)}

    def name_of(event):
        return rename.get(event, event)

    lines = [header]
    for e in structure.events:
        line = f"event {name_of(e)} = {structure.label(e)}"
        deps = structure.immediate_causes(e)
        if deps:
            line += "; deps " + ",".join(name_of(d) for d in deps)
        lines.append(line)
    lines += [f"conflict {name_of(a)} # {name_of(b)}" for a, b in structure.minimal_conflicts()]
    return "\n".join(lines) + "\n"


def read_text(path) -> str:
    """Read a UTF-8 input file."""
    return Path(path).read_text(encoding="utf-8")


def load_env(path) -> GameEnvironment:
    return parse_env(read_text(path), str(path))


def load_strategy(path, env: Optional[GameEnvironment] = None) -> Strategy:
    return parse_strategy(read_text(path), env, str(path))


def load_es(path) -> EventStructure:
    return parse_es(read_text(path), str(path))


def load_ag(path) -> Tuple[AsyncGraph, Hashable]:
    return parse_ag(read_text(path), str(path))
