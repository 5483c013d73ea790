"""
Abstract syntax of multiplicative formulas with lifting modalities.
"""

from dataclasses import dataclass
from typing import Iterator, Tuple


class Formula:
    """Base class of formula nodes."""

    children: Tuple["Formula", ...] = ()

    def walk(self) -> Iterator["Formula"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class One(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Dual(Formula):
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Up(Formula):
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Down(Formula):
    body: Formula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Tensor(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Par(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Limp(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


# Left-associative connectives; -o associates to the right.
_ASSOC = {Tensor: "left", Par: "left", Limp: "right"}
_SYMBOL = {Limp: "-o", Par: "|", Tensor: "*"}


def _format(node: Formula) -> str:
    kind = type(node)
    if kind is One:
        return "one"
    if kind is Bot:
        return "bot"
    if kind is Var:
        return node.name
    if kind is Dual:
        body = node.body
        inner = _format(body)
        if type(body) not in (One, Bot, Var, Dual):
            inner = f"({inner})"
        return f"{inner}^"
    if kind in (Up, Down):
        word = "up" if kind is Up else "dn"
        body = _format(node.body)
        if is_binary(node.body):
            body = f"({body})"
        return f"{word} {body}"

    left = _operand(node.left, kind, "left")
    right = _operand(node.right, kind, "right")
    return f"{left} {_SYMBOL[kind]} {right}"


def _operand(child: Formula, parent: type, side: str) -> str:
    text = _format(child)
    if not is_binary(child):
        return text
    if type(child) is not parent or side != _ASSOC[parent]:
        return f"({text})"
    return text


def format_formula(node: Formula) -> str:
    """
    Print a formula in surface syntax.

    Binary operands are bracketed unless they repeat the parent connective
    on its associative side.

    Args:
        node: The formula.

    Returns:
        Text that parses back to the same formula.
    """
    return _format(node)


def is_binary(node: Formula) -> bool:
    return isinstance(node, (Tensor, Par, Limp))
