"""Expressions in the radial variable ``r`` with exact first and second derivatives.

Grammar (``^`` and ``**`` are the same operator, right associative)::

    <EXPRESSION> -> <TERM> { ( '+' | '-' ) <TERM> }*
    <TERM>       -> <UNARY> { ( '*' | '/' ) <UNARY> }*
    <UNARY>      -> ( '+' | '-' ) <UNARY> | <POWER>
    <POWER>      -> <ATOM> [ '^' <UNARY> ]
    <ATOM>       -> NUMBER | 'r' | 'pi' | 'e' | FUNC '(' <EXPRESSION> ')' | '(' <EXPRESSION> ')'

Expressions are evaluated on second-order jets (f, f', f''), so every parsed
function comes with its derivatives by forward propagation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from numpy.typing import ArrayLike

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.exceptions import DomainError, ExpressionSyntaxError
from exit_spectra.geometry.radial_functions import RadialFunction

logger = configure_logging(__name__, "radial_expression", DEBUG)

# Integer exponents up to this size are expanded into products.
_MAX_INTEGER_POWER = 64

_TOKEN_PATTERN = re.compile(
    r"""
    (?P<NUMBER>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<NAME>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<POW>\*\*|\^)
  | (?P<OP>[-+*/])
  | (?P<LPAREN>\()
  | (?P<RPAREN>\))
  | (?P<SPACE>\s+)
    """,
    re.VERBOSE,
)

_CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens; an ``END`` token closes the list.

    Raises:
        ExpressionSyntaxError: At the first character no token matches.
    """
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        match = _TOKEN_PATTERN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(f"unexpected character {text[position]!r}", text, position)
        kind = match.lastgroup
        if kind != "SPACE":
            tokens.append(Token(kind, match.group(), position))
        position = match.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


@dataclass(frozen=True)
class Jet:
    """Value with first and second derivative in r."""

    v: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    @classmethod
    def constant(cls, value: float, like: np.ndarray) -> Jet:
        return cls(np.full(like.shape, value), np.zeros(like.shape), np.zeros(like.shape))

    @classmethod
    def variable(cls, r: np.ndarray) -> Jet:
        return cls(r, np.ones(r.shape), np.zeros(r.shape))

    def __add__(self, other: Jet) -> Jet:
        return Jet(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: Jet) -> Jet:
        return Jet(self.v - other.v, self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> Jet:
        return Jet(-self.v, -self.d1, -self.d2)

    def __mul__(self, other: Jet) -> Jet:
        return Jet(
            self.v * other.v,
            self.d1 * other.v + self.v * other.d1,
            self.d2 * other.v + 2.0 * self.d1 * other.d1 + self.v * other.d2,
        )

    def __truediv__(self, other: Jet) -> Jet:
        q = self.v / other.v
        q1 = (self.d1 - q * other.d1) / other.v
        q2 = (self.d2 - 2.0 * q1 * other.d1 - q * other.d2) / other.v
        return Jet(q, q1, q2)

    def chain(self, f: np.ndarray, df: np.ndarray, d2f: np.ndarray) -> Jet:
        """Compose an outer function given by its value and derivatives at ``self.v``."""
        return Jet(f, df * self.d1, d2f * self.d1**2 + df * self.d2)

    def integer_power(self, n: int) -> Jet:
        result = Jet.constant(1.0, self.v)
        base = self if n >= 0 else Jet.constant(1.0, self.v) / self
        for _ in range(abs(n)):
            result = result * base
        return result

    def real_power(self, c: float) -> Jet:
        return self.chain(
            self.v**c, c * self.v ** (c - 1.0), c * (c - 1.0) * self.v ** (c - 2.0)
        )


def _exp(a: Jet) -> Jet:
    f = np.exp(a.v)
    return a.chain(f, f, f)


def _log(a: Jet) -> Jet:
    return a.chain(np.log(a.v), 1.0 / a.v, -1.0 / a.v**2)


def _sqrt(a: Jet) -> Jet:
    f = np.sqrt(a.v)
    return a.chain(f, 0.5 / f, -0.25 / (f * a.v))


def _sin(a: Jet) -> Jet:
    s = np.sin(a.v)
    return a.chain(s, np.cos(a.v), -s)


def _cos(a: Jet) -> Jet:
    c = np.cos(a.v)
    return a.chain(c, -np.sin(a.v), -c)


def _sinh(a: Jet) -> Jet:
    s = np.sinh(a.v)
    return a.chain(s, np.cosh(a.v), s)


def _cosh(a: Jet) -> Jet:
    c = np.cosh(a.v)
    return a.chain(c, np.sinh(a.v), c)


def _tanh(a: Jet) -> Jet:
    t = np.tanh(a.v)
    sech2 = 1.0 - t**2
    return a.chain(t, sech2, -2.0 * t * sech2)


FUNCTIONS: Dict[str, Callable[[Jet], Jet]] = {
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
    "sin": _sin,
    "cos": _cos,
    "sinh": _sinh,
    "cosh": _cosh,
    "tanh": _tanh,
}


# Syntax tree nodes are tuples: ("num", value), ("var",), ("neg", node),
# ("bin", op, left, right), ("pow", base, exponent), ("call", name, node).
Node = Tuple


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _fail(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, self.text, token.position)

    def parse(self) -> Node:
        if self.current.kind == "END":
            raise self._fail("empty expression")
        node = self._expression()
        if self.current.kind != "END":
            raise self._fail(f"unexpected {self.current.text!r}")
        return node

    def _expression(self) -> Node:
        node = self._term()
        while self.current.kind == "OP" and self.current.text in "+-":
            op = self._advance().text
            node = ("bin", op, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._unary()
        while self.current.kind == "OP" and self.current.text in "*/":
            op = self._advance().text
            node = ("bin", op, node, self._unary())
        return node

    def _unary(self) -> Node:
        if self.current.kind == "OP" and self.current.text in "+-":
            sign = self._advance().text
            operand = self._unary()
            return ("neg", operand) if sign == "-" else operand
        return self._power()

    def _power(self) -> Node:
        base = self._atom()
        if self.current.kind == "POW":
            self._advance()
            return ("pow", base, self._unary())
        return base

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "NUMBER":
            self._advance()
            return ("num", float(token.text))
        if token.kind == "LPAREN":
            self._advance()
            node = self._expression()
            self._expect_rparen(token)
            return node
        if token.kind == "NAME":
            self._advance()
            if token.text == "r":
                return ("var",)
            if token.text in _CONSTANTS:
                return ("num", _CONSTANTS[token.text])
            if token.text in FUNCTIONS:
                if self.current.kind != "LPAREN":
                    raise self._fail(f"expected '(' after {token.text}")
                opening = self._advance()
                node = self._expression()
                self._expect_rparen(opening)
                return ("call", token.text, node)
            raise self._fail(f"unknown name {token.text!r}", token)
        if token.kind == "END":
            raise self._fail("unexpected end of expression")
        raise self._fail(f"unexpected {token.text!r}")

    def _expect_rparen(self, opening: Token) -> None:
        if self.current.kind != "RPAREN":
            if self.current.kind == "END":
                raise self._fail("unbalanced '('", opening)
            raise self._fail(f"expected ')', found {self.current.text!r}")
        self._advance()


def _constant_value(node: Node) -> float | None:
    """Value of a subtree without ``r``, or None."""
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "var":
        return None
    if kind == "neg":
        inner = _constant_value(node[1])
        return None if inner is None else -inner
    if kind == "call":
        inner = _constant_value(node[2])
        if inner is None:
            return None
        dummy = Jet.constant(inner, np.zeros(()))
        with np.errstate(all="ignore"):
            return float(FUNCTIONS[node[1]](dummy).v)
    if kind == "bin":
        left, right = _constant_value(node[2]), _constant_value(node[3])
        if left is None or right is None:
            return None
        with np.errstate(all="ignore"):
            return {
                "+": left + right,
                "-": left - right,
                "*": left * right,
                "/": np.float64(left) / right,
            }[node[1]]
    if kind == "pow":
        base, exponent = _constant_value(node[1]), _constant_value(node[2])
        if base is None or exponent is None:
            return None
        with np.errstate(all="ignore"):
            return float(np.float64(base) ** exponent)
    raise ValueError(f"unknown node {kind!r}")


def _evaluate(node: Node, r: np.ndarray) -> Jet:
    kind = node[0]
    if kind == "num":
        return Jet.constant(node[1], r)
    if kind == "var":
        return Jet.variable(r)
    if kind == "neg":
        return -_evaluate(node[1], r)
    if kind == "call":
        return FUNCTIONS[node[1]](_evaluate(node[2], r))
    if kind == "bin":
        left, right = _evaluate(node[2], r), _evaluate(node[3], r)
        if node[1] == "+":
            return left + right
        if node[1] == "-":
            return left - right
        if node[1] == "*":
            return left * right
        return left / right
    if kind == "pow":
        base = _evaluate(node[1], r)
        exponent = _constant_value(node[2])
        if exponent is not None:
            if float(exponent).is_integer() and abs(exponent) <= _MAX_INTEGER_POWER:
                return base.integer_power(int(exponent))
            return base.real_power(float(exponent))
        return _exp(_evaluate(node[2], r) * _log(base))
    raise ValueError(f"unknown node {kind!r}")


@dataclass(frozen=True)
class RadialExpression:
    """A parsed expression in ``r``.

    Attributes:
        text (str): Source text.
        tree (Node): Syntax tree.
    """

    text: str
    tree: Node

    def jet(self, r: ArrayLike) -> Jet:
        """Evaluate value, first and second derivative at ``r``.

        Raises:
            DomainError: If any of them is not finite, naming the first such r.
        """
        radius = np.asarray(r, dtype=float)
        with np.errstate(all="ignore"):
            result = _evaluate(self.tree, radius)
        for order, values in enumerate((result.v, result.d1, result.d2)):
            bad = ~np.isfinite(values)
            if np.any(bad):
                where = float(np.ravel(radius)[np.flatnonzero(np.ravel(bad))[0]])
                what = ("value", "first derivative", "second derivative")[order]
                raise DomainError(f"{what} of {self.text!r} is not finite at r = {where:.17g}")
        return result

    def to_radial_function(self, label: str | None = None) -> RadialFunction:
        return RadialFunction(
            eval=lambda r: self.jet(r).v,
            deriv1=lambda r: self.jet(r).d1,
            deriv2=lambda r: self.jet(r).d2,
            label=label if label is not None else self.text,
        )


def parse_expression(text: str) -> RadialExpression:
    """Parse ``text`` into a :class:`RadialExpression`.

    Raises:
        ExpressionSyntaxError: With a caret under the offending position.
    """
    tree = _Parser(text).parse()
    logger.debug(f"Parsed radial expression {text!r}")
    return RadialExpression(text=text, tree=tree)


def parse_radial_expression(text: str, label: str | None = None) -> RadialFunction:
    """Parse ``text`` into a :class:`RadialFunction` with jet-propagated derivatives.

    Examples:
        >>> f = parse_radial_expression("sinh(r)")
        >>> round(float(f.deriv1(1.0)), 5)
        1.54308
    """
    return parse_expression(text).to_radial_function(label)
