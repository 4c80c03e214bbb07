"""Parsing, evaluation and symbolic differentiation of one-variable expressions.

Grammar (``^`` binds tightest and is right-associative, unary minus binds
looser than ``^`` so ``-x^2`` is ``-(x^2)``)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | 'x' | CONST | FUNC '(' expr ')' | '(' expr ')'

``**`` is accepted as a synonym for ``^``. Functions: sin, cos, tan, exp,
ln (alias log), sqrt, abs. Constants: pi, e. Implicit multiplication such
as ``2x`` is rejected.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "abs")
_ALIASES = {"log": "ln"}
CONSTANTS = {"pi": math.pi, "e": math.e}


class ExprError(ValueError):
    pass


class ParseError(ExprError):
    """Malformed input; ``offset`` is the byte offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class DomainError(ExprError, ArithmeticError):
    pass


class Unsupported(ExprError):
    pass


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if value == "**":
                value = "^"
            tokens.append((kind, value, len(text[:pos].encode())))
        pos = m.end()
    tokens.append(("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, offset = self.take()
        if v != value or kind == "end":
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", offset)

    def parse(self) -> Expr:
        node = self.expr()
        kind, v, offset = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        kind, v, _ = self.peek()
        if kind == "op" and v == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and v == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, v, _ = self.peek()
        if kind == "op" and v == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, v, offset = self.take()
        if kind == "num":
            return Const(float(v))
        if kind == "name":
            if v == "x":
                return Var()
            if v in CONSTANTS:
                return Const(CONSTANTS[v])
            name = _ALIASES.get(v, v)
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            raise UnknownIdentifier(v, offset)
        if kind == "op" and v == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {v or 'end of input'!r}", offset)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def to_string(e: Expr) -> str:
    """Canonical, fully parenthesised text that parses back to ``e``."""
    match e:
        case Const(value):
            text = repr(float(value))
            return f"({text})" if value < 0 or text.startswith("-") else text
        case Var():
            return "x"
        case Neg(arg):
            return f"(-{to_string(arg)})"
        case BinOp(op, left, right):
            return f"({to_string(left)} {op} {to_string(right)})"
        case Call(func, arg):
            return f"{func}({to_string(arg)})"
    raise TypeError(f"not an expression: {e!r}")


def _power(base: float, exponent: float) -> float:
    if base == 0.0 and exponent < 0:
        raise DomainError("zero raised to a negative power")
    if base < 0 and not float(exponent).is_integer():
        raise DomainError("negative base with non-integer exponent")
    try:
        return math.pow(base, exponent)
    except OverflowError:
        raise DomainError("overflow in power") from None


def _ln(u: float) -> float:
    if u <= 0:
        raise DomainError(f"ln of nonpositive value {u!r}")
    return math.log(u)


def _sqrt(u: float) -> float:
    if u < 0:
        raise DomainError(f"sqrt of negative value {u!r}")
    return math.sqrt(u)


def _exp(u: float) -> float:
    try:
        return math.exp(u)
    except OverflowError:
        raise DomainError("overflow in exp") from None


def _tan(u: float) -> float:
    return math.tan(u)


_FUNCS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": _tan,
    "exp": _exp,
    "ln": _ln,
    "sqrt": _sqrt,
    "abs": abs,
}


def _divide(a: float, b: float) -> float:
    if b == 0.0:
        raise DomainError("division by zero")
    return a / b


def evaluate(e: Expr, x: float) -> float:
    match e:
        case Const(value):
            return value
        case Var():
            return x
        case Neg(arg):
            return -evaluate(arg, x)
        case BinOp("+", left, right):
            return evaluate(left, x) + evaluate(right, x)
        case BinOp("-", left, right):
            return evaluate(left, x) - evaluate(right, x)
        case BinOp("*", left, right):
            return evaluate(left, x) * evaluate(right, x)
        case BinOp("/", left, right):
            return _divide(evaluate(left, x), evaluate(right, x))
        case BinOp("^", left, right):
            return _power(evaluate(left, x), evaluate(right, x))
        case Call(func, arg):
            return _FUNCS[func](evaluate(arg, x))
    raise TypeError(f"not an expression: {e!r}")


def compile_expr(e: Expr) -> Callable[[float], float]:
    """Turn ``e`` into a closure; same results as :func:`evaluate`, several times faster."""
    match e:
        case Const(value):
            return lambda x: value
        case Var():
            return lambda x: x
        case Neg(arg):
            g = compile_expr(arg)
            return lambda x: -g(x)
        case BinOp(op, left, right):
            lf, rf = compile_expr(left), compile_expr(right)
            if op == "+":
                return lambda x: lf(x) + rf(x)
            if op == "-":
                return lambda x: lf(x) - rf(x)
            if op == "*":
                return lambda x: lf(x) * rf(x)
            if op == "/":
                return lambda x: _divide(lf(x), rf(x))
            if isinstance(right, Const) and float(right.value).is_integer() and right.value >= 0:
                k = int(right.value)
                return lambda x: _power(lf(x), k)
            return lambda x: _power(lf(x), rf(x))
        case Call(func, arg):
            g, h = compile_expr(arg), _FUNCS[func]
            return lambda x: h(g(x))
    raise TypeError(f"not an expression: {e!r}")


def has_variable(e: Expr) -> bool:
    match e:
        case Var():
            return True
        case Const():
            return False
        case Neg(arg) | Call(_, arg):
            return has_variable(arg)
        case BinOp(_, left, right):
            return has_variable(left) or has_variable(right)
    raise TypeError(f"not an expression: {e!r}")


ZERO, ONE = Const(0.0), Const(1.0)


def _is(e: Expr, v: float) -> bool:
    return isinstance(e, Const) and e.value == v


def add(a: Expr, b: Expr) -> Expr:
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is(a, 0):
        return ZERO
    if _is(b, 1):
        return a
    return BinOp("/", a, b)


def neg(a: Expr) -> Expr:
    if _is(a, 0):
        return ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def differentiate(e: Expr) -> Expr:
    """Symbolic d/dx. Only literal zeros and ones are folded away."""
    match e:
        case Const():
            return ZERO
        case Var():
            return ONE
        case Neg(arg):
            return neg(differentiate(arg))
        case BinOp("+", u, v):
            return add(differentiate(u), differentiate(v))
        case BinOp("-", u, v):
            return sub(differentiate(u), differentiate(v))
        case BinOp("*", u, v):
            return add(mul(differentiate(u), v), mul(u, differentiate(v)))
        case BinOp("/", u, v):
            return div(sub(mul(differentiate(u), v), mul(u, differentiate(v))), BinOp("^", v, Const(2.0)))
        case BinOp("^", u, c):
            if has_variable(c):
                raise Unsupported("derivative of a power with a variable exponent")
            if isinstance(c, Const):
                lowered = Const(c.value - 1.0)
            else:
                lowered = BinOp("-", c, ONE)
            if _is(lowered, 0):
                return mul(c, differentiate(u))
            return mul(mul(c, BinOp("^", u, lowered)), differentiate(u))
        case Call(func, u):
            du = differentiate(u)
            if func == "sin":
                outer = Call("cos", u)
            elif func == "cos":
                outer = neg(Call("sin", u))
            elif func == "tan":
                outer = div(ONE, BinOp("^", Call("cos", u), Const(2.0)))
            elif func == "exp":
                outer = Call("exp", u)
            elif func == "ln":
                return div(du, u)
            elif func == "sqrt":
                return div(du, mul(Const(2.0), Call("sqrt", u)))
            elif func == "abs":
                outer = div(u, Call("abs", u))
            else:
                raise Unsupported(f"no derivative rule for {func}")
            return mul(outer, du)
    raise TypeError(f"not an expression: {e!r}")
