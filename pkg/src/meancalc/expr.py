"""Mini expression language for single-variable real functions.

Grammar (recursive descent, ``^`` binds tightest and is right-associative,
then unary minus, then ``* /``, then ``+ -``)::

    expr   = term { ("+" | "-") term } ;
    term   = unary { ("*" | "/") unary } ;
    unary  = "-" unary | power ;
    power  = atom [ "^" unary ] ;
    atom   = NUMBER | "x" | "pi" | "e"
           | FUNC "(" expr ")" | "(" expr ")" ;
    FUNC   = "sin" | "cos" | "tan" | "sec" | "exp" | "ln" | "sqrt" | "abs" ;
    NUMBER = decimal or scientific literal: 2, 0.5, .5, 1e-3, 2.5E+4 ;

Function application requires explicit parentheses: ``sin(x)^2`` is
``(sin x)^2``; ``sin x`` is a syntax error.  Trees are immutable and safe
to share; evaluation is pure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .sampling import Interval

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Const",
    "Neg",
    "BinOp",
    "Call",
    "ParseError",
    "EvalError",
    "parse",
    "to_source",
    "evaluate",
    "evaluate_many",
    "contains_variable",
    "DAPair",
    "builtin_da_table",
    "power_pair",
    "lookup_da_pair",
]

FUNCTIONS = ("sin", "cos", "tan", "sec", "exp", "ln", "sqrt", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    """Base class for expression tree nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    """The single free variable ``x``."""


@dataclass(frozen=True)
class Const(Expr):
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


class ParseError(ValueError):
    """Syntax error with a 1-based character position."""

    def __init__(self, position: int, message: str):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


class EvalError(ArithmeticError):
    """Evaluation failed: a domain violation or a non-finite result.

    ``kind`` is ``"domain"`` or ``"nonfinite"``, ``x`` is the input value the
    function was being evaluated at, ``node`` is the source form of the
    offending subexpression.
    """

    def __init__(self, kind: str, x: float, node: str, detail: str):
        super().__init__(f"{detail} at x={x!r} in {node!r}")
        self.kind = kind
        self.x = x
        self.node = node


# --------------------------------------------------------------------------
# Tokenizer / parser
# --------------------------------------------------------------------------

class _Token(NamedTuple):
    kind: str  # num | ident | op | end
    text: str
    pos: int  # 1-based position of the first character


_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if m := _NUMBER_RE.match(text, i):
            tokens.append(_Token("num", m.group(), i + 1))
            i = m.end()
            continue
        if m := _IDENT_RE.match(text, i):
            tokens.append(_Token("ident", m.group(), i + 1))
            i = m.end()
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, i + 1))
            i += 1
            continue
        raise ParseError(i + 1, f"unexpected character {ch!r}")
    tokens.append(_Token("end", "", len(text) + 1))
    return tokens


_ATOM_HINT = "expected a number, 'x', 'pi', 'e', a function call or '('"


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str, context: str) -> None:
        tok = self.peek()
        if tok.kind == "op" and tok.text == op:
            self.advance()
            return
        found = repr(tok.text) if tok.kind != "end" else "end of input"
        raise ParseError(tok.pos, f"expected {op!r} {context}, found {found}")

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            # right-associative; exponent may carry its own unary minus
            return BinOp("^", base, self.parse_unary())
        return base

    def parse_atom(self) -> Expr:
        tok = self.advance()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "ident":
            name = tok.text
            if name in FUNCTIONS:
                nxt = self.peek()
                if not (nxt.kind == "op" and nxt.text == "("):
                    raise ParseError(
                        nxt.pos,
                        f"expected '(' after function name {name!r} "
                        f"(write {name}(x), not {name} x)",
                    )
                self.advance()
                arg = self.parse_expr()
                self.expect_op(")", f"to close {name}(...)")
                return Call(name, arg)
            if name == "x":
                return Var()
            if name in CONSTANTS:
                return Const(name)
            raise ParseError(
                tok.pos,
                f"unknown identifier {name!r}; expected 'x', 'pi', 'e' "
                f"or one of {', '.join(FUNCTIONS)}",
            )
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_expr()
            self.expect_op(")", "to close '('")
            return node
        found = repr(tok.text) if tok.kind != "end" else "end of input"
        raise ParseError(tok.pos, f"{_ATOM_HINT}, found {found}")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises :class:`ParseError` with a 1-based character position on
    malformed input.
    """
    if not text or not text.strip():
        raise ParseError(1, "empty expression")
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "end":
        raise ParseError(tok.pos, f"expected end of input, found {tok.text!r}")
    return node


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------

def _format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_source(node: Expr) -> str:
    """Render a tree in canonical fully-parenthesized form.

    ``parse(to_source(t))`` is structurally identical to ``t``.
    """
    if isinstance(node, Num):
        return _format_number(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def contains_variable(node: Expr) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return contains_variable(node.operand)
    if isinstance(node, BinOp):
        return contains_variable(node.left) or contains_variable(node.right)
    if isinstance(node, Call):
        return contains_variable(node.arg)
    return False


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def evaluate(node: Expr, x: float) -> float:
    """Evaluate the tree at ``x`` in IEEE double precision.

    Any domain violation (``ln`` of a non-positive value, ``sqrt`` of a
    negative value, division by zero, fractional power of a negative base)
    or non-finite intermediate result aborts with :class:`EvalError`; NaN
    and infinity never propagate.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"evaluation point must be finite, got {x!r}")
    return _eval_scalar(node, x)


def _scalar_error(kind: str, x: float, node: Expr, detail: str) -> EvalError:
    return EvalError(kind, x, to_source(node), detail)


def _require_finite(v: float, x: float, node: Expr) -> float:
    if not math.isfinite(v):
        raise _scalar_error("nonfinite", x, node, f"non-finite result {v!r}")
    return v


def _eval_scalar(node: Expr, x: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval_scalar(node.operand, x)
    if isinstance(node, BinOp):
        left = _eval_scalar(node.left, x)
        right = _eval_scalar(node.right, x)
        if node.op == "+":
            v = left + right
        elif node.op == "-":
            v = left - right
        elif node.op == "*":
            v = left * right
        elif node.op == "/":
            if right == 0.0:
                raise _scalar_error("domain", x, node, "division by zero")
            v = left / right
        elif node.op == "^":
            try:
                v = math.pow(left, right)
            except ValueError:
                raise _scalar_error(
                    "domain", x, node,
                    f"{left!r} cannot be raised to the power {right!r}",
                ) from None
            except OverflowError:
                raise _scalar_error("nonfinite", x, node, "overflow in power") from None
        else:  # pragma: no cover - parser only emits the five ops
            raise TypeError(f"unknown operator {node.op!r}")
        return _require_finite(v, x, node)
    if isinstance(node, Call):
        a = _eval_scalar(node.arg, x)
        if node.func == "ln":
            if a <= 0.0:
                raise _scalar_error("domain", x, node, f"ln of non-positive value {a!r}")
            v = math.log(a)
        elif node.func == "sqrt":
            if a < 0.0:
                raise _scalar_error("domain", x, node, f"sqrt of negative value {a!r}")
            v = math.sqrt(a)
        elif node.func == "sec":
            c = math.cos(a)
            if c == 0.0:
                raise _scalar_error("domain", x, node, "sec at a cosine zero")
            v = 1.0 / c
        elif node.func == "exp":
            try:
                v = math.exp(a)
            except OverflowError:
                raise _scalar_error("nonfinite", x, node, "overflow in exp") from None
        elif node.func == "sin":
            v = math.sin(a)
        elif node.func == "cos":
            v = math.cos(a)
        elif node.func == "tan":
            v = math.tan(a)
        elif node.func == "abs":
            v = abs(a)
        else:  # pragma: no cover - parser only emits known functions
            raise TypeError(f"unknown function {node.func!r}")
        return _require_finite(v, x, node)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate_many(node: Expr, xs) -> np.ndarray:
    """Evaluate the tree at every point of ``xs`` (vectorized).

    Equivalent to evaluating point by point: the first point with a domain
    violation or non-finite intermediate raises :class:`EvalError`.
    """
    arr = np.asarray(xs, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("expected a 1-d array of evaluation points")
    if not np.isfinite(arr).all():
        raise ValueError("evaluation points must be finite")
    with np.errstate(all="ignore"):
        return _eval_array(node, arr)


def _first_bad_x(mask: np.ndarray, xs: np.ndarray) -> float:
    return float(xs[int(np.argmax(mask))])


def _array_error(kind: str, mask: np.ndarray, xs: np.ndarray, node: Expr, detail: str) -> EvalError:
    return EvalError(kind, _first_bad_x(mask, xs), to_source(node), detail)


def _check_array(vals: np.ndarray, xs: np.ndarray, node: Expr) -> np.ndarray:
    bad = ~np.isfinite(vals)
    if bad.any():
        raise _array_error("nonfinite", bad, xs, node, "non-finite result")
    return vals


def _eval_array(node: Expr, xs: np.ndarray) -> np.ndarray:
    if isinstance(node, Num):
        return np.full_like(xs, node.value)
    if isinstance(node, Var):
        return xs
    if isinstance(node, Const):
        return np.full_like(xs, CONSTANTS[node.name])
    if isinstance(node, Neg):
        return -_eval_array(node.operand, xs)
    if isinstance(node, BinOp):
        left = _eval_array(node.left, xs)
        right = _eval_array(node.right, xs)
        if node.op == "+":
            v = left + right
        elif node.op == "-":
            v = left - right
        elif node.op == "*":
            v = left * right
        elif node.op == "/":
            zero = right == 0.0
            if zero.any():
                raise _array_error("domain", zero, xs, node, "division by zero")
            v = left / right
        else:  # ^
            v = np.power(left, right)
            isnan = np.isnan(v)
            if isnan.any():
                raise _array_error(
                    "domain", isnan, xs, node,
                    "negative base cannot be raised to a fractional power",
                )
            zero_neg = np.isinf(v) & (left == 0.0) & (right < 0.0)
            if zero_neg.any():
                raise _array_error("domain", zero_neg, xs, node, "zero raised to a negative power")
        return _check_array(v, xs, node)
    if isinstance(node, Call):
        a = _eval_array(node.arg, xs)
        if node.func == "ln":
            bad = a <= 0.0
            if bad.any():
                raise _array_error("domain", bad, xs, node, "ln of non-positive value")
            v = np.log(a)
        elif node.func == "sqrt":
            bad = a < 0.0
            if bad.any():
                raise _array_error("domain", bad, xs, node, "sqrt of negative value")
            v = np.sqrt(a)
        elif node.func == "sec":
            c = np.cos(a)
            bad = c == 0.0
            if bad.any():
                raise _array_error("domain", bad, xs, node, "sec at a cosine zero")
            v = 1.0 / c
        elif node.func == "exp":
            v = np.exp(a)
        elif node.func == "sin":
            v = np.sin(a)
        elif node.func == "cos":
            v = np.cos(a)
        elif node.func == "tan":
            v = np.tan(a)
        else:  # abs
            v = np.abs(a)
        return _check_array(v, xs, node)
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# Derivative-antiderivative pairs with verified closed forms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DAPair:
    """A (derivative, antiderivative) pair: ``antiderivative' = derivative``."""

    name: str
    derivative: Expr
    antiderivative: Expr
    interval: Interval  # verification interval avoiding singularities


_X = Var()


def power_pair(n: int) -> DAPair:
    """The pair (x^n, x^(n+1)/(n+1)) on [0, 1] for integer ``n >= 0``."""
    if n < 0:
        raise ValueError("power_pair requires n >= 0 (1/x is the 'logarithm' pair)")
    if n == 0:
        f: Expr = Num(1.0)
    elif n == 1:
        f = _X
    else:
        f = BinOp("^", _X, Num(float(n)))
    big_f = BinOp("/", BinOp("^", _X, Num(float(n + 1))), Num(float(n + 1)))
    return DAPair(f"power n={n}", f, big_f, Interval(0.0, 1.0))


def builtin_da_table() -> list[DAPair]:
    """The six built-in derivative-antiderivative pairs.

    The power family ships at n=4; ``power_pair`` instantiates any other
    exponent.  Intervals avoid singularities: the logarithm pair is checked
    on [0.5, 2] and the tangent pair on [0, 1].
    """
    return [
        power_pair(4),
        DAPair("exponential", Call("exp", _X), Call("exp", _X), Interval(0.0, 1.0)),
        DAPair("logarithm", BinOp("/", Num(1.0), _X), Call("ln", _X), Interval(0.5, 2.0)),
        DAPair("sine", Call("cos", _X), Call("sin", _X), Interval(0.0, 1.0)),
        DAPair("cosine", Neg(Call("sin", _X)), Call("cos", _X), Interval(0.0, 1.0)),
        DAPair(
            "tangent",
            BinOp("^", Call("sec", _X), Num(2.0)),
            Call("tan", _X),
            Interval(0.0, 1.0),
        ),
    ]


_DA_ALIASES = {
    "exp": "exponential",
    "exponential": "exponential",
    "log": "logarithm",
    "ln": "logarithm",
    "logarithm": "logarithm",
    "sine": "sine",
    "sin": "sine",
    "cosine": "cosine",
    "cos": "cosine",
    "tangent": "tangent",
    "tan": "tangent",
}

_POWER_RE = re.compile(r"power(?:\s+n\s*=\s*(\d+))?$")


def lookup_da_pair(name: str) -> DAPair:
    """Find a built-in pair by name, e.g. ``"exp"``, ``"cosine"``, ``"power n=2"``."""
    key = name.strip().lower()
    if m := _POWER_RE.match(key):
        return power_pair(int(m.group(1)) if m.group(1) else 4)
    canonical = _DA_ALIASES.get(key)
    if canonical is None:
        known = ", ".join(p.name for p in builtin_da_table())
        raise KeyError(f"no built-in pair named {name!r}; known pairs: {known}")
    for pair in builtin_da_table():
        if pair.name == canonical:
            return pair
    raise AssertionError("unreachable")  # pragma: no cover
