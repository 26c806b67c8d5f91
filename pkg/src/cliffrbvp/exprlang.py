"""A small expression language for complex boundary data and conformal maps.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INT)*
    atom    := NUMBER | 'i' | 't' | 'z' | 'conj' '(' expr ')' | '(' expr ')'

Exponents are integer literals only.  Evaluation is vectorized over numpy
arrays and refuses divisions by values of modulus below 1e-14.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

VARIABLES = ("t", "z")
DIV_EPS = 1e-14


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ExprEvalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Conj:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Imag, Var, Neg, Conj, Add, Sub, Mul, Div, Pow]

_BINARY = {"+": Add, "-": Sub, "*": Mul, "/": Div}
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', 'op', 'end'
    text: str
    offset: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", self.tok.offset)
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected token {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = _BINARY[op](node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = _BINARY[op](node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        while self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                sign = -1
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                raise ExprSyntaxError("exponent must be an integer literal", tok.offset)
            self.advance()
            node = Pow(node, sign * int(tok.text))
        return node

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            value = float(tok.text)
            if not np.isfinite(value):
                raise ExprSyntaxError("numeric literal overflows", tok.offset)
            return Num(value)
        if tok.kind == "ident":
            self.advance()
            if tok.text == "i":
                return Imag()
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text == "conj":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Conj(inner)
            raise ExprSyntaxError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"unexpected {found}", tok.offset)


def parse(src: str) -> Expr:
    return _Parser(src).parse()


def to_source(e: Expr) -> str:
    """Fully parenthesized source text that parses back to the same tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Imag):
        return "i"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_source(e.operand)})"
    if isinstance(e, Conj):
        return f"conj({to_source(e.operand)})"
    if isinstance(e, Pow):
        return f"({to_source(e.base)}^{e.exponent})"
    return f"({to_source(e.left)}{_SYMBOL[type(e)]}{to_source(e.right)})"


def free_variables(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Num, Imag)):
        return set()
    if isinstance(e, (Neg, Conj)):
        return free_variables(e.operand)
    if isinstance(e, Pow):
        return free_variables(e.base)
    return free_variables(e.left) | free_variables(e.right)


def is_zero_literal(e: Expr) -> bool:
    return isinstance(e, Num) and e.value == 0.0


def _divide(num, den):
    if np.any(np.abs(den) < DIV_EPS):
        raise ExprEvalError("division by a value of modulus < 1e-14")
    return num / den


def _eval(e: Expr, env: dict):
    if isinstance(e, Num):
        return complex(e.value)
    if isinstance(e, Imag):
        return 1j
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise ExprEvalError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Neg):
        return -_eval(e.operand, env)
    if isinstance(e, Conj):
        return np.conj(_eval(e.operand, env))
    if isinstance(e, Pow):
        base = _eval(e.base, env)
        if e.exponent < 0:
            return _divide(1.0, base ** (-e.exponent))
        return base ** e.exponent
    left, right = _eval(e.left, env), _eval(e.right, env)
    if isinstance(e, Add):
        return left + right
    if isinstance(e, Sub):
        return left - right
    if isinstance(e, Mul):
        return left * right
    return _divide(left, right)


def evaluate(e: Expr, value=None, **bindings):
    """Evaluate at a complex scalar or array.

    A positional value binds the expression's single free variable, whatever
    its name; keyword bindings name variables explicitly.
    """
    env = {k: _as_complex(v) for k, v in bindings.items()}
    if value is not None:
        names = free_variables(e)
        if len(names) > 1:
            raise ExprEvalError(f"positional binding is ambiguous for variables {sorted(names)}")
        for name in names or VARIABLES[:1]:
            env[name] = _as_complex(value)
    out = _eval(e, env)
    if value is not None and np.ndim(value) and not np.ndim(out):
        out = np.full(np.shape(value), out, dtype=complex)
    return out


def _as_complex(v):
    return np.asarray(v, dtype=complex) if np.ndim(v) else complex(v)


@dataclass(frozen=True)
class CompiledExpr:
    """Callable wrapper pairing a parsed tree with its source text."""

    source: str
    tree: Expr

    def __call__(self, value):
        return evaluate(self.tree, value)

    @property
    def is_zero(self) -> bool:
        return is_zero_literal(self.tree)


def compile_expr(src: str) -> CompiledExpr:
    return CompiledExpr(src, parse(src))


ComplexFunction = Callable[[np.ndarray], np.ndarray]
