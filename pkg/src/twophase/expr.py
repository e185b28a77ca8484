"""A tiny arithmetic expression language for config files.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | atom
    atom   := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

Names are the coordinates ``x``, ``y``, the time ``t`` and the constant
``pi``; functions are ``sin`` and ``exp``.  Expressions compile to closures
over numpy, so they evaluate on whole arrays at once.
"""

from __future__ import annotations

import math
import re

import numpy as np

FUNCTIONS = {"sin": np.sin, "exp": np.exp}
CONSTANTS = {"pi": math.pi}

_TOKEN = re.compile(r"""
    \s*(?:
      (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_]\w*)
    | (?P<op>[-+*/()])
    )""", re.VERBOSE)


class ExpressionError(ValueError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character {text[bad]!r} "
                                  f"at position {bad} in {text!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0
        self.used = set()

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok):
        raise ExpressionError(f"{msg} at position {tok[2]} in {self.text!r}")

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            self.fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected {tok[1]!r}", tok)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = _binary(op, node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = _binary(op, node, rhs)
        return node

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            inner = self.unary()
            return (lambda env: -inner(env)) if op == "-" else inner
        return self.atom()

    def atom(self):
        tok = self.take()
        kind, value = tok[0], tok[1]
        if kind == "num":
            v = float(value)
            return lambda env: v
        if kind == "name":
            if value in FUNCTIONS:
                fn = FUNCTIONS[value]
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return lambda env: fn(arg(env))
            if value in CONSTANTS:
                v = CONSTANTS[value]
                return lambda env: v
            if value in self.variables:
                self.used.add(value)
                return lambda env: env[value]
            self.fail(f"unknown name {value!r} (allowed: "
                      f"{', '.join(sorted(self.variables) + sorted(CONSTANTS))})", tok)
        if value == "(":
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"unexpected {value or 'end of input'!r}", tok)


def _binary(op, a, b):
    if op == "+":
        return lambda env: a(env) + b(env)
    if op == "-":
        return lambda env: a(env) - b(env)
    if op == "*":
        return lambda env: a(env) * b(env)
    return lambda env: a(env) / b(env)


class Expression:
    """A compiled expression; call with keyword arrays, e.g. ``e(x=xs, t=0.5)``."""

    def __init__(self, text: str, variables=("x", "y", "t")):
        self.text = text
        parser = _Parser(str(text), tuple(variables))
        self._fn = parser.parse()
        self.variables = frozenset(parser.used)

    def __call__(self, **env):
        missing = self.variables - env.keys()
        if missing:
            raise ExpressionError(f"{self.text!r} needs values for {sorted(missing)}")
        return self._fn(env)

    def __repr__(self):
        return f"Expression({self.text!r})"


def spatial_function(text, dim: int):
    """Compile ``text`` into a callable of the coordinates (x[, y])."""
    names = ("x", "y")[:dim]
    e = Expression(text, names)

    def f(*coords):
        return e(**dict(zip(names, coords)))
    return f


def boundary_function(text, dim: int):
    """Compile ``text`` into a callable ``h(t, x[, y])``."""
    names = ("x", "y")[:dim]
    e = Expression(text, ("t",) + names)

    def h(t, *coords):
        return e(t=t, **dict(zip(names, coords)))
    return h
