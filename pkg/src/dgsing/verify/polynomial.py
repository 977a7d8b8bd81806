"""Parser for integer polynomials in x1..xn.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | "x" INT | "(" expr ")"

Whitespace is ignored. The result maps exponent tuples to nonzero integers.
"""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|(.))")


class PolynomialSyntaxError(ValueError):
    def __init__(self, msg, text, pos):
        super().__init__(f"{msg} at column {pos + 1} in {text!r}")
        self.column = pos + 1


def _mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _add(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


class _Parser:
    def __init__(self, text, n):
        self.text = text
        self.n = n
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            start = m.start(m.lastindex)
            self.tokens.append((m.group(m.lastindex), m.lastindex, start))
            pos = m.end()
        self.k = 0

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.k += 1
        return tok

    def fail(self, msg, pos=None):
        raise PolynomialSyntaxError(msg, self.text, self.peek()[2] if pos is None else pos)

    def const(self, c):
        return {(0,) * self.n: c} if c else {}

    def expr(self):
        out = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            out = _add(out, self.term(), 1 if op == "+" else -1)
        return out

    def term(self):
        out = self.unary()
        while self.peek()[0] == "*":
            self.take()
            out = _mul(out, self.unary())
        return out

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return {e: -c for e, c in self.unary().items()}
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok, kind, pos = self.take()
            if kind != 1:
                self.fail("expected a non-negative integer exponent", pos)
            out = self.const(1)
            for _ in range(int(tok)):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        tok, kind, pos = self.take()
        if tok is None:
            self.fail("unexpected end of input", pos)
        if kind == 1:
            return self.const(int(tok))
        if kind == 2:
            i = int(tok[1:])
            if not 1 <= i <= self.n:
                self.fail(f"variable {tok} out of range x1..x{self.n}", pos)
            e = [0] * self.n
            e[i - 1] = 1
            return {tuple(e): 1}
        if tok == "(":
            out = self.expr()
            if self.take()[0] != ")":
                self.fail("expected ')'", pos)
            return out
        self.fail(f"unexpected {tok!r}", pos)

    def parse(self):
        if not self.tokens:
            self.fail("empty polynomial", 0)
        out = self.expr()
        if self.peek()[0] is not None:
            self.fail(f"unexpected {self.peek()[0]!r}")
        return out


def parse_polynomial(text: str, n: int) -> dict:
    return _Parser(text, n).parse()


def format_polynomial(poly: dict) -> str:
    if not poly:
        return "0"
    parts = []
    for e, c in sorted(poly.items(), reverse=True):
        mono = "*".join(f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])
