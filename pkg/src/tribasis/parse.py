"""Polynomial expression parser and printer.

Grammar (whitespace insignificant):

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nat)?
    atom   := nat | 'x' | 't' | '(' expr ')'

Parses to a UPoly in x over the base ring; 't' is only legal over GF(q)[t].
Syntax errors report the offending position.
"""

from __future__ import annotations

from .errors import InputError
from .upoly import UPoly


class ParseError(InputError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def take(self):
        c = self.peek()
        self.pos += 1
        return c

    def expect(self, c):
        got = self.peek()
        if got != c:
            raise ParseError(f"expected {c!r}, found {got!r}", self.pos)
        self.pos += 1

    def nat(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", self.pos)
        return int(self.text[start:self.pos])


def parse_poly(text: str, ring) -> UPoly:
    """Parse an expression in x (and t, over GF(q)[t]) as a UPoly over ring."""
    sc = _Scanner(text)
    poly = _expr(sc, ring)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError(f"unexpected {sc.text[sc.pos]!r}", sc.pos)
    return poly


def _expr(sc, ring):
    # superset of the documented grammar: a leading '-' is accepted
    if sc.peek() == "-":
        sc.take()
        acc = -_term(sc, ring)
    else:
        acc = _term(sc, ring)
    while True:
        c = sc.peek()
        if c == "+":
            sc.take()
            acc = acc + _term(sc, ring)
        elif c == "-":
            sc.take()
            acc = acc - _term(sc, ring)
        else:
            return acc


def _term(sc, ring):
    acc = _factor(sc, ring)
    while sc.peek() == "*":
        sc.take()
        acc = acc * _factor(sc, ring)
    return acc


def _factor(sc, ring):
    base = _atom(sc, ring)
    if sc.peek() == "^":
        sc.take()
        n = sc.nat()
        out = UPoly.one(ring)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out
    return base


def _atom(sc, ring):
    c = sc.peek()
    if c == "(":
        sc.take()
        inner = _expr(sc, ring)
        sc.expect(")")
        return inner
    if c == "x":
        sc.take()
        return UPoly.x(ring)
    if c == "t":
        if ring.kind != "fqt":
            raise ParseError("variable 't' is only valid over GF(q)[t]", sc.pos)
        sc.take()
        return UPoly.const(ring, (ring.base.zero, ring.base.one))
    if c.isdigit():
        n = sc.nat()
        return UPoly.const(ring, ring.from_int(n))
    raise ParseError(f"unexpected {c!r}" if c else "unexpected end of input", sc.pos)


def format_poly(f: UPoly, var="x") -> str:
    """Print a UPoly so that parse_poly(format_poly(f)) round-trips."""
    ring = f.dom
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree(), -1, -1):
        c = f[i]
        if ring.is_zero(c):
            continue
        cs = _format_coeff(ring, c)
        if i == 0:
            parts.append(cs)
        else:
            xpow = var + (f"^{i}" if i > 1 else "")
            parts.append(xpow if cs == "1" else f"{cs}*{xpow}")
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out


def _format_coeff(ring, c):
    if ring.kind == "z":
        return str(c)
    from .rings import format_tpoly
    s = format_tpoly(ring.base, c)
    if "+" in s or "*" in s or "^" in s or (len(c) > 1):
        return f"({s})"
    return s
