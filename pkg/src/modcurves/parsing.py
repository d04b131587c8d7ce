"""Text form of divisor expressions.

Grammar (whitespace is ignored between tokens)::

    expr     := term (('+' | '-') term)*
    term     := [rational '*'] atom
    rational := integer ['/' positive-integer]
    atom     := 'k1' | 'lambda' | 'dirr' | 'psi(' label ')'
              | 'delta(' integer ';' '{' [label (',' label)*] '}' ')'
              | 'Psi' | 'Delta' | 'Delta_' integer

``Psi``, ``Delta`` and ``Delta_b`` expand to the sum of the psi classes, the
total boundary and the canonical boundary classes of genus index b.  The
input may also start with a sign, and ``0`` alone is the zero class.
lambda is eliminated right after parsing.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .classes import (
    DELTA_IRR,
    KAPPA1,
    LAMBDA,
    DivisorExpr,
    ModuliSignature,
    canonical_delta,
    delta,
    eliminate_lambda,
    expand_shorthand,
    is_valid_delta,
    psi,
)

__all__ = ["ParseError", "parse_expr", "format_expr", "format_rational"]


class ParseError(ValueError):
    """Syntax or validation failure; ``offset`` is a byte offset into the UTF-8 input."""

    def __init__(self, message: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        self.reason = message
        super().__init__(f"{message} at byte {self.offset}")


_LABEL = re.compile(r"[A-Za-z0-9_.]+")
_INT = re.compile(r"[0-9]+")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class _Parser:
    def __init__(self, text: str, sig: ModuliSignature):
        self.text = text
        self.sig = sig
        self.pos = 0

    def fail(self, message: str, pos: int | None = None):
        raise ParseError(message, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos:self.pos + 1]

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.text[self.pos:self.pos + 1] or "end of input"
            self.fail(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def match(self, pattern: re.Pattern, what: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def integer(self, signed: bool = False) -> int:
        neg = False
        if signed and self.peek() == "-":
            neg = True
            self.pos += 1
        value = int(self.match(_INT, "integer"))
        return -value if neg else value

    def label(self) -> str:
        self.skip()
        start = self.pos
        lab = self.match(_LABEL, "label")
        if lab not in self.sig.labels:
            self.fail(f"unknown label {lab!r}", start)
        return lab

    def expr(self) -> DivisorExpr:
        total = DivisorExpr.zero(self.sig)
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        total = total + sign * self.term()
        while self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            total = total + sign * self.term()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return total

    def term(self) -> DivisorExpr:
        coeff = Fraction(1)
        if self.peek().isdigit():
            num = self.integer()
            den = 1
            if self.peek() == "/":
                self.pos += 1
                at = self.pos
                den = self.integer()
                if den == 0:
                    self.fail("zero denominator", at)
            coeff = Fraction(num, den)
            if self.peek() != "*":
                if num == 0 and den == 1:
                    return DivisorExpr.zero(self.sig)
                self.fail("expected '*' after coefficient")
            self.pos += 1
        return coeff * self.atom()

    def atom(self) -> DivisorExpr:
        self.skip()
        start = self.pos
        word = self.match(_WORD, "class name")
        sig = self.sig
        if word == "k1":
            return DivisorExpr.of(sig, KAPPA1)
        if word == "lambda":
            return DivisorExpr.of(sig, LAMBDA)
        if word == "dirr":
            return DivisorExpr.of(sig, DELTA_IRR)
        if word == "Psi":
            return expand_shorthand("psi", sig)
        if word == "Delta":
            return expand_shorthand("delta", sig)
        if word.startswith("Delta_") and word[6:].isdigit():
            b = int(word[6:])
            if b > sig.genus:
                self.fail(f"Delta_{b} needs an index at most {sig.genus}", start)
            return expand_shorthand("delta_b", sig, b)
        if word == "psi":
            self.expect("(")
            lab = self.label()
            self.expect(")")
            return DivisorExpr.of(sig, psi(lab))
        if word == "delta":
            self.expect("(")
            a = self.integer(signed=True)
            self.expect(";")
            self.expect("{")
            labels = []
            if self.peek() != "}":
                labels.append(self.label())
                while self.peek() == ",":
                    self.pos += 1
                    labels.append(self.label())
            self.expect("}")
            self.expect(")")
            if len(set(labels)) != len(labels):
                self.fail("repeated label in delta index", start)
            if not is_valid_delta(a, labels, sig):
                self.fail(f"delta({a};{{{','.join(labels)}}}) is not a boundary class on {sig}", start)
            return DivisorExpr.of(sig, delta(*canonical_delta(a, labels, sig)))
        self.fail(f"unknown class {word!r}", start)


def parse_expr(text: str, sig: ModuliSignature) -> DivisorExpr:
    """Parse ``text`` on ``sig`` and eliminate lambda."""
    return eliminate_lambda(_Parser(text, sig).expr())


def format_rational(c: Fraction) -> str:
    return str(Fraction(c))


def format_expr(e: DivisorExpr) -> str:
    """Canonical text; ``parse_expr(format_expr(e), sig) == e`` for lambda-free ``e``."""
    parts = []
    for s, c in e.items():
        name = s.text(e.signature)
        mag = abs(c)
        body = name if mag == 1 else f"{format_rational(mag)}*{name}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"
