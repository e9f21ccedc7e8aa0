"""Text grammar for scalars: rendering and a small recursive-descent parser.

Rationals render as ``p/q``, monomials as ``f0^2*f1`` and prefactors as
``t^(1/2)*h^(-3/2)``.  The parser accepts sums, products, quotients, powers,
parentheses and ``sqrt(...)``; it is written so the exterior grammar can reuse
it by overriding the value hooks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .numbers import Surd
from .poly import Poly, render_coeff, render_monomial
from .scaled import GENERATORS, ScaledScalar
from .symbols import SYMBOL_INDEX


class ParseError(SyntaxError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text


class UnknownAtom(KeyError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, NAME, OP, END
    text: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^(),]))")


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                             pos + len(text[pos:]) - len(text[pos:].lstrip()), text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Token("NUM", m.group(1), start))
        elif m.group(2):
            out.append(Token("NAME", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(Token("OP", op, start))
        pos = m.end()
    out.append(Token("END", "", len(text)))
    return out


class ScalarParser:
    """Recursive descent over ``+ - * / ^`` with scalar values."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers --------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def accept(self, op: str) -> bool:
        if self.tok.kind == "OP" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            self.fail(f"expected {op!r}")

    def fail(self, message: str) -> None:
        found = self.tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", self.tok.pos, self.text)

    # grammar --------------------------------------------------------------------
    def parse(self):
        if self.tok.kind == "END":
            self.fail("empty expression")
        value = self.expr()
        if self.tok.kind != "END":
            self.fail("unexpected token")
        return value

    def expr(self):
        value = self.term()
        while True:
            if self.accept("+"):
                value = self.add(value, self.term())
            elif self.accept("-"):
                value = self.add(value, self.neg(self.term()))
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = self.mul(value, self.unary())
            elif self.accept("/"):
                pos = self.tok.pos
                rhs = self.unary()
                try:
                    value = self.div(value, rhs)
                except (ValueError, ZeroDivisionError, TypeError) as exc:
                    raise ParseError(str(exc), pos, self.text) from None
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return self.neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        value = self.primary()
        while self.tok.kind == "OP" and self.tok.text == "^":
            pos = self.tok.pos
            self.i += 1
            if self.accept("-"):
                rhs = self.neg(self.primary())
            else:
                rhs = self.primary()
            try:
                value = self.pow(value, rhs)
            except (ValueError, ZeroDivisionError, TypeError) as exc:
                raise ParseError(str(exc), pos, self.text) from None
        return value

    def primary(self):
        tok = self.tok
        if tok.kind == "NUM":
            self.i += 1
            return ScaledScalar.coerce(int(tok.text))
        if tok.kind == "NAME":
            self.i += 1
            if tok.text == "sqrt" and self.accept("("):
                inner = self.expr()
                self.expect(")")
                try:
                    return self.pow(inner, ScaledScalar.coerce(Fraction(1, 2)))
                except (ValueError, TypeError) as exc:
                    raise ParseError(str(exc), tok.pos, self.text) from None
            return self.atom(tok)
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        self.fail("expected a number, name or '('")

    # value hooks -------------------------------------------------------------------
    def atom(self, tok: Token):
        name = tok.text
        if name == "t":
            return ScaledScalar.make(1, t=1)
        if name in SYMBOL_INDEX:
            return ScaledScalar.coerce(Poly.var(name))
        raise ParseError(f"unknown symbol {name!r}", tok.pos, self.text)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def pow(self, a, b):
        if not isinstance(b, ScaledScalar) or not b.is_constant():
            raise ValueError("exponents must be rational constants")
        r = b.constant_value()
        if not isinstance(r, Fraction):
            raise ValueError("exponents must be rational")
        return a ** r


def parse_scalar(text: str) -> ScaledScalar:
    value = ScalarParser(text).parse()
    return value.compact()


def parse_poly(text: str) -> Poly:
    value = parse_scalar(text)
    if not value.is_polynomial():
        raise ValueError(f"{text!r} is not a polynomial")
    return value.as_poly()


def parse_number(text: str):
    """Exact constant from text: a Fraction or a Surd (e.g. ``sqrt(3/2)``)."""
    value = parse_scalar(text)
    if value.symbols():
        raise ValueError(f"{text!r} is not a number")
    return value.constant_value() if value.terms else Fraction(0)


def _term_chunks(pref, body: Poly) -> list[tuple[str, str]]:
    pref_text = "*".join(
        f"{g}^({e})" for g, e in zip(GENERATORS, pref.exponents()) if e
    )
    if body.is_monomial():
        (m, c), = body.items()
        sign, mag = render_coeff(c)
        factors = [f for f in (pref_text, render_monomial(m)) if f]
        if mag != "1" or not factors:
            factors.insert(0, mag)
        return [(sign, "*".join(factors))]
    if not pref_text:
        chunks = []
        for m, c in body.sorted_terms():
            chunks.extend(_term_chunks(pref, Poly({m: c})))
        return chunks
    return [("+", f"{pref_text}*({body})")]


def render_scalar(s: ScaledScalar) -> str:
    chunks: list[tuple[str, str]] = []
    for pref, body in s.items():
        chunks.extend(_term_chunks(pref, body))
    if not chunks:
        return "0"
    out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def render_number(value) -> str:
    if isinstance(value, Surd):
        return str(value)
    return str(value)
