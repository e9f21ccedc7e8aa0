"""Sparse multivariate polynomials over the closed symbol vocabulary.

A monomial is a tuple of ``(symbol_index, exponent)`` pairs sorted by index.
Coefficients are ``Fraction`` or, after numeric specialisation, ``Surd``;
rational surds are always stored as ``Fraction`` so the term map stays
canonical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

from .numbers import QuadNum, Surd, as_fraction
from .symbols import VOCABULARY, symbol_index

Monomial = tuple[tuple[int, int], ...]
Coeff = Union[Fraction, Surd]


class NotDivisible(ArithmeticError):
    pass


class MissingSymbol(KeyError):
    pass


def norm_coeff(value: object) -> Coeff:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, QuadNum):
        value = value.to_surd()
    if isinstance(value, Surd):
        return value.to_fraction() if value.is_rational() else value
    raise TypeError(f"unsupported coefficient {value!r}")


def _is_zero(c: Coeff) -> bool:
    return c == 0


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for i, e in b:
        exps[i] = exps.get(i, 0) + e
    return tuple(sorted(exps.items()))


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    exps = dict(a)
    for i, e in b:
        left = exps.get(i, 0) - e
        if left < 0:
            return None
        if left:
            exps[i] = left
        else:
            exps.pop(i, None)
    return tuple(sorted(exps.items()))


def lex_key(m: Monomial) -> tuple[tuple[int, int], ...]:
    """Sort key: larger key means larger monomial in lex order on the vocabulary."""
    return tuple((-i, e) for i, e in m)


class Poly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Coeff] = {}
        for m, c in (terms or {}).items():
            c = norm_coeff(c)
            if not _is_zero(c):
                clean[m] = c
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Coeff]) -> Poly:
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, value: object) -> Poly:
        return cls({(): value})

    @classmethod
    def var(cls, name: str, power: int = 1) -> Poly:
        if power < 0:
            raise ValueError("negative power of a polynomial variable")
        if power == 0:
            return cls.const(1)
        return cls({((symbol_index(name), power),): 1})

    @classmethod
    def coerce(cls, value: object) -> Poly:
        if isinstance(value, Poly):
            return value
        return cls.const(value)

    @property
    def terms(self) -> dict[Monomial, Coeff]:
        return dict(self._terms)

    def items(self) -> Iterable[tuple[Monomial, Coeff]]:
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def symbols(self) -> set[str]:
        return {VOCABULARY[i] for m in self._terms for i, _ in m}

    def degree_in(self, name: str) -> int:
        idx = symbol_index(name)
        return max((dict(m).get(idx, 0) for m in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self._terms.values())

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: object) -> Poly:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            v = c if v is None else norm_coeff(v + c)
            if _is_zero(v):
                out.pop(m, None)
            else:
                out[m] = v
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> Poly:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> Poly:
        return (-self) + other

    def __mul__(self, other: object) -> Poly:
        if not isinstance(other, Poly):
            try:
                c = norm_coeff(other)
            except TypeError:
                return NotImplemented
            if _is_zero(c):
                return Poly()
            return Poly._raw({m: norm_coeff(v * c) for m, v in self._terms.items()})
        out: dict[Monomial, Coeff] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = mono_mul(ma, mb)
                v = out.get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: object) -> Poly:
        return self * c

    # division ----------------------------------------------------------------
    def leading_term(self) -> tuple[Monomial, Coeff]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=lex_key)
        return m, self._terms[m]

    def exact_divide(self, q: Poly) -> Poly:
        """Return r with q*r == self, or raise NotDivisible."""
        q = Poly.coerce(q)
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lm_q, lc_q = q.leading_term()
        inv = 1 / lc_q
        rem = self
        quot: dict[Monomial, Coeff] = {}
        while not rem.is_zero():
            lm, lc = rem.leading_term()
            m = mono_div(lm, lm_q)
            if m is None:
                raise NotDivisible(f"{q} does not divide {self}")
            c = norm_coeff(lc * inv)
            quot[m] = c
            rem = rem - Poly._raw({m: c}) * q
        return Poly(quot)

    def divides(self, p: Poly) -> bool:
        try:
            p.exact_divide(self)
        except NotDivisible:
            return False
        return True

    # substitution and evaluation ---------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> Poly:
        """Simultaneous substitution of symbols by polynomials or constants."""
        images = {symbol_index(k): Poly.coerce(v) for k, v in mapping.items()}
        if not images:
            return self
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        out = Poly()
        for m, c in self._terms.items():
            kept = tuple((i, e) for i, e in m if i not in images)
            term = Poly._raw({kept: c})
            for i, e in m:
                if i in images:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, object], zero: object = 0) -> object:
        """Evaluate in any commutative ring whose elements accept Fraction arithmetic."""
        idx_values = {}
        for i in {i for m in self._terms for i, _ in m}:
            name = VOCABULARY[i]
            if name not in values:
                raise MissingSymbol(name)
            idx_values[i] = values[name]
        total = zero
        for m, c in self._terms.items():
            term = c
            for i, e in m:
                term = term * idx_values[i] ** e
            total = total + term
        return total

    def evaluate_float(self, values: Mapping[str, object]) -> object:
        """Floating evaluation; values may be floats or numpy arrays."""
        total = 0.0
        for m, c in self._terms.items():
            term = float(c)
            for i, e in m:
                name = VOCABULARY[i]
                if name not in values:
                    raise MissingSymbol(name)
                term = term * values[name] ** e
            total = total + term
        return total

    def reduce_power(self, name: str, rule: Poly) -> Poly:
        """Rewrite ``name**2`` as ``rule`` until ``name`` has degree at most one."""
        idx = symbol_index(name)
        out = Poly()
        for m, c in self._terms.items():
            e = dict(m).get(idx, 0)
            if e < 2:
                out = out + Poly._raw({m: c})
                continue
            rest = tuple((i, k) for i, k in m if i != idx)
            if e % 2:
                rest = mono_mul(rest, ((idx, 1),))
            out = out + Poly._raw({rest: c}) * rule ** (e // 2)
        return out

    def map_coefficients(self, fn: Callable[[Coeff], object]) -> Poly:
        return Poly({m: fn(c) for m, c in self._terms.items()})

    def coefficient(self, monomial: Monomial) -> Coeff:
        return self._terms.get(monomial, Fraction(0))

    # comparison ----------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, Surd, QuadNum)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, Coeff]]:
        return sorted(self._terms.items(), key=lambda mc: lex_key(mc[0]), reverse=True)

    def __repr__(self) -> str:
        return f"Poly({render_poly(self)!r})"

    def __str__(self) -> str:
        return render_poly(self)


def render_monomial(m: Monomial) -> str:
    parts = []
    for i, e in m:
        name = VOCABULARY[i]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def render_coeff(c: Coeff) -> tuple[str, str]:
    """Sign and magnitude text of a coefficient; surds are parenthesised."""
    if isinstance(c, Fraction):
        return ("-" if c < 0 else "+"), str(abs(c))
    if c.is_monomial():
        (_, v), = c.terms.items()
        if v < 0:
            return "-", f"({render_surd_abs(-c)})"
        return "+", f"({c})"
    return "+", f"({c})"


def render_surd_abs(c: Surd) -> str:
    return str(c)


def render_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    chunks: list[tuple[str, str]] = []
    for m, c in p.sorted_terms():
        sign, mag = render_coeff(c)
        mono = render_monomial(m)
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        chunks.append((sign, body))
    out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def P(name: str) -> Poly:
    """Shorthand for a polynomial variable."""
    return Poly.var(name)


def rational(value: object) -> Fraction:
    return as_fraction(value)
