"""Exact real numbers: the biquadratic field Q(sqrt2, sqrt3) and general surds.

``QuadNum`` is the user-facing type for the constants of the nearly-parallel
structures.  ``Surd`` is the internal workhorse for numeric evaluation: a
rational linear combination of radical monomials ``p1^(e1) * p2^(e2) ...``
over distinct primes with exponents in (0, 1).  Such monomials are linearly
independent over Q, so the term map is a canonical form and equality is
structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import reduce
from typing import Union

Rational = Union[int, Fraction]
RadKey = tuple[tuple[int, Fraction], ...]

_FACTOR_LIMIT = 10**14


def as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not a rational: {value!r}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer by trial division."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    if n > _FACTOR_LIMIT:
        raise OverflowError(f"refusing to factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _split_exponent(e: Fraction) -> tuple[int, Fraction]:
    whole = math.floor(e)
    return whole, e - whole


class Surd:
    """Element of the real field generated by roots of positive rationals."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[RadKey, Fraction] | None = None):
        clean = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}
        self._terms: dict[RadKey, Fraction] = clean
        self._hash: int | None = None

    # construction -------------------------------------------------------
    @classmethod
    def coerce(cls, value: object) -> Surd:
        if isinstance(value, Surd):
            return value
        if isinstance(value, QuadNum):
            return value.to_surd()
        return cls({(): as_fraction(value)})

    @classmethod
    def root(cls, value: Rational, exponent: Rational) -> Surd:
        """``value ** exponent`` for a rational base."""
        return cls.coerce(value) ** Fraction(exponent)

    @property
    def terms(self) -> dict[RadKey, Fraction]:
        return dict(self._terms)

    # predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(k == () for k in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get((), Fraction(0))

    def to_quadnum(self) -> QuadNum:
        half = Fraction(1, 2)
        slots = {(): 0, ((2, half),): 1, ((3, half),): 2, ((2, half), (3, half)): 3}
        vals = [Fraction(0)] * 4
        for key, coeff in self._terms.items():
            if key not in slots:
                raise ValueError(f"{self} is not in Q(sqrt2, sqrt3)")
            vals[slots[key]] = coeff
        return QuadNum(*vals)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other: object) -> Surd:
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return Surd(out)

    __radd__ = __add__

    def __neg__(self) -> Surd:
        return Surd({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: object) -> Surd:
        try:
            return self + (-Surd.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other: object) -> Surd:
        return (-self) + other

    def __mul__(self, other: object) -> Surd:
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[RadKey, Fraction] = {}
        for ka, va in self._terms.items():
            for kb, vb in other._terms.items():
                key, factor = _mul_keys(ka, kb)
                out[key] = out.get(key, 0) + va * vb * factor
        return Surd(out)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Surd:
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> Surd:
        return Surd.coerce(other) * self.inverse()

    def __pow__(self, exponent: Rational) -> Surd:
        exponent = Fraction(exponent)
        if exponent.denominator == 1:
            n = exponent.numerator
            if n < 0:
                return self.inverse() ** (-n)
            result, base = Surd.coerce(1), self
            while n:
                if n & 1:
                    result = result * base
                base = base * base
                n >>= 1
            return result
        if not self.is_monomial():
            raise ValueError(f"fractional power of a non-monomial surd {self}")
        (key, coeff), = self._terms.items()
        if coeff < 0:
            raise ValueError(f"fractional power of a negative number {self}")
        return _monomial_power(coeff, key, exponent)

    def inverse(self) -> Surd:
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        if self.is_monomial():
            (key, coeff), = self._terms.items()
            inv = Surd({(): 1 / coeff})
            neg = tuple((p, -e) for p, e in key)
            return inv * _monomial_power(Fraction(1), (), Fraction(1), raw=neg)
        return _field_inverse(self)

    # comparison ----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Surd, QuadNum, int, Fraction)):
            return self._terms == Surd.coerce(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def to_decimal(self, prec: int = 60) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = prec + 10
            total = Decimal(0)
            for key, coeff in self._terms.items():
                term = Decimal(coeff.numerator) / Decimal(coeff.denominator)
                for p, e in key:
                    term *= Decimal(p) ** (Decimal(e.numerator) / Decimal(e.denominator))
                total += term
            ctx.prec = prec
            return +total

    def __float__(self) -> float:
        return float(self.to_decimal(30))

    def sign(self) -> int:
        if not self._terms:
            return 0
        if self.is_rational():
            v = self.to_fraction()
            return (v > 0) - (v < 0)
        d = self.to_decimal(80)
        if d == 0:  # pragma: no cover - nonzero algebraic numbers of our size never underflow
            raise ArithmeticError("sign undecided")
        return 1 if d > 0 else -1

    def __repr__(self) -> str:
        return f"Surd({render_surd(self)!r})"

    def __str__(self) -> str:
        return render_surd(self)


def _mul_keys(a: RadKey, b: RadKey) -> tuple[RadKey, Fraction]:
    exps: dict[int, Fraction] = dict(a)
    for p, e in b:
        exps[p] = exps.get(p, Fraction(0)) + e
    factor = Fraction(1)
    key = []
    for p in sorted(exps):
        whole, frac = _split_exponent(exps[p])
        if whole:
            factor *= Fraction(p) ** whole
        if frac:
            key.append((p, frac))
    return tuple(key), factor


def _monomial_power(coeff: Fraction, key: RadKey, exponent: Fraction,
                    raw: RadKey | None = None) -> Surd:
    exps: dict[int, Fraction] = {}
    if raw is not None:
        for p, e in raw:
            exps[p] = exps.get(p, Fraction(0)) + e
    else:
        if coeff < 0 and exponent.denominator != 1:
            raise ValueError("fractional power of a negative coefficient")
        sign = -1 if coeff < 0 else 1
        for p, v in factorize(abs(coeff.numerator)).items() if coeff.numerator else ():
            exps[p] = exps.get(p, Fraction(0)) + v * exponent
        for p, v in factorize(coeff.denominator).items():
            exps[p] = exps.get(p, Fraction(0)) - v * exponent
        for p, e in key:
            exps[p] = exps.get(p, Fraction(0)) + e * exponent
        if coeff == 0:
            return Surd()
        lead = Fraction(sign) ** exponent.numerator if sign < 0 else Fraction(1)
        return lead * _fold(exps)
    return _fold(exps)


def _fold(exps: dict[int, Fraction]) -> Surd:
    factor = Fraction(1)
    key = []
    for p in sorted(exps):
        whole, frac = _split_exponent(exps[p])
        if whole:
            factor *= Fraction(p) ** whole
        if frac:
            key.append((p, frac))
    return Surd({tuple(key): factor})


def _field_inverse(a: Surd) -> Surd:
    # Multiplication by ``a`` is a Q-linear map on the span of all radical
    # monomials over the primes involved; invert it by exact elimination.
    denoms: dict[int, int] = {}
    for key in a._terms:
        for p, e in key:
            denoms[p] = math.lcm(denoms.get(p, 1), e.denominator)
    primes = sorted(denoms)
    basis: list[RadKey] = [()]
    for p in primes:
        n = denoms[p]
        basis = [
            tuple(sorted(b + (((p, Fraction(j, n)),) if j else ())))
            for b in basis for j in range(n)
        ]
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)
    cols = []
    for b in basis:
        prod = a * Surd({b: Fraction(1)})
        col = [Fraction(0)] * dim
        for key, coeff in prod._terms.items():
            col[index[key]] = coeff
        cols.append(col)
    mat = [[cols[j][i] for j in range(dim)] + [Fraction(int(i == 0))] for i in range(dim)]
    sol = solve_linear(mat)
    return Surd({basis[i]: sol[i] for i in range(dim)})


def solve_linear(aug: list[list[Fraction]]) -> list[Fraction]:
    """Solve a square system given as an augmented matrix (exact)."""
    n = len(aug)
    m = [row[:] for row in aug]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [vr - f * vc for vr, vc in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _render_radical(key: RadKey) -> str:
    groups: dict[Fraction, int] = {}
    for p, e in key:
        groups[e] = groups.get(e, 1) * p
    parts = []
    for e in sorted(groups):
        base = groups[e]
        if e == Fraction(1, 2):
            parts.append(f"sqrt({base})")
        else:
            parts.append(f"{base}^({e})")
    return "*".join(parts)


def render_surd(a: Surd) -> str:
    if not a._terms:
        return "0"
    pieces = []
    for key in sorted(a._terms, key=lambda k: (len(k), k)):
        coeff = a._terms[key]
        if key == ():
            body = str(abs(coeff))
        else:
            rad = _render_radical(key)
            mag = abs(coeff)
            if mag == 1:
                body = rad
            elif mag.numerator == 1:
                body = f"{rad}/{mag.denominator}"
            else:
                body = f"{mag}*{rad}"
        pieces.append(("-" if coeff < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class QuadNum:
    """a + b*sqrt2 + c*sqrt3 + d*sqrt6 with rational a, b, c, d."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in "abcd":
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    @classmethod
    def coerce(cls, value: object) -> QuadNum:
        if isinstance(value, QuadNum):
            return value
        if isinstance(value, Surd):
            return value.to_quadnum()
        return cls(as_fraction(value))

    @classmethod
    def sqrt(cls, q: Rational) -> QuadNum:
        """Exact square root of a non-negative rational whose squarefree part divides 6."""
        q = as_fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        return cls.coerce(Surd.coerce(q) ** Fraction(1, 2))

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: object) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return QuadNum(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other: object) -> QuadNum:
        try:
            return self + (-QuadNum.coerce(other))
        except (TypeError, ValueError):
            return NotImplemented

    def __rsub__(self, other: object) -> QuadNum:
        return (-self) + other

    def __mul__(self, other: object) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a1, b1, c1, d1 = self.components()
        a2, b2, c2, d2 = o.components()
        return QuadNum(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conjugate3(self) -> QuadNum:
        return QuadNum(self.a, self.b, -self.c, -self.d)

    def conjugate2(self) -> QuadNum:
        return QuadNum(self.a, -self.b, self.c, -self.d)

    def inverse(self) -> QuadNum:
        if self == QuadNum():
            raise ZeroDivisionError("inverse of zero")
        # (P + sqrt3 Q)^-1 = (P - sqrt3 Q) / (P^2 - 3Q^2), then the same in Q(sqrt2)
        n1 = self * self.conjugate3()
        n2 = n1 * n1.conjugate2()
        return self.conjugate3() * n1.conjugate2() * QuadNum(1 / n2.a)

    def __truediv__(self, other: object) -> QuadNum:
        try:
            return self * QuadNum.coerce(other).inverse()
        except (TypeError, ValueError):
            return NotImplemented

    def __rtruediv__(self, other: object) -> QuadNum:
        return QuadNum.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> QuadNum:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return reduce(lambda acc, _: acc * self, range(n), QuadNum(1))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (QuadNum, int, Fraction)):
            return self.components() == QuadNum.coerce(other).components()
        if isinstance(other, Surd):
            return self.to_surd() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_surd())

    def to_surd(self) -> Surd:
        half = Fraction(1, 2)
        return Surd({
            (): self.a,
            ((2, half),): self.b,
            ((3, half),): self.c,
            ((2, half), (3, half)): self.d,
        })

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(2) + float(self.c) * math.sqrt(3) \
            + float(self.d) * math.sqrt(6)

    def __str__(self) -> str:
        return render_surd(self.to_surd())
