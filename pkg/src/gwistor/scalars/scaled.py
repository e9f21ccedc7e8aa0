"""Polynomials multiplied by formal radical monomials ``t^a x^b h^c f4^d``.

A ``ScaledScalar`` is a finite sum of ``prefactor * body`` terms.  The single
term case is the common one; sums appear naturally when Hodge duals are
pulled back through the tilde coframe.  Two representations are used:

* compact: bodies may mention the abbreviations x, y, z, h and ``t`` stays a
  prefactor generator.  This is what the closed-form formulas look like.
* expanded: x, y, z, h are replaced by polynomials in the f's, ``t`` becomes
  ``h^(-1/3)`` and every integer part of a prefactor exponent is folded into
  the body (negative parts by exact division where possible).

Equality is mathematical: two scalars are equal iff the expansion of their
difference vanishes.  Radical monomials in the irreducible polynomials
x, h, f4 with distinct fractional exponent classes are linearly independent,
so the canonical expanded form decides equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .numbers import QuadNum, Surd, as_fraction
from .poly import Coeff, NotDivisible, Poly, norm_coeff
from .symbols import VOCABULARY

GENERATORS: tuple[str, ...] = ("t", "x", "h", "f4")
_GEN_POS = {g: i for i, g in enumerate(GENERATORS)}


@dataclass(frozen=True, order=True)
class RadPrefactor:
    """Formal product ``t^a * x^b * h^c * f4^d`` with rational exponents."""

    t: Fraction = Fraction(0)
    x: Fraction = Fraction(0)
    h: Fraction = Fraction(0)
    f4: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for g in GENERATORS:
            object.__setattr__(self, g, as_fraction(getattr(self, g)))

    @classmethod
    def of(cls, **exps: object) -> RadPrefactor:
        return cls(**{k: as_fraction(v) for k, v in exps.items()})

    def exponents(self) -> tuple[Fraction, ...]:
        return (self.t, self.x, self.h, self.f4)

    def is_one(self) -> bool:
        return not any(self.exponents())

    def __mul__(self, other: RadPrefactor) -> RadPrefactor:
        return RadPrefactor(*(a + b for a, b in zip(self.exponents(), other.exponents())))

    def __pow__(self, r: object) -> RadPrefactor:
        r = as_fraction(r)
        return RadPrefactor(*(a * r for a in self.exponents()))

    def inverse(self) -> RadPrefactor:
        return self ** -1

    def __str__(self) -> str:
        return render_prefactor(self)


ONE = RadPrefactor()


def render_prefactor(p: RadPrefactor) -> str:
    return "*".join(f"{g}^({e})" for g, e in zip(GENERATORS, p.exponents()) if e)


def _derived_polys() -> dict[str, Poly]:
    f0, f1, f2, f3 = (Poly.var(f"f{i}") for i in range(4))
    x = f2 ** 2 - f1 * f3
    y = f1 ** 2 - f0 * f2
    z = f1 * f2 - f0 * f3
    return {"x": x, "y": y, "z": z, "h": x * y - z ** 2}


DERIVED: dict[str, Poly] = _derived_polys()


def _split(e: Fraction) -> tuple[int, Fraction]:
    whole = math.floor(e)
    return whole, e - whole


def _canonical(terms: Iterable[tuple[RadPrefactor, Poly]],
               gens: Mapping[str, Poly]) -> dict[RadPrefactor, Poly]:
    """Group terms by fractional class and clear integer exponent parts.

    ``gens`` maps the generators whose integer parts may move into the body
    to the polynomial they stand for.  Generators missing from ``gens`` keep
    their full exponent in the class key.
    """
    names = [g for g in GENERATORS if g in gens]
    groups: dict[RadPrefactor, list[tuple[dict[str, int], Poly]]] = {}
    for pref, body in terms:
        if body.is_zero():
            continue
        exps = dict(zip(GENERATORS, pref.exponents()))
        whole: dict[str, int] = {}
        for g in names:
            whole[g], exps[g] = _split(exps[g])
        groups.setdefault(RadPrefactor(**exps), []).append((whole, body))

    out: dict[RadPrefactor, Poly] = {}
    for key, members in groups.items():
        base = {g: min([0] + [w[g] for w, _ in members]) for g in names}
        total = Poly()
        for w, body in members:
            for g in names:
                if w[g] > base[g]:
                    body = body * gens[g] ** (w[g] - base[g])
            total = total + body
        if total.is_zero():
            continue
        for g in names:
            while base[g] < 0:
                try:
                    total = total.exact_divide(gens[g])
                except NotDivisible:
                    break
                base[g] += 1
        exps = dict(zip(GENERATORS, key.exponents()))
        for g in names:
            exps[g] += base[g]
        pref = RadPrefactor(**exps)
        out[pref] = out.get(pref, Poly()) + total
        if out[pref].is_zero():
            del out[pref]
    return out


_COMPACT_GENS = {"x": Poly.var("x"), "h": Poly.var("h"), "f4": Poly.var("f4")}
_EXPAND_GENS = {"x": DERIVED["x"], "h": DERIVED["h"], "f4": Poly.var("f4")}


class ScaledScalar:
    __slots__ = ("_terms", "_expanded", "_hash")

    def __init__(self, terms: Mapping[RadPrefactor, object] | None = None):
        clean: dict[RadPrefactor, Poly] = {}
        for pref, body in (terms or {}).items():
            body = Poly.coerce(body)
            if not body.is_zero():
                clean[pref] = clean.get(pref, Poly()) + body
                if clean[pref].is_zero():
                    del clean[pref]
        self._terms = clean
        self._expanded: Optional[ScaledScalar] = None
        self._hash: Optional[int] = None

    # constructors -----------------------------------------------------------
    @classmethod
    def coerce(cls, value: object) -> ScaledScalar:
        if isinstance(value, ScaledScalar):
            return value
        if isinstance(value, Poly):
            return cls({ONE: value})
        return cls({ONE: Poly.const(value)})

    @classmethod
    def make(cls, body: object = 1, **exps: object) -> ScaledScalar:
        return cls({RadPrefactor.of(**exps): Poly.coerce(body)})

    @classmethod
    def zero(cls) -> ScaledScalar:
        return cls()

    @property
    def terms(self) -> dict[RadPrefactor, Poly]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    @property
    def pref(self) -> RadPrefactor:
        return self._single()[0]

    @property
    def body(self) -> Poly:
        return self._single()[1]

    def _single(self) -> tuple[RadPrefactor, Poly]:
        if not self._terms:
            return ONE, Poly()
        if len(self._terms) != 1:
            raise ValueError(f"{self} has several prefactor classes")
        (p, b), = self._terms.items()
        return p, b

    # predicates ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.expand()._is_structurally_zero()

    def _is_structurally_zero(self) -> bool:
        return not self._terms

    def is_single(self) -> bool:
        return len(self._terms) <= 1

    def is_polynomial(self) -> bool:
        return all(p.is_one() for p in self._terms)

    def as_poly(self) -> Poly:
        if not self._terms:
            return Poly()
        if not self.is_polynomial():
            raise ValueError(f"{self} carries a radical prefactor")
        return self._terms[ONE]

    def is_constant(self) -> bool:
        return self.is_polynomial() and self.as_poly().is_constant()

    def constant_value(self) -> Coeff:
        return self.as_poly().constant_value()

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for p, b in self._terms.items():
            out |= b.symbols()
            out |= {g for g, e in zip(GENERATORS, p.exponents()) if e}
        return out

    # arithmetic ------------------------------------------------------------------
    def __add__(self, other: object) -> ScaledScalar:
        try:
            other = ScaledScalar.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for p, b in other._terms.items():
            out[p] = out[p] + b if p in out else b
        return ScaledScalar(out)

    __radd__ = __add__

    def __neg__(self) -> ScaledScalar:
        return ScaledScalar({p: -b for p, b in self._terms.items()})

    def __sub__(self, other: object) -> ScaledScalar:
        try:
            return self + (-ScaledScalar.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other: object) -> ScaledScalar:
        return (-self) + other

    def __mul__(self, other: object) -> ScaledScalar:
        if isinstance(other, (int, Fraction, Surd, QuadNum, Poly)):
            return ScaledScalar({p: b * other for p, b in self._terms.items()})
        if not isinstance(other, ScaledScalar):
            return NotImplemented
        out: dict[RadPrefactor, Poly] = {}
        for pa, ba in self._terms.items():
            for pb, bb in other._terms.items():
                p = pa * pb
                out[p] = out[p] + ba * bb if p in out else ba * bb
        return ScaledScalar(out)

    __rmul__ = __mul__

    def inverse(self) -> ScaledScalar:
        pref, body = self.compact()._single()
        if body.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if not body.is_monomial():
            raise ValueError(f"cannot invert the non-monomial scalar {self}")
        (m, c), = body.items()
        extra: dict[str, Fraction] = {}
        rest = []
        for i, e in m:
            name = VOCABULARY[i]
            if name in ("x", "h", "f4"):
                extra[name] = Fraction(e)
            else:
                rest.append(name)
        if rest:
            raise ValueError(f"cannot invert the polynomial factor {body}")
        inv = RadPrefactor.of(**extra) * pref
        return ScaledScalar({inv.inverse(): Poly.const(1 / c)})

    def __truediv__(self, other: object) -> ScaledScalar:
        if isinstance(other, (int, Fraction, Surd, QuadNum)):
            return self * (1 / Surd.coerce(other) if isinstance(other, (Surd, QuadNum))
                           else 1 / as_fraction(other))
        if not isinstance(other, ScaledScalar):
            if isinstance(other, Poly):
                other = ScaledScalar.coerce(other)
            else:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> ScaledScalar:
        return ScaledScalar.coerce(other) * self.inverse()

    def __pow__(self, exponent: object) -> ScaledScalar:
        r = as_fraction(exponent)
        if r.denominator == 1:
            n = r.numerator
            if n < 0:
                return self.inverse() ** (-n)
            result, base = ScaledScalar.coerce(1), self
            while n:
                if n & 1:
                    result = result * base
                base = base * base
                n >>= 1
            return result
        # fractional power: only of a positive constant times generator monomials
        inv = self.inverse()  # validates the monomial shape
        pref = inv.pref.inverse()
        c = 1 / inv.body.constant_value()
        value = Surd.coerce(c) ** r
        return ScaledScalar({pref ** r: Poly.const(value)})

    def scale_pref(self, pref: RadPrefactor) -> ScaledScalar:
        return ScaledScalar({p * pref: b for p, b in self._terms.items()})

    # normal forms -------------------------------------------------------------------
    def compact(self) -> ScaledScalar:
        """Canonical form over the abbreviation symbols, keeping ``t`` formal."""
        return ScaledScalar(_canonical(self._terms.items(), _COMPACT_GENS))

    def expand(self) -> ScaledScalar:
        if self._expanded is None:
            subs = dict(DERIVED)
            staged = []
            for pref, body in self._terms.items():
                exps = dict(zip(GENERATORS, pref.exponents()))
                exps["h"] -= exps.pop("t") / 3
                staged.append((RadPrefactor(**exps), body.subs(subs)))
            result = ScaledScalar(_canonical(staged, _EXPAND_GENS))
            result._expanded = result
            self._expanded = result
        return self._expanded

    def reduce_power(self, name: str, rule: Poly) -> ScaledScalar:
        return ScaledScalar({p: b.reduce_power(name, rule) for p, b in self._terms.items()})

    def subs(self, mapping: Mapping[str, object]) -> ScaledScalar:
        """Substitute body symbols only; prefactors are untouched."""
        return ScaledScalar({p: b.subs(mapping) for p, b in self._terms.items()})

    def map_bodies(self, fn) -> ScaledScalar:
        return ScaledScalar({p: fn(b) for p, b in self._terms.items()})

    # comparison -------------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Surd, QuadNum, Poly)):
            other = ScaledScalar.coerce(other)
        if not isinstance(other, ScaledScalar):
            return NotImplemented
        if self._terms == other._terms:
            return True
        return (self - other).expand()._is_structurally_zero()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.expand()._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        from .text import render_scalar

        return f"ScaledScalar({render_scalar(self)!r})"

    def __str__(self) -> str:
        from .text import render_scalar

        return render_scalar(self)

    def evaluate_float(self, values: Mapping[str, object]) -> object:
        vals = dict(values)
        f = [vals[f"f{i}"] for i in range(5)]
        if "x" not in vals:
            vals["x"] = f[2] ** 2 - f[1] * f[3]
            vals["y"] = f[1] ** 2 - f[0] * f[2]
            vals["z"] = f[1] * f[2] - f[0] * f[3]
            vals["h"] = vals["x"] * vals["y"] - vals["z"] ** 2
        gen = {"t": vals["h"] ** (-1 / 3), "x": vals["x"], "h": vals["h"], "f4": vals["f4"]}
        total = 0.0
        for pref, body in self._terms.items():
            term = body.evaluate_float(vals)
            for g, e in zip(GENERATORS, pref.exponents()):
                if e:
                    term = term * gen[g] ** float(e)
            total = total + term
        return total


def scaled_equal(a: object, b: object) -> bool:
    return ScaledScalar.coerce(a) == ScaledScalar.coerce(b)


# ---------------------------------------------------------------------------
# specialisation of the f-symbols

NumberLike = Union[int, Fraction, QuadNum, Surd]
CIRCLE_RULE = 1 - Poly.var("f0") ** 2  # f1^2 -> 1 - f0^2


class SpecializationError(ValueError):
    pass


@dataclass(frozen=True)
class Specialization:
    """Ring map sending f0..f4 (and optionally other symbols) to polynomials.

    With ``relation='circle'`` results are reduced modulo f0^2 + f1^2 = 1.
    Radical generators must map either to themselves or to positive constants.
    """

    images: Mapping[str, Poly]
    relation: Optional[str] = None
    _derived: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        imgs = {k: Poly.coerce(v) for k, v in self.images.items()}
        object.__setattr__(self, "images", imgs)
        fs = {f"f{i}": imgs.get(f"f{i}", Poly.var(f"f{i}")) for i in range(5)}
        identity = all(fs[f"f{i}"] == Poly.var(f"f{i}") for i in range(4))
        derived = {}
        for name, poly in DERIVED.items():
            derived[name] = Poly.var(name) if identity else self.reduce(poly.subs(fs))
        object.__setattr__(self, "_derived", derived)

    def reduce(self, p: Poly) -> Poly:
        if self.relation == "circle":
            return p.reduce_power("f1", CIRCLE_RULE)
        if self.relation is not None:
            raise SpecializationError(f"unknown relation {self.relation!r}")
        return p

    def poly(self, p: Poly) -> Poly:
        mapping = dict(self.images)
        mapping.update(self._derived)
        return self.reduce(p.subs(mapping))

    def _generator(self, g: str) -> Optional[Surd]:
        image = self._derived.get(g) if g in ("x", "h") else self.images.get(g)
        if image is None or image == Poly.var(g):
            return None
        if not image.is_constant():
            raise SpecializationError(f"generator {g} maps to the non-constant {image}")
        return Surd.coerce(image.constant_value())

    def scalar(self, s: ScaledScalar) -> ScaledScalar:
        values = {g: self._generator(g) for g in ("x", "h", "f4")}
        out: dict[RadPrefactor, Poly] = {}
        for pref, body in s.terms.items():
            exps = dict(zip(GENERATORS, pref.exponents()))
            if values["h"] is not None:
                exps["h"] -= exps.pop("t") / 3
                exps["t"] = Fraction(0)
            factor = Surd.coerce(1)
            for g in ("x", "h", "f4"):
                if values[g] is not None and exps[g]:
                    v = values[g]
                    if v.sign() <= 0:
                        raise SpecializationError(f"generator {g} is not positive: {v}")
                    factor = factor * v ** exps[g]
                    exps[g] = Fraction(0)
            new_body = self.poly(body) * norm_coeff(factor)
            p = RadPrefactor(**exps)
            out[p] = out[p] + new_body if p in out else new_body
        return ScaledScalar(out).compact()


def numeric_value(s: ScaledScalar) -> Coeff:
    """Exact value of a scalar that carries no symbols."""
    s = s.compact()
    if s.symbols():
        raise ValueError(f"{s} is not numeric")
    return s.constant_value() if not s._is_structurally_zero() else Fraction(0)
