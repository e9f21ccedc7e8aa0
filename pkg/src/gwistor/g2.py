"""Invariant 3-forms, the variation sigma, its metric, frames and Hodge star."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exterior import (
    DIM,
    Form,
    Vector,
    interior,
    named,
    parse_form,
    sort_sign,
    substitute_coframe,
    wedge,
)
from .scalars import Poly, QuadNum, ScaledScalar, Specialization, Surd
from .scalars.numbers import as_fraction
from .scalars.text import parse_number

STRUCTURE_FORMS = ("alpha", "alpha1", "alpha2", "alpha3", "theta_dtheta")
F_NAMES = ("f0", "f1", "f2", "f3", "f4")


class Unstable(ValueError):
    """Raised when numeric coefficients do not define a G2-structure."""

    def __init__(self, witness: "Stability"):
        super().__init__(
            f"unstable coefficients: f4={witness.f4}, x={witness.x}, h={witness.h}"
        )
        self.witness = witness


class MixedCoefficients(TypeError):
    pass


def _normalize(value: object):
    if isinstance(value, Poly):
        return value
    if isinstance(value, QuadNum):
        value = value.to_surd()
    if isinstance(value, Surd):
        return value.to_fraction() if value.is_rational() else value
    if isinstance(value, str):
        return parse_number(value)
    return as_fraction(value)


@dataclass(frozen=True)
class Coeffs:
    """The five coefficients of sigma: all symbolic polynomials or all exact numbers."""

    f: tuple
    relation: Optional[str] = None

    def __post_init__(self) -> None:
        if len(self.f) != 5:
            raise ValueError("sigma has five coefficients f0..f4")
        vals = tuple(_normalize(v) for v in self.f)
        kinds = {isinstance(v, Poly) for v in vals}
        if len(kinds) > 1:
            raise MixedCoefficients("mix of symbolic and numeric coefficients")
        object.__setattr__(self, "f", vals)

    # constructors ---------------------------------------------------------
    @classmethod
    def symbolic(cls) -> Coeffs:
        return cls(tuple(Poly.var(n) for n in F_NAMES))

    @classmethod
    def of(cls, *values: object) -> Coeffs:
        return cls(tuple(values))

    @classmethod
    def parse(cls, text: str) -> Coeffs:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise ValueError("expected five comma-separated coefficients")
        return cls(tuple(parse_number(p) for p in parts))

    @classmethod
    def sasaki_circle(cls, f4: object = 1) -> Coeffs:
        """The family (-f0, -f1, f0, f1, f4) reduced modulo f0^2 + f1^2 = 1."""
        f0, f1 = Poly.var("f0"), Poly.var("f1")
        f4p = f4 if isinstance(f4, Poly) else Poly.const(_normalize(f4))
        return cls((-f0, -f1, f0, f1, f4p), relation="circle")

    @classmethod
    def sigma0(cls) -> Coeffs:
        return cls.of(-1, 0, 1, 0, 1)

    # queries ----------------------------------------------------------------------
    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.f[0], Poly)

    @property
    def is_generic(self) -> bool:
        return self == Coeffs.symbolic()

    @property
    def spec(self) -> Specialization:
        return _specialization(self)

    def scalars(self) -> tuple[ScaledScalar, ...]:
        return tuple(ScaledScalar.coerce(Poly.coerce(v)) for v in self.f)

    def scaled(self, s: object) -> Coeffs:
        s = _normalize(s)
        return Coeffs(tuple(v * s for v in self.f), self.relation)

    def render(self) -> list[str]:
        return [str(v) for v in self.f]


@functools.lru_cache(maxsize=256)
def _specialization(c: Coeffs) -> Specialization:
    images = {n: Poly.coerce(v) for n, v in zip(F_NAMES, c.f)}
    return Specialization(images, c.relation)


def invariant_form(name: str) -> Form:
    if name == "theta_dtheta":
        return wedge(named("theta"), named("dtheta"))
    return named(name)


def build_sigma(c: Coeffs) -> Form:
    forms = [named("alpha"), named("alpha1"), named("alpha2"), named("alpha3"),
             wedge(named("theta"), named("dtheta"))]
    out = Form(3)
    for coeff, form in zip(c.scalars(), forms):
        out = out + form * coeff
    return out


def specialize_form(a: Form, c: Coeffs) -> Form:
    spec = c.spec
    return Form(a.degree, {idx: spec.scalar(v) for idx, v in a.terms.items()}).simplify()


def pairing_matrix(c: Coeffs) -> list[list[ScaledScalar]]:
    """Coefficient of VolG in (e_i _| sigma) ^ (e_j _| sigma) ^ sigma."""
    sigma = build_sigma(c)
    top = tuple(range(DIM))
    contractions = [interior(Vector.frame(i), sigma) for i in range(DIM)]
    out = [[ScaledScalar() for _ in range(DIM)] for _ in range(DIM)]
    for i in range(DIM):
        for j in range(i, DIM):
            value = wedge(wedge(contractions[i], contractions[j]), sigma)[top]
            value = value.map_bodies(c.spec.reduce) if c.relation else value
            out[i][j] = out[j][i] = value
    return out


def block_matrix() -> list[list[ScaledScalar]]:
    """Symmetric block matrix with diagonal f4^2, x,x,x, y,y,y and off-diagonal z."""
    M = [[ScaledScalar() for _ in range(DIM)] for _ in range(DIM)]
    M[0][0] = ScaledScalar.coerce(Poly.var("f4") ** 2)
    for i in range(1, 4):
        M[i][i] = ScaledScalar.coerce(Poly.var("x"))
        M[i + 3][i + 3] = ScaledScalar.coerce(Poly.var("y"))
        M[i][i + 3] = M[i + 3][i] = ScaledScalar.coerce(Poly.var("z"))
    return M


@dataclass(frozen=True)
class Stability:
    stable: bool
    f4: object
    x: object
    h: object

    def as_dict(self) -> dict:
        return {"stable": self.stable, "f4": str(self.f4), "x": str(self.x), "h": str(self.h)}


def _sign(v) -> int:
    if isinstance(v, Fraction):
        return (v > 0) - (v < 0)
    return Surd.coerce(v).sign()


def is_stable(c: Coeffs) -> Stability:
    if c.is_symbolic:
        raise TypeError("stability is only decided for numeric coefficients")
    f0, f1, f2, f3, f4 = c.f
    x = f2 * f2 - f1 * f3
    # the quartic h written out term by term
    h = 3 * f0 * f1 * f2 * f3 - f0 * f2 ** 3 - f0 ** 2 * f3 ** 2 - f3 * f1 ** 3
    x, h = _normalize(x), _normalize(h)
    stable = _sign(f4) > 0 and _sign(x) > 0 and _sign(h) > 0
    return Stability(stable, f4, x, h)


def require_stable(c: Coeffs) -> None:
    if not c.is_symbolic:
        st = is_stable(c)
        if not st.stable:
            raise Unstable(st)


@dataclass(frozen=True)
class MetricData:
    G: tuple
    m: ScaledScalar
    t: ScaledScalar
    x: ScaledScalar
    y: ScaledScalar
    z: ScaledScalar
    h: ScaledScalar


def _sym(name: str) -> ScaledScalar:
    return ScaledScalar.coerce(Poly.var(name))


T = ScaledScalar.make(1, t=1)
M_CLOSED = ScaledScalar.make(Poly.var("f4"), h=Fraction(1, 3))


def metric_data(c: Coeffs) -> MetricData:
    require_stable(c)
    spec = c.spec
    M = block_matrix()
    G = tuple(tuple(spec.scalar(T * e) for e in row) for row in M)
    return MetricData(
        G=G,
        m=spec.scalar(M_CLOSED),
        t=spec.scalar(T),
        x=spec.scalar(_sym("x")),
        y=spec.scalar(_sym("y")),
        z=spec.scalar(_sym("z")),
        h=spec.scalar(_sym("h")),
    )


@dataclass(frozen=True)
class Frame:
    tilde_coframe: tuple[Form, ...]
    inverse: tuple[Form, ...]


def _one_form(entries: dict[int, ScaledScalar]) -> Form:
    return Form(1, {(i,): v for i, v in entries.items()})


@functools.lru_cache(maxsize=None)
def _generic_frame() -> Frame:
    half = Fraction(1, 2)
    z = Poly.var("z")
    f4 = Poly.var("f4")
    tilde = [_one_form({0: ScaledScalar.make(f4, t=half)})]
    inverse = [_one_form({0: ScaledScalar.make(1, t=-half, f4=-1)})]
    for i in (1, 2, 3):
        tilde.append(_one_form({
            i: ScaledScalar.make(1, t=half, x=half),
            i + 3: ScaledScalar.make(z, t=half, x=-half),
        }))
        inverse.append(_one_form({
            i: ScaledScalar.make(1, t=-half, x=-half),
            i + 3: ScaledScalar.make(-z, t=-half, x=-half, h=-half),
        }))
    for i in (1, 2, 3):
        tilde.append(_one_form({i + 3: ScaledScalar.make(1, t=half, h=half, x=-half)}))
        inverse.append(_one_form({i + 3: ScaledScalar.make(1, t=-half, h=-half, x=half)}))
    return Frame(tuple(tilde), tuple(inverse))


def frames(c: Coeffs) -> Frame:
    require_stable(c)
    generic = _generic_frame()
    if c.is_generic:
        return generic
    return Frame(tuple(specialize_form(f, c) for f in generic.tilde_coframe),
                 tuple(specialize_form(f, c) for f in generic.inverse))


def flat_star_basis(idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    comp = tuple(i for i in range(DIM) if i not in idx)
    sign, _ = sort_sign(idx + comp)
    return sign, comp


def flat_star(a: Form) -> Form:
    """Hodge star of the Euclidean metric with orientation e^0123456."""
    out = {}
    for idx, c in a.terms.items():
        sign, comp = flat_star_basis(idx)
        out[comp] = c if sign > 0 else -c
    return Form(DIM - a.degree, out)


@functools.lru_cache(maxsize=None)
def _generic_star_basis(idx: tuple[int, ...]) -> Form:
    frame = _generic_frame()
    in_tilde = substitute_coframe(Form(len(idx), {idx: 1}), frame.inverse)
    starred = flat_star(in_tilde)
    return substitute_coframe(starred, frame.tilde_coframe).simplify()


@functools.lru_cache(maxsize=4096)
def star_basis(idx: tuple[int, ...], c: Coeffs) -> Form:
    generic = _generic_star_basis(idx)
    if c.is_generic:
        return generic
    return specialize_form(generic, c)


def hodge_oracle(a: Form, c: Coeffs) -> Form:
    """Hodge dual via the tilde frame: pull back, flat star, push forward."""
    require_stable(c)
    out = Form(DIM - a.degree)
    for idx, coeff in a.terms.items():
        out = out + star_basis(idx, c) * coeff
    return out.simplify()


# Gram-determinant route ---------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _generic_inverse_metric() -> tuple[tuple[ScaledScalar, ...], ...]:
    # inverse of t*M: the 2x2 blocks [[x, z], [z, y]] invert to [[y, -z], [-z, x]]/h
    inv = [[ScaledScalar() for _ in range(DIM)] for _ in range(DIM)]
    inv[0][0] = ScaledScalar.make(1, t=-1, f4=-2)
    for i in range(1, 4):
        inv[i][i] = ScaledScalar.make(Poly.var("y"), t=-1, h=-1)
        inv[i + 3][i + 3] = ScaledScalar.make(Poly.var("x"), t=-1, h=-1)
        inv[i][i + 3] = inv[i + 3][i] = ScaledScalar.make(-Poly.var("z"), t=-1, h=-1)
    return tuple(tuple(row) for row in inv)


def inverse_metric(c: Coeffs) -> tuple[tuple[ScaledScalar, ...], ...]:
    generic = _generic_inverse_metric()
    if c.is_generic:
        return generic
    spec = c.spec
    return tuple(tuple(spec.scalar(v) for v in row) for row in generic)


def _det(rows: Sequence[Sequence[ScaledScalar]]) -> ScaledScalar:
    n = len(rows)
    if n == 0:
        return ScaledScalar.coerce(1)
    total = ScaledScalar()
    for j in range(n):
        if not rows[0][j].terms:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def gram(idx_a: tuple[int, ...], idx_b: tuple[int, ...], ginv) -> ScaledScalar:
    """Induced inner product of e^I and e^J: det of the inverse-metric minor."""
    rows = [[ginv[i][j] for j in idx_b] for i in idx_a]
    return _det(rows)


def inner(a: Form, b: Form, c: Coeffs) -> ScaledScalar:
    if a.degree != b.degree:
        return ScaledScalar()
    ginv = inverse_metric(c)
    total = ScaledScalar()
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            g = gram(ia, ib, ginv)
            if g.terms:
                total = total + ca * cb * g
    return total.compact()


def norm_sq(a: Form, c: Coeffs) -> ScaledScalar:
    require_stable(c)
    value = inner(a, a, c)
    if c.relation:
        value = value.map_bodies(c.spec.reduce)
    return value.compact()


def hodge_gram(a: Form, c: Coeffs) -> Form:
    """Second oracle: eta ^ *a = <eta, a> m VolG evaluated on every basis eta."""
    require_stable(c)
    m = c.spec.scalar(M_CLOSED)
    out = {}
    p = a.degree
    for idx in itertools.combinations(range(DIM), p):
        value = inner(Form(p, {idx: 1}), a, c)
        if not value.terms:
            continue
        sign, comp = flat_star_basis(idx)
        out[comp] = value * m if sign > 0 else -(value * m)
    return Form(DIM - p, out).simplify()


# closed forms -----------------------------------------------------------------------

CLOSED_FORM_TEXT = {
    "theta_dtheta": "t^(1/2)*h^(1/2)/(2*f4) * dtheta^dtheta",
    "alpha": "f4*t^(1/2)*h^(-3/2) * theta^(x^3*alpha3 + x^2*z*alpha2 + x*z^2*alpha1 + z^3*alpha)",
    "alpha1": "-f4*t^(1/2)*x^(-1)*h^(-3/2) * theta^(3*x^3*z*alpha3 + x^2*(h + 3*z^2)*alpha2"
              " + x*(2*h*z + 3*z^3)*alpha1 + (3*h*z^2 + 3*z^4)*alpha)",
    "alpha2": "f4*t^(1/2)*x^(-2)*h^(-3/2) * theta^(3*x^3*z^2*alpha3 + x^2*(2*h*z + 3*z^3)*alpha2"
              " + x*(h^2 + 4*h*z^2 + 3*z^4)*alpha1 + (3*h^2*z + 6*h*z^3 + 3*z^5)*alpha)",
    "alpha3": "-f4*t^(1/2)*x^(-3)*h^(-3/2) * theta^(x^3*z^3*alpha3 + x^2*(h*z^2 + z^4)*alpha2"
              " + x*(h^2*z + 2*h*z^3 + z^5)*alpha1 + (h^3 + 3*h^2*z^2 + 3*h*z^4 + z^6)*alpha)",
}


def hodge_closed_form(name: str, c: Optional[Coeffs] = None) -> Form:
    if name not in CLOSED_FORM_TEXT:
        raise KeyError(f"no closed form for {name!r}")
    form = parse_form(CLOSED_FORM_TEXT[name])
    if c is None or c.is_generic:
        return form
    return specialize_form(form, c)


def hodge_sigma_closed_form(c: Optional[Coeffs] = None) -> Form:
    """*sigma assembled from the closed-form duals of the five structure forms."""
    c = c or Coeffs.symbolic()
    out = Form(4)
    generic = Coeffs.symbolic()
    for coeff, name in zip(generic.scalars(), STRUCTURE_FORMS):
        out = out + hodge_closed_form(name) * coeff
    if c.is_generic:
        return out.simplify()
    return specialize_form(out, c)


__all__ = [
    "CLOSED_FORM_TEXT", "Coeffs", "Frame", "MetricData", "MixedCoefficients", "STRUCTURE_FORMS",
    "Stability", "Unstable", "build_sigma", "flat_star", "frames", "gram", "hodge_closed_form",
    "hodge_gram", "hodge_oracle", "hodge_sigma_closed_form", "inner", "inverse_metric",
    "invariant_form", "is_stable", "metric_data", "norm_sq", "block_matrix",
    "pairing_matrix", "require_stable", "specialize_form", "star_basis",
]
