"""Exterior derivative on the invariant span, curvature atoms and torsion verdicts."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exterior import DIM, Form, current_table, named, wedge
from .g2 import (
    Coeffs,
    M_CLOSED,
    build_sigma,
    hodge_oracle,
    hodge_sigma_closed_form,
    require_stable,
)
from .scalars import Poly, ScaledScalar
from .scalars.poly import NotDivisible
from .scalars.symbols import BIANCHI_DEPENDENT, riemann_name
from .scalars.text import parse_poly, parse_scalar


class IndexOutOfRange(ValueError):
    pass


class NotInInvariantSpan(ValueError):
    def __init__(self, residual: Form):
        super().__init__(f"form is not in the invariant span; residual {residual}")
        self.residual = residual


# ---------------------------------------------------------------------------
# Riemann symbols


def canonical_R(i: int, j: int, p: int, q: int) -> Poly:
    """R_ijpq as a polynomial in the canonical components."""
    for v in (i, j, p, q):
        if not 0 <= v <= 3:
            raise IndexOutOfRange(f"curvature index {v} outside 0..3")
    if i == j or p == q:
        return Poly()
    sign = 1
    if i > j:
        i, j, sign = j, i, -sign
    if p > q:
        p, q, sign = q, p, -sign
    if (i, j) > (p, q):
        i, j, p, q = p, q, i, j
    if (i, j, p, q) == BIANCHI_DEPENDENT:
        # R_0312 = R_1203 = -R_2301 - R_3102 = -R_0123 + R_0213
        value = canonical_R(0, 1, 2, 3) * -1 + canonical_R(0, 2, 1, 3)
    else:
        value = Poly.var(riemann_name(i, j, p, q))
    return value * sign


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


@dataclass(frozen=True)
class CurvatureModel:
    kind: str = "generic"  # generic | constant | flat
    k: Poly = field(default_factory=Poly)

    def __post_init__(self) -> None:
        if self.kind not in ("generic", "constant", "flat"):
            raise ValueError(f"unknown curvature model {self.kind!r}")
        object.__setattr__(self, "k", Poly.coerce(self.k))

    @classmethod
    def generic(cls) -> CurvatureModel:
        return cls("generic")

    @classmethod
    def constant(cls, k: object = None) -> CurvatureModel:
        return cls("constant", Poly.var("k") if k is None else Poly.coerce(k))

    @classmethod
    def flat(cls) -> CurvatureModel:
        return cls("flat")

    @classmethod
    def parse(cls, text: str) -> CurvatureModel:
        if text == "generic":
            return cls.generic()
        if text == "flat":
            return cls.flat()
        if text.startswith("constant:"):
            return cls.constant(parse_poly(text.split(":", 1)[1]))
        raise ValueError(f"bad curvature model {text!r}")

    def R(self, i: int, j: int, p: int, q: int) -> Poly:
        if self.kind == "generic":
            return canonical_R(i, j, p, q)
        k = self.k if self.kind == "constant" else Poly()
        return k * (_delta(i, q) * _delta(j, p) - _delta(i, p) * _delta(j, q))

    def label(self) -> str:
        return "generic" if self.kind == "generic" else (
            "flat" if self.kind == "flat" else f"constant:{self.k}")


@dataclass(frozen=True)
class CurvatureAtoms:
    Ralpha: Form
    Ralpha1: Form
    rbar: Poly
    rho: Form


def _e(*idx: int) -> Form:
    return Form(len(idx), {idx: 1})


@functools.lru_cache(maxsize=64)
def atoms(model: CurvatureModel) -> CurvatureAtoms:
    """Curvature 4-forms, scalar curvature of the fibre point and the Ricci 1-form."""
    ra = Form(4)
    ra1 = Form(4)
    for i, j in itertools.combinations(range(4), 2):
        r1, r2, r3 = model.R(i, j, 0, 1), model.R(i, j, 0, 2), model.R(i, j, 0, 3)
        ra = ra + _e(i, j, 5, 6) * r1 + _e(i, j, 6, 4) * r2 + _e(i, j, 4, 5) * r3
        ra1 = (ra1 + (_e(i, j, 2, 6) + _e(i, j, 5, 3)) * r1
               + (_e(i, j, 6, 1) + _e(i, j, 3, 4)) * r2
               + (_e(i, j, 1, 5) + _e(i, j, 4, 2)) * r3)
    # Ricci contraction r(e_a, e_b) = sum_j R_{a j j b}
    rbar = sum((model.R(0, j, j, 0) for j in range(4)), Poly())
    rho = Form(1)
    for i in (1, 2, 3):
        ric = sum((model.R(i, j, j, 0) for j in range(4)), Poly())
        rho = rho + _e(i + 3) * ric
    return CurvatureAtoms(ra, ra1, rbar, rho)


# ---------------------------------------------------------------------------
# invariant span and the derivative table

ATOM_NAMES = ("Ralpha", "Ralpha1", "theta^Ralpha", "theta^Ralpha1")

# word = (theta factor present, base)
Word = tuple[bool, str]
_BASES = ("1", "dtheta", "dtheta2", "dtheta3", "alpha", "alpha1", "alpha2", "alpha3")
_BASE_DEGREE = {"1": 0, "dtheta": 2, "dtheta2": 4, "dtheta3": 6,
                "alpha": 3, "alpha1": 3, "alpha2": 3, "alpha3": 3}


def word_name(w: Word) -> str:
    theta, base = w
    if not theta:
        return base
    return "theta" if base == "1" else f"theta^{base}"


def base_form(base: str) -> Form:
    if base == "1":
        return Form.scalar(1)
    if base.startswith("dtheta"):
        n = int(base[6:] or 1)
        out = named("dtheta")
        for _ in range(n - 1):
            out = wedge(out, named("dtheta"))
        return out
    return named(base)


def word_form(w: Word) -> Form:
    theta, base = w
    f = base_form(base)
    return wedge(named("theta"), f) if theta else f


def _all_words(degree: int) -> list[Word]:
    out = []
    for base in _BASES:
        for theta in (False, True):
            if _BASE_DEGREE[base] + theta == degree:
                out.append((theta, base))
    return out


def _rational_vector(f: Form, keys: list[tuple[int, ...]]) -> list[Fraction]:
    out = []
    for k in keys:
        c = f[k]
        out.append(c.constant_value() if c.terms else Fraction(0))
    return out


def _rank(rows: list[list[Fraction]]) -> int:
    m = [r[:] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class InvariantBasis:
    degree: int
    words: tuple[Word, ...]
    forms: tuple[Form, ...]
    keys: tuple[tuple[int, ...], ...]
    projector: tuple[tuple[Fraction, ...], ...]  # rows: words, cols: keys


_BASIS_CACHE: dict = {}


def invariant_basis(degree: int) -> InvariantBasis:
    """Independent invariant words of a degree, with an exact left inverse."""
    key = (current_table(), degree)
    if key in _BASIS_CACHE:
        return _BASIS_CACHE[key]
    keys = list(itertools.combinations(range(DIM), degree))
    chosen: list[Word] = []
    vectors: list[list[Fraction]] = []
    for w in _all_words(degree):
        vec = _rational_vector(word_form(w), keys)
        if not any(vec):
            continue
        if _rank(vectors + [vec]) > len(vectors):
            chosen.append(w)
            vectors.append(vec)
    if vectors:
        gram = [[sum(a * b for a, b in zip(u, v)) for v in vectors] for u in vectors]
        ginv = _invert(gram)
        proj = [[sum(ginv[i][j] * vectors[j][c] for j in range(len(vectors)))
                 for c in range(len(keys))] for i in range(len(vectors))]
    else:
        proj = []
    basis = InvariantBasis(degree, tuple(chosen), tuple(word_form(w) for w in chosen),
                           tuple(keys), tuple(tuple(r) for r in proj))
    _BASIS_CACHE[key] = basis
    return basis


def decompose(a: Form) -> dict[Word, ScaledScalar]:
    """Coefficients of ``a`` on the invariant words; raises NotInInvariantSpan."""
    basis = invariant_basis(a.degree)
    coeffs: dict[Word, ScaledScalar] = {}
    index = {k: n for n, k in enumerate(basis.keys)}
    for w, row in zip(basis.words, basis.projector):
        total = ScaledScalar()
        for idx, c in a.terms.items():
            r = row[index[idx]]
            if r:
                total = total + c * r
        total = total.compact()
        if total.terms:
            coeffs[w] = total
    rebuilt = Form(a.degree)
    for w, c in coeffs.items():
        rebuilt = rebuilt + word_form(w) * c
    residual = (a - rebuilt).simplify()
    if not residual.is_zero():
        raise NotInInvariantSpan(residual)
    return coeffs


@dataclass
class _DTerm:
    inv: Form
    atoms: dict[str, ScaledScalar]


def _d_base(base: str, model: CurvatureModel) -> _DTerm:
    theta = named("theta")
    degree = _BASE_DEGREE[base] + 1
    if base == "1" or base.startswith("dtheta"):
        return _DTerm(Form(degree), {})
    one = ScaledScalar.coerce(1)
    if base == "alpha":
        return _DTerm(Form(4), {"Ralpha": one})
    if base == "alpha1":
        return _DTerm(wedge(theta, named("alpha")) * 3, {"Ralpha1": one})
    if base == "alpha2":
        rbar = atoms(model).rbar
        return _DTerm(wedge(theta, named("alpha1")) * 2 - named("vol") * rbar, {})
    if base == "alpha3":
        return _DTerm(wedge(theta, named("alpha2")), {})
    raise KeyError(base)


def _d_word(w: Word, model: CurvatureModel) -> _DTerm:
    theta, base = w
    inner = _d_base(base, model)
    if not theta:
        return inner
    # d(theta ^ B) = dtheta ^ B - theta ^ dB
    inv = wedge(named("dtheta"), base_form(base)) - wedge(named("theta"), inner.inv)
    at = {f"theta^{k}": -v for k, v in inner.atoms.items()}
    return _DTerm(inv, at)


def atom_form(name: str, model: CurvatureModel) -> Form:
    at = atoms(model)
    base = at.Ralpha if name.endswith("Ralpha") else at.Ralpha1
    return wedge(named("theta"), base) if name.startswith("theta^") else base


@dataclass(frozen=True)
class DerivativeResult:
    form: Form
    invariant_part: Form
    curvature: dict
    model: CurvatureModel

    def reassemble(self) -> Form:
        out = self.invariant_part
        for name, c in self.curvature.items():
            out = out + atom_form(name, self.model) * c
        return out


def d(a: Form, model: CurvatureModel | None = None) -> DerivativeResult:
    model = model or CurvatureModel.generic()
    if a.degree >= DIM:
        return DerivativeResult(Form(DIM), Form(DIM), {}, model)
    coeffs = decompose(a)
    inv = Form(a.degree + 1)
    curv: dict[str, ScaledScalar] = {}
    for w, c in coeffs.items():
        term = _d_word(w, model)
        inv = inv + term.inv * c
        for name, v in term.atoms.items():
            curv[name] = curv[name] + v * c if name in curv else v * c
    inv = inv.simplify()
    curv = {k: v.compact() for k, v in curv.items() if not v.is_zero()}
    result = DerivativeResult(inv, inv, curv, model)
    full = result.reassemble().simplify()
    return DerivativeResult(full, inv, curv, model)


# ---------------------------------------------------------------------------
# cocalibration

COCAL_PREFACTOR = parse_scalar("f4*t^(1/2)*x^(-3)*h^(-3/2)")

P1_TEXT = "-f0*x^3*z^2 + f1*x^2*(2*h*z + 3*z^3) - f2*x*(h^2 + 4*h*z^2 + 3*z^4)" \
          " + f3*(h^2*z + 2*h*z^3 + z^5)"
P2_TEXT = "f0*x^3*z^3 - f1*x^2*(3*h*z^2 + 3*z^4) + f2*x*(3*h^2*z + 6*h*z^3 + 3*z^5)" \
          " - f3*(h^3 + 3*h^2*z^2 + 3*h*z^4 + z^6)"
P21_TEXT = "-f1*x^2*z^2 + 2*f2*x*h*z + 2*f2*z^3*x - f3*h^2 - 2*f3*h*z^2 - f3*z^4"
P1T_TEXT = "-f0*(f1^2 - f0*f2)*(-f2^2 + f1*f3)^2"
P2T_TEXT = ("(f2^2 - f1*f3)^3*(-2*f0*f1^3*f2^3 + 3*f0^2*f1*f2^4 - f1^6*f3 + 6*f0*f1^4*f2*f3"
            " - 6*f0^2*f1^2*f2^2*f3 - 2*f0^3*f2^3*f3 - 3*f0^2*f1^3*f3^2"
            " + 6*f0^3*f1*f2*f3^2 - f0^4*f3^3)")
P21T_TEXT = "(f1^3 - 2*f0*f1*f2 + f0^2*f3)*(f2^2 - f1*f3)^3"


@dataclass(frozen=True)
class Cocalibration:
    p1: Poly
    p2: Poly
    prefactor: ScaledScalar
    derivative: DerivativeResult


def _coefficient_poly(value: ScaledScalar) -> Poly:
    value = value.compact()
    if not value.terms:
        return Poly()
    if not value.is_polynomial():
        raise ValueError(f"expected a polynomial coefficient, got {value}")
    return value.as_poly()


def split_cocalibration(dres: DerivativeResult,
                        c: Coeffs | None = None) -> tuple[ScaledScalar, ScaledScalar]:
    """(p1, p2) from d*sigma = pref * theta ^ (x p1 Ralpha1 - p2 Ralpha)."""
    zero = ScaledScalar()
    a = dres.curvature.get("theta^Ralpha", zero)
    b = dres.curvature.get("theta^Ralpha1", zero)
    spec = (c or Coeffs.symbolic()).spec
    inv_pref = spec.scalar(COCAL_PREFACTOR).inverse()
    x_inv = spec.scalar(ScaledScalar.make(1, x=-1))
    return (b * inv_pref * x_inv).compact(), (-(a * inv_pref)).compact()


def cocalibration_conditions(c: Coeffs | None = None) -> Cocalibration:
    c = c or Coeffs.symbolic()
    star = hodge_sigma_closed_form(c)
    dres = d(star, CurvatureModel.generic())
    if not dres.invariant_part.is_zero():
        raise ArithmeticError("d*sigma has a curvature-free part")
    p1, p2 = split_cocalibration(dres, c)
    return Cocalibration(_coefficient_poly(p1), _coefficient_poly(p2),
                         c.spec.scalar(COCAL_PREFACTOR), dres)


def expand_poly(p: Poly) -> Poly:
    return ScaledScalar.coerce(p).expand().as_poly()


def divide_by_h(p: Poly) -> Optional[Poly]:
    try:
        return expand_poly(p).exact_divide(expand_poly(Poly.var("h")))
    except NotDivisible:
        return None


# ---------------------------------------------------------------------------
# torsion report


@dataclass
class TorsionReport:
    stable: bool
    calibrated: bool
    cocalibrated: Optional[bool]
    cocalibration_condition: Optional[str]
    p1: Optional[str]
    p2: Optional[str]
    w3_scalar: str
    pure_w3: Optional[bool]
    nearly_parallel_c: Optional[str]
    d_sigma: Form
    d_star_sigma: Form
    residuals: dict

    def as_dict(self) -> dict:
        from .exterior import form_to_json

        return {
            "stable": self.stable,
            "calibrated": self.calibrated,
            "cocalibrated": self.cocalibrated,
            "cocalibration_condition": self.cocalibration_condition,
            "p1": self.p1,
            "p2": self.p2,
            "w3_scalar": self.w3_scalar,
            "pure_w3": self.pure_w3,
            "nearly_parallel_c": self.nearly_parallel_c,
            "d_sigma": form_to_json(self.d_sigma),
            "d_star_sigma": form_to_json(self.d_star_sigma),
            "residuals": {k: form_to_json(v) for k, v in sorted(self.residuals.items())},
        }


def _is_definitely_zero(s: ScaledScalar) -> bool:
    return s.is_zero()


def nearly_parallel_constant(ds: Form, star: Form) -> tuple[Optional[ScaledScalar], Form]:
    """Solve d sigma = c * sigma for a scalar c; returns (c or None, residual)."""
    for idx, coeff in star.items():
        try:
            c = (ds[idx] * coeff.inverse()).compact()
        except (ValueError, ZeroDivisionError):
            continue
        residual = (ds - star * c).simplify()
        if residual.is_zero():
            return c, residual
        return None, residual
    return None, ds


def torsion_report(c: Coeffs, model: CurvatureModel | None = None) -> TorsionReport:
    model = model or CurvatureModel.generic()
    require_stable(c)
    sigma = build_sigma(c)
    dsig = d(sigma, model)
    star = hodge_oracle(sigma, c)
    dstar = d(star, model)
    zero = ScaledScalar()
    residuals: dict[str, Form] = {}

    a = dstar.curvature.get("theta^Ralpha", zero)
    b = dstar.curvature.get("theta^Ralpha1", zero)
    free_ok = dstar.invariant_part.is_zero()
    if model.kind == "generic":
        if not free_ok:
            cocal, cond = False, None
        elif not a.is_zero():
            cocal, cond = None, "constant_sectional_curvature"
        elif not b.is_zero():
            cocal, cond = None, "einstein"
        else:
            cocal, cond = True, None
    else:
        cocal, cond = dstar.form.is_zero(), None
    if cocal is not True:
        residuals["d_star_sigma"] = dstar.form

    spec = c.spec
    pref = spec.scalar(COCAL_PREFACTOR)
    try:
        x_inv = spec.scalar(ScaledScalar.make(1, x=-1))
        p1 = (b * pref.inverse() * x_inv).compact()
        p2 = (-(a * pref.inverse())).compact()
        p1_text, p2_text = str(p1), str(p2)
    except (ValueError, ZeroDivisionError):
        p1_text = p2_text = None

    top = tuple(range(DIM))
    vol_coeff = wedge(dsig.form, sigma)[top]
    lam = (vol_coeff * spec.scalar(M_CLOSED).inverse() * Fraction(1, 7)).compact()
    if c.relation:
        lam = lam.map_bodies(spec.reduce).compact()
    lam_zero = lam.is_zero()
    pure = (cocal and lam_zero) if cocal is not None else (None if lam_zero else False)

    npc, np_res = nearly_parallel_constant(dsig.form, star)
    if npc is None:
        residuals["nearly_parallel"] = np_res
    return TorsionReport(
        stable=True,
        calibrated=dsig.form.is_zero(),
        cocalibrated=cocal,
        cocalibration_condition=cond,
        p1=p1_text,
        p2=p2_text,
        w3_scalar=str(lam),
        pure_w3=pure,
        nearly_parallel_c=None if npc is None else str(npc),
        d_sigma=dsig.form,
        d_star_sigma=dstar.form,
        residuals=residuals,
    )


__all__ = [
    "ATOM_NAMES", "Cocalibration", "CurvatureAtoms", "CurvatureModel", "DerivativeResult",
    "IndexOutOfRange", "NotInInvariantSpan", "P1T_TEXT", "P1_TEXT", "P21T_TEXT", "P21_TEXT",
    "P2T_TEXT", "P2_TEXT", "TorsionReport", "atom_form", "atoms", "canonical_R",
    "cocalibration_conditions", "d", "decompose", "divide_by_h", "expand_poly",
    "invariant_basis", "nearly_parallel_constant", "split_cocalibration", "torsion_report",
    "word_name",
]
