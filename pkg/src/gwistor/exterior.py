"""Exterior algebra on the seven-dimensional adapted coframe e^0..e^6."""

from __future__ import annotations

import contextlib
import contextvars
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .scalars import ScaledScalar
from .scalars.text import ParseError, ScalarParser, Token, UnknownAtom, render_scalar

DIM = 7
MultiIndex = tuple[int, ...]


class DegreeZero(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


def sort_sign(indices: Sequence[int]) -> tuple[int, MultiIndex]:
    """Sign of the sorting permutation and the sorted index (0 on repeats)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


def _scalar(value: object) -> ScaledScalar:
    return ScaledScalar.coerce(value)


class Form:
    """Homogeneous form with canonical increasing indices and scalar coefficients."""

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms: Mapping[MultiIndex, object] | None = None):
        if not 0 <= degree <= DIM:
            raise ValueError(f"degree {degree} out of range")
        self.degree = degree
        clean: dict[MultiIndex, ScaledScalar] = {}
        for idx, c in (terms or {}).items():
            sign, key = sort_sign(idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} in a {degree}-form")
            if not all(0 <= i < DIM for i in idx):
                raise ValueError(f"index {idx} outside 0..6")
            if not sign:
                continue
            c = _scalar(c)
            if sign < 0:
                c = -c
            if key in clean:
                c = clean[key] + c
            clean[key] = c
        self._terms = {k: v for k, v in clean.items() if v.terms}

    # constructors ------------------------------------------------------------
    @classmethod
    def basis(cls, *indices: int) -> Form:
        return cls(len(indices), {tuple(indices): 1})

    @classmethod
    def scalar(cls, value: object) -> Form:
        return cls(0, {(): value})

    @classmethod
    def zero(cls, degree: int) -> Form:
        return cls(degree)

    @classmethod
    def from_terms(cls, degree: int, terms: Iterable[tuple[object, Sequence[int]]]) -> Form:
        out = cls(degree)
        for c, idx in terms:
            out = out + cls(degree, {tuple(idx): c})
        return out

    # access -----------------------------------------------------------------------
    @property
    def terms(self) -> dict[MultiIndex, ScaledScalar]:
        return dict(self._terms)

    def items(self) -> list[tuple[MultiIndex, ScaledScalar]]:
        return sorted(self._terms.items())

    def __getitem__(self, idx: Sequence[int]) -> ScaledScalar:
        sign, key = sort_sign(idx)
        if not sign:
            return ScaledScalar()
        c = self._terms.get(key, ScaledScalar())
        return c if sign > 0 else -c

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(sorted(self._terms))

    # arithmetic ----------------------------------------------------------------------
    def _check(self, other: Form) -> None:
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add a {self.degree}-form and a {other.degree}-form")

    def __add__(self, other: object) -> Form:
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out[k] + v if k in out else v
        return Form._raw(self.degree, out)

    @classmethod
    def _raw(cls, degree: int, terms: dict[MultiIndex, ScaledScalar]) -> Form:
        f = cls.__new__(cls)
        f.degree = degree
        f._terms = {k: v for k, v in terms.items() if v.terms}
        return f

    def __neg__(self) -> Form:
        return Form._raw(self.degree, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: object) -> Form:
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: object) -> Form:
        if isinstance(scalar, Form):
            return NotImplemented
        s = _scalar(scalar) if not isinstance(scalar, (int, Fraction)) else scalar
        return Form._raw(self.degree, {k: v * s for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: object) -> Form:
        return self * (_scalar(1) / _scalar(scalar))

    def wedge(self, other: Form) -> Form:
        return wedge(self, other)

    def __xor__(self, other: Form) -> Form:
        return wedge(self, other)

    def map_coefficients(self, fn) -> Form:
        return Form._raw(self.degree, {k: fn(v) for k, v in self._terms.items()})

    def compact(self) -> Form:
        return self.map_coefficients(lambda c: c.compact())

    def simplify(self) -> Form:
        """Compact coefficients and drop those that vanish after expansion."""
        out = {}
        for k, v in self._terms.items():
            v = v.compact()
            if not v.is_zero():
                out[k] = v
        return Form._raw(self.degree, out)

    def expand(self) -> Form:
        return self.map_coefficients(lambda c: c.expand())

    # predicates ---------------------------------------------------------------------------
    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self._terms.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.degree != other.degree:
            return self.is_zero() and other.is_zero()
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.degree, frozenset((k, v) for k, v in self.expand()._terms.items()
                                            if v.terms)))

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for v in self._terms.values():
            out |= v.symbols()
        return out

    def __repr__(self) -> str:
        return f"Form({self.degree}, {render_form(self)!r})"

    def __str__(self) -> str:
        return render_form(self)


def wedge(a: Form, b: Form) -> Form:
    degree = a.degree + b.degree
    if degree > DIM:
        return Form(DIM)
    out: dict[MultiIndex, ScaledScalar] = {}
    for ia, ca in a._terms.items():
        for ib, cb in b._terms.items():
            sign, key = sort_sign(ia + ib)
            if not sign:
                continue
            prod = ca * cb
            if sign < 0:
                prod = -prod
            out[key] = out[key] + prod if key in out else prod
    return Form._raw(degree, out)


def wedge_all(*forms: Form) -> Form:
    result = Form.scalar(1)
    for f in forms:
        result = wedge(result, f)
    return result


@dataclass(frozen=True)
class Vector:
    components: tuple[ScaledScalar, ...]

    def __post_init__(self) -> None:
        comps = tuple(_scalar(c) for c in self.components)
        if len(comps) != DIM:
            raise ValueError("a vector has seven components")
        object.__setattr__(self, "components", comps)

    @classmethod
    def frame(cls, i: int) -> Vector:
        return cls(tuple(1 if j == i else 0 for j in range(DIM)))


def interior(v: Vector | int, a: Form) -> Form:
    """Contraction into the first slot: (v _| a)(w, ...) = a(v, w, ...)."""
    if a.degree == 0:
        raise DegreeZero("interior product of a 0-form")
    if isinstance(v, int):
        v = Vector.frame(v)
    out: dict[MultiIndex, ScaledScalar] = {}
    for idx, c in a._terms.items():
        for pos, i in enumerate(idx):
            comp = v.components[i]
            if not comp.terms:
                continue
            term = c * comp
            if pos % 2:
                term = -term
            key = idx[:pos] + idx[pos + 1:]
            out[key] = out[key] + term if key in out else term
    return Form._raw(a.degree - 1, out)


def substitute_coframe(a: Form, images: Sequence[Form]) -> Form:
    """Replace each e^i by the 1-form ``images[i]`` (a linear change of coframe)."""
    if len(images) != DIM or any(f.degree != 1 for f in images):
        raise ValueError("need seven 1-forms")
    cache: dict[MultiIndex, Form] = {(): Form.scalar(1)}

    def image(idx: MultiIndex) -> Form:
        if idx not in cache:
            cache[idx] = wedge(image(idx[:-1]), images[idx[-1]])
        return cache[idx]

    out = Form(a.degree)
    for idx, c in a._terms.items():
        out = out + image(idx) * c
    return out


# ---------------------------------------------------------------------------
# named invariant forms

RawTerms = tuple[tuple[int, tuple[int, ...]], ...]


@dataclass(frozen=True)
class FormTable:
    """Raw definitions of the primitive invariant forms, in the written index order."""

    theta: RawTerms = ((1, (0,)),)
    dtheta: RawTerms = ((1, (4, 1)), (1, (5, 2)), (1, (6, 3)))
    alpha: RawTerms = ((1, (4, 5, 6)),)
    alpha1: RawTerms = ((1, (1, 5, 6)), (1, (2, 6, 4)), (1, (3, 4, 5)))
    alpha2: RawTerms = ((1, (1, 2, 6)), (1, (2, 3, 4)), (1, (3, 1, 5)))
    alpha3: RawTerms = ((1, (1, 2, 3)),)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    PRIMITIVES = ("theta", "dtheta", "alpha", "alpha1", "alpha2", "alpha3")
    NAMES = PRIMITIVES + ("vol", "Vol", "VolG", "sigma0")

    def flip(self, name: str, term: int) -> FormTable:
        """Copy of the table with the sign of one raw term reversed."""
        raw = list(getattr(self, name))
        c, idx = raw[term]
        raw[term] = (-c, idx)
        return replace(self, **{name: tuple(raw)}, _cache={})

    def get(self, name: str) -> Form:
        if name == "Vol":
            name = "VolG"
        if name not in self._cache:
            self._cache[name] = self._build(name)
        return self._cache[name]

    def _build(self, name: str) -> Form:
        if name in self.PRIMITIVES:
            raw = getattr(self, name)
            return Form.from_terms(len(raw[0][1]), raw)
        if name == "vol":
            return wedge(self.get("theta"), self.get("alpha3"))
        if name == "VolG":
            return wedge(self.get("vol"), self.get("alpha"))
        if name == "sigma0":
            return (self.get("alpha2") - self.get("alpha")
                    + wedge(self.get("theta"), self.get("dtheta")))
        raise UnknownAtom(name)


DEFAULT_TABLE = FormTable()
_TABLE: contextvars.ContextVar[FormTable] = contextvars.ContextVar("form_table",
                                                                   default=DEFAULT_TABLE)


def current_table() -> FormTable:
    return _TABLE.get()


@contextlib.contextmanager
def use_table(table: FormTable):
    """Evaluate a block against a modified table (used by the mutation suite)."""
    token = _TABLE.set(table)
    try:
        yield table
    finally:
        _TABLE.reset(token)


def named(name: str) -> Form:
    return current_table().get(name)


# ---------------------------------------------------------------------------
# text grammar


class FormParser(ScalarParser):
    """Scalar grammar extended with form atoms; ``^`` between forms is the wedge."""

    def atom(self, tok: Token):
        name = tok.text
        if name in FormTable.NAMES:
            return named(name)
        if name[0] == "e" and name[1:].isdigit():
            idx = tuple(int(ch) for ch in name[1:])
            if any(i >= DIM for i in idx):
                raise ParseError(f"basis index out of range in {name!r}", tok.pos, self.text)
            return Form(len(idx), {idx: 1})
        try:
            return super().atom(tok)
        except ParseError:
            raise UnknownAtom(name) from None

    @staticmethod
    def _lift(a, b):
        if isinstance(a, Form) and not isinstance(b, Form):
            if b.terms:
                if a.degree:
                    raise DegreeMismatch("cannot add a scalar to a form of positive degree")
                b = Form.scalar(b)
            else:
                b = Form(a.degree)
        return b

    def add(self, a, b):
        if isinstance(a, Form) or isinstance(b, Form):
            if not isinstance(a, Form):
                a, b = b, a
            b = self._lift(a, b)
            try:
                return a + b
            except DegreeMismatch as exc:
                raise ParseError(str(exc), self.tok.pos, self.text) from None
        return a + b

    def mul(self, a, b):
        if isinstance(a, Form) and isinstance(b, Form):
            if a.degree and b.degree:
                raise ParseError("use '^' for the wedge product", self.tok.pos, self.text)
            return wedge(a, b)
        return a * b

    def div(self, a, b):
        if isinstance(b, Form):
            raise ValueError("division by a form")
        return a / b

    def pow(self, a, b):
        if isinstance(a, Form) and isinstance(b, Form):
            return wedge(a, b)
        if isinstance(a, Form):
            n = b.constant_value() if b.is_constant() else None
            if not isinstance(n, Fraction) or n.denominator != 1 or n < 1:
                raise ValueError("a form can only be raised to a positive integer power")
            result = a
            for _ in range(int(n) - 1):
                result = wedge(result, a)
            return result
        if isinstance(b, Form):
            raise ValueError("exponent must be a scalar")
        return super().pow(a, b)


def parse_form(text: str) -> Form:
    value = FormParser(text).parse()
    if not isinstance(value, Form):
        value = Form.scalar(value)
    return value.compact()


def _index_name(idx: MultiIndex) -> str:
    return "e" + "".join(str(i) for i in idx) if idx else ""


def _coeff_chunks(c: ScaledScalar, basis: str) -> list[tuple[str, str]]:
    text = render_scalar(c)
    if basis == "":
        return [("+", text)] if not text.startswith("-") else [("-", text[1:])]
    single = len(c.terms) == 1 and next(iter(c.terms.values())).is_monomial()
    if single:
        sign = "-" if text.startswith("-") else "+"
        mag = text[1:] if sign == "-" else text
        return [(sign, basis if mag == "1" else f"{mag}*{basis}")]
    return [("+", f"({text})*{basis}")]


def render_form(a: Form, style: str = "plain") -> str:
    if style == "json":
        return json.dumps(form_to_json(a), sort_keys=True)
    chunks: list[tuple[str, str]] = []
    for idx, c in a.items():
        chunks.extend(_coeff_chunks(c, _index_name(idx)))
    if not chunks:
        return "0"
    out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    if style == "latex":
        return _latexify(out)
    if style != "plain":
        raise ValueError(f"unknown style {style!r}")
    return out


def _latexify(text: str) -> str:
    import re

    text = re.sub(r"\^\(([^()]*)\)", r"^{\1}", text)
    text = re.sub(r"\be(\d+)\b", r"e^{\1}", text)
    text = re.sub(r"sqrt\(([^()]*)\)", r"\\sqrt{\1}", text)
    text = re.sub(r"\bR(\d{4})\b", r"R_{\1}", text)
    text = re.sub(r"\bf(\d)\b", r"f_{\1}", text)
    return text.replace("*", " ")


def form_to_json(a: Form) -> dict:
    return {
        "degree": a.degree,
        "terms": [{"index": list(idx), "coeff": render_scalar(c)} for idx, c in a.items()],
    }


def form_from_json(data: Mapping) -> Form:
    from .scalars.text import parse_scalar

    terms = {tuple(t["index"]): parse_scalar(t["coeff"]) for t in data["terms"]}
    return Form(int(data["degree"]), terms)


__all__ = [
    "DIM", "DEFAULT_TABLE", "DegreeMismatch", "DegreeZero", "Form", "FormParser",
    "FormTable", "ParseError", "UnknownAtom", "Vector", "current_table", "form_from_json",
    "form_to_json", "interior", "named", "parse_form", "render_form", "sort_sign",
    "substitute_coframe", "use_table", "wedge", "wedge_all",
]
