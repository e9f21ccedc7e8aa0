from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gwistor.scalars import NotDivisible, P, Poly, parse_poly
from gwistor.scalars.symbols import UnknownSymbol

names = st.sampled_from(["f0", "f1", "f2", "f3", "f4", "k"])
monos = st.builds(lambda c, n, e: P(n) ** e * c,
                  st.fractions(min_value=-5, max_value=5, max_denominator=4), names,
                  st.integers(0, 3))
polys = st.lists(monos, max_size=4).map(lambda ms: sum(ms, Poly()))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly()


@given(polys, polys)
def test_exact_division_roundtrip(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_divide(b) == a


@given(polys)
def test_render_parse_roundtrip(a):
    assert parse_poly(str(a)) == a


def test_not_divisible():
    with pytest.raises(NotDivisible):
        (P("f0") + 1).exact_divide(P("f1"))
    with pytest.raises(ZeroDivisionError):
        P("f0").exact_divide(Poly())


def test_subs_is_simultaneous():
    p = P("f0") * 2 + P("f1")
    assert p.subs({"f0": P("f1"), "f1": P("f0")}) == P("f1") * 2 + P("f0")


def test_evaluate_and_reduce():
    p = P("f1") ** 3 + P("f0")
    assert p.evaluate({"f0": 1, "f1": Fraction(1, 2)}) == Fraction(9, 8)
    rule = 1 - P("f0") ** 2
    assert p.reduce_power("f1", rule) == P("f1") - P("f0") ** 2 * P("f1") + P("f0")


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        P("q")


def test_rendering():
    assert str(parse_poly("f0^2*f1 - 1/2")) in ("f0^2*f1 - 1/2", "-1/2 + f0^2*f1")
