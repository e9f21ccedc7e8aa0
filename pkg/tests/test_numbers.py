from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gwistor.scalars import QuadNum, Surd
from gwistor.scalars.numbers import factorize

small = st.fractions(min_value=-6, max_value=6, max_denominator=5)
quads = st.builds(QuadNum, small, small, small, small)
surds = st.builds(lambda a, b, p: Surd.coerce(a) + Surd.root(p, Fraction(1, 2)) * b,
                  small, small, st.sampled_from([2, 3, 5, 6]))


def test_sqrt_squares():
    assert QuadNum.sqrt(2) * QuadNum.sqrt(2) == QuadNum(2)
    assert QuadNum.sqrt(6) == QuadNum.sqrt(2) * QuadNum.sqrt(3)
    assert QuadNum.sqrt(Fraction(3, 2)) * 2 == QuadNum.sqrt(6)
    r = Surd.root(6, Fraction(1, 2))
    assert r * r == 6


def test_cube_roots_fold():
    c = Surd.root(5, Fraction(1, 3))
    assert c ** 3 == 5
    assert str(c) == "5^(1/3)"
    assert Surd.coerce(8) ** Fraction(1, 3) == 2
    assert Surd.coerce(Fraction(27, 8)) ** Fraction(-1, 3) == Fraction(2, 3)


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}


def test_signs_and_render():
    assert (Surd.root(2, Fraction(1, 2)) - Fraction(3, 2)).sign() == -1
    assert (Surd.root(3, Fraction(1, 2)) - Fraction(17, 10)).sign() == 1
    assert str(Surd.root(6, Fraction(1, 2)) / 2) == "sqrt(6)/2"


def test_zero_inverse():
    with pytest.raises(ZeroDivisionError):
        QuadNum(0).inverse()


@given(quads, quads, quads)
def test_quad_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(quads)
def test_quad_field_inverse(a):
    if a == QuadNum(0):
        return
    assert a * a.inverse() == QuadNum(1)


@given(quads)
def test_quad_surd_agree(a):
    assert a.to_surd().to_quadnum() == a
    assert abs(float(a) - float(a.to_surd())) < 1e-9


@given(surds, surds)
def test_surd_field(a, b):
    assert (a + b) - b == a
    if not b.is_zero():
        assert (a * b) / b == a
