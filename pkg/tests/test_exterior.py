from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gwistor.exterior import (
    DegreeZero,
    Form,
    FormTable,
    current_table,
    form_from_json,
    form_to_json,
    interior,
    named,
    parse_form,
    render_form,
    sort_sign,
    use_table,
    wedge,
)
from gwistor.scalars import ParseError, parse_scalar

coeffs = st.sampled_from(["1", "-2", "1/3", "f0", "f1 - f2", "t^(1/2)*f4", "sqrt(2)/2"])


@st.composite
def forms(draw, degree=None):
    p = draw(st.integers(0, 4)) if degree is None else degree
    idxs = list(itertools.combinations(range(7), p))
    chosen = draw(st.lists(st.sampled_from(idxs), max_size=3, unique=True))
    return Form(p, {i: parse_scalar(draw(coeffs)) for i in chosen})


def test_sort_sign():
    assert sort_sign([2, 1, 0]) == (-1, (0, 1, 2))
    assert sort_sign([1, 1])[0] == 0


def test_named_forms():
    assert named("dtheta") == parse_form("e41 + e52 + e63")
    assert wedge(named("theta"), named("alpha3")) == named("vol")
    assert named("sigma0") == parse_form("alpha2 - alpha + theta^dtheta")


def test_dtheta_cubed_sign():
    assert wedge(named("dtheta"), wedge(named("dtheta"), named("dtheta"))) == \
        parse_form("6*e123456")


@given(forms(), forms(), forms())
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(forms(), forms())
def test_graded_commutative(a, b):
    sign = -1 if (a.degree * b.degree) % 2 else 1
    assert wedge(a, b) == wedge(b, a) * sign


@given(forms(1))
def test_one_form_squares_to_zero(a):
    assert wedge(a, a).is_zero()


@given(forms(2), forms(3))
def test_interior_antiderivation(a, b):
    for i in range(7):
        lhs = interior(i, wedge(a, b))
        rhs = wedge(interior(i, a), b) + wedge(a, interior(i, b))
        assert lhs == rhs


@given(forms())
def test_render_roundtrip(a):
    assert parse_form(render_form(a)) == a
    assert form_from_json(form_to_json(a)) == a


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_form("alpha +")
    with pytest.raises(KeyError):
        parse_form("beta")
    with pytest.raises(ParseError):
        parse_form("e1 * e2")
    with pytest.raises(DegreeZero):
        interior(0, Form.scalar(1))


def test_power_is_repeated_wedge():
    assert parse_form("dtheta^2") == wedge(named("dtheta"), named("dtheta"))


def test_latex():
    assert "e^{12}" in render_form(parse_form("f0*e12"), "latex") or \
        "f_{0}" in render_form(parse_form("f0*e12"), "latex")


def test_table_mutation_is_scoped():
    flipped = FormTable().flip("alpha1", 0)
    with use_table(flipped):
        assert current_table() == flipped
        assert named("alpha1") != parse_form("e156 + e264 + e345")
    assert named("alpha1") == parse_form("e156 + e264 + e345")
