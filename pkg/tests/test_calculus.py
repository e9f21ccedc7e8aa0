from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gwistor.calculus import (
    CurvatureModel,
    IndexOutOfRange,
    NotInInvariantSpan,
    atoms,
    canonical_R,
    cocalibration_conditions,
    d,
    decompose,
    torsion_report,
)
from gwistor.exterior import named, parse_form, wedge
from gwistor.g2 import Coeffs
from gwistor.scalars import P, Poly

idx = st.integers(0, 3)
words = st.sampled_from(["alpha", "alpha1", "alpha2", "alpha3", "theta^dtheta", "dtheta",
                         "theta^alpha", "theta^alpha1", "dtheta^dtheta", "theta"])


def test_canonical_R_symmetries():
    assert canonical_R(1, 0, 2, 3) == -canonical_R(0, 1, 2, 3)
    assert canonical_R(2, 3, 0, 1) == canonical_R(0, 1, 2, 3)
    assert canonical_R(1, 2, 0, 3) == P("R0213") - P("R0123")
    assert canonical_R(0, 0, 1, 2) == Poly()
    with pytest.raises(IndexOutOfRange):
        canonical_R(0, 4, 1, 2)


@given(idx, idx, idx, idx)
def test_first_bianchi(i, j, p, q):
    total = canonical_R(i, j, p, q) + canonical_R(i, p, q, j) + canonical_R(i, q, j, p)
    assert total == Poly()


@given(idx, idx, idx, idx)
def test_pair_symmetry(i, j, p, q):
    assert canonical_R(i, j, p, q) == canonical_R(p, q, i, j)


def test_constant_curvature_atoms():
    a = atoms(CurvatureModel.constant())
    assert a.Ralpha == parse_form("-k*theta^alpha1")
    assert a.Ralpha1 == parse_form("-2*k*theta^alpha2")
    assert a.rbar == P("k") * 3


@given(words, st.sampled_from(["flat", "constant:k", "constant:-2"]))
def test_d_squared_vanishes(w, model_text):
    model = CurvatureModel.parse(model_text)
    first = d(parse_form(w), model).form
    assert d(first, model).form.is_zero()


@given(words, words)
def test_leibniz(a_text, b_text):
    a, b = parse_form(a_text), parse_form(b_text)
    if a.degree + b.degree > 7:
        return
    model = CurvatureModel.constant()
    lhs = d(wedge(a, b), model).form
    sign = -1 if a.degree % 2 else 1
    rhs = wedge(d(a, model).form, b) + wedge(a, d(b, model).form) * sign
    assert lhs == rhs


def test_generic_curvature_leaves_the_span():
    first = d(named("alpha"), CurvatureModel.generic()).form
    with pytest.raises(NotInInvariantSpan):
        d(first, CurvatureModel.generic())


def test_reassemble():
    res = d(named("sigma0"))
    assert res.reassemble() == res.form


def test_out_of_span():
    with pytest.raises(NotInInvariantSpan):
        decompose(parse_form("e1"))
    with pytest.raises(NotInInvariantSpan):
        d(parse_form("e12"))


def test_cocalibration_polynomials_at_point():
    co = cocalibration_conditions(Coeffs.of(-1, 0, 1, 0, 1))
    assert str(co.p2) == "0"


def test_reports():
    rep = torsion_report(Coeffs.sigma0(), CurvatureModel.generic())
    assert rep.cocalibration_condition == "einstein"
    plus = Coeffs.parse("-sqrt(2)/2,-sqrt(2)/2,sqrt(2)/2,sqrt(2)/2,sqrt(3/2)")
    assert torsion_report(plus, CurvatureModel.constant(1)).nearly_parallel_c == "(sqrt(6))"
    circle = Coeffs.of(0, -1, 0, 1, 1)
    rep = torsion_report(circle, CurvatureModel.constant(-2))
    assert rep.w3_scalar == "0" and rep.pure_w3
    assert not rep.calibrated
