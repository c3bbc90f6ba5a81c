from fractions import Fraction

import pytest
from hypothesis import given, settings

from enumgeom.algebra import FactoredRational, LaurentPolynomial, expand_in_cone, variables
from enumgeom.errors import BoundExceeded
from enumgeom.identities import (
    FIVE,
    QB_VARS,
    ext_cube,
    ext_square,
    m_characters,
    mtheory_identity_check,
    plethysm_sanity,
    qbinomial_check,
    qbinomial_difference_equation,
    qbinomial_pleth_form,
    qbinomial_product_form,
    qbinomial_specialization,
    qbinomial_sum_form,
    restrict_to_sl,
    spinor_characters,
    spinor_check,
    spinor_difference_formula,
    sym_square,
    vector_character,
)

from .oracles import qbinomial_product_tadic
from .strategies import character


def Q(text):
    return LaurentPolynomial.parse(QB_VARS, text)


def test_first_coefficient():
    expected = FactoredRational.ratio(Q("1 - m*t"), Q("1 - t"))
    for form in (qbinomial_sum_form, qbinomial_pleth_form, qbinomial_product_form):
        assert form(3)[1] == expected


def test_three_forms_agree():
    report = qbinomial_check(8)
    assert report.verdict and report.first_mismatch is None
    assert report.details == {"sum=pleth": True, "pleth=product": True, "sum=product": True}


def test_order_guard():
    with pytest.raises(BoundExceeded):
        qbinomial_check(13)


@pytest.mark.parametrize("z_order,t_order", [(4, 6)])
def test_product_form_against_tadic_oracle(z_order, t_order):
    oracle = qbinomial_product_tadic(z_order, t_order)
    s = qbinomial_sum_form(z_order)
    for n in range(z_order + 1):
        expanded = expand_in_cone(s[n], {"t": "0", "m": "0"}, t_order + z_order)
        got = {}
        for key, c in expanded.terms.items():
            te, me = (e // 2 for e in QB_VARS.unpack(key))
            if te <= t_order:
                got[(n, te, me)] = c
        want = {k: c for k, c in oracle.items() if k[0] == n}
        assert got == want


@pytest.mark.parametrize("m_value", [0, 1])
def test_specializations(m_value):
    assert qbinomial_specialization(8, m_value).verdict


def test_m_equal_one_collapses_to_geometric():
    report = qbinomial_specialization(5, 1)
    vt = variables("t")
    one = FactoredRational.one(vt)
    assert all(c.equals(one) for c in report.lhs.coeffs)


def test_difference_equation():
    assert qbinomial_difference_equation(0).verdict
    assert qbinomial_difference_equation(8, form="sum").verdict
    assert qbinomial_difference_equation(8, form="product").verdict
    assert not qbinomial_difference_equation(8, form="sum", m_power=2).verdict


def test_spinor_characters():
    sp, sm = spinor_characters()
    ones = {n: Fraction(1) for n in FIVE.names}
    assert sp.evaluate(ones) == sm.evaluate(ones) == 16
    assert sp - sm == spinor_difference_formula()
    assert sp.bar() == sm
    assert spinor_check().verdict


def test_mtheory_identity():
    report = mtheory_identity_check()
    assert report.verdict
    assert report.details["M+"] and report.details["M-"]


def test_mtheory_controls():
    assert not mtheory_identity_check(branch=-1).verdict
    assert not mtheory_identity_check(branch=-1, convention="literal").verdict
    literal = mtheory_identity_check(convention="literal")
    assert not literal.verdict


def test_mtheory_dimension_is_zero():
    mp, _ = m_characters()
    restricted = restrict_to_sl(mp)
    ones = {n: Fraction(1) for n in FIVE.names}
    assert restricted.evaluate(ones) == 0


def test_plethysm_sanity():
    assert plethysm_sanity()
    v = vector_character()
    assert sym_square(v).evaluate({n: Fraction(1) for n in FIVE.names}) == 55
    assert ext_cube(v).evaluate({n: Fraction(1) for n in FIVE.names}) == 120


@settings(max_examples=60, deadline=None)
@given(character(max_terms=5))
def test_symmetric_and_exterior_squares(v):
    assert sym_square(v) + ext_square(v) == v * v
