import random
from fractions import Fraction
from itertools import permutations

import pytest
import sympy

from enumgeom.algebra import FactoredRational, LaurentPolynomial, identity_holds
from enumgeom.errors import BoundExceeded, SizeLimitExceeded
from enumgeom.hilbert import (
    COHOMOLOGY,
    SURFACE,
    SURFACE_M,
    THREEFOLD,
    chi_projective_space,
    cohomological_limit_check,
    hilb_c2_closed_form,
    localization_weights,
    nekrasov_check,
    nekrasov_rhs,
    projective_dimension_expected,
    rigidity_vanish_check,
    star_closed_form,
    star_extract,
    tangent_c2_armleg,
    tangent_c2_closed,
    virtual_tangent_c3,
    z_series_c3,
    z_series_hilb_c2,
)
from enumgeom.partitions import Partition, PlanePartition, enumerate_partitions, enumerate_plane_partitions

from .oracles import projective_dimension

BOX = PlanePartition(((1,),))


def P(text, vs=THREEFOLD):
    return LaurentPolynomial.parse(vs, text)


def test_surface_tangent_examples():
    assert tangent_c2_closed(Partition((1,))).value == LaurentPolynomial.parse(SURFACE, "t1 + t2")
    assert tangent_c2_closed(Partition(())).value.is_zero()
    assert tangent_c2_armleg(Partition((1,))).value == LaurentPolynomial.parse(SURFACE, "t1 + t2")
    assert tangent_c2_closed(Partition((2,))).value == LaurentPolynomial.parse(
        SURFACE, "t1 + t2^2 + t1*t2^-1 + t2"
    )


@pytest.mark.parametrize("n", range(9))
def test_surface_tangent_routes_agree(n):
    for lam in enumerate_partitions(n):
        closed = tangent_c2_closed(lam).value
        assert closed == tangent_c2_armleg(lam).value
        assert len(closed.terms) <= 2 * n
        assert sum(closed.terms.values()) == 2 * n
        assert all(c > 0 for c in closed.terms.values())


def test_virtual_tangent_single_box():
    assert virtual_tangent_c3(BOX).value == P("t1 + t2 + t3 - t1*t2 - t1*t3 - t2*t3")
    assert virtual_tangent_c3(PlanePartition()).value.is_zero()


@pytest.mark.parametrize("n", range(5))
def test_virtual_tangent_routes_and_rank(n):
    for pi in enumerate_plane_partitions(n):
        closed = virtual_tangent_c3(pi).value
        assert closed == virtual_tangent_c3(pi, route="hilb_free").value
        assert sum(closed.terms.values()) == 0
        assert not closed.constant_term()


def test_localization_weight_single_box():
    num, den = FactoredRational.one(THREEFOLD), FactoredRational.one(THREEFOLD)
    for i, j in (("t1", "t2"), ("t1", "t3"), ("t2", "t3")):
        # the t_i t_j weights enter inverted: (w^1/2 - w^-1/2) in the numerator
        num = num * FactoredRational.from_poly(P(f"{i}^(1/2)*{j}^(1/2) - {i}^(-1/2)*{j}^(-1/2)"))
    for i in ("t1", "t2", "t3"):
        den = den * FactoredRational.from_poly(P(f"{i}^(1/2) - {i}^(-1/2)"))
    expected = (num / den).scale(-1)
    assert localization_weights(BOX).ohat == expected
    empty = localization_weights(PlanePartition())
    assert empty.ohat == FactoredRational.one(THREEFOLD)
    assert empty.ovir == FactoredRational.one(THREEFOLD)


def test_ovir_single_box():
    # product over the half tangent weights w of (1 - w/kappa) / (1 - 1/w)
    one = LaurentPolynomial.one(THREEFOLD)
    ovir = localization_weights(BOX).ovir
    k = P("t1*t2*t3")
    expected = FactoredRational.one(THREEFOLD)
    for w in (P("t1"), P("t2"), P("t3")):
        expected = expected * FactoredRational.ratio(one - w * k.bar(), one - w.bar())
    assert identity_holds([ovir], [expected])


@pytest.mark.parametrize("n", range(1, 4))
def test_weights_are_s3_equivariant(n):
    for pi in enumerate_plane_partitions(n):
        w = localization_weights(pi).ohat
        for perm in permutations(range(3)):
            moved = localization_weights(pi.permute_axes(perm)).ohat
            point = {name: Fraction(p) ** 2 for name, p in zip(THREEFOLD.names, (3, 5, 7))}
            permuted_point = {THREEFOLD.names[a]: point[THREEFOLD.names[perm[a]]] for a in range(3)}
            # moving the boxes and the coordinates together leaves the weight unchanged
            assert w.evaluate(point) == moved.evaluate(permuted_point)


def test_z_series_low_coefficients():
    s = z_series_c3(2)
    assert s[0] == FactoredRational.one(THREEFOLD)
    assert s[1] == localization_weights(BOX).ohat


def test_nekrasov_through_z3():
    v = nekrasov_check(3)
    assert v.verdict and v.first_mismatch is None
    assert nekrasov_rhs(3)[0] == FactoredRational.one(THREEFOLD)


def test_nekrasov_detects_perturbation():
    rhs = nekrasov_rhs(2)
    terms = [localization_weights(pi).ohat for pi in enumerate_plane_partitions(2)]
    assert not identity_holds(terms[:-1], [rhs[2]])


def test_order_guards():
    with pytest.raises(BoundExceeded):
        z_series_c3(7)
    with pytest.raises(BoundExceeded):
        star_extract(5)
    with pytest.raises(BoundExceeded):
        cohomological_limit_check(4)


def test_star_coefficients():
    k = star_extract(3)
    vk = k.vars
    assert k[1] == LaurentPolynomial.constant(vk, -1)
    assert k[2] == LaurentPolynomial.parse(vk, "-k^(1/2) - k^(-1/2)")
    assert k == star_closed_form(3)


@pytest.mark.parametrize("n", range(1, 5))
def test_rigidity(n):
    rng = random.Random(100 + n)
    for pi in enumerate_plane_partitions(n):
        assert rigidity_vanish_check(pi, trials=3, rng=rng)


def test_rigidity_off_locus_is_nonzero():
    rng = random.Random(7)
    assert not rigidity_vanish_check(BOX, trials=3, rng=rng, on_locus=False)
    with pytest.raises(ValueError):
        rigidity_vanish_check(PlanePartition())


def test_projective_space_examples():
    assert chi_projective_space(1, 0) == LaurentPolynomial.one(chi_projective_space(1, 0).vars)
    p21 = chi_projective_space(2, 1)
    assert len(p21.terms) == 3 and all(c == 1 for c in p21.terms.values())
    assert chi_projective_space(2, -1).is_zero()
    with pytest.raises(SizeLimitExceeded):
        chi_projective_space(7, 0)


@pytest.mark.parametrize("n", range(0, 5))
@pytest.mark.parametrize("k", [-7, -5, -3, -2, -1, 0, 1, 2, 4])
def test_projective_space_dimension(n, k):
    chi = chi_projective_space(n, k)
    at_one = chi.evaluate({name: Fraction(1) for name in chi.vars.names})
    assert at_one == projective_dimension(n, k) == projective_dimension_expected(n, k)


def test_surface_series_first_coefficient():
    got = z_series_hilb_c2(3)
    one = LaurentPolynomial.one(SURFACE_M)
    expected = FactoredRational.one(SURFACE_M)
    for t in ("t1", "t2"):
        w = LaurentPolynomial.parse(SURFACE_M, f"{t}^-1")
        m = LaurentPolynomial.parse(SURFACE_M, "m")
        expected = expected * FactoredRational.ratio(one - m * w, one - w)
    assert got[1] == expected


def test_surface_series_at_m_equal_one():
    # (1 - m/w)/(1 - 1/w) is 1 at m = 1, so the z^n coefficient counts partitions
    got = z_series_hilb_c2(4)
    point = {"t1": Fraction(9), "t2": Fraction(25), "m": Fraction(1)}
    assert [c.evaluate(point) for c in got.coeffs] == [1, 1, 2, 3, 5]


def test_surface_series_matches_closed_form():
    assert z_series_hilb_c2(4) == hilb_c2_closed_form(4)


def _sympy_single_box_limit():
    eps = sympy.Symbol("eps")
    s = sympy.symbols("s1 s2 s3")
    aroof = lambda x: 1 / (2 * sympy.sinh(eps * x / 2))
    val = -aroof(s[0]) * aroof(s[1]) * aroof(s[2])
    for i, j in ((0, 1), (0, 2), (1, 2)):
        val = val / aroof(s[i] + s[j])
    return sympy.limit(val, eps, 0), s


def test_cohomological_limit_exponent():
    limit, s = _sympy_single_box_limit()
    result = cohomological_limit_check(2)
    assert result.verdict
    point = dict(zip(COHOMOLOGY.names, (Fraction(2), Fraction(3), Fraction(7))))
    oracle = limit.subs(dict(zip(s, (2, 3, 7))))
    assert result.exponent.evaluate(point) == Fraction(int(oracle.p), int(oracle.q))
    # equal weights keep the exponent finite
    assert result.exponent.evaluate({n: Fraction(1) for n in COHOMOLOGY.names}) == -8


@pytest.mark.slow
def test_cohomological_limit_order_three():
    assert cohomological_limit_check(3).verdict
