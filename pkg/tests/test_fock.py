import pytest
from hypothesis import given, settings, strategies as st

from enumgeom.algebra import LaurentPolynomial, variables
from enumgeom.errors import BoundExceeded, WindowTooSmall
from enumgeom.fock import (
    DiagonalSpec,
    FockVector,
    brute_force_sum,
    energy_conjugate,
    gamma_minus,
    gamma_plus,
    generic_spec,
    macmahon_spec,
    or_formula_lhs,
    or_formula_rhs,
    refined_spec,
    refined_target,
    refined_vertex_check,
)
from enumgeom.partitions import Partition, enumerate_partitions, interlaces

from .oracles import macmahon_coefficients

ZW = variables("z", "w", "q")
Z = LaurentPolynomial.var(ZW, "z")
W = LaurentPolynomial.var(ZW, "w")
Qv = LaurentPolynomial.var(ZW, "q")


def test_gamma_minus_on_vacuum_gives_rows():
    v = gamma_minus(FockVector.vacuum(ZW, 5), Z)
    assert set(v.amplitudes) == {Partition((m,)) if m else Partition() for m in range(6)}
    for m in range(6):
        assert v.coefficient(Partition((m,)) if m else Partition()) == Z ** m


def test_gamma_minus_matches_interlacing_oracle():
    cutoff = 6
    for lam in [p for n in range(4) for p in enumerate_partitions(n)]:
        got = gamma_minus(FockVector.basis(ZW, cutoff, lam), 1)
        expected = {mu for n in range(cutoff + 1) for mu in enumerate_partitions(n) if interlaces(mu, lam)}
        assert set(got.amplitudes) == expected
        assert all(c == LaurentPolynomial.one(ZW) for c in got.amplitudes.values())


def test_gamma_minus_at_zero_is_identity():
    v = FockVector(ZW, 4, {Partition((2, 1)): Z, Partition((1,)): W})
    assert gamma_minus(v, 0) == v


def test_gamma_plus_on_vacuum():
    assert gamma_plus(FockVector.vacuum(ZW, 4), Z) == FockVector.vacuum(ZW, 4)


def test_energy_examples():
    assert energy_conjugate(FockVector.vacuum(ZW, 4), Qv) == FockVector.vacuum(ZW, 4)
    lam = Partition((2, 1))
    assert energy_conjugate(FockVector.basis(ZW, 4, lam), Qv).coefficient(lam) == Qv ** 3


def test_vacuum_commutation():
    cutoff = 8
    v = gamma_plus(gamma_minus(FockVector.vacuum(ZW, cutoff), W), Z)
    got = v.coefficient(Partition())
    expected = sum(((Z * W) ** k for k in range(1, cutoff + 1)), LaurentPolynomial.one(ZW))
    assert got == expected
    swapped = gamma_minus(gamma_plus(FockVector.vacuum(ZW, cutoff), Z), W)
    assert swapped.coefficient(Partition()) == LaurentPolynomial.one(ZW)


@st.composite
def fock_vectors(draw, cutoff=5):
    shapes = [p for n in range(cutoff + 1) for p in enumerate_partitions(n)]
    amps = {}
    for lam in draw(st.lists(st.sampled_from(shapes), max_size=5)):
        amps[lam] = LaurentPolynomial.constant(ZW, draw(st.integers(min_value=-3, max_value=3))) * Z ** draw(
            st.integers(min_value=0, max_value=2)
        )
    return FockVector(ZW, cutoff, {k: a for k, a in amps.items() if not a.is_zero()})


@settings(max_examples=60, deadline=None)
@given(fock_vectors(), fock_vectors())
def test_gamma_plus_is_transpose(u, v):
    assert gamma_plus(v, W).pair(u) == v.pair(gamma_minus(u, W))


@settings(max_examples=60, deadline=None)
@given(fock_vectors())
def test_energy_commutes_with_gamma_minus(v):
    assert energy_conjugate(gamma_minus(v, Z), Qv) == gamma_minus(energy_conjugate(v, Qv), Qv * Z)


def test_macmahon_through_cutoff_five():
    got = or_formula_lhs(macmahon_spec(4), 5)
    assert [c.terms.get(c.vars.pack([2 * n]), 0) for n, c in enumerate(got.coeffs)] == [1, 1, 3, 6, 13, 24]
    assert [sum(c.terms.values()) for c in or_formula_rhs(macmahon_spec(4), 5).coeffs] == macmahon_coefficients(5)


def test_cutoff_zero():
    assert or_formula_lhs(generic_spec(0), 0).coeffs[0] == LaurentPolynomial.one(generic_spec(0).vars)


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        or_formula_lhs(generic_spec(1), 4)
    with pytest.raises(WindowTooSmall):
        or_formula_rhs(generic_spec(1), 4)


@pytest.mark.parametrize("window,cutoff", [(1, 2), (2, 3), (3, 3), (3, 4)])
def test_generic_transfer_matches_brute_force_and_product(window, cutoff):
    spec = generic_spec(window)
    lhs = or_formula_lhs(spec, cutoff)
    assert lhs == brute_force_sum(spec, cutoff)
    assert lhs == or_formula_rhs(spec, cutoff)
    assert lhs == or_formula_lhs(spec, cutoff, fold="left")


def test_generic_transfer_cutoff_six():
    spec = generic_spec(5)
    lhs = or_formula_lhs(spec, 6)
    assert lhs == brute_force_sum(spec, 6)
    assert lhs == or_formula_rhs(spec, 6)


def test_single_diagonal_weight():
    vs = variables("q0")
    q0 = LaurentPolynomial.var(vs, "q0")
    zero = LaurentPolynomial.zero(vs)
    spec = DiagonalSpec(vs, 3, {d: (q0 if d == 0 else zero) for d in range(-3, 4)})
    got = or_formula_rhs(spec, 4)
    assert [c for c in got.coeffs] == [q0 ** k for k in range(5)]
    assert or_formula_lhs(spec, 4) == got


@pytest.mark.parametrize("cutoff", [0, 1, 3, 6])
def test_refined_vertex(cutoff):
    assert refined_vertex_check(cutoff)


def test_refined_vertex_perturbation_fails():
    assert not refined_vertex_check(4, perturb=True)
    with pytest.raises(BoundExceeded):
        refined_vertex_check(9)


def test_refined_rhs_matches_target():
    spec = refined_spec(3)
    rhs = or_formula_rhs(spec, 4)
    assert rhs == refined_target(4)
