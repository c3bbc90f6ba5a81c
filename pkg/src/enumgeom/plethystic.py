"""Plethystic exponential and logarithm, exterior algebra, symmetrized
symmetric algebra and the multiplicative a-hat weight.

Characters are LaurentPolynomials; graded classes are TruncatedSeries in a
counting variable.  The exponential is computed as ``exp(sum psi_m(g) / m)``,
the logarithm by Moebius inversion of that sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import divisors, mobius

from .algebra import FactoredRational, LaurentPolynomial, TruncatedSeries
from .errors import (
    BoundExceeded,
    ConstantTermNotOne,
    NonSquareBase,
    TrivialWeight,
    ZeroWeightPresent,
)

DEFAULT_ORDER = 6
MAX_ORDER = 12


def check_order(order: int, limit: int = MAX_ORDER) -> int:
    if order < 0:
        raise BoundExceeded(f"order {order} is negative")
    if order > limit:
        raise BoundExceeded(f"order {order} exceeds the guard {limit}")
    return order


@dataclass(frozen=True)
class GradedCharacter:
    """``sum_k z**k * G_k`` with Laurent or factored coefficients."""

    series: TruncatedSeries

    @property
    def zero_weight_flag(self) -> bool:
        for c in self.series.coeffs:
            if isinstance(c, LaurentPolynomial):
                if c.constant_term():
                    return True
            elif c.is_polynomial() and c.to_laurent().constant_term():
                return True
        return False


def _as_series(g):
    return g.series if isinstance(g, GradedCharacter) else g


def _resize(s: TruncatedSeries, order: int) -> TruncatedSeries:
    return TruncatedSeries(s.var, order, s.coeffs)


def _degree_zero_part(c0):
    if isinstance(c0, FactoredRational):
        if c0.is_zero():
            return None
        try:
            c0 = c0.to_laurent()
        except ArithmeticError:
            raise ZeroWeightPresent("degree-0 part must be a finite character") from None
    if c0.is_zero():
        return None
    if c0.constant_term():
        raise ZeroWeightPresent("trivial weight in the degree-0 part makes S^. singular")
    return c0


def power_sum_series(g: TruncatedSeries) -> TruncatedSeries:
    """``sum_m psi_m(g) / m`` restricted to positive degrees."""
    order = g.order
    like = g.coeffs[0]
    out = [type(like).zero(like.vars)]
    for k in range(1, order + 1):
        terms = []
        for m in divisors(k):
            c = g.coeffs[k // m]
            if not c.is_zero():
                terms.append(c.adams(m).scale(Fraction(1, m)))
        out.append(_sum(terms, like))
    return TruncatedSeries(g.var, order, out)


def _sum(items, like):
    items = [x for x in items if not x.is_zero()]
    if not items:
        return type(like).zero(like.vars)
    if isinstance(like, FactoredRational):
        from .algebra import fsum

        return fsum(items)
    acc = items[0]
    for x in items[1:]:
        acc = acc + x
    return acc


def pleth_exp(g, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Plethystic exponential of a graded class, truncated at ``order``.

    The coefficient ring of the input is kept when the degree-0 part vanishes;
    a nonzero degree-0 character contributes the factored prefactor
    ``prod (1 - w)**(-c)`` and forces FactoredRational coefficients.
    """
    check_order(order)
    g = _resize(_as_series(g), order)
    c0 = _degree_zero_part(g.coeffs[0])
    like = g.coeffs[0]
    positive = TruncatedSeries(g.var, order, [type(like).zero(like.vars)] + g.coeffs[1:])
    body = power_sum_series(positive).exp()
    if c0 is None:
        return body
    return body.to_factored() * sym_alg(c0)


def pleth_log(f, order: int = DEFAULT_ORDER) -> GradedCharacter:
    """Inverse of :func:`pleth_exp` on series with constant term 1."""
    check_order(order)
    f = _resize(_as_series(f), order)
    logf = f.log()
    like = f.coeffs[0]
    out = [type(like).zero(like.vars)]
    for k in range(1, order + 1):
        terms = []
        for d in divisors(k):
            mu = int(mobius(d))
            c = logf.coeffs[k // d]
            if mu and not c.is_zero():
                terms.append(c.adams(d).scale(Fraction(mu, d)))
        out.append(_sum(terms, like))
    return GradedCharacter(TruncatedSeries(f.var, order, out))


def _weights(v: LaurentPolynomial):
    """(key, multiplicity) pairs; multiplicities must be integers."""
    out = []
    for k, c in v.terms.items():
        if Fraction(c).denominator != 1:
            raise ValueError("characters need integer multiplicities")
        out.append((k, int(c)))
    return out


def _one_minus(vs, key):
    return LaurentPolynomial(vs, {0: 1, key: -1})


def ext_alg(v: LaurentPolynomial) -> FactoredRational:
    """``prod (1 - w)**c``; negative multiplicities go to the denominator."""
    vs = v.vars
    out = FactoredRational.one(vs)
    for k, c in _weights(v):
        if k == 0:
            if c > 0:
                return FactoredRational.zero(vs)
            raise ZeroDivisionError("trivial weight with negative multiplicity")
        out = out * FactoredRational.from_poly(_one_minus(vs, k), c)
    return out


def sym_alg(v: LaurentPolynomial) -> FactoredRational:
    """``prod (1 - w)**(-c)``, the symmetric algebra of a finite character."""
    if v.constant_term():
        raise ZeroWeightPresent("symmetric algebra of the trivial weight diverges")
    return ext_alg(v).inverse()


def half_det(v: LaurentPolynomial) -> int:
    """Packed key of ``(det v)**(1/2)``."""
    vs = v.vars
    total = sum(k * c for k, c in _weights(v))
    exps = vs.unpack(total)
    if any(e % 2 for e in exps):
        raise NonSquareBase("det has no square root on the half-integer lattice")
    return vs.pack([e // 2 for e in exps])


def sym_hat(v: LaurentPolynomial) -> FactoredRational:
    """``(det v)**(1/2) * S^.(v)``."""
    s = sym_alg(v)
    return FactoredRational(v.vars, 1, half_det(v)) * s


def aroof(v: LaurentPolynomial, error=TrivialWeight) -> FactoredRational:
    """``prod (w**(1/2) - w**(-1/2))**(-c)``.

    Rewritten as ``(det v)**(1/2) * prod (w - 1)**(-c)`` so only the total
    determinant needs a square root, not every weight.
    """
    vs = v.vars
    if v.constant_term():
        raise error("a-hat of the trivial weight is undefined")
    out = FactoredRational(vs, 1, half_det(v))
    for k, c in _weights(v):
        out = out * FactoredRational.from_poly(LaurentPolynomial(vs, {k: 1, 0: -1}), -c)
    return out


def aroof_weight(vs, key: int) -> FactoredRational:
    """``1 / (w**(1/2) - w**(-1/2))`` for a single weight ``w``."""
    return aroof(LaurentPolynomial(vs, {key: 1}))
