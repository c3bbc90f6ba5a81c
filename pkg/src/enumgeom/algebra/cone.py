"""Laurent expansion of factored rational functions inside a chosen cone."""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotExpandable
from .factored import FactoredRational
from .laurent import LaurentPolynomial
from .variables import DENOMINATOR

AT_ZERO = "0"
AT_INFINITY = "inf"


def cone_degree_fn(vs, directions: dict):
    """Linear form on keys: +e for expand-at-0 variables, -e for expand-at-infinity."""
    signs = []
    for name in vs.names:
        d = directions.get(name)
        if d is None:
            signs.append(0)
        elif d in (AT_ZERO, 0, "zero"):
            signs.append(1)
        elif d in (AT_INFINITY, "infinity", float("inf")):
            signs.append(-1)
        else:
            raise ValueError(f"bad direction {d!r} for {name}")

    def degree(key):
        return Fraction(sum(s * e for s, e in zip(signs, vs.unpack(key))), DENOMINATOR)

    return degree


def _truncate(p: LaurentPolynomial, degree, bound):
    return LaurentPolynomial(p.vars, {k: c for k, c in p.terms.items() if degree(k) <= bound})


def _inverse_series(f: LaurentPolynomial, degree, budget):
    """1/f as a truncated series in the cone, up to relative degree ``budget``."""
    degs = {k: degree(k) for k in f.terms}
    low = min(degs.values())
    extreme = [k for k, d in degs.items() if d == low]
    if len(extreme) != 1:
        raise NotExpandable(f"factor {f} has no unique extreme term in the cone")
    k0 = extreme[0]
    c0 = f.terms[k0]
    # f = c0 m0 (1 - h) with every term of h of positive cone degree
    h = LaurentPolynomial(
        f.vars, {k - k0: -Fraction(c) / c0 for k, c in f.terms.items() if k != k0}
    )
    step = min((degree(k) for k in h.terms), default=None)
    if step is not None and step <= 0:
        raise NotExpandable(f"factor {f} is not geometric-series expandable in the cone")
    total = LaurentPolynomial.one(f.vars)
    power = LaurentPolynomial.one(f.vars)
    if step is not None:
        n = 1
        while n * step <= budget:
            power = _truncate(power * h, degree, budget)
            total = total + power
            n += 1
    return total.shift(-k0, Fraction(1) / c0), -low


def expand_in_cone(r: FactoredRational, directions: dict, order) -> LaurentPolynomial:
    """Laurent expansion of ``r`` truncated at cone-degree ``order``.

    ``directions`` maps variable names to ``"0"`` (expand in positive powers)
    or ``"inf"`` (expand in inverse powers); other variables are treated as
    constants and must not be needed for expandability.
    """
    r = r.reduce()
    degree = cone_degree_fn(r.vars, directions)
    order = Fraction(order)
    num = r.numerator()
    if num.is_zero():
        return num
    num_low = min(degree(k) for k in num.terms)
    inverses = []
    shift = Fraction(0)
    for f, m in r.denominator_factors().items():
        for _ in range(m):
            inverses.append(f)
            shift += -min(degree(k) for k in f.terms)
    # every piece of the product starts at its lowest degree; the budget for
    # each geometric series is what is left after the others' lowest terms
    budget = order - num_low - shift
    if budget < 0:
        return LaurentPolynomial.zero(r.vars)
    result = num
    for f in inverses:
        inv, _ = _inverse_series(f, degree, budget)
        result = _truncate(result * inv, degree, order)
    return _truncate(result, degree, order)
