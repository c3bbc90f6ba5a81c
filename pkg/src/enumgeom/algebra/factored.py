"""Rational functions kept as a scalar times a monomial times a product of factors.

Factors are canonical Laurent polynomials: shifted so the smallest monomial
(in packed-key order) is 1, scaled to primitive integer coefficients with a
positive constant term.  Binomials ``1 - w**g`` and ``1 + w**g`` are split into
cyclotomic pieces ``Phi_d(w)``.  No multivariate gcd is ever computed:
cancellation is syntactic, plus optional trial division by known factors.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from ..errors import NonDivisible, PoleAtPoint
from .laurent import LaurentPolynomial, _power, _roots_for, norm_coeff
from .variables import VariableSet

# Above this many (estimated) terms an identity is checked by exact evaluation
# at random points instead of clearing denominators.
CLEARING_THRESHOLD = 10**6


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the d-th cyclotomic polynomial."""
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num = _divide_int_poly(num, list(cyclotomic(e)))
    return tuple(num)


def _divide_int_poly(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact cyclotomic division"
    return q


def _key_gcd(vs: VariableSet, key: int) -> int:
    g = 0
    for e in vs.unpack(key):
        g = math.gcd(g, e)
    return g


def _content(p: LaurentPolynomial):
    """Positive rational ``c`` such that ``p / c`` has coprime integer coefficients."""
    num_g = 0
    den_l = 1
    for c in p.terms.values():
        c = Fraction(c)
        num_g = math.gcd(num_g, c.numerator)
        den_l = den_l * c.denominator // math.gcd(den_l, c.denominator)
    return Fraction(num_g, den_l)


def normalize_factor(p: LaurentPolynomial):
    """Split ``p`` as ``coeff * x**mono * prod(factor**mult)`` with canonical factors.

    Returns ``(coeff, mono_key, [(factor, mult), ...])``.
    """
    if p.is_zero():
        raise ZeroDivisionError("zero polynomial cannot be a factor")
    if p.is_monomial():
        (k, c), = p.terms.items()
        return c, k, []
    low = min(p.terms)
    content = _content(p)
    if p.terms[low] < 0:
        content = -content
    if low == 0 and content == 1:
        q = p
    else:
        q = LaurentPolynomial(
            p.vars,
            {k - low: norm_coeff(Fraction(c) / content) for k, c in p.terms.items()},
            _trusted=True,
        )
    coeff, mono = norm_coeff(content), low
    if len(q.terms) == 2:
        (k, c), = ((k, c) for k, c in q.terms.items() if k != 0)
        if c in (1, -1):
            g = _key_gcd(q.vars, k)
            # integral exponents are split over the integer lattice only, so
            # 1 - t never turns into (1 - t^(1/2))(1 + t^(1/2))
            if g % 2 == 0:
                g //= 2
            if g > 1:
                sign, parts = _split_binomial(q.vars, k // g, g, c)
                return norm_coeff(coeff * sign), mono, [(part, 1) for part in parts]
    return coeff, mono, [(q, 1)]


def _split_binomial(vs, wkey, g, c):
    """Canonical cyclotomic pieces of ``1 + c * w**g`` as ``(sign, [polys])``."""
    if c == -1:
        ds = [d for d in range(1, g + 1) if g % d == 0]
        sign = -1
    else:
        ds = [d for d in range(1, 2 * g + 1) if (2 * g) % d == 0 and g % d != 0]
        sign = 1
    parts = []
    for d in ds:
        coeffs = cyclotomic(d)
        if d == 1:
            # w - 1 = -(1 - w)
            sign = -sign
            coeffs = (1, -1)
        parts.append(
            LaurentPolynomial(vs, {i * wkey: a for i, a in enumerate(coeffs) if a}, _trusted=True)
        )
    return sign, parts


class FactoredRational:
    """``coeff * x**mono * prod(f**m)``; negative ``m`` puts ``f`` in the denominator."""

    __slots__ = ("vars", "coeff", "mono", "factors")

    def __init__(self, vars: VariableSet, coeff=1, mono: int = 0, factors=None):
        self.vars = vars
        self.coeff = norm_coeff(coeff)
        self.mono = mono if self.coeff else 0
        self.factors = {f: m for f, m in (factors or {}).items() if m} if self.coeff else {}

    # construction -------------------------------------------------------
    @classmethod
    def one(cls, vars):
        return cls(vars)

    @classmethod
    def zero(cls, vars):
        return cls(vars, 0)

    @classmethod
    def constant(cls, vars, c):
        return cls(vars, c)

    @classmethod
    def from_poly(cls, p: LaurentPolynomial, multiplicity: int = 1):
        if p.is_zero():
            if multiplicity < 0:
                raise ZeroDivisionError("zero factor in denominator")
            return cls(p.vars, 0)
        c, mono, parts = normalize_factor(p)
        factors = {}
        for f, m in parts:
            factors[f] = factors.get(f, 0) + m * multiplicity
        if multiplicity < 0:
            c = Fraction(1) / Fraction(c) ** (-multiplicity)
        else:
            c = Fraction(c) ** multiplicity
        return cls(p.vars, c, mono * multiplicity, factors)

    @classmethod
    def from_factors(cls, vars, pairs, coeff=1, mono=0):
        """Product of ``(poly, multiplicity)`` pairs."""
        out = cls(vars, coeff, mono)
        for p, m in pairs:
            out = out * cls.from_poly(p, m)
        return out

    @classmethod
    def ratio(cls, num: LaurentPolynomial, den: LaurentPolynomial):
        return cls.from_poly(num) * cls.from_poly(den, -1)

    def like_one(self):
        return FactoredRational(self.vars)

    # queries ----------------------------------------------------------
    def is_zero(self):
        return self.coeff == 0

    def is_polynomial(self):
        return all(m > 0 for m in self.factors.values())

    def numerator_factors(self):
        return {f: m for f, m in self.factors.items() if m > 0}

    def denominator_factors(self):
        return {f: -m for f, m in self.factors.items() if m < 0}

    def numerator(self) -> LaurentPolynomial:
        base = LaurentPolynomial.monomial(self.vars, key=self.mono, coeff=self.coeff)
        return _expand(base, self.numerator_factors())

    def denominator(self) -> LaurentPolynomial:
        return _expand(LaurentPolynomial.one(self.vars), self.denominator_factors())

    def to_laurent(self) -> LaurentPolynomial:
        """Expanded Laurent polynomial; raises NonDivisible if a denominator survives."""
        r = self.reduce()
        if not r.is_polynomial():
            raise NonDivisible("denominator does not cancel")
        return r.numerator()

    def estimated_terms(self) -> int:
        """Upper bound on the number of terms of the expanded numerator."""
        return _span_volume(self.vars, [(f, m) for f, m in self.factors.items() if m > 0])

    # arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, FactoredRational):
            if other.vars != self.vars:
                raise ValueError("variable sets differ")
            return other
        if isinstance(other, LaurentPolynomial):
            if other.vars != self.vars:
                raise ValueError("variable sets differ")
            return FactoredRational.from_poly(other)
        if isinstance(other, Rational):
            return FactoredRational(self.vars, other)
        return NotImplemented

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.coeff == 0 or other.coeff == 0:
            return FactoredRational.zero(self.vars)
        factors = dict(self.factors)
        for f, m in other.factors.items():
            factors[f] = factors.get(f, 0) + m
        return FactoredRational(
            self.vars, self.coeff * other.coeff, self.mono + other.mono, factors
        )

    __rmul__ = __mul__

    def inverse(self):
        if self.coeff == 0:
            raise ZeroDivisionError("inverse of zero")
        return FactoredRational(
            self.vars,
            Fraction(1) / self.coeff,
            -self.mono,
            {f: -m for f, m in self.factors.items()},
        )

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return FactoredRational.one(self.vars)
        return FactoredRational(
            self.vars,
            Fraction(self.coeff) ** n,
            self.mono * n,
            {f: m * n for f, m in self.factors.items()},
        )

    def __neg__(self):
        return FactoredRational(self.vars, -self.coeff, self.mono, self.factors)

    def scale(self, c):
        return FactoredRational(self.vars, self.coeff * c, self.mono, self.factors)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return fsum([self, other])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return fsum([self, -other])

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return fsum([other, -self])

    # involutions --------------------------------------------------------
    def _map_factors(self, fn, mono_fn):
        out = FactoredRational(self.vars, self.coeff, mono_fn(self.mono))
        for f, m in self.factors.items():
            out = out * FactoredRational.from_poly(fn(f), m)
        return out

    def bar(self):
        return self._map_factors(lambda f: f.bar(), lambda k: -k)

    def adams(self, n: int):
        if n == 1:
            return self
        return self._map_factors(lambda f: f.adams(n), lambda k: k * n)

    def substitute(self, target: VariableSet, images: dict):
        out = FactoredRational(target, self.coeff)
        out = out * LaurentPolynomial.monomial(self.vars, key=self.mono).substitute(target, images)
        for f, m in self.factors.items():
            out = out * FactoredRational.from_poly(f.substitute(target, images), m)
        return out

    def reduce(self):
        """Cancel denominator factors that exactly divide numerator factors."""
        den = self.denominator_factors()
        if not den:
            return self
        num = self.numerator_factors()
        coeff, mono = self.coeff, self.mono
        changed = False
        progress = True
        while progress:
            progress = False
            for d in list(den):
                for n in sorted(num, key=len, reverse=True):
                    if n.is_constant():
                        continue
                    try:
                        q = n.exact_divide(d)
                    except NonDivisible:
                        continue
                    _take(num, n)
                    _take(den, d)
                    if not q.is_constant():
                        extra = FactoredRational.from_poly(q)
                        coeff *= extra.coeff
                        mono += extra.mono
                        for f, m in extra.factors.items():
                            num[f] = num.get(f, 0) + m
                    else:
                        coeff *= q.constant_term()
                    for f in set(num) & set(den):
                        k = min(num[f], den[f])
                        num[f] -= k
                        den[f] -= k
                    num = {f: m for f, m in num.items() if m}
                    den = {f: m for f, m in den.items() if m}
                    changed = progress = True
                    break
                if progress:
                    break
        if not changed:
            return self
        factors = dict(num)
        for d, m in den.items():
            factors[d] = factors.get(d, 0) - m
        return FactoredRational(self.vars, coeff, mono, factors)

    # evaluation / comparison -------------------------------------------
    def evaluate(self, point: dict) -> Fraction:
        if self.coeff == 0:
            return Fraction(0)
        value = Fraction(self.coeff)
        roots = _roots_for(self.vars, point)
        for name, e in zip(self.vars.names, self.vars.unpack(self.mono)):
            if e:
                value *= _power(roots, name, e, point)
        zero_num = False
        for f, m in self.factors.items():
            v = f.evaluate(point)
            if v == 0:
                if m < 0:
                    raise PoleAtPoint(f"denominator factor {f} vanishes")
                zero_num = True
                continue
            value *= v**m
        return Fraction(0) if zero_num else value

    def equals(self, other, *, threshold=None, points=8, rng=None) -> bool:
        other = self._lift(other)
        return identity_holds([self], [other], threshold=threshold, points=points, rng=rng)

    def __eq__(self, other):
        if not isinstance(other, (FactoredRational, LaurentPolynomial, Rational)):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def to_string(self) -> str:
        parts = [str(Fraction(self.coeff))]
        mono = LaurentPolynomial.monomial(self.vars, key=self.mono)
        if self.mono:
            parts.append(mono.to_string().split(" * ", 1)[1])
        num = sorted((f.to_string(), m) for f, m in self.factors.items() if m > 0)
        den = sorted((f.to_string(), -m) for f, m in self.factors.items() if m < 0)
        for s, m in num:
            parts.append(f"({s})" + (f"^{m}" if m != 1 else ""))
        text = " * ".join(parts)
        if den:
            text += " / (" + " * ".join(f"({s})" + (f"^{m}" if m != 1 else "") for s, m in den) + ")"
        return text

    def __repr__(self):
        return f"FactoredRational({self.to_string()!r})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars.names),
            "coeff": f"{Fraction(self.coeff).numerator}/{Fraction(self.coeff).denominator}",
            "mono": list(self.vars.unpack(self.mono)),
            "factors": [
                {"poly": f.to_json()["terms"], "mult": m}
                for f, m in sorted(
                    self.factors.items(), key=lambda fm: (fm[0].sorted_terms(), fm[1])
                )
            ],
        }


# ---------------------------------------------------------------------------
# sums with cleared denominators


def _expand(base: LaurentPolynomial, factors: dict) -> LaurentPolynomial:
    acc = base
    for f, m in sorted(factors.items(), key=lambda fm: -len(fm[0])):
        for _ in range(m):
            acc = acc * f
    return acc


def _span_volume(vs, pairs) -> int:
    spans = [0] * len(vs)
    for f, m in pairs:
        s = f.exponent_spans()
        for i, (lo, hi) in enumerate(s):
            spans[i] += (hi - lo) * m
    vol = 1
    for s in spans:
        vol *= s // 2 + 1 if s else 1
    return vol


def _clearing_plan(terms):
    """Common numerator part, common denominator and per-term multipliers."""
    common = None
    for t in terms:
        num = t.numerator_factors()
        if common is None:
            common = dict(num)
        else:
            common = {f: min(m, num.get(f, 0)) for f, m in common.items() if num.get(f, 0)}
    common = common or {}
    lcm = {}
    for t in terms:
        for f, m in t.denominator_factors().items():
            if m > lcm.get(f, 0):
                lcm[f] = m
    plans = []
    for t in terms:
        exps = {}
        for f, m in t.factors.items():
            e = m - common.get(f, 0) + lcm.get(f, 0) if m < 0 else m - common.get(f, 0)
            if e:
                exps[f] = e
        for f, m in lcm.items():
            if f not in t.factors:
                exps[f] = m
            elif t.factors[f] > 0:
                exps[f] = exps.get(f, 0) + m
        plans.append(exps)
    return common, lcm, plans


def fsum(terms, *, reduce=True, vars=None) -> FactoredRational:
    """Exact sum of FactoredRationals over a syntactic common denominator."""
    terms = list(terms)
    if vars is None:
        if not terms:
            raise ValueError("empty sum needs an explicit variable set")
        vars = terms[0].vars
    vs = vars
    terms = [t for t in terms if t.coeff != 0]
    if not terms:
        return FactoredRational.zero(vs)
    if len(terms) == 1:
        return terms[0]
    common, lcm, plans = _clearing_plan(terms)
    total = LaurentPolynomial.zero(vs)
    for t, exps in zip(terms, plans):
        base = LaurentPolynomial.monomial(vs, key=t.mono, coeff=t.coeff)
        total = total + _expand(base, exps)
    if total.is_zero():
        return FactoredRational.zero(vs)
    out = FactoredRational.from_poly(total)
    factors = dict(out.factors)
    for f, m in common.items():
        factors[f] = factors.get(f, 0) + m
    for f, m in lcm.items():
        factors[f] = factors.get(f, 0) - m
    out = FactoredRational(vs, out.coeff, out.mono, factors)
    return out.reduce() if reduce else out


def _take(counter, key):
    counter[key] -= 1
    if not counter[key]:
        del counter[key]


def clearing_size(terms) -> int:
    terms = [t for t in terms if t.coeff != 0]
    if not terms:
        return 0
    _, _, plans = _clearing_plan(terms)
    return max(
        _span_volume(terms[0].vars, list(exps.items())) * max(1, len(terms)) for exps in plans
    )


def random_square_point(vs: VariableSet, rng: random.Random, skip=()):
    """Distinct random primes squared, so half-integer powers stay rational."""
    from sympy import randprime

    used = set()
    point = {}
    for name in vs.names:
        if name in skip:
            continue
        while True:
            p = randprime(10**5, 10**7) if rng is None else _rng_prime(rng)
            if p not in used:
                used.add(p)
                break
        point[name] = Fraction(p * p)
    return point


def _rng_prime(rng):
    from sympy import isprime

    while True:
        n = rng.randrange(10**5, 10**7)
        if isprime(n):
            return n


def identity_holds(lhs, rhs, *, threshold=None, points=8, rng=None) -> bool:
    """Decide ``sum(lhs) == sum(rhs)`` for lists of FactoredRationals.

    Denominators are cleared into a Laurent polynomial when the estimated
    expansion is below ``threshold`` (exact).  Otherwise both sides are
    evaluated exactly at ``points`` random points whose coordinates are
    distinct primes squared; the cleared numerator has bounded degree, so a
    false positive needs every point to hit its zero set.
    """
    threshold = CLEARING_THRESHOLD if threshold is None else threshold
    lhs = [t for t in lhs if t.coeff != 0]
    rhs = [t for t in rhs if t.coeff != 0]
    terms = lhs + [-t for t in rhs]
    if not terms:
        return True
    if clearing_size(terms) <= threshold:
        return fsum(terms, reduce=False).is_zero()
    rng = rng or random.Random(0)
    vs = terms[0].vars
    done = 0
    while done < points:
        pt = random_square_point(vs, rng)
        try:
            a = sum((t.evaluate(pt) for t in lhs), Fraction(0))
            b = sum((t.evaluate(pt) for t in rhs), Fraction(0))
        except PoleAtPoint:
            continue
        if a != b:
            return False
        done += 1
    return True
