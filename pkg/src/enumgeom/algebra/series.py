"""Power series in one counting variable, hard-truncated at a fixed order."""

from __future__ import annotations

from fractions import Fraction

from ..errors import NonInvertibleConstantTerm
from .factored import FactoredRational
from .laurent import LaurentPolynomial


def _inverse_coeff(c):
    if isinstance(c, LaurentPolynomial):
        if not c.is_monomial():
            raise NonInvertibleConstantTerm(f"constant term {c} is not a unit")
        (k, v), = c.terms.items()
        return LaurentPolynomial.monomial(c.vars, key=-k, coeff=Fraction(1) / v)
    if isinstance(c, FactoredRational):
        if c.is_zero():
            raise NonInvertibleConstantTerm("constant term is zero")
        return c.inverse()
    raise TypeError(type(c))


def _zero_like(c):
    return type(c).zero(c.vars)


def _one_like(c):
    return type(c).one(c.vars)


def _sum(items, like):
    items = [x for x in items if not x.is_zero()]
    if not items:
        return _zero_like(like)
    if isinstance(like, FactoredRational):
        from .factored import fsum

        return fsum(items)
    acc = items[0]
    for x in items[1:]:
        acc = acc + x
    return acc


class TruncatedSeries:
    """``sum(c_k * var**k for k <= order)``; nothing beyond ``order`` is ever reported.

    Coefficients are all LaurentPolynomials or all FactoredRationals over one
    variable set.
    """

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, var: str, order: int, coeffs):
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = list(coeffs)[: order + 1]
        if not coeffs:
            raise ValueError("need at least the constant coefficient to fix the ring")
        zero = _zero_like(coeffs[0])
        coeffs += [zero] * (order + 1 - len(coeffs))
        self.var = var
        self.order = order
        self.coeffs = coeffs

    @property
    def vars(self):
        return self.coeffs[0].vars

    @classmethod
    def one(cls, var, order, like):
        return cls(var, order, [_one_like(like)])

    @classmethod
    def from_laurent(cls, p: LaurentPolynomial, var: str, order: int, coeff_vars):
        """Split ``p`` by integer powers of ``var``; the rest lands in ``coeff_vars``."""
        vs = p.vars
        idx = vs.index(var)
        keep = [vs.index(n) for n in coeff_vars.names]
        dropped = [i for i in range(len(vs)) if i != idx and i not in keep]
        buckets = [dict() for _ in range(order + 1)]
        for k, c in p.terms.items():
            e = vs.unpack(k)
            if any(e[i] for i in dropped):
                raise ValueError("polynomial involves variables outside the coefficient ring")
            if e[idx] % 2 or e[idx] < 0:
                raise ValueError(f"{var} must occur with nonnegative integer powers")
            n = e[idx] // 2
            if n > order:
                continue
            rest = coeff_vars.pack([e[i] for i in keep])
            buckets[n][rest] = c
        return cls(var, order, [LaurentPolynomial(coeff_vars, b) for b in buckets])

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.var != self.var or other.order != self.order:
            raise ValueError("series differ in counting variable or order")

    def map(self, fn):
        return TruncatedSeries(self.var, self.order, [fn(c) for c in self.coeffs])

    def to_factored(self):
        return self.map(
            lambda c: c if isinstance(c, FactoredRational) else FactoredRational.from_poly(c)
        )

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(
            self.var, self.order, [_sum([a, b], a) for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self.map(lambda x: x.scale(c))

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.map(lambda c: c * other)
        self._check(other)
        n = self.order
        out = []
        for k in range(n + 1):
            out.append(
                _sum(
                    [
                        self.coeffs[i] * other.coeffs[k - i]
                        for i in range(k + 1)
                        if not self.coeffs[i].is_zero() and not other.coeffs[k - i].is_zero()
                    ],
                    self.coeffs[0],
                )
            )
        return TruncatedSeries(self.var, n, out)

    def reciprocal(self):
        a0 = self.coeffs[0]
        if a0.is_zero():
            raise NonInvertibleConstantTerm("constant term is zero")
        inv0 = _inverse_coeff(a0)
        out = [inv0]
        for k in range(1, self.order + 1):
            s = _sum(
                [self.coeffs[i] * out[k - i] for i in range(1, k + 1) if not self.coeffs[i].is_zero()],
                a0,
            )
            out.append(-(s * inv0))
        return TruncatedSeries(self.var, self.order, out)

    def adams(self, n: int):
        """psi_n on coefficients together with ``var -> var**n``."""
        out = [_zero_like(self.coeffs[0])] * (self.order + 1)
        for k, c in enumerate(self.coeffs):
            if k * n > self.order:
                break
            out[k * n] = c.adams(n)
        return TruncatedSeries(self.var, self.order, out)

    def compose_monomial(self, mono, power: int = 1):
        """Substitute ``var -> mono * var**power`` (``mono`` a coefficient-ring monomial)."""
        if power < 1:
            raise ValueError("power must be positive")
        out = [_zero_like(self.coeffs[0])] * (self.order + 1)
        acc = _one_like(self.coeffs[0])
        for k, c in enumerate(self.coeffs):
            if k * power > self.order:
                break
            out[k * power] = c * acc
            acc = acc * mono
        return TruncatedSeries(self.var, self.order, out)

    def derivative_shift(self):
        """Coefficients of ``var * d/dvar``."""
        return TruncatedSeries(self.var, self.order, [c.scale(k) for k, c in enumerate(self.coeffs)])

    def log(self):
        """Logarithm of a series with constant term 1."""
        from ..errors import ConstantTermNotOne

        one = _one_like(self.coeffs[0])
        c0 = self.coeffs[0]
        if not (c0 - one).is_zero():
            raise ConstantTermNotOne("log needs constant term 1")
        # k l_k = k a_k - sum_{j<k} j l_j a_{k-j}
        out = [_zero_like(c0)]
        for k in range(1, self.order + 1):
            terms = [self.coeffs[k].scale(k)]
            for j in range(1, k):
                if out[j].is_zero() or self.coeffs[k - j].is_zero():
                    continue
                terms.append(-(out[j] * self.coeffs[k - j]).scale(j))
            out.append(_sum(terms, c0).scale(Fraction(1, k)))
        return TruncatedSeries(self.var, self.order, out)

    def exp(self):
        """Exponential of a series with zero constant term."""
        c0 = self.coeffs[0]
        if not c0.is_zero():
            raise ValueError("exp needs zero constant term")
        out = [_one_like(c0)]
        for n in range(1, self.order + 1):
            terms = [
                (self.coeffs[k] * out[n - k]).scale(k)
                for k in range(1, n + 1)
                if not self.coeffs[k].is_zero() and not out[n - k].is_zero()
            ]
            out.append(_sum(terms, c0).scale(Fraction(1, n)))
        return TruncatedSeries(self.var, self.order, out)

    def equals(self, other, **kw) -> bool:
        self._check(other)
        for a, b in zip(self.coeffs, other.coeffs):
            if isinstance(a, FactoredRational) or isinstance(b, FactoredRational):
                a = a if isinstance(a, FactoredRational) else FactoredRational.from_poly(a)
                if not a.equals(b, **kw):
                    return False
            elif a != b:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def first_mismatch(self, other):
        for k, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if isinstance(a, FactoredRational) or isinstance(b, FactoredRational):
                a = a if isinstance(a, FactoredRational) else FactoredRational.from_poly(a)
                if not a.equals(b):
                    return k
            elif a != b:
                return k
        return None

    def to_json(self):
        return {
            "var": self.var,
            "order": self.order,
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    def __repr__(self):
        body = ", ".join(c.to_string() for c in self.coeffs)
        return f"TruncatedSeries({self.var}, order={self.order}, [{body}])"
