"""Sparse Laurent polynomials with exact rational coefficients."""

from __future__ import annotations

import heapq
import math
import re
from fractions import Fraction
from numbers import Rational

from ..errors import NonDivisible, NonSquareBase, PoleAtPoint
from .variables import DENOMINATOR, Monomial, VariableSet


def norm_coeff(c):
    """Keep coefficients as ints whenever possible; ints are much faster than Fractions."""
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return norm_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficient {c!r} is not an exact rational")


def exact_sqrt(x: Fraction) -> Fraction:
    x = Fraction(x)
    if x < 0:
        raise NonSquareBase(f"{x} has no rational square root")
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise NonSquareBase(f"{x} is not the square of a rational")
    return Fraction(rn, rd)


def _frac_str(e2: int) -> str:
    return str(Fraction(e2, DENOMINATOR))


class LaurentPolynomial:
    """Finite map monomial -> rational coefficient over a fixed :class:`VariableSet`.

    Values are immutable; all arithmetic returns new objects.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: VariableSet, terms=None, *, _trusted=False):
        self.vars = vars
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for k, c in (terms or {}).items():
                c = norm_coeff(c)
                if c:
                    clean[k] = c
            self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, vars):
        return cls(vars, {}, _trusted=True)

    @classmethod
    def constant(cls, vars, c=1):
        c = norm_coeff(c)
        return cls(vars, {0: c} if c else {}, _trusted=True)

    @classmethod
    def one(cls, vars):
        return cls(vars, {0: 1}, _trusted=True)

    @classmethod
    def var(cls, vars, name, exponent=1, coeff=1):
        return cls(vars, {vars.key_of(name, exponent): norm_coeff(coeff)}, _trusted=True)

    @classmethod
    def monomial(cls, vars, exps=None, coeff=1, *, key=None):
        """Monomial from ``{name: actual exponent}`` or from a packed key."""
        if key is None:
            key = vars.key_from_dict(exps or {})
        coeff = norm_coeff(coeff)
        return cls(vars, {key: coeff} if coeff else {}, _trusted=True)

    @classmethod
    def from_exponents(cls, vars, mapping):
        """From ``{stored exponent tuple: coeff}``."""
        out = {}
        for exps, c in mapping.items():
            k = vars.pack(exps)
            out[k] = out.get(k, 0) + c
        return cls(vars, out)

    def like(self, terms):
        return LaurentPolynomial(self.vars, terms)

    # basic queries ------------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self):
        return self.terms.get(0, 0)

    def coefficient(self, exps) -> Rational:
        if isinstance(exps, dict):
            key = self.vars.key_from_dict(exps)
        else:
            key = self.vars.pack(exps)
        return self.terms.get(key, 0)

    def items(self):
        """(Monomial, coeff) pairs in canonical lexicographic order."""
        for exps, c in self.sorted_terms():
            yield Monomial(exps), c

    def sorted_terms(self):
        unpack = self.vars.unpack
        return sorted((unpack(k), c) for k, c in self.terms.items())

    def rank(self):
        """Value at all variables equal to 1 (the dimension of a character)."""
        return norm_coeff(sum(self.terms.values(), 0))

    def exponent_spans(self):
        """Per variable (min, max) of stored exponents; None for the zero polynomial."""
        if not self.terms:
            return None
        vecs = [self.vars.unpack(k) for k in self.terms]
        return [(min(col), max(col)) for col in zip(*vecs)]

    def depends_on(self, name) -> bool:
        i = self.vars.index(name)
        return any(self.vars.unpack(k)[i] for k in self.terms)

    # arithmetic ---------------------------------------------------------
    def _check(self, other):
        if other.vars != self.vars:
            raise ValueError(f"variable sets differ: {self.vars.names} vs {other.vars.names}")

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            self._check(other)
            return other
        if isinstance(other, Rational):
            return LaurentPolynomial.constant(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = norm_coeff(v)
            else:
                out.pop(k, None)
        return LaurentPolynomial(self.vars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.vars, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = norm_coeff(c)
        if not c:
            return LaurentPolynomial.zero(self.vars)
        return LaurentPolynomial(
            self.vars, {k: norm_coeff(v * c) for k, v in self.terms.items()}, _trusted=True
        )

    def shift(self, key: int, c=1):
        """Multiply by the monomial ``c * m`` with packed key ``key``."""
        c = norm_coeff(c)
        if c == 1:
            return LaurentPolynomial(
                self.vars, {k + key: v for k, v in self.terms.items()}, _trusted=True
            )
        return LaurentPolynomial(
            self.vars, {k + key: norm_coeff(v * c) for k, v in self.terms.items()}, _trusted=True
        )

    def __mul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        if not a:
            return LaurentPolynomial.zero(self.vars)
        if len(a) == 1:
            (ka, ca), = a.items()
            return other.shift(ka, ca) if a is self.terms else self.shift(ka, ca)
        out = {}
        get = out.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return LaurentPolynomial(self.vars, out)

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise NonDivisible("negative power of a non-monomial")
            (k, c), = self.terms.items()
            return LaurentPolynomial(self.vars, {k * n: Fraction(1) / c ** (-n)})
        result = LaurentPolynomial.one(self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_divide(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Quotient ``q`` with ``q * other == self``; raises NonDivisible otherwise.

        The packed-key order is a total order compatible with multiplication,
        so ordinary leading-term division works on the Laurent ring.
        """
        self._check(other)
        if other.is_zero():
            raise NonDivisible("division by zero polynomial")
        if self.is_zero():
            return LaurentPolynomial.zero(self.vars)
        b = other.terms
        if len(b) == 1:
            (kb, cb), = b.items()
            return self.shift(-kb, Fraction(1) / cb)
        # per-variable min and max degrees are additive under multiplication,
        # which boxes in every quotient exponent
        lo_a, hi_a = zip(*self.exponent_spans())
        lo_b, hi_b = zip(*other.exponent_spans())
        lo = [x - y for x, y in zip(lo_a, lo_b)]
        hi = [x - y for x, y in zip(hi_a, hi_b)]
        if any(x > y for x, y in zip(lo, hi)):
            raise NonDivisible("exponent spans are incompatible")
        unpack = self.vars.unpack
        lead_b = max(b)
        lead_c = b[lead_b]
        lowest_q = min(self.terms) - min(b)
        r = dict(self.terms)
        q = {}
        # new remainder keys are always below the current lead, so a lazy
        # max-heap visits leads in decreasing order
        heap = [-k for k in r]
        heapq.heapify(heap)
        while r:
            lead_r = -heapq.heappop(heap)
            if lead_r not in r:
                continue
            kq = lead_r - lead_b
            if kq < lowest_q:
                raise NonDivisible("remainder does not vanish")
            if any(e < x or e > y for e, x, y in zip(unpack(kq), lo, hi)):
                raise NonDivisible("quotient leaves the exponent box")
            lr = r[lead_r]
            if type(lr) is int and type(lead_c) is int and lr % lead_c == 0:
                cq = lr // lead_c
            else:
                cq = norm_coeff(Fraction(lr) / lead_c)
            q[kq] = cq
            for k, c in b.items():
                kk = k + kq
                prev = r.get(kk)
                v = (prev or 0) - cq * c
                if v:
                    if prev is None:
                        heapq.heappush(heap, -kk)
                    r[kk] = v
                else:
                    del r[kk]
        return LaurentPolynomial(self.vars, q)

    def divides(self, other) -> bool:
        try:
            other.exact_divide(self)
        except NonDivisible:
            return False
        return True

    # involutions and substitutions -------------------------------------
    def bar(self):
        """Dual character: negate every exponent vector."""
        return LaurentPolynomial(self.vars, {-k: c for k, c in self.terms.items()}, _trusted=True)

    def adams(self, n: int):
        """psi_n: multiply every exponent by ``n``."""
        if n < 1:
            raise ValueError("Adams operation needs n >= 1")
        if n == 1:
            return self
        return LaurentPolynomial(self.vars, {k * n: c for k, c in self.terms.items()}, _trusted=True)

    def substitute(self, target: VariableSet, images: dict):
        """Monomial substitution into ``target``.

        ``images`` maps a source variable name to the image of the actual
        variable: a packed key or a coefficient-1 monomial over ``target``.
        Variables without an image must exist in ``target`` and map to
        themselves.  A half-integer power of an image needs the image's
        square root on the lattice.
        """
        keys = []
        for name in self.vars.names:
            img = images.get(name)
            if img is None:
                keys.append(target.key_of(name) if name in target.names else None)
            else:
                keys.append(_as_key(img, target))
        halves = {}
        out = {}
        for key, c in self.terms.items():
            new = 0
            for i, e in enumerate(self.vars.unpack(key)):
                if not e:
                    continue
                k = keys[i]
                if k is None:
                    raise KeyError(f"no image for variable {self.vars.names[i]}")
                if e % 2 == 0:
                    new += k * (e // 2)
                    continue
                if i not in halves:
                    exps = target.unpack(k)
                    if any(x % 2 for x in exps):
                        raise NonSquareBase(
                            f"image of {self.vars.names[i]} has no square root on the lattice"
                        )
                    halves[i] = target.pack([x // 2 for x in exps])
                new += halves[i] * e
            out[new] = out.get(new, 0) + c
        return LaurentPolynomial(target, out)

    def embed(self, target: VariableSet):
        """Same polynomial viewed over a larger variable set."""
        return self.substitute(target, {})

    def specialize(self, point: dict):
        """Substitute rational values for some variables (stay in the same ring)."""
        roots = _roots_for(self.vars, point)
        idx = [self.vars.index(n) for n in point]
        out = {}
        for key, c in self.terms.items():
            exps = list(self.vars.unpack(key))
            val = Fraction(c)
            for i in idx:
                e = exps[i]
                if e:
                    val *= _power(roots, self.vars.names[i], e, point)
                    exps[i] = 0
            k = self.vars.pack(exps)
            out[k] = out.get(k, 0) + val
        return LaurentPolynomial(self.vars, out)

    def evaluate(self, point: dict) -> Fraction:
        roots = _roots_for(self.vars, point)
        total = Fraction(0)
        names = self.vars.names
        for key, c in self.terms.items():
            val = Fraction(c)
            for name, e in zip(names, self.vars.unpack(key)):
                if e:
                    if name not in point:
                        raise KeyError(f"no value for variable {name}")
                    val *= _power(roots, name, e, point)
            total += val
        return total

    # comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, Rational):
            return self.terms == ({0: norm_coeff(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # serialization -----------------------------------------------------
    def to_string(self) -> str:
        if not self.terms:
            return "0"
        names = self.vars.names
        parts = []
        for exps, c in self.sorted_terms():
            piece = [str(Fraction(c))]
            for name, e in zip(names, exps):
                if e:
                    piece.append(f"{name}^({_frac_str(e)})")
            parts.append(" * ".join(piece))
        return " + ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"LaurentPolynomial({self.to_string()!r})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars.names),
            "terms": [
                {"e": list(exps), "c": f"{Fraction(c).numerator}/{Fraction(c).denominator}"}
                for exps, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPolynomial":
        vs = VariableSet(tuple(data["vars"]))
        return cls.from_exponents(
            vs, {tuple(t["e"]): Fraction(t["c"]) for t in data["terms"]}
        )

    @classmethod
    def parse(cls, vars: VariableSet, text: str) -> "LaurentPolynomial":
        return _parse(vars, text)


def _as_key(img, target):
    if isinstance(img, int):
        return img
    if isinstance(img, LaurentPolynomial):
        if img.vars != target or not img.is_monomial():
            raise ValueError("substitution image must be a monomial over the target variables")
        (k, c), = img.terms.items()
        if c != 1:
            raise ValueError("substitution image must have coefficient 1")
        return k
    raise TypeError(f"bad substitution image {img!r}")


def _roots_for(vs, point):
    roots = {}
    for name, value in point.items():
        value = Fraction(value)
        try:
            roots[name] = exact_sqrt(value)
        except NonSquareBase:
            roots[name] = None
    return roots


def _power(roots, name, e2, point):
    if e2 % 2 == 0:
        base = Fraction(point[name])
        if base == 0 and e2 < 0:
            raise PoleAtPoint(f"{name}=0 with negative exponent")
        return base ** (e2 // 2)
    r = roots[name]
    if r is None:
        raise NonSquareBase(f"{name}={point[name]} is not a rational square")
    if r == 0 and e2 < 0:
        raise PoleAtPoint(f"{name}=0 with negative exponent")
    return r ** e2


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()/]))")


def _parse(vs: VariableSet, text: str) -> LaurentPolynomial:
    """Parse the canonical grammar ``coef * v^(p/q) + ...`` and simple variants."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = m.end()
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind)))
                break
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def exponent():
        kind, val = peek()
        sign = 1
        if val == "(":
            take()
            if peek()[1] in "+-" and peek()[0] == "op":
                sign = -1 if take()[1] == "-" else 1
            kind, val = take()
            if kind != "num":
                raise ValueError("bad exponent")
            e = Fraction(val)
            if peek()[1] != ")":
                raise ValueError("unclosed exponent")
            take()
            return sign * e
        if val == "-":
            take()
            return -Fraction(take()[1])
        kind, val = take()
        if kind != "num":
            raise ValueError("bad exponent")
        return Fraction(val)

    result = LaurentPolynomial.zero(vs)
    sign = 1
    if peek()[1] in ("+", "-"):
        sign = -1 if take()[1] == "-" else 1
    while True:
        coeff = Fraction(sign)
        exps = {}
        while True:
            kind, val = take() if i < len(tokens) else (None, None)
            if kind == "num":
                coeff *= Fraction(val)
            elif kind == "name":
                e = Fraction(1)
                if peek()[1] == "^":
                    take()
                    e = exponent()
                exps[val] = exps.get(val, 0) + e
            else:
                raise ValueError(f"unexpected token {val!r} in {text!r}")
            if peek()[1] == "*":
                take()
                continue
            break
        result = result + LaurentPolynomial.monomial(vs, exps, coeff)
        if i >= len(tokens):
            return result
        kind, val = take()
        if val not in ("+", "-"):
            raise ValueError(f"unexpected token {val!r} in {text!r}")
        sign = -1 if val == "-" else 1
        if peek()[1] == "-":
            take()
            sign = -sign
