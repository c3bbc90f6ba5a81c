"""Closed-form identity checks: the q-binomial theorem and the spinor / M-theory characters."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import FactoredRational, LaurentPolynomial, TruncatedSeries, variables
from .plethystic import check_order, pleth_exp

QBINOMIAL_MAX_ORDER = 12
QB_VARS = variables("t", "m")
FIVE = variables("t1", "t2", "t3", "t4", "t5")
FOUR = variables("t1", "t2", "t3", "t4")


@dataclass
class IdentityReport:
    name: str
    order: int
    lhs: object
    rhs: object
    verdict: bool
    first_mismatch: object = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        def ser(x):
            if isinstance(x, (TruncatedSeries, FactoredRational, LaurentPolynomial)):
                return x.to_json()
            return x

        return {
            "name": self.name,
            "order": self.order,
            "verdict": self.verdict,
            "first_mismatch": self.first_mismatch,
            "lhs": ser(self.lhs),
            "rhs": ser(self.rhs),
            "details": self.details,
        }


def _series_report(name, order, lhs, rhs, details=None):
    mismatch = lhs.first_mismatch(rhs)
    return IdentityReport(name, order, lhs, rhs, mismatch is None, mismatch, details or {})


# ---------------------------------------------------------------------------
# q-binomial


def _qb(name, e=1):
    return LaurentPolynomial.var(QB_VARS, name, e)


def _one_minus(p):
    return LaurentPolynomial.one(p.vars) - p


def qbinomial_sum_form(order: int, m_power: int = 1, t_shift: int = 1) -> TruncatedSeries:
    """``sum_n z^n prod_{i<=n} (1 - m t^(i + t_shift - 1)) / (1 - t^i)``.

    ``m_power``/``t_shift`` other than 1 give perturbed families for negative controls.
    """
    check_order(order, QBINOMIAL_MAX_ORDER)
    m, t = _qb("m", m_power), _qb("t")
    coeffs = [FactoredRational.one(QB_VARS)]
    for n in range(1, order + 1):
        step = FactoredRational.ratio(_one_minus(m * t ** (n + t_shift - 1)), _one_minus(t**n))
        coeffs.append(coeffs[-1] * step)
    return TruncatedSeries("z", order, coeffs)


def qbinomial_pleth_form(order: int) -> TruncatedSeries:
    """``S^.(z (1 - m t) / (1 - t))``."""
    check_order(order, QBINOMIAL_MAX_ORDER)
    base = FactoredRational.ratio(_one_minus(_qb("m") * _qb("t")), _one_minus(_qb("t")))
    zero = FactoredRational.zero(QB_VARS)
    return pleth_exp(TruncatedSeries("z", order, [zero, base]), order)


def qbinomial_product_form(order: int) -> TruncatedSeries:
    """``prod_{k>=0} (1 - z m t^(k+1)) / (1 - z t^k)`` through ``z^order``.

    Each family ``prod_k (1 - c z t^(a+k))`` has logarithm
    ``-sum_j (c z t^a)^j / (j (1 - t^j))`` after summing the geometric series
    over ``k``; the families are combined and exponentiated.
    """
    check_order(order, QBINOMIAL_MAX_ORDER)
    # (coefficient monomial c t^a, exponent sign) for numerator and denominator families
    families = [(_qb("m") * _qb("t"), 1), (LaurentPolynomial.one(QB_VARS), -1)]
    coeffs = [FactoredRational.zero(QB_VARS)]
    for j in range(1, order + 1):
        terms = []
        for lead, sign in families:
            terms.append(
                FactoredRational.ratio(lead**j, _one_minus(_qb("t", j))).scale(Fraction(-sign, j))
            )
        coeffs.append(terms[0] + terms[1])
    return TruncatedSeries("z", order, coeffs).exp()


def _specialize_series(s: TruncatedSeries, m_value) -> TruncatedSeries:
    """Substitute ``m = m_value`` coefficientwise (``m_value`` in {0, 1})."""
    vt = variables("t")

    def spec(c: FactoredRational):
        c = c.reduce()
        num = c.numerator().specialize({"m": Fraction(m_value)})
        den = c.denominator().specialize({"m": Fraction(m_value)})
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes at the specialization")
        drop = {"m": 0}
        return FactoredRational.ratio(num.substitute(vt, drop), den.substitute(vt, drop))

    return s.map(spec)


def qbinomial_check(order: int = 8) -> IdentityReport:
    """Sum form, plethystic form and product form agree pairwise through ``z^order``."""
    check_order(order, QBINOMIAL_MAX_ORDER)
    s, p, q = qbinomial_sum_form(order), qbinomial_pleth_form(order), qbinomial_product_form(order)
    pairs = {
        "sum=pleth": s.first_mismatch(p),
        "pleth=product": p.first_mismatch(q),
        "sum=product": s.first_mismatch(q),
    }
    details = {k: v is None for k, v in pairs.items()}
    bad = [v for v in pairs.values() if v is not None]
    return IdentityReport(
        "qbinomial", order, s, q, not bad, min(bad) if bad else None, details
    )


def qbinomial_specialization(order: int, m_value: int) -> IdentityReport:
    """``m = 0`` is Euler's identity; ``m = 1`` collapses both sides to ``1/(1 - z)``."""
    s = _specialize_series(qbinomial_sum_form(order), m_value)
    q = _specialize_series(qbinomial_product_form(order), m_value)
    return _series_report(f"qbinomial[m={m_value}]", order, s, q)


def _dilate(s: TruncatedSeries, mono: LaurentPolynomial) -> TruncatedSeries:
    """``f(z) -> f(mono * z)``."""
    return TruncatedSeries(s.var, s.order, [c * (mono**n) for n, c in enumerate(s.coeffs)])


def _times_linear(s: TruncatedSeries, c1: LaurentPolynomial) -> TruncatedSeries:
    """``(1 + c1 z) * f(z)``."""
    lin = [FactoredRational.one(s.vars), FactoredRational.from_poly(c1)]
    return s * TruncatedSeries(s.var, s.order, lin)


def qbinomial_difference_equation(order: int = 8, form: str = "sum", m_power: int = 1) -> IdentityReport:
    """``(1 - z) f(z) = (1 - z m t) f(t z)`` coefficientwise through ``z^order``."""
    check_order(order, QBINOMIAL_MAX_ORDER)
    if form == "sum":
        f = qbinomial_sum_form(order, m_power=m_power)
    elif form == "product":
        f = qbinomial_product_form(order)
    else:
        raise ValueError(f"unknown form {form!r}")
    one = LaurentPolynomial.one(QB_VARS)
    lhs = _times_linear(f, -one)
    rhs = _times_linear(_dilate(f, _qb("t")), -(_qb("m") * _qb("t")))
    return _series_report(f"qbinomial-diff[{form}]", order, lhs, rhs)


# ---------------------------------------------------------------------------
# spinors and the M-theory characters


def spinor_characters():
    """``(S+, S-)``: sums of ``t^eps`` over ``eps in {+-1/2}^5`` with an even / odd number of minus signs."""
    plus, minus = {}, {}
    for signs in product((1, -1), repeat=5):
        key = FIVE.pack(signs)  # stored exponents are doubled, so +-1 means +-1/2
        target = plus if signs.count(-1) % 2 == 0 else minus
        target[key] = 1
    return LaurentPolynomial(FIVE, plus), LaurentPolynomial(FIVE, minus)


def spinor_difference_formula() -> LaurentPolynomial:
    """``(t1...t5)^(1/2) prod (1 - 1/t_i)``."""
    acc = LaurentPolynomial.monomial(FIVE, key=FIVE.pack([1] * 5))
    one = LaurentPolynomial.one(FIVE)
    for name in FIVE.names:
        acc = acc * (one - LaurentPolynomial.var(FIVE, name, -1))
    return acc


def spinor_check() -> IdentityReport:
    sp, sm = spinor_characters()
    diff = sp - sm
    target = spinor_difference_formula()
    details = {
        "terms": [len(sp.terms), len(sm.terms)],
        "dims": [int(sp.rank()), int(sm.rank())],
        "dual": sp.bar() == sm,
    }
    verdict = diff == target and details["dual"] and details["terms"] == [16, 16]
    return IdentityReport("spinor", 0, diff, target, verdict, None if verdict else "difference", details)


def sym_square(v: LaurentPolynomial) -> LaurentPolynomial:
    return (v * v + v.adams(2)).scale(Fraction(1, 2))


def ext_square(v: LaurentPolynomial) -> LaurentPolynomial:
    return (v * v - v.adams(2)).scale(Fraction(1, 2))


def ext_cube(v: LaurentPolynomial) -> LaurentPolynomial:
    # Newton: e3 = (p1^3 - 3 p1 p2 + 2 p3) / 6
    return (v * v * v - (v * v.adams(2)).scale(3) + v.adams(3).scale(2)).scale(Fraction(1, 6))


def vector_character(vs=FIVE) -> LaurentPolynomial:
    acc = LaurentPolynomial.zero(vs)
    for name in vs.names:
        acc = acc + LaurentPolynomial.var(vs, name) + LaurentPolynomial.var(vs, name, -1)
    return acc


def m_characters():
    """``(M+, M-)`` as the literal signed sum of the field table."""
    v = vector_character()
    one = LaurentPolynomial.one(FIVE)
    sp, sm = spinor_characters()
    bosons = (sym_square(v) - one) - v + ext_cube(v) - ext_square(v) + v - one
    out = []
    for s, s_other in ((sp, sm), (sm, sp)):
        rarita = v * s - s_other
        out.append(bosons - rarita + s)
    return tuple(out)


def restrict_to_sl(p: LaurentPolynomial, branch: int = 1) -> LaurentPolynomial:
    """Impose ``t1...t5 = 1`` via ``t5 = (t1 t2 t3 t4)^-1`` with ``(t1...t5)^(1/2) = branch``."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    idx = FIVE.index("t5")
    signed = {}
    for k, c in p.terms.items():
        odd = FIVE.unpack(k)[idx] % 2
        signed[k] = -c if (odd and branch == -1) else c
    image = FOUR.pack([-2] * 4)
    return LaurentPolynomial(FIVE, signed).substitute(FOUR, {"t5": image})


W_CONVENTIONS = ("dual", "literal")


def isotropic_character(convention: str = "dual") -> LaurentPolynomial:
    """Character of the isotropic half ``W`` of ``V``.

    ``dual`` takes weights ``t_i^-1`` (the torus acting on coordinate
    functions); ``literal`` takes ``t_i``.  With the spinor labels pinned by
    the ``S+ - S-`` product formula only ``dual`` satisfies the ``M+/M-``
    identities; ``literal`` yields them with ``M+`` and ``M-`` exchanged.
    """
    if convention not in W_CONVENTIONS:
        raise ValueError(f"convention must be one of {W_CONVENTIONS}")
    e = -1 if convention == "dual" else 1
    acc = LaurentPolynomial.zero(FIVE)
    for name in FIVE.names:
        acc = acc + LaurentPolynomial.var(FIVE, name, e)
    return acc


def mtheory_identity_check(branch: int = 1, convention: str = "dual") -> IdentityReport:
    """``M+ = -W Lambda(W)`` and ``M- = W* Lambda(W)`` on the SL locus."""
    mp, mm = m_characters()
    one = LaurentPolynomial.one(FIVE)
    w = isotropic_character(convention)
    lam = one
    for k in w.terms:
        lam = lam * (one - LaurentPolynomial.monomial(FIVE, key=k))
    targets = (-(w * lam), w.bar() * lam)
    lhs = tuple(restrict_to_sl(x, branch) for x in (mp, mm))
    rhs = tuple(restrict_to_sl(x, 1) for x in targets)
    ok = [a == b for a, b in zip(lhs, rhs)]
    details = {"M+": ok[0], "M-": ok[1], "branch": branch, "convention": convention}
    mismatch = None if all(ok) else ("M+" if not ok[0] else "M-")
    return IdentityReport("mtheory", 0, lhs[0], rhs[0], all(ok), mismatch, details)


def plethysm_sanity() -> bool:
    """``S^2 V + Lambda^2 V = V^2``."""
    v = vector_character()
    return sym_square(v) + ext_square(v) == v * v
