"""Fixed-point characters and localization series for Hilbert schemes of points.

Conventions: the torus scales the coordinate functions of C^d with characters
``t_i^-1``, so the ring of functions has character ``1 / prod(1 - t_i^-1)``
and the tangent space at the origin is ``sum t_i``.  The diagram character of
a monomial ideal is ``V = sum t1^-i t2^-j (t3^-k)``.

All signs of the threefold series live in :func:`c3_fixed_point_terms`: the
coefficient of ``z^n`` is ``sum over |pi| = n`` of ``(-1)^n * ahat(Tvir_pi)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import (
    FactoredRational,
    LaurentPolynomial,
    TruncatedSeries,
    expand_in_cone,
    fsum,
    identity_holds,
    variables,
)
from .errors import (
    EpsilonPoleRemains,
    PoleAtPoint,
    SizeLimitExceeded,
    TrivialWeightInTvir,
)
from .partitions import (
    Partition,
    PlanePartition,
    arm,
    char_diagram,
    enumerate_partitions,
    enumerate_plane_partitions,
    leg,
)
from .plethystic import aroof, check_order, pleth_exp, pleth_log, sym_alg

SURFACE = variables("t1", "t2")
SURFACE_M = variables("t1", "t2", "m")
THREEFOLD = variables("t1", "t2", "t3")
THREEFOLD_Z = variables("t1", "t2", "t3", "z")
COHOMOLOGY = variables("s1", "s2", "s3")

C3_MAX_ORDER = 6
NEKRASOV_MAX_ORDER = 8
STAR_MAX_ORDER = 4
HILB2_MAX_ORDER = 6
COH_MAX_ORDER = 3


def _t(vs, name, e=1):
    return LaurentPolynomial.var(vs, name, e)


def _kappa(vs=THREEFOLD):
    return LaurentPolynomial.monomial(vs, {"t1": 1, "t2": 1, "t3": 1})


def _sqrt_kappa(vs, sign=1):
    h = Fraction(sign, 2)
    return LaurentPolynomial.monomial(vs, {"t1": h, "t2": h, "t3": h})


@dataclass(frozen=True)
class TangentCharacter:
    value: LaurentPolynomial
    source: str


# ---------------------------------------------------------------------------
# surfaces


def tangent_c2_closed(lam: Partition, vs=SURFACE) -> TangentCharacter:
    one = LaurentPolynomial.one(vs)
    t1, t2 = _t(vs, "t1"), _t(vs, "t2")
    v = char_diagram(lam, vs, ("t1", "t2"))
    vb = v.bar()
    value = v + vb * t1 * t2 - v * vb * (one - t1) * (one - t2)
    return TangentCharacter(value, "closed_form")


def tangent_c2_armleg(lam: Partition, vs=SURFACE) -> TangentCharacter:
    terms = {}
    k1, k2 = vs.key_of("t1"), vs.key_of("t2")
    for box in lam.boxes():
        a, l = arm(lam, box), leg(lam, box)
        for k in (-l * k1 + (a + 1) * k2, (l + 1) * k1 - a * k2):
            terms[k] = terms.get(k, 0) + 1
    return TangentCharacter(LaurentPolynomial(vs, terms), "arm_leg")


def _omega_weight(tangent: LaurentPolynomial, vs=SURFACE_M) -> FactoredRational:
    """``prod over tangent weights w of (1 - m/w) / (1 - 1/w)``."""
    one = LaurentPolynomial.one(vs)
    m = _t(vs, "m")
    out = FactoredRational.one(vs)
    for k, c in tangent.terms.items():
        w_inv = LaurentPolynomial(vs, {-k: 1})
        out = out * FactoredRational.from_poly(one - m * w_inv, c)
        out = out * FactoredRational.from_poly(one - w_inv, -c)
    return out


def hilb_c2_fixed_point_terms(n: int) -> list[FactoredRational]:
    out = []
    for lam in enumerate_partitions(n):
        tangent = tangent_c2_closed(lam).value.substitute(SURFACE_M, {})
        out.append(_omega_weight(tangent))
    return out


def z_series_hilb_c2(order: int) -> TruncatedSeries:
    """Localization series ``sum_lam z^|lam| prod_w (1 - m/w)/(1 - 1/w)``."""
    check_order(order, HILB2_MAX_ORDER)
    coeffs = [fsum(hilb_c2_fixed_point_terms(n), vars=SURFACE_M) for n in range(order + 1)]
    return TruncatedSeries("z", order, coeffs)


def hilb_c2_closed_form(order: int) -> TruncatedSeries:
    """``S^.( z (1 - m/t1)(1 - m/t2) / ((1 - 1/t1)(1 - 1/t2)(1 - m z)) )``."""
    check_order(order, HILB2_MAX_ORDER)
    vs = SURFACE_M
    vz = variables("t1", "t2", "m", "z")
    one = LaurentPolynomial.one(vs)
    m = _t(vs, "m")
    ti = [_t(vs, "t1", -1), _t(vs, "t2", -1)]
    base = FactoredRational.from_factors(
        vs,
        [(one - m * ti[0], 1), (one - m * ti[1], 1), (one - ti[0], -1), (one - ti[1], -1)],
    )
    onez = LaurentPolynomial.one(vz)
    zpart = FactoredRational.ratio(_t(vz, "z"), onez - _t(vz, "m") * _t(vz, "z"))
    zser = TruncatedSeries.from_laurent(expand_in_cone(zpart, {"z": "0"}, order), "z", order, vs)
    return pleth_exp(zser.to_factored() * base, order)


# ---------------------------------------------------------------------------
# threefolds


def _tvir_closed(v: LaurentPolynomial) -> LaurentPolynomial:
    vs = v.vars
    one = LaurentPolynomial.one(vs)
    p = (one - _t(vs, "t1")) * (one - _t(vs, "t2")) * (one - _t(vs, "t3"))
    vb = v.bar()
    return v - _kappa(vs) * vb - v * vb * p


def _tvir_free(v: LaurentPolynomial) -> LaurentPolynomial:
    """Half ``T = (t1 + t2 + t3 - 1) V* V + V``, then ``T - kappa * T*``."""
    vs = v.vars
    one = LaurentPolynomial.one(vs)
    half = (_t(vs, "t1") + _t(vs, "t2") + _t(vs, "t3") - one) * v.bar() * v + v
    return half - _kappa(vs) * half.bar()


def virtual_tangent_c3(pi: PlanePartition, route: str = "closed_form") -> TangentCharacter:
    v = char_diagram(pi, THREEFOLD)
    if route == "closed_form":
        value = _tvir_closed(v)
    elif route == "hilb_free":
        value = _tvir_free(v)
    else:
        raise ValueError(f"unknown route {route!r}")
    if value.constant_term():
        raise TrivialWeightInTvir(f"trivial weight in the virtual tangent space at {pi}")
    return TangentCharacter(value, route)


@dataclass(frozen=True)
class LocalizationWeight:
    fixed_point: PlanePartition
    ovir: FactoredRational
    ohat: FactoredRational


def localization_weights(pi: PlanePartition) -> LocalizationWeight:
    tvir = virtual_tangent_c3(pi).value
    ovir = sym_alg(tvir.bar()) if not tvir.is_zero() else FactoredRational.one(THREEFOLD)
    ohat = aroof(tvir, TrivialWeightInTvir).scale((-1) ** pi.size)
    return LocalizationWeight(pi, ovir, ohat)


def c3_fixed_point_terms(n: int) -> list[FactoredRational]:
    """Per-fixed-point contributions to the ``z^n`` coefficient."""
    return [localization_weights(pi).ohat for pi in enumerate_plane_partitions(n)]


def z_series_c3(order: int) -> TruncatedSeries:
    check_order(order, C3_MAX_ORDER)
    coeffs = [fsum(c3_fixed_point_terms(n), vars=THREEFOLD) for n in range(order + 1)]
    return TruncatedSeries("z", order, coeffs)


def point_class() -> FactoredRational:
    """``ahat(t1 + t2 + t3 - t1 t2 - t1 t3 - t2 t3)``."""
    vs = THREEFOLD
    t1, t2, t3 = (_t(vs, n) for n in vs.names)
    return aroof(t1 + t2 + t3 - t1 * t2 - t1 * t3 - t2 * t3)


def nekrasov_z_factor(order: int) -> TruncatedSeries:
    """``ahat(t4 + t5)`` with ``t4 = z kappa^-1/2`` and ``t5 = 1/(z kappa^1/2)``, expanded at ``z = 0``."""
    vz = THREEFOLD_Z
    z = _t(vz, "z")
    t4 = z * _sqrt_kappa(vz, -1)
    t5 = (z * _sqrt_kappa(vz, 1)).bar()
    expanded = expand_in_cone(aroof(t4 + t5), {"z": "0"}, order)
    return TruncatedSeries.from_laurent(expanded, "z", order, THREEFOLD)


def nekrasov_rhs(order: int) -> TruncatedSeries:
    check_order(order, NEKRASOV_MAX_ORDER)
    g = nekrasov_z_factor(order).to_factored() * point_class()
    return pleth_exp(g, order)


@dataclass(frozen=True)
class SeriesVerdict:
    name: str
    order: int
    lhs: TruncatedSeries
    rhs: TruncatedSeries
    verdict: bool
    first_mismatch: int | None


def nekrasov_check(order: int, threshold=None, rng=None) -> SeriesVerdict:
    """Compare per-fixed-point sums against the plethystic side, coefficientwise."""
    check_order(order, C3_MAX_ORDER)
    rhs = nekrasov_rhs(order)
    lhs_coeffs = []
    mismatch = None
    for n in range(order + 1):
        terms = c3_fixed_point_terms(n)
        if mismatch is None and not identity_holds(terms, [rhs[n]], threshold=threshold, rng=rng):
            mismatch = n
        lhs_coeffs.append(fsum(terms, vars=THREEFOLD))
    lhs = TruncatedSeries("z", order, lhs_coeffs)
    return SeriesVerdict("nekrasov", order, lhs, rhs, mismatch is None, mismatch)


def star_extract(order: int) -> TruncatedSeries:
    """Plethystic logarithm of the threefold series divided by the point class."""
    from .errors import NonPolynomialStar, NonDivisible

    check_order(order, STAR_MAX_ORDER)
    chi = pleth_log(z_series_c3(order), order).series
    inv = point_class().inverse()
    vk = variables("k")
    out = []
    for c in chi.coeffs:
        try:
            lp = (c * inv).reduce().to_laurent()
        except NonDivisible:
            raise NonPolynomialStar(f"coefficient {c} is not a multiple of the point class") from None
        out.append(_to_kappa(lp, vk))
    return TruncatedSeries("z", order, out)


def _to_kappa(p: LaurentPolynomial, vk) -> LaurentPolynomial:
    """Rewrite a polynomial in powers of ``t1 t2 t3`` as one in ``k``."""
    from .errors import NonPolynomialStar

    terms = {}
    for key, c in p.terms.items():
        e1, e2, e3 = p.vars.unpack(key)
        if not e1 == e2 == e3:
            raise NonPolynomialStar("coefficient depends on more than t1 t2 t3")
        terms[vk.pack([e1])] = c
    return LaurentPolynomial(vk, terms)


def star_closed_form(order: int) -> TruncatedSeries:
    """``-z / ((1 - k^1/2 z)(1 - k^-1/2 z))`` expanded at ``z = 0``."""
    vk = variables("k")
    vkz = variables("k", "z")
    one = LaurentPolynomial.one(vkz)
    z = _t(vkz, "z")
    r = FactoredRational.from_factors(
        vkz,
        [(z, 1), (one - _t(vkz, "k", Fraction(1, 2)) * z, -1), (one - _t(vkz, "k", Fraction(-1, 2)) * z, -1)],
        coeff=-1,
    )
    return TruncatedSeries.from_laurent(expand_in_cone(r, {"z": "0"}, order), "z", order, vk)


# ---------------------------------------------------------------------------
# rigidity


def _square_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(2, 97), rng.randint(1, 97)) ** 2


def rigidity_vanish_check(pi: PlanePartition, trials: int = 20, rng=None, on_locus=True) -> bool:
    """Evaluate ``ohat(pi)`` at random points with ``t2 = 1/t1`` and test for zero."""
    if pi.size == 0:
        raise ValueError("rigidity needs a nonempty plane partition")
    rng = rng or random.Random(0)
    weight = localization_weights(pi).ohat
    zeros = 0
    attempts = 0
    while zeros < trials:
        attempts += 1
        if attempts > 50 * trials:
            raise PoleAtPoint("could not find points avoiding the poles")
        a, c = _square_rational(rng), _square_rational(rng)
        b = 1 / a if on_locus else _square_rational(rng)
        try:
            value = weight.evaluate({"t1": a, "t2": b, "t3": c})
        except PoleAtPoint:
            continue
        if value != 0:
            return False
        zeros += 1
    return True


# ---------------------------------------------------------------------------
# projective spaces


def chi_projective_space(n: int, k: int) -> LaurentPolynomial:
    """``chi(P^n, O(k))`` by localization at the ``n + 1`` coordinate points.

    The coordinate ``x_j`` has character ``t_j^-1``; at the point ``p_i`` the
    fiber of ``O(k)`` is ``t_i^-k`` and the tangent weights are ``t_j / t_i``.
    """
    if n < 0 or n > 6 or abs(k) > 20:
        raise SizeLimitExceeded("need 0 <= n <= 6 and |k| <= 20")
    vs = variables(*(f"t{i}" for i in range(n + 1)))
    one = LaurentPolynomial.one(vs)
    terms = []
    for i in range(n + 1):
        ti = vs.names[i]
        w = FactoredRational(vs, 1, vs.key_of(ti, -k))
        for j in range(n + 1):
            if j != i:
                ratio = LaurentPolynomial.monomial(vs, {ti: 1, vs.names[j]: -1})
                w = w * FactoredRational.from_poly(one - ratio, -1)
        terms.append(w)
    return fsum(terms, vars=vs).to_laurent()


def projective_dimension_expected(n: int, k: int) -> int:
    if k >= 0:
        return comb(n + k, n)
    if k >= -n:
        return 0
    return (-1) ** n * comb(-k - 1, n)


# ---------------------------------------------------------------------------
# cohomological limit


def _inv_sinh_series(order: int) -> list[Fraction]:
    """Coefficients of ``x / (e^(x/2) - e^(-x/2))`` up to ``x^order``."""
    # (e^(x/2) - e^(-x/2)) / x = sum x^(2j) / (4^j (2j+1)!)
    from math import factorial

    base = [Fraction(0)] * (order + 1)
    for j in range(0, order // 2 + 1):
        base[2 * j] = Fraction(1, 4**j * factorial(2 * j + 1))
    inv = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        inv[n] = -sum(base[i] * inv[n - i] for i in range(1, n + 1))
    return inv


def _linear_form(key, vs) -> LaurentPolynomial:
    """``t^mu -> mu . s`` with ``s`` the cohomological variables."""
    terms = {}
    for e, name in zip(vs.unpack(key), COHOMOLOGY.names):
        if e:
            terms[COHOMOLOGY.key_of(name)] = Fraction(e, 2)
    return LaurentPolynomial(COHOMOLOGY, terms)


def epsilon_expansion(tvir: LaurentPolynomial, order: int):
    """``ahat(tvir)`` at ``t_i = exp(eps s_i)`` as ``(valuation, prefactor, series)``.

    ``ahat(w) = (eps L)^-1 * f(eps L)`` with ``f(x) = x / (e^(x/2) - e^(-x/2))``
    and ``L`` the linear form of ``w``.
    """
    f = _inv_sinh_series(order)
    valuation = 0
    prefactor = FactoredRational.one(COHOMOLOGY)
    one = LaurentPolynomial.one(COHOMOLOGY)
    series = TruncatedSeries("eps", order, [one])
    for key, c in tvir.terms.items():
        c = int(c)
        lin = _linear_form(key, tvir.vars)
        if lin.is_zero():
            raise EpsilonPoleRemains("trivial weight has no cohomological limit")
        valuation -= c
        prefactor = prefactor * FactoredRational.from_poly(lin, -c)
        powers = [one]
        for _ in range(order):
            powers.append(powers[-1] * lin)
        fl = TruncatedSeries("eps", order, [powers[j].scale(f[j]) for j in range(order + 1)])
        if c < 0:
            fl = fl.reciprocal()
        for _ in range(abs(c)):
            series = series * fl
    return valuation, prefactor, series


class _OrderTooSmall(Exception):
    pass


def epsilon_limit_term(n: int, order: int) -> FactoredRational:
    """``eps^0`` part of the ``z^n`` coefficient; negative powers must cancel."""
    by_power = {}
    for pi in enumerate_plane_partitions(n):
        tvir = virtual_tangent_c3(pi).value
        valuation, prefactor, series = epsilon_expansion(tvir, order)
        if -valuation > order:
            raise _OrderTooSmall
        sign = (-1) ** n
        for j in range(0, -valuation + 1):
            term = prefactor * series[j].scale(sign)
            by_power.setdefault(valuation + j, []).append(term)
    vs = COHOMOLOGY
    for power in sorted(by_power):
        if power < 0 and not identity_holds(by_power[power], []):
            raise EpsilonPoleRemains(f"eps^{power} term survives at z^{n}")
    return fsum(by_power.get(0, []), vars=vs)


def epsilon_limit(n: int) -> FactoredRational:
    """Raise the eps-order from ``3n + 2`` until two successive increases agree."""
    order = 3 * n + 2
    current = None
    stable = 0
    while stable < 2:
        try:
            nxt = epsilon_limit_term(n, order)
        except _OrderTooSmall:
            nxt = None
        if nxt is not None and current is not None and nxt.equals(current):
            stable += 1
        else:
            stable = 0
        current = nxt
        order += 1
    return current


def _log_macmahon(order: int) -> list[Fraction]:
    """Coefficients of ``log prod (1 - z^k)^-k``: ``sigma_2(n) / n``."""
    out = [Fraction(0)]
    for n in range(1, order + 1):
        out.append(Fraction(sum(d * d for d in range(1, n + 1) if n % d == 0), n))
    return out


@dataclass(frozen=True)
class CohomologicalLimit:
    exponent: FactoredRational
    limits: list
    predicted: list
    verdict: bool


def cohomological_limit_check(order: int) -> CohomologicalLimit:
    """Check ``sum E_n z^n = M(z)^E`` with ``E = E_1`` and ``M`` the MacMahon function."""
    check_order(order, COH_MAX_ORDER)
    limits = [epsilon_limit(n) for n in range(order + 1)]
    vs = COHOMOLOGY
    exponent = limits[1] if order >= 1 else FactoredRational.zero(vs)
    logm = _log_macmahon(order)
    gen = TruncatedSeries(
        "z", order, [FactoredRational.zero(vs)] + [exponent.scale(c) for c in logm[1:]]
    )
    predicted = gen.exp().coeffs
    verdict = all(a.equals(b) for a, b in zip(limits, predicted))
    return CohomologicalLimit(exponent, limits, predicted, verdict)
