"""K-theoretic stable envelopes of the cotangent bundle of P^1 and the R-matrix they define.

Conventions.  The torus acts on the base C^2 with weights ``a1, a2`` and
scales the symplectic form by ``h``.  Fixed points ``p1, p2`` are the two
coordinate lines, and ``O(1)`` restricts to ``a_i^-1`` at ``p_i``.  Every
restriction is homogeneous of degree zero in ``a1, a2``, so fixed-point
matrices live in the ring of ``u = a1/a2`` and ``h``.  Chamber ``+`` sends
``u -> 0``; chamber ``-`` sends ``u -> oo``.  Matrix entry ``(i, j)`` is the
envelope of ``p_j`` restricted to ``p_i``.

Two independent constructions are provided: the explicit classes in
``explicit_classes`` and ``solve_envelope``, which rebuilds the matrix from the
normalization, support and degree conditions alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import FactoredRational, LaurentPolynomial, fsum, identity_holds, variables
from .errors import BasisOrderMismatch, EnumGeomError

CLASS_VARS = variables("a1", "a2", "h")
MATRIX_VARS = variables("u", "h")
YB_VARS = variables("u1", "u2", "u3", "h")
POINTS = ("p1", "p2")


def _cv(name, e=1):
    return LaurentPolynomial.var(CLASS_VARS, name, e)


def _mv(name, e=1):
    return LaurentPolynomial.var(MATRIX_VARS, name, e)


# ---------------------------------------------------------------------------
# classes and restriction


@dataclass(frozen=True)
class KClassTP1:
    """``coeffs[0] + coeffs[1] * O(1) + ...`` with Laurent coefficients in a1, a2, h."""

    coeffs: tuple

    def __post_init__(self):
        for c in self.coeffs:
            if c.vars != CLASS_VARS:
                raise ValueError("coefficients must be over (a1, a2, h)")

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return max(nz, default=0)

    @classmethod
    def constant(cls, c=1):
        return cls((LaurentPolynomial.constant(CLASS_VARS, c),))


def restrict_class(c: KClassTP1, point: str) -> LaurentPolynomial:
    """Substitute ``O(1) = a_i^-1`` at ``p_i``."""
    if point not in POINTS:
        raise ValueError(f"unknown fixed point {point!r}")
    o1 = _cv("a1" if point == "p1" else "a2", -1)
    acc = LaurentPolynomial.zero(CLASS_VARS)
    power = LaurentPolynomial.one(CLASS_VARS)
    for coeff in c.coeffs:
        acc = acc + coeff * power
        power = power * o1
    return acc


def _to_matrix_ring(p: LaurentPolynomial) -> LaurentPolynomial:
    for key in p.terms:
        e1, e2, _ = CLASS_VARS.unpack(key)
        if e1 + e2 != 0:
            raise ValueError("restriction is not homogeneous of degree zero in a1, a2")
    return p.substitute(MATRIX_VARS, {"a1": MATRIX_VARS.key_of("u"), "a2": 0})


def explicit_classes(chamber: str) -> dict:
    """The explicit envelope classes, polarization by cotangent directions, slope O(-eps)."""
    one = LaurentPolynomial.one(CLASS_VARS)
    zero = LaurentPolynomial.zero(CLASS_VARS)
    root_h = _cv("h", Fraction(1, 2))
    h = _cv("h")
    if chamber == "+":
        return {
            "p1": KClassTP1((root_h, -(_cv("a2") * root_h))),
            "p2": KClassTP1((one, -(h * _cv("a1")))),
        }
    if chamber == "-":
        return {
            "p1": KClassTP1((one, -(h * _cv("a2")))),
            "p2": KClassTP1((root_h, -(_cv("a1") * root_h))),
        }
    raise ValueError(f"chamber must be '+' or '-', got {chamber!r}")


# ---------------------------------------------------------------------------
# fixed-point matrices


class FixedPointMatrix:
    """Square matrix of FactoredRationals with row and column labels."""

    def __init__(self, rows, labels=None):
        self.rows = [list(r) for r in rows]
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")
        self.vars = self.rows[0][0].vars
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(n))

    @property
    def size(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def identity(cls, vs, n, labels=None):
        return cls(
            [[FactoredRational.one(vs) if i == j else FactoredRational.zero(vs) for j in range(n)]
             for i in range(n)],
            labels,
        )

    @classmethod
    def from_laurent(cls, rows, labels=None):
        return cls([[FactoredRational.from_poly(p) for p in r] for r in rows], labels)

    def __matmul__(self, other: "FixedPointMatrix") -> "FixedPointMatrix":
        n = self.size
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                terms = [self.rows[i][k] * other.rows[k][j] for k in range(n)
                         if not self.rows[i][k].is_zero() and not other.rows[k][j].is_zero()]
                row.append(fsum(terms, vars=self.vars) if terms else FactoredRational.zero(self.vars))
            out.append(row)
        return FixedPointMatrix(out, self.labels)

    def transpose(self):
        n = self.size
        return FixedPointMatrix([[self.rows[j][i] for j in range(n)] for i in range(n)], self.labels)

    def map(self, fn):
        return FixedPointMatrix([[fn(x) for x in r] for r in self.rows], self.labels)

    def determinant(self) -> FactoredRational:
        if self.size != 2:
            raise ValueError("determinant is implemented for 2x2 matrices")
        (a, b), (c, d) = self.rows
        return fsum([a * d, -(b * c)], vars=self.vars)

    def inverse(self) -> "FixedPointMatrix":
        if self.size != 2:
            raise ValueError("inverse is implemented for 2x2 matrices")
        det = self.determinant()
        if det.is_zero():
            raise ZeroDivisionError("singular matrix")
        (a, b), (c, d) = self.rows
        inv = det.inverse()
        return FixedPointMatrix([[d * inv, -(b * inv)], [-(c * inv), a * inv]], self.labels)

    def equals(self, other: "FixedPointMatrix") -> bool:
        if self.size != other.size:
            return False
        return all(
            identity_holds([x], [y]) for rx, ry in zip(self.rows, other.rows) for x, y in zip(rx, ry)
        )

    def is_identity(self) -> bool:
        return self.equals(FixedPointMatrix.identity(self.vars, self.size, self.labels))

    def to_strings(self):
        return [[x.reduce().to_string() for x in r] for r in self.rows]

    def to_json(self):
        return {"labels": list(self.labels), "entries": self.to_strings()}


def block_diagonal(blocks) -> FixedPointMatrix:
    vs = blocks[0].vars
    n = sum(b.size for b in blocks)
    rows = [[FactoredRational.zero(vs) for _ in range(n)] for _ in range(n)]
    at = 0
    for b in blocks:
        for i in range(b.size):
            for j in range(b.size):
                rows[at + i][at + j] = b.rows[i][j]
        at += b.size
    return FixedPointMatrix(rows)


def kron(a: FixedPointMatrix, b: FixedPointMatrix) -> FixedPointMatrix:
    n, m = a.size, b.size
    rows = []
    for i in range(n * m):
        row = []
        for j in range(n * m):
            x, y = a.rows[i // m][j // m], b.rows[i % m][j % m]
            row.append(FactoredRational.zero(a.vars) if x.is_zero() or y.is_zero() else x * y)
        rows.append(row)
    return FixedPointMatrix(rows)


def permutation_matrix(vs, perm) -> FixedPointMatrix:
    """Matrix sending basis vector ``j`` to ``perm[j]``."""
    n = len(perm)
    rows = [[FactoredRational.zero(vs) for _ in range(n)] for _ in range(n)]
    for j, i in enumerate(perm):
        rows[i][j] = FactoredRational.one(vs)
    return FixedPointMatrix(rows)


# ---------------------------------------------------------------------------
# the two constructions


def stab_matrix(chamber: str) -> FixedPointMatrix:
    """Restriction matrix of the explicit classes; column j is the envelope of p_j."""
    classes = explicit_classes(chamber)
    rows = [
        [_to_matrix_ring(restrict_class(classes[pj], pi)) for pj in POINTS]
        for pi in POINTS
    ]
    return FixedPointMatrix.from_laurent(rows, POINTS)


@dataclass(frozen=True)
class FixedPointData:
    """Tangent weights and slope weight at a fixed point, as monomials in u and h."""

    tangent: tuple  # base direction, fiber direction
    slope_exponent: Fraction  # u-exponent of the slope line bundle per unit eps


def _fixed_point_data() -> dict:
    # base tangent at p1 is a2/a1, at p2 it is a1/a2; the fiber has weight h^-1 / base
    u, h = MATRIX_VARS.key_of("u"), MATRIX_VARS.key_of("h")
    return {
        "p1": FixedPointData((-u, -h + u), Fraction(1)),
        "p2": FixedPointData((u, -h - u), Fraction(0)),
    }


def _u_exponent(key) -> Fraction:
    return Fraction(MATRIX_VARS.unpack(key)[0], 2)


def _attracting(key, chamber) -> bool:
    e = _u_exponent(key)
    if e == 0:
        raise ValueError("tangent weight is fixed by the chamber")
    return e > 0 if chamber == "+" else e < 0


def _polarization(point, polarization) -> int:
    base, fiber = _fixed_point_data()[point].tangent
    if polarization == "cotangent":
        return fiber
    if polarization == "tangent":
        return base
    raise ValueError(f"unknown polarization {polarization!r}")


def envelope_diagonal(point, chamber, polarization="cotangent", *, twist=True) -> LaurentPolynomial:
    """``(-1)^rk(T^1/2 attracting) (det N_- / det T^1/2)^(1/2) Lambda(N_-^dual)``.

    ``twist=False`` drops the square-root factor (negative control).
    """
    weights = _fixed_point_data()[point].tangent
    repelling = [w for w in weights if not _attracting(w, chamber)]
    half = _polarization(point, polarization)
    one = LaurentPolynomial.one(MATRIX_VARS)
    out = one
    for w in repelling:
        out = out * (one - LaurentPolynomial.monomial(MATRIX_VARS, key=-w))
    if twist:
        exps = MATRIX_VARS.unpack(sum(repelling) - half)
        if any(e % 2 for e in exps):
            raise ValueError("square root leaves the exponent lattice")
        out = out.shift(MATRIX_VARS.pack([e // 2 for e in exps]))
    if _attracting(half, chamber):
        out = -out
    return out


def attraction_order(chamber) -> dict:
    """``{p: points strictly below p}``; the base direction at p decides."""
    data = _fixed_point_data()
    below = {}
    for p, other in (("p1", "p2"), ("p2", "p1")):
        below[p] = (other,) if _attracting(data[p].tangent[0], chamber) else ()
    return below


def solve_envelope(chamber, polarization="cotangent", slope_sign=1, eps=Fraction(1, 2),
                   *, twist=True) -> FixedPointMatrix:
    """Envelope matrix from normalization, support and the degree window.

    Off-diagonal entries must agree with the diagonal of their column modulo
    ``1 - u`` (the restriction of a class) and have u-degrees in an open
    window of width one, which leaves exactly one monomial multiple of the
    diagonal at ``u = 1``.
    """
    eps = Fraction(eps)
    data = _fixed_point_data()
    below = attraction_order(chamber)
    entries = {}
    for j, pj in enumerate(POINTS):
        entries[(j, j)] = envelope_diagonal(pj, chamber, polarization, twist=twist)
    for j, pj in enumerate(POINTS):
        for i, pi in enumerate(POINTS):
            if i == j:
                continue
            if pi not in below[pj]:
                entries[(i, j)] = LaurentPolynomial.zero(MATRIX_VARS)
                continue
            lo, hi = _u_span(entries[(i, i)])
            shift = slope_sign * eps * (data[pi].slope_exponent - data[pj].slope_exponent)
            window = (lo + shift, hi + shift)
            ks = [k for k in range(int(window[0]) - 1, int(window[1]) + 2) if window[0] < k < window[1]]
            if len(ks) != 1:
                raise EnumGeomError(f"degree window {window} does not pin the entry")
            at_one = entries[(j, j)].specialize({"u": Fraction(1)})
            entries[(i, j)] = at_one.shift(MATRIX_VARS.key_of("u", ks[0]))
    rows = [[entries[(i, j)] for j in range(2)] for i in range(2)]
    return FixedPointMatrix.from_laurent(rows, POINTS)


def _u_span(p: LaurentPolynomial):
    es = [_u_exponent(k) for k in p.terms]
    return min(es), max(es)


# ---------------------------------------------------------------------------
# R-matrix


def displayed_r_matrix() -> FixedPointMatrix:
    u, h = _mv("u"), _mv("h")
    one = LaurentPolynomial.one(MATRIX_VARS)
    root_h = _mv("h", Fraction(1, 2))
    diag = FactoredRational.ratio(root_h * (one - u), h - u)
    return FixedPointMatrix(
        [
            [diag, FactoredRational.ratio(u * (one - h), u - h)],
            [FactoredRational.ratio(one - h, u - h), diag],
        ],
        POINTS,
    )


def r_matrix() -> FixedPointMatrix:
    """``Stab_-^-1 Stab_+`` from the explicit classes."""
    m = stab_matrix("-").inverse() @ stab_matrix("+")
    return m.map(lambda x: x.reduce())


def _substitute_u(m: FixedPointMatrix, target, image_key) -> FixedPointMatrix:
    images = {"u": image_key}
    return m.map(lambda x: x.substitute(target, images))


def r_check_matrix(r: FixedPointMatrix, middle="default") -> FixedPointMatrix:
    """4x4 operator on basis e1e1, e1e2, e2e1, e2e2 with R on the middle block."""
    vs = r.vars
    one = FixedPointMatrix.identity(vs, 1)
    block = r
    if middle == "swapped":
        p = permutation_matrix(vs, (1, 0))
        block = p @ r @ p
    elif middle != "default":
        raise ValueError(f"unknown middle ordering {middle!r}")
    return block_diagonal([one, block, one])


def unitarity_check(r: FixedPointMatrix | None = None) -> bool:
    """``R12(u) R21(1/u) = 1`` with ``R21 = P R(1/u) P``."""
    r = r_matrix() if r is None else r
    vs = r.vars
    inv_u = r.map(lambda x: x.substitute(vs, {"u": -vs.key_of("u")}))
    big = r_check_matrix(r)
    p = permutation_matrix(vs, (0, 2, 1, 3))
    r21 = p @ r_check_matrix(inv_u) @ p
    return (big @ r21).is_identity()


def _three_site(r4: FixedPointMatrix, sites) -> FixedPointMatrix:
    vs = r4.vars
    eye = FixedPointMatrix.identity(vs, 2)
    if sites == (1, 2):
        return kron(r4, eye)
    if sites == (2, 3):
        return kron(eye, r4)
    if sites == (1, 3):
        # conjugate R12 by the swap of tensor factors 2 and 3
        perm = [((i >> 2) << 2) | ((i & 1) << 1) | ((i >> 1) & 1) for i in range(8)]
        p = permutation_matrix(vs, perm)
        return p @ kron(r4, eye) @ p
    raise ValueError(f"bad sites {sites}")


def _yb_holds(r: FixedPointMatrix, middle) -> bool:
    keys = {n: YB_VARS.key_of(n) for n in ("u1", "u2", "u3")}

    def at(a, b):
        return r_check_matrix(_substitute_u(r, YB_VARS, keys[a] - keys[b]), middle)

    r12 = _three_site(at("u1", "u2"), (1, 2))
    r13 = _three_site(at("u1", "u3"), (1, 3))
    r23 = _three_site(at("u2", "u3"), (2, 3))
    return (r12 @ r13 @ r23).equals(r23 @ r13 @ r12)


def yang_baxter_check(r: FixedPointMatrix | None = None) -> dict:
    """Yang-Baxter with spectral parameter as an exact 8x8 identity.

    Returns ``{"verdict": True, "ordering": ...}``; raises BasisOrderMismatch
    when neither middle-block ordering satisfies the equation.
    """
    r = r_matrix() if r is None else r
    for middle in ("default", "swapped"):
        if _yb_holds(r, middle):
            return {"verdict": True, "ordering": middle}
    raise BasisOrderMismatch("Yang-Baxter fails for both middle-block orderings")


# ---------------------------------------------------------------------------
# axioms


def degree_axiom_check(eps, chambers=("+", "-")) -> bool:
    """Strict Newton-interval containment for every nonzero off-diagonal entry."""
    eps = Fraction(eps)
    data = _fixed_point_data()
    for chamber in chambers:
        m = stab_matrix(chamber)
        for i, pi in enumerate(POINTS):
            for j, pj in enumerate(POINTS):
                if i == j or m[i, j].is_zero():
                    continue
                lo, hi = _u_span(m[i, j].to_laurent())
                dlo, dhi = _u_span(m[i, i].to_laurent())
                off = (lo + eps * data[pj].slope_exponent, hi + eps * data[pj].slope_exponent)
                diag = (dlo + eps * data[pi].slope_exponent, dhi + eps * data[pi].slope_exponent)
                if not (diag[0] < off[0] and off[1] < diag[1]):
                    return False
    return True


def localization_pairing() -> FixedPointMatrix:
    """``diag(1 / Lambda(T_p^dual))`` over the fixed points."""
    vs = MATRIX_VARS
    one = LaurentPolynomial.one(vs)
    rows = [[FactoredRational.zero(vs)] * 2 for _ in range(2)]
    for i, p in enumerate(POINTS):
        acc = FactoredRational.one(vs)
        for w in _fixed_point_data()[p].tangent:
            acc = acc * FactoredRational.from_poly(one - LaurentPolynomial.monomial(vs, key=-w), -1)
        rows[i][i] = acc
    return FixedPointMatrix(rows, POINTS)


def opposite_envelope(*, twist=True) -> FixedPointMatrix:
    """Opposite chamber, opposite polarization, opposite slope."""
    return solve_envelope("-", "tangent", slope_sign=-1, twist=twist)


def diagonal_decomposition_check(*, twist=True) -> bool:
    """``Stab_opp^T . pairing . Stab_+ = 1``; ``twist=False`` is the negative control."""
    m = opposite_envelope(twist=twist).transpose() @ localization_pairing() @ stab_matrix("+")
    return m.is_identity()
