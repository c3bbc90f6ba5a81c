"""Vertex operators on the partition basis and the diagonal transfer matrix
for plane partitions.

The diagonal slices of a plane partition shrink by horizontal strips away
from the main diagonal, so the weighted count is a vacuum matrix element of

    Gamma_+ q_{-M}^|.| ... Gamma_+ q_{-1}^|.| Gamma_+ q_0^|.| Gamma_- q_1^|.| ... q_M^|.| Gamma_-

applied to the empty partition.  Lemma: a plane partition with at most N
boxes only touches diagonals ``|i2 - i1| <= N - 1``, so the window
``M = N - 1`` is exact through total degree N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import LaurentPolynomial, TruncatedSeries, VariableSet, variables
from .errors import BoundExceeded, WindowTooSmall
from .partitions import Partition, diagonal_weight, enumerate_plane_partitions
from .plethystic import pleth_exp

GRADING = "g"
REFINED_MAX_CUTOFF = 8


@dataclass
class FockVector:
    """Finite combination of partitions; sizes above ``cutoff`` are dropped."""

    vars: VariableSet
    cutoff: int
    amplitudes: dict = field(default_factory=dict)
    dropped: bool = False

    @classmethod
    def vacuum(cls, vars, cutoff):
        return cls(vars, cutoff, {Partition(): LaurentPolynomial.one(vars)})

    @classmethod
    def basis(cls, vars, cutoff, lam: Partition):
        return cls(vars, cutoff, {lam: LaurentPolynomial.one(vars)})

    def coefficient(self, lam: Partition) -> LaurentPolynomial:
        return self.amplitudes.get(lam, LaurentPolynomial.zero(self.vars))

    def _add(self, out, lam, amp):
        if lam.size > self.cutoff:
            self.dropped = True
            return
        prev = out.get(lam)
        new = amp if prev is None else prev + amp
        if new.is_zero():
            out.pop(lam, None)
        else:
            out[lam] = new

    def pair(self, other: "FockVector") -> LaurentPolynomial:
        """Bilinear pairing making the partition basis orthonormal."""
        total = LaurentPolynomial.zero(self.vars)
        for lam, a in self.amplitudes.items():
            b = other.amplitudes.get(lam)
            if b is not None:
                total = total + a * b
        return total

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys)


def strips_above(lam: Partition, cutoff: int):
    """Partitions ``mu`` with ``mu`` interlacing over ``lam`` and ``|mu| <= cutoff``."""
    n = len(lam)
    budget = cutoff - lam.size
    if budget < 0:
        return
    # mu_1 >= lam_1, lam_i >= mu_(i+1) >= lam_(i+1), mu_(n+1) <= lam_n
    ranges = [(lam.part(i), lam.part(i - 1) if i else None) for i in range(n + 1)]

    def rec(i, acc, left):
        if i == len(ranges):
            yield Partition(tuple(p for p in acc if p))
            return
        lo, hi = ranges[i]
        top = lo + left if hi is None else min(hi, lo + left)
        for p in range(lo, top + 1):
            yield from rec(i + 1, acc + [p], left - (p - lo))

    yield from rec(0, [], budget)


def strips_below(lam: Partition):
    """Partitions ``mu`` with ``lam`` interlacing over ``mu``."""
    n = len(lam)
    ranges = [(lam.part(i + 1), lam.part(i)) for i in range(n)]

    def rec(i, acc):
        if i == n:
            yield Partition(tuple(p for p in acc if p))
            return
        lo, hi = ranges[i]
        for p in range(lo, hi + 1):
            yield from rec(i + 1, acc + [p])

    yield from rec(0, [])


def _powers(marker, n):
    out = [LaurentPolynomial.one(marker.vars)]
    for _ in range(n):
        out.append(out[-1] * marker)
    return out


def _marker(vs, z):
    if isinstance(z, LaurentPolynomial):
        return z
    return LaurentPolynomial.constant(vs, z)


def gamma_minus(v: FockVector, z) -> FockVector:
    """``s_lam -> sum over mu above lam of z^(|mu| - |lam|) s_mu``."""
    z = _marker(v.vars, z)
    pw = _powers(z, v.cutoff)
    out = FockVector(v.vars, v.cutoff, {}, v.dropped)
    for lam, amp in v.amplitudes.items():
        for mu in strips_above(lam, v.cutoff):
            out._add(out.amplitudes, mu, amp * pw[mu.size - lam.size])
    # a nonzero marker always sends some strip past the cutoff; those terms
    # carry marker degree > cutoff, so they never reach a grading <= cutoff
    if v.amplitudes and not z.is_zero():
        out.dropped = True
    return out


def gamma_plus(v: FockVector, z) -> FockVector:
    """Transpose of :func:`gamma_minus`."""
    z = _marker(v.vars, z)
    pw = _powers(z, v.cutoff)
    out = FockVector(v.vars, v.cutoff, {}, v.dropped)
    for lam, amp in v.amplitudes.items():
        for mu in strips_below(lam):
            out._add(out.amplitudes, mu, amp * pw[lam.size - mu.size])
    return out


def energy_conjugate(v: FockVector, q) -> FockVector:
    """``s_lam -> q^|lam| s_lam``."""
    q = _marker(v.vars, q)
    pw = _powers(q, v.cutoff)
    return FockVector(
        v.vars, v.cutoff, {lam: amp * pw[lam.size] for lam, amp in v.amplitudes.items()}, v.dropped
    )


# ---------------------------------------------------------------------------
# diagonal specifications


@dataclass(frozen=True)
class DiagonalSpec:
    """Weights ``q_d`` for diagonals ``-window <= d <= window``."""

    vars: VariableSet
    window: int
    assignment: dict

    def weight(self, d: int) -> LaurentPolynomial:
        return self.assignment[d]


def _diag_name(d: int) -> str:
    return f"q{d}" if d >= 0 else f"qm{-d}"


def generic_spec(window: int) -> DiagonalSpec:
    names = [_diag_name(d) for d in range(-window, window + 1)]
    vs = variables(*names)
    return DiagonalSpec(
        vs, window, {d: LaurentPolynomial.var(vs, _diag_name(d)) for d in range(-window, window + 1)}
    )


def macmahon_spec(window: int) -> DiagonalSpec:
    vs = variables("q")
    q = LaurentPolynomial.var(vs, "q")
    return DiagonalSpec(vs, window, {d: q for d in range(-window, window + 1)})


def refined_spec(window: int) -> DiagonalSpec:
    """``q_d = z k^(1/2)`` for ``d >= 0`` and ``z k^(-1/2)`` for ``d < 0``."""
    vs = variables("k", "z")
    up = LaurentPolynomial.monomial(vs, {"k": Fraction(1, 2), "z": 1})
    down = LaurentPolynomial.monomial(vs, {"k": Fraction(-1, 2), "z": 1})
    return DiagonalSpec(vs, window, {d: up if d >= 0 else down for d in range(-window, window + 1)})


def spec_named(name: str, cutoff: int) -> DiagonalSpec:
    window = max(cutoff - 1, 0)
    return {"macmahon": macmahon_spec, "refined": refined_spec, "generic": generic_spec}[name](window)


def _graded(spec: DiagonalSpec):
    gv = variables(*spec.vars.names, GRADING)
    g = LaurentPolynomial.var(gv, GRADING)
    weights = {d: spec.weight(d).embed(gv) * g for d in spec.assignment}
    return gv, weights


def _check_window(spec, cutoff):
    if spec.window < cutoff - 1:
        raise WindowTooSmall(f"window {spec.window} cannot reach diagonals of size-{cutoff} stacks")


def transfer_operators(spec: DiagonalSpec, weights):
    """Operators in application order, starting from the vacuum."""
    m = spec.window
    ops = []
    for d in range(m, -1, -1):
        ops.append(("minus", None))
        ops.append(("energy", weights[d]))
    for d in range(-1, -m - 1, -1):
        ops.append(("plus", None))
        ops.append(("energy", weights[d]))
    ops.append(("plus", None))
    return ops


def _apply(op, v):
    kind, arg = op
    if kind == "minus":
        return gamma_minus(v, 1)
    if kind == "plus":
        return gamma_plus(v, 1)
    return energy_conjugate(v, arg)


def _truncate_grading(v: FockVector, cutoff: int) -> FockVector:
    vs = v.vars
    idx = vs.index(GRADING)
    amps = {}
    for lam, amp in v.amplitudes.items():
        kept = LaurentPolynomial(vs, {k: c for k, c in amp.terms.items() if vs.unpack(k)[idx] <= 2 * cutoff})
        if not kept.is_zero():
            amps[lam] = kept
    return FockVector(vs, v.cutoff, amps, v.dropped)


def or_formula_lhs(spec: DiagonalSpec, cutoff: int, fold: str = "right") -> TruncatedSeries:
    """Vacuum matrix element of the windowed transfer product, graded by box count.

    ``fold="right"`` applies operators to the vacuum ket; ``fold="left"``
    applies the transposed operators to the vacuum bra.
    """
    _check_window(spec, cutoff)
    gv, weights = _graded(spec)
    ops = transfer_operators(spec, weights)
    if fold == "right":
        v = FockVector.vacuum(gv, cutoff)
        for op in ops:
            v = _truncate_grading(_apply(op, v), cutoff)
    elif fold == "left":
        transposed = {"minus": "plus", "plus": "minus", "energy": "energy"}
        v = FockVector.vacuum(gv, cutoff)
        for kind, arg in reversed(ops):
            v = _truncate_grading(_apply((transposed[kind], arg), v), cutoff)
    else:
        raise ValueError(f"unknown fold {fold!r}")
    amp = v.coefficient(Partition())
    return TruncatedSeries.from_laurent(amp, GRADING, cutoff, spec.vars)


def brute_force_sum(spec: DiagonalSpec, cutoff: int) -> TruncatedSeries:
    _check_window(spec, cutoff)
    one = LaurentPolynomial.one(spec.vars)
    coeffs = []
    for n in range(cutoff + 1):
        total = LaurentPolynomial.zero(spec.vars)
        for pi in enumerate_plane_partitions(n):
            total = total + diagonal_weight(pi, spec.assignment) * one
        coeffs.append(total)
    return TruncatedSeries(GRADING, cutoff, coeffs)


def or_formula_rhs(spec: DiagonalSpec, cutoff: int) -> TruncatedSeries:
    """``S^. sum_{a <= 0 <= b} q_a ... q_b`` inside the window, graded by ``b - a + 1``."""
    _check_window(spec, cutoff)
    vs = spec.vars
    coeffs = [LaurentPolynomial.zero(vs) for _ in range(cutoff + 1)]
    m = spec.window
    for a in range(-m, 1):
        for b in range(0, m + 1):
            length = b - a + 1
            if length > cutoff:
                continue
            prod = LaurentPolynomial.one(vs)
            for d in range(a, b + 1):
                prod = prod * spec.weight(d)
            coeffs[length] = coeffs[length] + prod
    return pleth_exp(TruncatedSeries(GRADING, cutoff, coeffs), cutoff)


def refined_target(cutoff: int) -> TruncatedSeries:
    """``S^.( k^(1/2) z / ((1 - k^(1/2) z)(1 - k^(-1/2) z)) )`` graded by powers of ``z``."""
    vs = variables("k", "z")
    coeffs = [LaurentPolynomial.zero(vs)]
    for n in range(1, cutoff + 1):
        # k^(1/2) z * h_(n-1)(k^(1/2), k^(-1/2)) z^(n-1)
        terms = {}
        for j in range(n):
            e = Fraction(1, 2) + Fraction(n - 1, 2) - j
            terms[vs.key_from_dict({"k": e, "z": n})] = 1
        coeffs.append(LaurentPolynomial(vs, terms))
    return pleth_exp(TruncatedSeries(GRADING, cutoff, coeffs), cutoff)


def refined_vertex_check(cutoff: int, perturb: bool = False) -> bool:
    if cutoff > REFINED_MAX_CUTOFF:
        raise BoundExceeded(f"cutoff {cutoff} exceeds {REFINED_MAX_CUTOFF}")
    spec = refined_spec(max(cutoff - 1, 0))
    if perturb:
        assignment = dict(spec.assignment)
        assignment[0] = assignment[0] * LaurentPolynomial.var(spec.vars, "k")
        spec = DiagonalSpec(spec.vars, spec.window, assignment)
    return or_formula_lhs(spec, cutoff).equals(refined_target(cutoff))
