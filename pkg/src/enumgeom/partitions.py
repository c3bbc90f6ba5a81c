"""Partitions, plane partitions and their diagram characters.

Boxes are 0-based.  A partition box ``(i, j)`` has ``i`` indexing rows (the
``t1`` direction) and ``0 <= j < parts[i]``.  A plane-partition box
``(i1, i2, i3)`` has ``i3 < heights[(i1, i2)]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import LaurentPolynomial, VariableSet
from .errors import BoxOutsideDiagram, MissingDiagonalVariable, SizeLimitExceeded

MAX_PARTITION_SIZE = 30
MAX_PLANE_PARTITION_SIZE = 12


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"{parts} is not a partition")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def part(self, i: int) -> int:
        return self.parts[i] if i < len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def boxes(self):
        for i, p in enumerate(self.parts):
            for j in range(p):
                yield (i, j)

    def contains(self, box) -> bool:
        i, j = box
        return i >= 0 and j >= 0 and j < self.part(i)

    def to_json(self):
        return list(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def arm(lam: Partition, box) -> int:
    if not lam.contains(box):
        raise BoxOutsideDiagram(f"{box} is not in {lam}")
    i, j = box
    return lam.part(i) - j - 1


def leg(lam: Partition, box) -> int:
    if not lam.contains(box):
        raise BoxOutsideDiagram(f"{box} is not in {lam}")
    i, j = box
    return lam.conjugate().part(j) - i - 1


def _check_size(n, limit):
    if n < 0 or n > limit:
        raise SizeLimitExceeded(f"size {n} outside [0, {limit}]")


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``n``, lexicographically increasing."""
    _check_size(n, MAX_PARTITION_SIZE)
    return [Partition(p) for p in sorted(_partitions(n, n))]


@dataclass(frozen=True)
class PlanePartition:
    """Heights stored as a row-major matrix with no empty rows or zero entries."""

    rows: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows if r)
        for r in rows:
            if any(h <= 0 for h in r) or any(a < b for a, b in zip(r, r[1:])):
                raise ValueError(f"row {r} is not weakly decreasing and positive")
        for upper, lower in zip(rows, rows[1:]):
            if len(lower) > len(upper) or any(b > a for a, b in zip(upper, lower)):
                raise ValueError("columns are not weakly decreasing")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_heights(cls, heights: dict) -> "PlanePartition":
        if not heights:
            return cls()
        n_rows = max(i for i, _ in heights) + 1
        rows = []
        for i in range(n_rows):
            width = max((j + 1 for (a, j), h in heights.items() if a == i and h > 0), default=0)
            rows.append(tuple(heights.get((i, j), 0) for j in range(width)))
        return cls(tuple(rows))

    @classmethod
    def from_boxes(cls, boxes) -> "PlanePartition":
        heights = {}
        for i1, i2, _ in boxes:
            heights[(i1, i2)] = heights.get((i1, i2), 0) + 1
        return cls.from_heights(heights)

    @property
    def heights(self) -> dict:
        return {(i, j): h for i, r in enumerate(self.rows) for j, h in enumerate(r)}

    @property
    def size(self) -> int:
        return sum(sum(r) for r in self.rows)

    def boxes(self):
        for i, r in enumerate(self.rows):
            for j, h in enumerate(r):
                for k in range(h):
                    yield (i, j, k)

    def permute_axes(self, perm) -> "PlanePartition":
        """Box ``b`` goes to ``(b[perm[0]], b[perm[1]], b[perm[2]])``."""
        return PlanePartition.from_boxes(tuple(b[p] for p in perm) for b in self.boxes())

    def is_valid(self) -> bool:
        try:
            PlanePartition(self.rows)
        except ValueError:
            return False
        return True

    def to_json(self):
        return [list(r) for r in self.rows]

    def __str__(self):
        return "[" + ";".join(",".join(map(str, r)) for r in self.rows) + "]"


def _fill(rows, remaining, i, j, out):
    """Row-major depth-first fill bounded by the entry above and to the left."""
    if remaining == 0:
        out.append(PlanePartition(tuple(tuple(r) for r in rows)))
        return
    above = rows[i - 1][j] if i > 0 and j < len(rows[i - 1]) else (remaining if i == 0 else 0)
    left = rows[i][j - 1] if j > 0 else remaining
    cap = min(above, left, remaining)
    if cap > 0:
        rows[i].append(0)
        for h in range(cap, 0, -1):
            rows[i][j] = h
            _fill(rows, remaining - h, i, j + 1, out)
        rows[i].pop()
    # close the current row and start the next one
    if j > 0:
        rows.append([])
        _fill(rows, remaining, i + 1, 0, out)
        rows.pop()


def enumerate_plane_partitions(n: int) -> list[PlanePartition]:
    """All plane partitions of ``n`` ordered by their row-major height matrices."""
    _check_size(n, MAX_PLANE_PARTITION_SIZE)
    out = []
    _fill([[]], n, 0, 0, out)
    return sorted(out, key=lambda p: p.rows)


def interlaces(mu: Partition, lam: Partition) -> bool:
    """``mu_1 >= lam_1 >= mu_2 >= lam_2 >= ...``"""
    n = max(len(mu), len(lam)) + 1
    for i in range(n):
        if not mu.part(i) >= lam.part(i) >= mu.part(i + 1):
            return False
    return True


def char_diagram(shape, vs: VariableSet, names=("t1", "t2", "t3")) -> LaurentPolynomial:
    """``sum over boxes of t1^-i * t2^-j (* t3^-k)``."""
    terms = {}
    keys = [vs.key_of(n) for n in names]
    for box in shape.boxes():
        k = -sum(c * key for c, key in zip(box, keys))
        terms[k] = terms.get(k, 0) + 1
    return LaurentPolynomial(vs, terms)


def diagonal_index(box) -> int:
    return box[1] - box[0]


def diagonal_weight(pi: PlanePartition, weights: dict):
    """``prod over boxes of weights[i2 - i1]``; the empty product is the integer 1."""
    acc = 1
    for box in pi.boxes():
        d = diagonal_index(box)
        if d not in weights:
            raise MissingDiagonalVariable(f"no weight for diagonal {d}")
        acc = weights[d] * acc
    return acc
