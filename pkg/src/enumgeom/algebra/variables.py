"""Variable sets and monomials on the doubled (half-integer) exponent lattice.

Exponents are stored as integers equal to twice the actual exponent, so
``t^(1/2)`` has stored exponent 1.  Internally a monomial is packed into a
single Python int in balanced base ``2**KEY_BITS``; packing is a group
homomorphism, so multiplying monomials is adding keys, inverting is negation
and the Adams operation is multiplication of the key by an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

KEY_BITS = 24
_BASE = 1 << KEY_BITS
_HALF = _BASE >> 1

DENOMINATOR = 2


class ExponentOverflow(ValueError):
    pass


@dataclass(frozen=True)
class VariableSet:
    names: tuple[str, ...]
    denominator: int = DENOMINATOR

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if self.denominator != DENOMINATOR:
            raise ValueError("only the doubled lattice (denominator 2) is supported")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}; have {self.names}") from None

    def pack(self, exponents) -> int:
        """Pack a vector of stored (doubled) exponents into a key."""
        exponents = tuple(exponents)
        if len(exponents) != len(self.names):
            raise ValueError(f"expected {len(self.names)} exponents, got {len(exponents)}")
        key = 0
        for e in reversed(exponents):
            if not -_HALF <= e < _HALF:
                raise ExponentOverflow(e)
            key = key * _BASE + e
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        out = []
        for _ in self.names:
            r = key % _BASE
            if r >= _HALF:
                r -= _BASE
            out.append(r)
            key = (key - r) >> KEY_BITS
        if key:
            raise ExponentOverflow("key out of range for this variable set")
        return tuple(out)

    def key_of(self, name: str, exponent=1) -> int:
        """Key of ``name**exponent``; exponent may be a half-integer."""
        e = Fraction(exponent) * DENOMINATOR
        if e.denominator != 1:
            raise ValueError(f"exponent {exponent} is not on the half-integer lattice")
        vec = [0] * len(self.names)
        vec[self.index(name)] = int(e)
        return self.pack(vec)

    def key_from_dict(self, exps: dict) -> int:
        vec = [0] * len(self.names)
        for name, e in exps.items():
            e2 = Fraction(e) * DENOMINATOR
            if e2.denominator != 1:
                raise ValueError(f"exponent {e} is not on the half-integer lattice")
            vec[self.index(name)] += int(e2)
        return self.pack(vec)


def variables(*names: str) -> VariableSet:
    if len(names) == 1 and not isinstance(names[0], str):
        names = tuple(names[0])
    return VariableSet(tuple(names))


@dataclass(frozen=True, order=True)
class Monomial:
    """A monomial as a vector of stored exponents (actual exponent = stored / 2)."""

    exponents: tuple[int, ...]

    @classmethod
    def from_key(cls, vs: VariableSet, key: int) -> "Monomial":
        return cls(vs.unpack(key))

    def key(self, vs: VariableSet) -> int:
        return vs.pack(self.exponents)

    def actual(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(e, DENOMINATOR) for e in self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if len(self.exponents) != len(other.exponents):
            raise ValueError("monomials over different variable counts")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def inverse(self) -> "Monomial":
        return Monomial(tuple(-e for e in self.exponents))

    def is_one(self) -> bool:
        return not any(self.exponents)
