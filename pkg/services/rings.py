"""Exact coefficient rings for the matrix cloning systems."""
import random
import re
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Iterable, List, Optional

from services.errors import ElementParseError, SystemMismatchError

Scalar = Any


class ExactRing(ABC):
    name: str = "ring"
    finite: bool = False

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    @abstractmethod
    def coerce(self, value) -> Scalar:
        """Bring an int, Fraction or ring value into canonical form."""

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return self.coerce(a + b)

    def neg(self, a: Scalar) -> Scalar:
        return self.coerce(-a)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return self.coerce(a - b)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return self.coerce(a * b)

    def eq(self, a: Scalar, b: Scalar) -> bool:
        return self.coerce(a) == self.coerce(b)

    @abstractmethod
    def is_unit(self, a: Scalar) -> bool:
        """Whether a is invertible."""

    @abstractmethod
    def unit_inverse(self, a: Scalar) -> Scalar:
        """Inverse of a unit."""

    def elements(self) -> List[Scalar]:
        raise SystemMismatchError(f"Ring {self.name} is infinite")

    def units(self) -> List[Scalar]:
        raise SystemMismatchError(f"Ring {self.name} has infinitely many units")

    def size(self) -> Optional[int]:
        return None

    def unit_count(self) -> Optional[int]:
        return None

    @abstractmethod
    def random_element(self, rng: random.Random) -> Scalar:
        """A random ring element (small height for infinite rings)."""

    @abstractmethod
    def random_unit(self, rng: random.Random) -> Scalar:
        """A random unit."""

    def serialize(self, a: Scalar) -> str:
        return str(self.coerce(a))

    def parse(self, text: str) -> Scalar:
        try:
            return self.coerce(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ElementParseError(f"Invalid {self.name} entry {text!r}: {e}")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class IntegerRing(ExactRing):
    name = "Z"

    def coerce(self, value) -> int:
        value = Fraction(value)
        if value.denominator != 1:
            raise ValueError(f"{value} is not an integer")
        return int(value)

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def unit_inverse(self, a) -> int:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit of Z")
        return a

    def random_element(self, rng: random.Random) -> int:
        return rng.randint(-3, 3)

    def random_unit(self, rng: random.Random) -> int:
        return rng.choice((1, -1))


class RationalField(ExactRing):
    name = "Q"

    def coerce(self, value) -> Fraction:
        return Fraction(value)

    def is_unit(self, a) -> bool:
        return a != 0

    def unit_inverse(self, a) -> Fraction:
        return 1 / Fraction(a)

    def random_element(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))

    def random_unit(self, rng: random.Random) -> Fraction:
        value = self.random_element(rng)
        return value if value != 0 else Fraction(1)


class LocalizedIntegers(ExactRing):
    """Z[1/p]: rationals whose denominator is a power of p."""

    def __init__(self, p: int):
        if p < 2:
            raise SystemMismatchError(f"Z[1/p] needs p >= 2, got {p}")
        self.p = p
        self.name = f"Z[1/p]:{p}"

    def coerce(self, value) -> Fraction:
        value = Fraction(value)
        denominator = value.denominator
        while denominator % self.p == 0:
            denominator //= self.p
        if denominator != 1:
            raise ValueError(f"{value} is not in Z[1/{self.p}]")
        return value

    def _p_free(self, value: int) -> int:
        value = abs(value)
        while value and value % self.p == 0:
            value //= self.p
        return value

    def is_unit(self, a) -> bool:
        a = Fraction(a)
        return a != 0 and self._p_free(a.numerator) == 1

    def unit_inverse(self, a) -> Fraction:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit of Z[1/{self.p}]")
        return 1 / Fraction(a)

    def random_element(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-4, 4), self.p ** rng.randint(0, 2))

    def random_unit(self, rng: random.Random) -> Fraction:
        return Fraction(rng.choice((1, -1))) * Fraction(self.p) ** rng.randint(-2, 2)


class PrimeField(ExactRing):
    finite = True

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise SystemMismatchError(f"F_p needs a prime p, got {p}")
        self.p = p
        self.name = f"F{p}"

    def coerce(self, value) -> int:
        value = Fraction(value)
        return (value.numerator * pow(value.denominator, -1, self.p)) % self.p

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def unit_inverse(self, a) -> int:
        return pow(a, -1, self.p)

    def elements(self) -> List[int]:
        return list(range(self.p))

    def units(self) -> List[int]:
        return list(range(1, self.p))

    def size(self) -> int:
        return self.p

    def unit_count(self) -> int:
        return self.p - 1

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def random_unit(self, rng: random.Random) -> int:
        return rng.randrange(1, self.p)


_RING_PATTERNS = [
    (re.compile(r"^Z$"), lambda m: IntegerRing()),
    (re.compile(r"^Q$"), lambda m: RationalField()),
    (re.compile(r"^Z\[1/p\]:(\d+)$"), lambda m: LocalizedIntegers(int(m.group(1)))),
    (re.compile(r"^Z\[1/(\d+)\]$"), lambda m: LocalizedIntegers(int(m.group(1)))),
    (re.compile(r"^Fp:(\d+)$"), lambda m: PrimeField(int(m.group(1)))),
    (re.compile(r"^F(\d+)$"), lambda m: PrimeField(int(m.group(1)))),
    (re.compile(r"^GF\((\d+)\)$"), lambda m: PrimeField(int(m.group(1)))),
]


def ring_from_name(name: str) -> ExactRing:
    """Build a ring from 'Z', 'Q', 'Z[1/p]:p', 'Fp:p' or the shorthands 'F2', 'Z[1/3]'."""
    text = name.strip()
    for pattern, build in _RING_PATTERNS:
        match = pattern.match(text)
        if match:
            return build(match)
    raise SystemMismatchError(f"Unknown ring: {name!r}")


def ring_names() -> Iterable[str]:
    return ("Z", "Q", "Z[1/p]:p", "Fp:p")
