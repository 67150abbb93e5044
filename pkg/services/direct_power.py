"""
Direct powers G_n = H^n of a finite base group.

Cloning duplicates a coordinate. The iota variant instead clones by plain
inclusion; it satisfies the cloning axioms but is not properly graded and
serves as a negative example for that check.
"""
import logging
import random
import re
from abc import ABC, abstractmethod
from itertools import permutations, product
from math import factorial
from typing import Any, Iterator, List, Optional, Tuple

from services.cloning import CloningSystem, Permutation
from services.errors import ElementParseError, SystemMismatchError

logger = logging.getLogger(__name__)


class BaseGroup(ABC):
    name: str = "H"
    separator: str = ","

    @abstractmethod
    def identity(self) -> Any: ...

    @abstractmethod
    def mul(self, a, b) -> Any: ...

    @abstractmethod
    def inv(self, a) -> Any: ...

    @abstractmethod
    def elements(self) -> List[Any]: ...

    @abstractmethod
    def generators(self) -> List[Any]: ...

    @abstractmethod
    def serialize(self, a) -> str: ...

    @abstractmethod
    def parse(self, text: str) -> Any: ...

    def order(self) -> int:
        return len(self.elements())

    def random_element(self, rng: random.Random):
        return rng.choice(self.elements())


class CyclicGroup(BaseGroup):
    """Z/m written additively."""

    def __init__(self, m: int):
        if m < 1:
            raise SystemMismatchError(f"Z/m needs m >= 1, got {m}")
        self.m = m
        self.name = f"Z/{m}"

    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.m

    def inv(self, a: int) -> int:
        return (-a) % self.m

    def elements(self) -> List[int]:
        return list(range(self.m))

    def generators(self) -> List[int]:
        return [1 % self.m]

    def order(self) -> int:
        return self.m

    def serialize(self, a: int) -> str:
        return str(a)

    def parse(self, text: str) -> int:
        try:
            return int(text.strip()) % self.m
        except ValueError:
            raise ElementParseError(f"Invalid {self.name} element {text!r}")


class SymmetricBase(BaseGroup):
    """S_k as a base group; coordinates are separated by ';' since cycles use spaces."""

    separator = ";"

    def __init__(self, k: int):
        if k < 1:
            raise SystemMismatchError(f"S<k> needs k >= 1, got {k}")
        self.k = k
        self.name = f"S{k}"

    def identity(self) -> Permutation:
        return Permutation()

    def mul(self, a: Permutation, b: Permutation) -> Permutation:
        return a * b

    def inv(self, a: Permutation) -> Permutation:
        return a.inverse()

    def elements(self) -> List[Permutation]:
        return [Permutation(images) for images in permutations(range(1, self.k + 1))]

    def generators(self) -> List[Permutation]:
        return [Permutation.transposition(i, i + 1) for i in range(1, self.k)]

    def order(self) -> int:
        return factorial(self.k)

    def serialize(self, a: Permutation) -> str:
        return str(a)

    def parse(self, text: str) -> Permutation:
        a = Permutation.parse(text)
        if a.degree > self.k:
            raise ElementParseError(f"{a} is not in S_{self.k}")
        return a


def base_group_from_name(name: str) -> BaseGroup:
    """'Z/6', 'Z6' or 'S3'."""
    text = name.strip()
    match = re.fullmatch(r"Z/?(\d+)", text)
    if match:
        return CyclicGroup(int(match.group(1)))
    match = re.fullmatch(r"S<?(\d+)>?", text)
    if match:
        return SymmetricBase(int(match.group(1)))
    raise SystemMismatchError(f"Unknown base group: {name!r}")


class DirectPowerSystem(CloningSystem):
    """Elements are tuples (g_1, ..., g_n); cloning at k repeats g_k."""

    factors_through_hedges = True
    rho_trivial = True
    supports_unclone = True

    def __init__(self, base: BaseGroup):
        self.base = base
        self.name = f"power:{base.name}"

    def identity(self, n: int = 1) -> Tuple:
        return (self.base.identity(),) * n

    def mul(self, g: Tuple, h: Tuple) -> Tuple:
        size = max(len(g), len(h))
        g, h = self.include(g, size), self.include(h, size)
        return tuple(self.base.mul(a, b) for a, b in zip(g, h))

    def inv(self, g: Tuple) -> Tuple:
        return tuple(self.base.inv(a) for a in g)

    def degree(self, g: Tuple) -> int:
        unit = self.base.identity()
        for position in range(len(g), 0, -1):
            if g[position - 1] != unit:
                return position
        return 1

    def include(self, g: Tuple, n: int) -> Tuple:
        if n >= len(g):
            return tuple(g) + (self.base.identity(),) * (n - len(g))
        if self.degree(g) > n:
            raise ValueError(f"Tuple of degree {self.degree(g)} does not lie in G_{n}")
        return tuple(g[:n])

    def rho(self, g, n: int) -> Permutation:
        return Permutation()

    def _clone(self, g: Tuple, k: int, n: int) -> Tuple:
        return g[:k] + g[k - 1:]

    def _unclone(self, h: Tuple, k: int, n: int) -> Optional[Tuple]:
        if h[k - 1] != h[k]:
            return None
        return h[:k] + h[k + 1:]

    def elements(self, n: int) -> Iterator[Tuple]:
        return product(self.base.elements(), repeat=n)

    def order(self, n: int) -> int:
        return self.base.order() ** n

    def random_element(self, n: int, rng: random.Random) -> Tuple:
        return tuple(self.base.random_element(rng) for _ in range(n))

    def generators(self, n: int) -> List[Tuple]:
        unit = self.base.identity()
        return [tuple(gen if position == i else unit for position in range(n))
                for i in range(n) for gen in self.base.generators()]

    def serialize(self, g: Tuple) -> str:
        return "(" + self.base.separator.join(self.base.serialize(a) for a in g) + ")"

    def parse(self, text: str, n: Optional[int] = None) -> Tuple:
        source = text.strip()
        if not (source.startswith("(") and source.endswith(")")):
            raise ElementParseError(f"Direct power elements are written as tuples, got {text!r}")
        body = source[1:-1]
        g = tuple(self.base.parse(part) for part in body.split(self.base.separator)) if body.strip() else ()
        if not g:
            raise ElementParseError("Empty tuple")
        return self.include(g, n) if n is not None else g

    def retraction(self, g: Tuple):
        """The first coordinate: a homomorphism G_n -> H compatible with cloning."""
        return g[0]


class IotaSystem(DirectPowerSystem):
    """H^n with kappa_k the inclusion H^n -> H^(n+1)."""

    def __init__(self, base: BaseGroup):
        super().__init__(base)
        self.name = f"iota:{base.name}"

    def _clone(self, g: Tuple, k: int, n: int) -> Tuple:
        return tuple(g) + (self.base.identity(),)

    def _unclone(self, h: Tuple, k: int, n: int) -> Optional[Tuple]:
        return self.restrict(h, n)
