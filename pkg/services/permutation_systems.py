"""Trivial and symmetric cloning systems, giving Thompson's groups F and V."""
import random
from itertools import permutations
from math import factorial
from typing import Iterator, List, Optional, Tuple

from services.cloning import CloningSystem, Permutation, symm_clone
from services.errors import ElementParseError

TRIVIAL = ()


class TrivialSystem(CloningSystem):
    """G_n = 1 for all n; the resulting group is F."""

    name = "trivial"
    factors_through_hedges = True
    rho_trivial = True
    supports_unclone = True

    def identity(self, n: int = 1):
        return TRIVIAL

    def mul(self, g, h):
        return TRIVIAL

    def inv(self, g):
        return TRIVIAL

    def eq(self, g, h) -> bool:
        return True

    def degree(self, g) -> int:
        return 1

    def include(self, g, n: int):
        return TRIVIAL

    def rho(self, g, n: int) -> Permutation:
        return Permutation()

    def _clone(self, g, k: int, n: int):
        return TRIVIAL

    def _unclone(self, h, k: int, n: int):
        return TRIVIAL

    def elements(self, n: int) -> Iterator:
        yield TRIVIAL

    def order(self, n: int) -> int:
        return 1

    def random_element(self, n: int, rng: random.Random):
        return TRIVIAL

    def serialize(self, g) -> str:
        return "1"

    def parse(self, text: str, n: Optional[int] = None):
        if text.strip() not in ("", "1", "()", "id"):
            raise ElementParseError(f"The trivial group has no element {text!r}")
        return TRIVIAL


class SymmetricSystem(CloningSystem):
    """G_n = S_n, rho the identity, cloning doubles a strand."""

    name = "symmetric"
    factors_through_hedges = True
    supports_unclone = True

    def identity(self, n: int = 1) -> Permutation:
        return Permutation()

    def mul(self, g: Permutation, h: Permutation) -> Permutation:
        return g * h

    def inv(self, g: Permutation) -> Permutation:
        return g.inverse()

    def eq(self, g: Permutation, h: Permutation) -> bool:
        return g == h

    def degree(self, g: Permutation) -> int:
        return max(g.degree, 1)

    def include(self, g: Permutation, n: int) -> Permutation:
        if g.degree > n:
            raise ValueError(f"Permutation {g} does not lie in S_{n}")
        return g

    def rho(self, g: Permutation, n: int) -> Permutation:
        return g

    def _clone(self, g: Permutation, k: int, n: int) -> Permutation:
        return symm_clone(g, k)

    def _unclone(self, h: Permutation, k: int, n: int) -> Optional[Permutation]:
        # the doubled strands land on adjacent points in order
        if h(k + 1) != h(k) + 1:
            return None
        pivot = h(k)

        def collapse(value: int) -> int:
            return value if value <= pivot else value - 1

        images = tuple(collapse(h(m if m <= k else m + 1)) for m in range(1, n + 1))
        try:
            candidate = Permutation(images)
        except ValueError:
            return None
        return candidate if symm_clone(candidate, k) == h else None

    def elements(self, n: int) -> Iterator[Permutation]:
        for images in permutations(range(1, n + 1)):
            yield Permutation(images)

    def order(self, n: int) -> int:
        return factorial(n)

    def random_element(self, n: int, rng: random.Random) -> Permutation:
        images = list(range(1, n + 1))
        rng.shuffle(images)
        return Permutation(tuple(images))

    def generators(self, n: int) -> List[Permutation]:
        return [Permutation.transposition(i, i + 1) for i in range(1, n)]

    def relators(self, n: int) -> List[Tuple[Permutation, Permutation]]:
        gens = self.generators(n)
        pairs = []
        for i, s in enumerate(gens):
            pairs.append((s * s, Permutation()))
            if i + 1 < len(gens):
                t = gens[i + 1]
                pairs.append((s * t * s, t * s * t))
            for t in gens[i + 2:]:
                pairs.append((s * t, t * s))
        return pairs

    def serialize(self, g: Permutation) -> str:
        return str(g)

    def parse(self, text: str, n: Optional[int] = None) -> Permutation:
        g = Permutation.parse(text)
        if n is not None and g.degree > n:
            raise ElementParseError(f"Permutation {g} does not lie in S_{n}")
        return g
