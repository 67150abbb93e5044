"""
Loop braid groups as symmetric automorphisms of free groups.

Free-group words are tuples of nonzero ints, -j standing for the inverse of
x_j. An element is kept as a word in the generators b(i), b(i)^-1 and t(i)
together with the automorphism it induces; equality compares the images of
the free generators, which is a faithful invariant.

Automorphisms compose on the right: the images of g h are the images of g
with every x_j replaced by its image under h.
"""
import logging
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

from services.cloning import CloningSystem, Permutation
from services.errors import ElementParseError

logger = logging.getLogger(__name__)

FreeWord = Tuple[int, ...]
# (kind, index, exponent) with kind 'b' (braid-like) or 't' (transposition)
Letter = Tuple[str, int, int]

_LETTER = re.compile(r"([bt])\((\d+)\)(\^-1)?")


def free_reduce(word) -> FreeWord:
    reduced_word: List[int] = []
    for letter in word:
        if reduced_word and reduced_word[-1] == -letter:
            reduced_word.pop()
        else:
            reduced_word.append(letter)
    return tuple(reduced_word)


def free_invert(word: FreeWord) -> FreeWord:
    return tuple(-letter for letter in reversed(word))


def substitute(word: FreeWord, images: Tuple[FreeWord, ...]) -> FreeWord:
    """Replace each x_j in word by images[j-1]; generators beyond the images are fixed."""
    out: List[int] = []
    for letter in word:
        index = abs(letter)
        image = images[index - 1] if index <= len(images) else (index,)
        out.extend(image if letter > 0 else free_invert(image))
    return free_reduce(out)


def identity_images(n: int) -> Tuple[FreeWord, ...]:
    return tuple((j,) for j in range(1, n + 1))


def compose(first: Tuple[FreeWord, ...], second: Tuple[FreeWord, ...]) -> Tuple[FreeWord, ...]:
    """Images of the product first * second."""
    size = max(len(first), len(second))
    first = pad_images(first, size)
    return tuple(substitute(word, second) for word in first)


def pad_images(images: Tuple[FreeWord, ...], n: int) -> Tuple[FreeWord, ...]:
    return tuple(images) + tuple((j,) for j in range(len(images) + 1, n + 1))


def trim_images(images: Tuple[FreeWord, ...]) -> Tuple[FreeWord, ...]:
    images = list(images)
    while images and images[-1] == (len(images),):
        images.pop()
    return tuple(images)


@lru_cache(maxsize=None)
def letter_images(letter: Letter) -> Tuple[FreeWord, ...]:
    kind, i, exponent = letter
    images = list(identity_images(i + 1))
    if kind == "t":
        images[i - 1], images[i] = (i + 1,), (i,)
    elif exponent == 1:
        images[i - 1] = (i + 1,)
        images[i] = (-(i + 1), i, i + 1)
    else:
        images[i - 1] = (i, i + 1, -i)
        images[i] = (i,)
    return tuple(images)


def clone_letter(letter: Letter, k: int) -> Tuple[Letter, ...]:
    kind, i, exponent = letter
    if k < i:
        return ((kind, i + 1, exponent),)
    if k == i:
        return ((kind, i, exponent), (kind, i + 1, exponent))
    if k == i + 1:
        return ((kind, i + 1, exponent), (kind, i, exponent))
    return (letter,)


@dataclass(frozen=True)
class LoopBraidWord:
    letters: Tuple[Letter, ...] = ()

    def __mul__(self, other: "LoopBraidWord") -> "LoopBraidWord":
        return LoopBraidWord(self.letters + other.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(f"{kind}({i})" + ("^-1" if exponent < 0 else "")
                       for kind, i, exponent in self.letters)


def beta(i: int, exponent: int = 1) -> LoopBraidWord:
    return LoopBraidWord((("b", i, exponent),))


def sigma(i: int) -> LoopBraidWord:
    return LoopBraidWord((("t", i, 1),))


def loopbraid_generator(kind: str, i: int, n: int) -> LoopBraidWord:
    if not 1 <= i <= n - 1:
        raise ValueError(f"Generator index {i} out of range for {n} strands")
    if kind in ("b", "beta"):
        return beta(i)
    if kind in ("t", "sigma"):
        return sigma(i)
    raise ValueError(f"Unknown loop braid generator kind {kind!r}")


class LoopBraidSystem(CloningSystem):
    """LB_n generated by the braid-like b(i) and the transpositions t(i)."""

    name = "loopbraid"
    finite = False
    presented = True
    allowed_kinds = ("b", "t")

    @lru_cache(maxsize=4096)
    def images(self, g: LoopBraidWord) -> Tuple[FreeWord, ...]:
        result: Tuple[FreeWord, ...] = ()
        for letter in g.letters:
            result = compose(result, letter_images(letter))
        return trim_images(result)

    def identity(self, n: int = 1) -> LoopBraidWord:
        return LoopBraidWord()

    def mul(self, g: LoopBraidWord, h: LoopBraidWord) -> LoopBraidWord:
        return g * h

    def inv(self, g: LoopBraidWord) -> LoopBraidWord:
        return LoopBraidWord(tuple((kind, i, -exponent if kind == "b" else exponent)
                                   for kind, i, exponent in reversed(g.letters)))

    def eq(self, g: LoopBraidWord, h: LoopBraidWord) -> bool:
        return self.images(g) == self.images(h)

    def degree(self, g: LoopBraidWord) -> int:
        top = 1
        for j, word in enumerate(self.images(g), start=1):
            if word != (j,):
                top = max(top, j, max(abs(letter) for letter in word))
        return top

    def include(self, g: LoopBraidWord, n: int) -> LoopBraidWord:
        return g

    def _letter_rho(self, letter: Letter) -> Permutation:
        return Permutation.transposition(letter[1], letter[1] + 1)

    def rho(self, g: LoopBraidWord, n: int) -> Permutation:
        result = Permutation()
        for letter in g.letters:
            result = result * self._letter_rho(letter)
        return result

    def _clone(self, g: LoopBraidWord, k: int, n: int) -> LoopBraidWord:
        pieces = []
        for letter in reversed(g.letters):
            pieces.append(clone_letter(letter, k))
            k = self._letter_rho(letter)(k)
        return LoopBraidWord(tuple(letter for piece in reversed(pieces) for letter in piece))

    def key(self, g: LoopBraidWord, n: int) -> str:
        return repr(pad_images(self.images(g), n))

    # -- sampling and presentation

    def generators(self, n: int) -> List[LoopBraidWord]:
        gens = []
        for i in range(1, n):
            if "b" in self.allowed_kinds:
                gens.append(beta(i))
            if "t" in self.allowed_kinds:
                gens.append(sigma(i))
        return gens

    def random_element(self, n: int, rng: random.Random) -> LoopBraidWord:
        if n < 2:
            return LoopBraidWord()
        letters = []
        for _ in range(rng.randint(0, 2 * n)):
            kind = rng.choice(self.allowed_kinds)
            letters.append((kind, rng.randint(1, n - 1), rng.choice((1, -1)) if kind == "b" else 1))
        return LoopBraidWord(tuple(letters))

    def relators(self, n: int) -> List[Tuple[LoopBraidWord, LoopBraidWord]]:
        """The defining relations in degree n, plus b(i) b(i)^-1 = 1."""
        b, t, one = beta, sigma, LoopBraidWord()
        pairs = []
        for i in range(1, n):
            pairs.append((b(i) * b(i, -1), one))
            pairs.append((t(i) * t(i), one))
            for j in range(i + 2, n):
                pairs.append((b(i) * b(j), b(j) * b(i)))
                pairs.append((t(i) * t(j), t(j) * t(i)))
            for j in range(1, n):
                if abs(i - j) > 1:
                    pairs.append((b(i) * t(j), t(j) * b(i)))
            if i + 1 < n:
                pairs.append((b(i) * b(i + 1) * b(i), b(i + 1) * b(i) * b(i + 1)))
                pairs.append((t(i) * t(i + 1) * t(i), t(i + 1) * t(i) * t(i + 1)))
                pairs.append((t(i) * t(i + 1) * b(i), b(i + 1) * t(i) * t(i + 1)))
                pairs.append((b(i) * b(i + 1) * t(i), t(i + 1) * b(i) * b(i + 1)))
        return [(u, v) for u, v in pairs if self._admits(u) and self._admits(v)]

    def _admits(self, g: LoopBraidWord) -> bool:
        return all(kind in self.allowed_kinds for kind, _, _ in g.letters)

    # -- text

    def serialize(self, g: LoopBraidWord) -> str:
        return str(g)

    def parse(self, text: str, n: Optional[int] = None) -> LoopBraidWord:
        source = text.replace(" ", "").replace("*", "")
        if source in ("", "1"):
            return LoopBraidWord()
        letters = []
        position = 0
        for match in _LETTER.finditer(source):
            if match.start() != position:
                break
            kind, i = match.group(1), int(match.group(2))
            exponent = -1 if match.group(3) else 1
            if kind not in self.allowed_kinds:
                raise ElementParseError(f"Generator {match.group(0)} is not available in {self.name}")
            if kind == "t" and exponent == -1:
                exponent = 1
            if i < 1 or (n is not None and i >= n):
                raise ElementParseError(f"Generator {match.group(0)} out of range")
            letters.append((kind, i, exponent))
            position = match.end()
        if position != len(source):
            raise ElementParseError(f"Invalid loop braid word {text!r}")
        g = LoopBraidWord(tuple(letters))
        if not self.accepts(g):
            raise ElementParseError(f"{g} is not an element of {self.name}")
        return g

    def accepts(self, g: LoopBraidWord) -> bool:
        return True


class BraidSystem(LoopBraidSystem):
    """The braid groups: words in b(i)^{+-1} only."""

    name = "braid"
    allowed_kinds = ("b",)


class PureLoopBraidSystem(LoopBraidSystem):
    """The kernel of rho on LB_n, with trivial rho; cloning is inherited from LB."""

    name = "pureloopbraid"
    rho_trivial = True

    def rho(self, g: LoopBraidWord, n: int) -> Permutation:
        return Permutation()

    def accepts(self, g: LoopBraidWord) -> bool:
        return super().rho(g, self.degree(g)) == Permutation()

    def generators(self, n: int) -> List[LoopBraidWord]:
        gens = []
        for i in range(1, n):
            gens.append(beta(i) * sigma(i))
            gens.append(sigma(i) * beta(i))
        return gens

    def random_element(self, n: int, rng: random.Random) -> LoopBraidWord:
        word = super().random_element(n, rng)
        return word * self._section(super().rho(word, n).inverse())

    @staticmethod
    def _section(target: Permutation) -> LoopBraidWord:
        """A word in the t(i) whose permutation is target (bubble sort)."""
        images = list(target.images)
        letters = []
        for end in range(len(images), 1, -1):
            for position in range(1, end):
                if images[position - 1] > images[position]:
                    images[position - 1], images[position] = images[position], images[position - 1]
                    letters.append(("t", position, 1))
        # read backwards, the sorting swaps multiply to target
        return LoopBraidWord(tuple(reversed(letters)))

    def relators(self, n: int) -> List[Tuple[LoopBraidWord, LoopBraidWord]]:
        return []
