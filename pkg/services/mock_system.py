"""
Mock symmetric groups.

The group of degree n is generated by involutions s(i,j), 1 <= i < j <= n,
subject to far commutation and the reversal relation
s(k,l) s(i,j) = s(k+l-j, k+l-i) s(k,l) for k <= i < j <= l. Each generator
maps to the permutation reversing the block i..j. Elements are kept as
words; equality goes through rewriting, so it may come back undecided.
"""
import logging
import random
import re
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from services.cloning import CloningSystem, Permutation
from services.errors import ElementParseError
from services.rewriting import RewritingSystem, bounded_search, complete

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]

SEARCH_NODE_LIMIT = 20000
_LETTER = re.compile(r"s\((\d+),(\d+)\)")


@dataclass(frozen=True)
class MockWord:
    letters: Tuple[Letter, ...] = ()

    def __mul__(self, other: "MockWord") -> "MockWord":
        return MockWord(self.letters + other.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(f"s({i},{j})" for i, j in self.letters)


def s(i: int, j: int) -> MockWord:
    if not 1 <= i < j:
        raise ValueError(f"Mock generators need 1 <= i < j, got s({i},{j})")
    return MockWord(((i, j),))


def reversal(i: int, j: int) -> Permutation:
    """The permutation (i j)((i+1) (j-1))... reversing the block i..j."""
    images = list(range(1, j + 1))
    for m in range(i, j + 1):
        images[m - 1] = i + j - m
    return Permutation(tuple(images))


def clone_letter(letter: Letter, k: int) -> Tuple[Letter, ...]:
    i, j = letter
    if j < k:
        return (letter,)
    if i <= k:
        return ((i, j + 1), (k, k + 1))
    return ((i + 1, j + 1),)


def presentation(n: int) -> List[Tuple[MockWord, MockWord]]:
    """Defining relations of the mock symmetric group of degree n, as word pairs."""
    letters = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    pairs = []
    for letter in letters:
        pairs.append((MockWord((letter, letter)), MockWord()))
    for i, j in letters:
        for k, l in letters:
            if j < k:
                pairs.append((MockWord(((i, j), (k, l))), MockWord(((k, l), (i, j)))))
            if k <= i and j <= l and (i, j) != (k, l):
                pairs.append((MockWord(((k, l), (i, j))), MockWord(((k + l - j, k + l - i), (k, l)))))
    return pairs


class _Alphabet:
    """Single-character encoding of the generators of one degree, ordered by (i, j)."""

    def __init__(self, n: int):
        letters = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        self.encode_map: Dict[Letter, str] = {letter: chr(0x100 + index)
                                              for index, letter in enumerate(letters)}

    def encode(self, word: MockWord) -> str:
        return "".join(self.encode_map[letter] for letter in word.letters)


class MockSymmetricSystem(CloningSystem):
    name = "mock"
    finite = False
    presented = True

    def __init__(self, search_node_limit: int = SEARCH_NODE_LIMIT):
        self.search_node_limit = search_node_limit
        self._completions: Dict[int, RewritingSystem] = {}
        self._lock = threading.Lock()

    def identity(self, n: int = 1) -> MockWord:
        return MockWord()

    def mul(self, g: MockWord, h: MockWord) -> MockWord:
        return g * h

    def inv(self, g: MockWord) -> MockWord:
        return MockWord(tuple(reversed(g.letters)))

    def degree(self, g: MockWord) -> int:
        return max((j for _, j in g.letters), default=1)

    def include(self, g: MockWord, n: int) -> MockWord:
        return g

    def restrict(self, g: MockWord, n: int) -> Optional[MockWord]:
        return g if self.degree(g) <= n else None

    def rho(self, g: MockWord, n: int) -> Permutation:
        result = Permutation()
        for i, j in g.letters:
            result = result * reversal(i, j)
        return result

    def _clone(self, g: MockWord, k: int, n: int) -> MockWord:
        # (gh)kappa_k = (g)kappa_{rho(h)k} (h)kappa_k, read from the right
        pieces = []
        for letter in reversed(g.letters):
            pieces.append(clone_letter(letter, k))
            k = reversal(*letter)(k)
        return MockWord(tuple(letter for piece in reversed(pieces) for letter in piece))

    # -- equality

    def completion(self, n: int) -> RewritingSystem:
        """Knuth-Bendix completion for degree n, attempted once and cached."""
        with self._lock:
            if n not in self._completions:
                alphabet = _Alphabet(n)
                relations = [(alphabet.encode(u), alphabet.encode(v)) for u, v in presentation(n)]
                logger.info(f"Completing the mock presentation of degree {n} ({len(relations)} relations)")
                self._completions[n] = complete(relations)
            return self._completions[n]

    def compare(self, g: MockWord, h: MockWord) -> Optional[bool]:
        if g == h:
            return True
        n = max(self.degree(g), self.degree(h), 2)
        if self.rho(g, n) != self.rho(h, n):
            return False
        alphabet = _Alphabet(n)
        u, v = alphabet.encode(g), alphabet.encode(h)
        relations = [(alphabet.encode(a), alphabet.encode(b)) for a, b in presentation(n)]
        if bounded_search(u, v, relations, node_limit=self.search_node_limit):
            return True
        rewriting = self.completion(n)
        if rewriting.normal_form(u) == rewriting.normal_form(v):
            return True
        if rewriting.confluent:
            return False
        return None

    def eq(self, g: MockWord, h: MockWord) -> bool:
        return self.compare(g, h) is True

    # -- sampling and presentation

    def random_element(self, n: int, rng: random.Random) -> MockWord:
        letters = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        if not letters:
            return MockWord()
        return MockWord(tuple(rng.choice(letters) for _ in range(rng.randint(0, 2 * n))))

    def generators(self, n: int) -> List[MockWord]:
        return [s(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]

    def relators(self, n: int) -> List[Tuple[MockWord, MockWord]]:
        return presentation(n)

    def serialize(self, g: MockWord) -> str:
        return str(g)

    def parse(self, text: str, n: Optional[int] = None) -> MockWord:
        source = text.replace(" ", "").replace("*", "")
        if source in ("", "1"):
            return MockWord()
        letters = []
        position = 0
        for match in _LETTER.finditer(source):
            if match.start() != position:
                break
            letters.append((int(match.group(1)), int(match.group(2))))
            position = match.end()
        if position != len(source):
            raise ElementParseError(f"Invalid mock word {text!r}")
        for i, j in letters:
            if not 1 <= i < j or (n is not None and j > n):
                raise ElementParseError(f"Generator s({i},{j}) out of range")
        return MockWord(tuple(letters))
