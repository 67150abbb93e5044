"""
Forest monoid arithmetic.

A forest is a sequence of finite binary trees, all but finitely many of them
trivial. Every forest is a unique nondecreasing word in the single-caret
generators, where generator k hangs a caret from leaf k. That word is the
only stored state; trees are built on demand.

Trees are nested tuples: ``None`` is a leaf and ``(left, right)`` a caret.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from services.errors import ElementParseError, RankError

Tree = Optional[tuple]
LEAF: Tree = None
CARET: Tree = (None, None)

LEAF_SYMBOL = "·"


# ---------------------------------------------------------------- trees

def leaf_count(tree: Tree) -> int:
    if tree is None:
        return 1
    return leaf_count(tree[0]) + leaf_count(tree[1])


def caret_count(tree: Tree) -> int:
    return leaf_count(tree) - 1


def tree_to_string(tree: Tree) -> str:
    if tree is None:
        return LEAF_SYMBOL
    return f"({tree_to_string(tree[0])},{tree_to_string(tree[1])})"


def parse_tree(text: str) -> Tree:
    """Parse a balanced-parenthesis tree; '·' or '.' denotes a leaf."""
    source = "".join(text.split())
    if not source:
        raise ElementParseError("Empty tree text")

    def parse_at(pos: int) -> Tuple[Tree, int]:
        if pos >= len(source):
            raise ElementParseError(f"Unexpected end of tree text: {text!r}")
        char = source[pos]
        if char in (LEAF_SYMBOL, "."):
            return None, pos + 1
        if char != "(":
            raise ElementParseError(f"Unexpected {char!r} in tree text: {text!r}")
        left, pos = parse_at(pos + 1)
        if pos >= len(source) or source[pos] != ",":
            raise ElementParseError(f"Expected ',' in tree text: {text!r}")
        right, pos = parse_at(pos + 1)
        if pos >= len(source) or source[pos] != ")":
            raise ElementParseError(f"Expected ')' in tree text: {text!r}")
        return (left, right), pos + 1

    tree, end = parse_at(0)
    if end != len(source):
        raise ElementParseError(f"Trailing characters in tree text: {text!r}")
    return tree


def caret_addresses(tree: Tree, prefix: str = "") -> FrozenSet[str]:
    """Addresses ('L'/'R' paths from the root) of all carets."""
    if tree is None:
        return frozenset()
    return (frozenset([prefix])
            | caret_addresses(tree[0], prefix + "L")
            | caret_addresses(tree[1], prefix + "R"))


def tree_from_addresses(addresses: FrozenSet[str], prefix: str = "") -> Tree:
    if prefix not in addresses:
        return None
    return (tree_from_addresses(addresses, prefix + "L"),
            tree_from_addresses(addresses, prefix + "R"))


def leaf_addresses(tree: Tree, prefix: str = "") -> List[str]:
    if tree is None:
        return [prefix]
    return leaf_addresses(tree[0], prefix + "L") + leaf_addresses(tree[1], prefix + "R")


def subtree_at(tree: Tree, address: str) -> Tree:
    for step in address:
        if tree is None:
            return None
        tree = tree[0] if step == "L" else tree[1]
    return tree


def _graft(tree: Tree, leaf: int) -> Tree:
    """Replace the given (1-based) leaf of a tree by a caret."""
    if tree is None:
        return CARET
    left_leaves = leaf_count(tree[0])
    if leaf <= left_leaves:
        return (_graft(tree[0], leaf), tree[1])
    return (tree[0], _graft(tree[1], leaf - left_leaves))


# ---------------------------------------------------------------- normal form

def forest_normal_form(word: Iterable[int]) -> "ForestWord":
    """Rewrite a generator word into its nondecreasing normal form."""
    out: List[int] = []
    for index in word:
        if index < 1:
            raise ValueError(f"Generator index must be positive, got {index}")
        tail = []
        while out and out[-1] > index:
            tail.append(out.pop() + 1)
        out.append(index)
        out.extend(reversed(tail))
    return ForestWord(tuple(out))


@dataclass(frozen=True)
class ForestWord:
    """A forest stored as its normal-form word."""

    indices: Tuple[int, ...] = ()

    def __post_init__(self):
        previous = 1
        for index in self.indices:
            if index < previous:
                raise ValueError(f"Forest word is not in normal form: {self.indices}")
            previous = index

    @classmethod
    def from_word(cls, word: Iterable[int]) -> "ForestWord":
        return forest_normal_form(word)

    @classmethod
    def from_trees(cls, trees: Sequence[Tree]) -> "ForestWord":
        """Read the word off the trees: carets in pre-order, each giving its leftmost leaf."""
        word: List[int] = []
        offset = 0

        def visit(tree: Tree, first_leaf: int) -> None:
            if tree is None:
                return
            word.append(first_leaf)
            visit(tree[0], first_leaf)
            visit(tree[1], first_leaf + leaf_count(tree[0]))

        for tree in trees:
            visit(tree, offset + 1)
            offset += leaf_count(tree)
        return cls(tuple(word))

    @classmethod
    def parse(cls, text: str) -> "ForestWord":
        text = text.strip()
        if not text:
            return cls()
        try:
            word = [int(part) for part in text.split(",")]
        except ValueError as e:
            raise ElementParseError(f"Invalid forest word {text!r}: {e}")
        if any(index < 1 for index in word):
            raise ElementParseError(f"Forest indices must be positive: {text!r}")
        return forest_normal_form(word)

    @classmethod
    def caret(cls, k: int) -> "ForestWord":
        return cls((k,))

    @classmethod
    def tree(cls, tree: Tree) -> "ForestWord":
        return cls.from_trees([tree])

    def __str__(self) -> str:
        return ",".join(str(index) for index in self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def length(self) -> int:
        return len(self.indices)

    def __mul__(self, other: "ForestWord") -> "ForestWord":
        return forest_mul(self, other)

    @cached_property
    def trees(self) -> Tuple[Tree, ...]:
        """The trees up to the last nontrivial one."""
        trees: List[Tree] = []
        for index in self.indices:
            offset = 0
            for position, tree in enumerate(trees):
                size = leaf_count(tree)
                if index <= offset + size:
                    trees[position] = _graft(tree, index - offset)
                    break
                offset += size
            else:
                trees.extend([LEAF] * (index - offset - 1))
                trees.append(CARET)
        return tuple(trees)

    def trees_padded(self, count: int) -> List[Tree]:
        trees = list(self.trees)
        return trees + [LEAF] * max(0, count - len(trees))

    @cached_property
    def leaf_counts(self) -> Tuple[int, ...]:
        return tuple(leaf_count(tree) for tree in self.trees)

    @property
    def rank(self) -> int:
        return len(self.trees)

    @property
    def feet(self) -> int:
        return self.rank + len(self)

    @property
    def leaves(self) -> int:
        """Leaves of a semisimple forest; the trivial forest has a single leaf."""
        return max(self.rank, 1) + len(self)

    def is_semisimple(self) -> bool:
        return self.rank <= 1

    def is_elementary(self) -> bool:
        return all(count <= 2 for count in self.leaf_counts)

    def require_rank(self, degree: int) -> None:
        if self.rank > degree:
            raise RankError(f"Forest {self} has rank {self.rank}, exceeding degree {degree}")

    def tree_string(self) -> str:
        """Serialization of a semisimple forest as its first tree."""
        if not self.is_semisimple():
            raise RankError(f"Forest {self} is not semisimple")
        return tree_to_string(self.trees[0] if self.trees else LEAF)

    def elementary_carets(self) -> List[int]:
        """Leaf indices k such that leaves k and k+1 are the two children of one caret."""
        found = []
        offset = 0
        for tree in self.trees:
            addresses = leaf_addresses(tree)
            for local, (first, second) in enumerate(zip(addresses, addresses[1:]), start=1):
                if first.endswith("L") and second == first[:-1] + "R":
                    found.append(offset + local)
            offset += len(addresses)
        return found

    def remove_caret(self, k: int) -> "ForestWord":
        """The forest E' with E = E' * lambda_k, when leaves k and k+1 form a caret."""
        offset = 0
        trees = list(self.trees)
        for position, tree in enumerate(trees):
            addresses = leaf_addresses(tree)
            local = k - offset
            if 1 <= local < len(addresses):
                first, second = addresses[local - 1], addresses[local]
                if first.endswith("L") and second == first[:-1] + "R":
                    trees[position] = _prune(tree, first[:-1])
                    return ForestWord.from_trees(trees)
                break
            offset += len(addresses)
        raise ValueError(f"Forest {self} has no elementary caret at leaf {k}")


def _prune(tree: Tree, address: str) -> Tree:
    if not address:
        return None
    if address[0] == "L":
        return (_prune(tree[0], address[1:]), tree[1])
    return (tree[0], _prune(tree[1], address[1:]))


EMPTY_FOREST = ForestWord()


# ---------------------------------------------------------------- products

def forest_mul(a: ForestWord, b: ForestWord) -> ForestWord:
    """Graft the roots of b onto the leaves of a."""
    return forest_normal_form(a.indices + b.indices)


def _complement(base: ForestWord, target_trees: List[Tree]) -> ForestWord:
    """The forest c with base * c equal to the forest of target_trees."""
    pieces: List[Tree] = []
    trees = base.trees_padded(len(target_trees))
    for tree, target in zip(trees, target_trees):
        for address in leaf_addresses(tree):
            pieces.append(subtree_at(target, address))
    return ForestWord.from_trees(pieces)


def forest_lcm_right(a: ForestWord, b: ForestWord) -> Tuple[ForestWord, ForestWord, ForestWord]:
    """Least common right multiple m = a * ca = b * cb, returned as (m, ca, cb)."""
    count = max(a.rank, b.rank)
    merged = [tree_from_addresses(caret_addresses(x) | caret_addresses(y))
              for x, y in zip(a.trees_padded(count), b.trees_padded(count))]
    return ForestWord.from_trees(merged), _complement(a, merged), _complement(b, merged)


def forest_gcf_left(a: ForestWord, b: ForestWord) -> ForestWord:
    """Greatest common left factor."""
    count = max(a.rank, b.rank)
    common = [tree_from_addresses(caret_addresses(x) & caret_addresses(y))
              for x, y in zip(a.trees_padded(count), b.trees_padded(count))]
    return ForestWord.from_trees(common)


def left_divides(a: ForestWord, b: ForestWord) -> Optional[ForestWord]:
    """Return c with a * c = b, or None when a is not a left factor of b."""
    count = max(a.rank, b.rank)
    b_trees = b.trees_padded(count)
    for x, y in zip(a.trees_padded(count), b_trees):
        if not caret_addresses(x) <= caret_addresses(y):
            return None
    return _complement(a, b_trees)


# ---------------------------------------------------------------- hedges

@dataclass(frozen=True)
class Hedge:
    """Monotone surjection of the positive integers, identity-like far out.

    Stored as images of 1..len(images); beyond that m maps to m - shift.
    """

    images: Tuple[int, ...] = ()
    shift: int = 0

    def __post_init__(self):
        images = list(self.images)
        while images and images[-1] == len(images) - self.shift:
            images.pop()
        object.__setattr__(self, "images", tuple(images))

    @classmethod
    def eta(cls, k: int) -> "Hedge":
        return cls(tuple(range(1, k + 1)) + (k,), 1)

    def __call__(self, m: int) -> int:
        if m <= len(self.images):
            return self.images[m - 1]
        return m - self.shift

    def __mul__(self, other: "Hedge") -> "Hedge":
        return hedge_mul(self, other)

    def __str__(self) -> str:
        return f"[{','.join(str(i) for i in self.images)}|-{self.shift}]"


def hedge_mul(f: Hedge, h: Hedge) -> Hedge:
    """The composite f after h."""
    span = max(len(h.images), len(f.images) + h.shift) + 1
    return Hedge(tuple(f(h(m)) for m in range(1, span + 1)), f.shift + h.shift)


def hedge_of_forest(forest: ForestWord) -> Hedge:
    """Send each leaf of the forest to the root of its tree."""
    result = Hedge()
    for index in forest.indices:
        result = result * Hedge.eta(index)
    return result


# ---------------------------------------------------------------- linear graphs

def is_matching(edges: Iterable[int]) -> bool:
    ordered = sorted(edges)
    return all(b - a >= 2 for a, b in zip(ordered, ordered[1:]))


def matching_to_forest(edges: Iterable[int], n: Optional[int] = None) -> ForestWord:
    """Elementary forest whose carets pair the endpoints of each edge."""
    ordered = tuple(sorted(set(edges)))
    if not is_matching(ordered):
        raise ValueError(f"Edges {ordered} do not form a matching")
    if n is not None and ordered and ordered[-1] >= n:
        raise ValueError(f"Edge e{ordered[-1]} does not lie in the linear graph on {n} vertices")
    return ForestWord(ordered)


def forest_to_matching(forest: ForestWord) -> Tuple[int, ...]:
    if not forest.is_elementary():
        raise ValueError(f"Forest {forest} is not elementary")
    return forest.indices


def subgraph_to_forest(edges: Iterable[int]) -> ForestWord:
    """A forest whose trees span the components of the subgraph (left combs)."""
    word: List[int] = []
    ordered = sorted(set(edges))
    start = None
    for position, edge in enumerate(ordered):
        if start is None or ordered[position - 1] != edge - 1:
            start = edge
        word.append(start)
    return ForestWord(tuple(word))


def forest_to_subgraph(forest: ForestWord) -> Tuple[int, ...]:
    edges = []
    leaf = 1
    for count in forest.leaf_counts:
        edges.extend(range(leaf, leaf + count - 1))
        leaf += count
    return tuple(edges)


def subgraph_components(edges: Iterable[int], n: int) -> List[Tuple[int, ...]]:
    """Vertex sets of the components of a spanning subgraph of the linear graph."""
    edge_set = set(edges)
    components: List[Tuple[int, ...]] = []
    current = [1]
    for vertex in range(2, n + 1):
        if vertex - 1 in edge_set:
            current.append(vertex)
        else:
            components.append(tuple(current))
            current = [vertex]
    components.append(tuple(current))
    return components


def matchings(n: int, size: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """All matchings of the linear graph on n vertices, ordered by size then lexicographically."""
    edge_count = max(n - 1, 0)
    sizes = [size] if size is not None else range(0, edge_count // 2 + 2)
    for k in sizes:
        for combo in _increasing_gapped(edge_count, k):
            yield combo


def _increasing_gapped(limit: int, k: int, start: int = 1) -> Iterator[Tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for first in range(start, limit + 1):
        for rest in _increasing_gapped(limit, k - 1, first + 2):
            yield (first,) + rest


# ---------------------------------------------------------------- enumeration

def forests_of_length(length: int, max_index: int) -> Iterator[ForestWord]:
    for word in combinations_with_replacement(range(1, max_index + 1), length):
        yield ForestWord(word)


def forests_with_rank_at_most(rank: int, length: int) -> Iterator[ForestWord]:
    """Normal forms of the given length whose carets lie in the first `rank` trees."""
    def extend(prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        position = len(prefix)
        if position == length:
            yield prefix
            return
        low = prefix[-1] if prefix else 1
        for index in range(low, rank + position + 1):
            yield from extend(prefix + (index,))

    if rank < 1:
        if length == 0:
            yield EMPTY_FOREST
        return
    for word in extend(()):
        yield ForestWord(word)


def semisimple_forests(length: int) -> Iterator[ForestWord]:
    return forests_with_rank_at_most(1, length)


def elementary_forests(roots: int, max_length: Optional[int] = None) -> Iterator[ForestWord]:
    """Elementary forests whose carets hang from the first `roots` roots."""
    top = roots if max_length is None else min(roots, max_length)
    for size in range(0, top + 1):
        for matching in matchings(roots + size, size):
            yield ForestWord(matching)


def caret_grafting_oracle(a: ForestWord, b: ForestWord) -> Tuple[Tree, ...]:
    """Trees of a * b obtained by literally grafting the trees of b onto the leaves of a."""
    b_count = sum(a.leaf_counts) if a.trees else 0
    b_trees = b.trees_padded(max(b_count, b.rank))
    result: List[Tree] = []
    position = 0
    for tree in a.trees:
        leaves = leaf_count(tree)
        result.append(_substitute(tree, b_trees[position:position + leaves]))
        position += leaves
    result.extend(b_trees[position:])
    while result and result[-1] is None:
        result.pop()
    return tuple(result)


def _substitute(tree: Tree, pieces: List[Tree]) -> Tree:
    iterator = iter(pieces)

    def walk(node: Tree) -> Tree:
        if node is None:
            return next(iterator)
        return (walk(node[0]), walk(node[1]))

    return walk(tree)


def index_of_tree_for_leaf(forest: ForestWord) -> Dict[int, int]:
    mapping = {}
    leaf = 1
    for root, count in enumerate(forest.leaf_counts, start=1):
        for _ in range(count):
            mapping[leaf] = root
            leaf += 1
    return mapping
