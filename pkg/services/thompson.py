"""
Generalized Thompson groups.

An element is a triple [E-, g, E+] of semisimple forests with the same
number of leaves and a group element g of that degree, read as the fraction
E- g E+^-1. Triples are compared by aligning right forests at their least
common right multiple, so no canonical form is needed; reduction to a
minimal representative is offered where the system can invert cloning.
"""
import logging
import random
from dataclasses import dataclass
from typing import Any, Optional, Tuple

from services.cloning import (AxiomReport, CloningSystem, _Tally, act_on_forest,
                              clone_by_forest, unclone_by_forest)
from services.errors import ElementParseError, RankError, SystemMismatchError
from services.forest_monoid import (EMPTY_FOREST, ForestWord, Tree, forest_lcm_right,
                                    leaf_count, parse_tree)

logger = logging.getLogger(__name__)

Element = Any


@dataclass(frozen=True)
class ThompsonElement:
    left: ForestWord
    mid: Element
    right: ForestWord

    @property
    def feet(self) -> int:
        return self.left.leaves


@dataclass(frozen=True)
class FractionTriple:
    """A b C^-1 for arbitrary forests A and C: an element of the large group."""

    left: ForestWord
    mid: Element
    right: ForestWord

    @property
    def feet(self) -> int:
        return 1 + len(self.left) - len(self.right)


def random_tree(leaves: int, rng: random.Random) -> Tree:
    if leaves <= 1:
        return None
    split = rng.randint(1, leaves - 1)
    return (random_tree(split, rng), random_tree(leaves - split, rng))


# ---------------------------------------------------------------- large-group fractions

def fraction_mul(system: CloningSystem, x: FractionTriple, y: FractionTriple) -> FractionTriple:
    """(A b C^-1)(A' b' C'^-1), aligning C and A' at their least common right multiple."""
    _, p, q = forest_lcm_right(x.right, y.left)
    moved, cloned = act_on_forest(system, x.mid, p)
    back_moved, back_cloned = act_on_forest(system, system.inv(y.mid), q)
    return FractionTriple(x.left * moved,
                          system.mul(cloned, system.inv(back_cloned)),
                          y.right * back_moved)


def fraction_inv(system: CloningSystem, x: FractionTriple) -> FractionTriple:
    return FractionTriple(x.right, system.inv(x.mid), x.left)


def fraction_in_group(system: CloningSystem, x: FractionTriple) -> Optional[Element]:
    """The e in G with X d Y^-1 = e, or None; needs unclone."""
    d, forest = x.mid, x.right
    degree = max(forest.rank, system.degree(d) - len(forest), 1)
    e = unclone_by_forest(system, system.include(d, max(system.degree(d), degree + len(forest))),
                          forest, degree)
    if e is None:
        return None
    moved, _ = act_on_forest(system, e, forest, degree)
    return e if moved == x.left else None


# ---------------------------------------------------------------- the group

class ThompsonGroup:
    """Arithmetic in the Thompson group of one cloning system."""

    def __init__(self, system: CloningSystem):
        self.system = system

    def __repr__(self) -> str:
        return f"<ThompsonGroup {self.system.name}>"

    # -- construction

    def element(self, left: ForestWord, mid: Element, right: ForestWord) -> ThompsonElement:
        if not (left.is_semisimple() and right.is_semisimple()):
            raise RankError(f"Forests {left} and {right} must be semisimple")
        if left.leaves != right.leaves:
            raise RankError(f"Trees have {left.leaves} and {right.leaves} leaves")
        if self.system.degree(mid) > left.leaves:
            raise RankError(f"Element of degree {self.system.degree(mid)} on {left.leaves} leaves")
        return ThompsonElement(left, self.system.include(mid, left.leaves), right)

    def from_trees(self, left: Tree, mid: Element, right: Tree) -> ThompsonElement:
        return self.element(ForestWord.tree(left), mid, ForestWord.tree(right))

    def identity(self) -> ThompsonElement:
        return ThompsonElement(EMPTY_FOREST, self.system.identity(1), EMPTY_FOREST)

    def embed_group(self, g: Element, tree: Tree) -> ThompsonElement:
        """g -> [T, g, T], an injective homomorphism for fixed T."""
        leaves = leaf_count(tree)
        if self.system.degree(g) > leaves:
            raise RankError(f"Element of degree {self.system.degree(g)} does not fit a tree with {leaves} leaves")
        forest = ForestWord.tree(tree)
        return ThompsonElement(forest, self.system.include(g, leaves), forest)

    def random_element(self, leaves: int, rng: random.Random) -> ThompsonElement:
        return self.from_trees(random_tree(leaves, rng),
                               self.system.random_element(leaves, rng),
                               random_tree(leaves, rng))

    # -- expansion and reduction

    def expand(self, t: ThompsonElement, forest: ForestWord) -> ThompsonElement:
        """[E- (g.F), g^F, E+ F]."""
        forest.require_rank(t.feet)
        moved, cloned = act_on_forest(self.system, t.mid, forest, t.feet)
        return ThompsonElement(t.left * moved, cloned, t.right * forest)

    def truncate(self, t: ThompsonElement, n: int) -> ThompsonElement:
        """An equal triple whose trees have at least n + 1 leaves."""
        while t.feet < n + 1:
            t = self.expand(t, ForestWord.caret(t.feet))
        return t

    def _reduce_once(self, t: ThompsonElement) -> Optional[ThompsonElement]:
        system = self.system
        smaller = t.feet - 1
        left_carets = set(t.left.elementary_carets())
        for k in sorted(t.right.elementary_carets(), reverse=True):
            if system.supports_unclone:
                g = system.unclone(t.mid, k, smaller)
            elif system.eq(t.mid, system.identity(t.feet)):
                g = system.identity(smaller)
            else:
                g = None
            if g is None:
                continue
            moved = system.rho(g, smaller)(k)
            if moved not in left_carets:
                continue
            return ThompsonElement(t.left.remove_caret(moved), g, t.right.remove_caret(k))
        return None

    def reduce(self, t: ThompsonElement) -> ThompsonElement:
        """Cancel carets until none cancels; minimal when the system can unclone."""
        if not self.system.supports_unclone:
            logger.debug(f"{self.system.name} cannot unclone, reducing identity middles only")
        while True:
            smaller = self._reduce_once(t)
            if smaller is None:
                return t
            t = smaller

    # -- group law

    def _align(self, s: ThompsonElement, t: ThompsonElement) -> Tuple[ThompsonElement, ThompsonElement]:
        """Expand both so that their right forests agree."""
        _, ca, cb = forest_lcm_right(s.right, t.right)
        return self.expand(s, ca), self.expand(t, cb)

    def compare(self, s: ThompsonElement, t: ThompsonElement) -> Optional[bool]:
        s, t = self._align(s, t)
        if s.left != t.left:
            return False
        return self.system.compare(s.mid, t.mid)

    def eq(self, s: ThompsonElement, t: ThompsonElement) -> bool:
        return self.compare(s, t) is True

    def mul(self, s: ThompsonElement, t: ThompsonElement) -> ThompsonElement:
        """[E-, g, E+][F-, h, F+]: expand s by A and t by h^-1 . B where E+ A = F- B."""
        _, ca, cb = forest_lcm_right(s.right, t.left)
        # h . (h^-1 . B) = B, so the expanded t has left forest F- B
        pulled, _ = act_on_forest(self.system, self.system.inv(t.mid), cb, t.feet)
        s, t = self.expand(s, ca), self.expand(t, pulled)
        return ThompsonElement(s.left, self.system.mul(s.mid, t.mid), t.right)

    def inv(self, t: ThompsonElement) -> ThompsonElement:
        return ThompsonElement(t.right, self.system.inv(t.mid), t.left)

    def is_identity(self, t: ThompsonElement) -> Optional[bool]:
        return self.compare(t, self.identity())

    def commutator(self, s: ThompsonElement, t: ThompsonElement) -> ThompsonElement:
        return self.mul(self.mul(s, t), self.mul(self.inv(s), self.inv(t)))

    # -- morphisms

    def apply_morphism(self, morphism, t: ThompsonElement) -> ThompsonElement:
        """The image of t under the map induced by a morphism of cloning systems."""
        if morphism.source is not self.system and morphism.source.name != self.system.name:
            raise SystemMismatchError(f"Morphism {morphism.name} starts at {morphism.source.name}, "
                                      f"not {self.system.name}")
        morphism.ensure_verified()
        image = morphism.apply(t.mid, t.feet)
        return ThompsonElement(t.left, morphism.target.include(image, t.feet), t.right)

    def kernel_splitting_check(self, samples: int, rng: random.Random,
                               max_leaves: int = 5) -> AxiomReport:
        """For trivial rho: projecting to F after the section from F is the identity,
        and t * s(pi(t))^-1 has the form [T, g, T]."""
        if not self.system.rho_trivial:
            raise SystemMismatchError(f"System {self.system.name} has nontrivial rho")
        from services.permutation_systems import TrivialSystem
        thompson_f = ThompsonGroup(TrivialSystem())
        report = AxiomReport(self.system.name)
        section = _Tally("splitting_section", max_leaves, "sampled")
        kernel = _Tally("kernel_form", max_leaves, "sampled")
        projection = _Tally("projection_homomorphism", max_leaves, "sampled")
        for _ in range(samples):
            f = thompson_f.random_element(rng.randint(1, max_leaves), rng)
            lifted = self.section(f)
            section.record(thompson_f.eq(self.project_to_f(lifted), f), lambda: format_element(thompson_f, f))
            t = self.random_element(rng.randint(1, max_leaves), rng)
            k = self.mul(t, self.inv(self.section(self.project_to_f(t))))
            kernel.record(k.left == k.right, lambda: self.format(t))
            u = self.random_element(rng.randint(1, max_leaves), rng)
            image = self.project_to_f(self.mul(t, u))
            product = thompson_f.mul(self.project_to_f(t), self.project_to_f(u))
            projection.record(thompson_f.eq(image, product), lambda: f"{self.format(t)} ; {self.format(u)}")
        report.add(section.result())
        report.add(kernel.result())
        report.add(projection.result())
        return report

    def project_to_f(self, t: ThompsonElement) -> ThompsonElement:
        return ThompsonElement(t.left, (), t.right)

    def section(self, f: ThompsonElement) -> ThompsonElement:
        return ThompsonElement(f.left, self.system.identity(f.feet), f.right)

    # -- text

    def format(self, t: ThompsonElement) -> str:
        return format_element(self, t)

    def parse(self, text: str) -> ThompsonElement:
        parts = text.split("|")
        if len(parts) != 3:
            raise ElementParseError(f"Expected 'left_tree | mid | right_tree', got {text!r}")
        left, right = parse_tree(parts[0]), parse_tree(parts[2])
        leaves = leaf_count(left)
        mid = self.system.parse(parts[1].strip(), leaves)
        return self.from_trees(left, mid, right)


def format_element(group: ThompsonGroup, t: ThompsonElement) -> str:
    return f"{t.left.tree_string()} | {group.system.serialize(t.mid)} | {t.right.tree_string()}"


# ---------------------------------------------------------------- standard elements

def thompson_x0(group: ThompsonGroup) -> ThompsonElement:
    return group.element(ForestWord((1, 1)), group.system.identity(3), ForestWord((1, 2)))


def thompson_x1(group: ThompsonGroup) -> ThompsonElement:
    return group.element(ForestWord((1, 2, 2)), group.system.identity(4), ForestWord((1, 2, 3)))


def transposition_sigma(group: ThompsonGroup, swap: Element) -> ThompsonElement:
    """[caret, swap, caret] for a degree-2 element swap, e.g. (1 2) in V."""
    caret = ForestWord.caret(1)
    return group.element(caret, swap, caret)


def first_coordinate_retraction(group: ThompsonGroup, t: ThompsonElement) -> Element:
    """[T-, (g_1, ..., g_n), T+] -> g_1 for direct-power systems."""
    retract = getattr(group.system, 'retraction', None)
    if retract is None:
        raise SystemMismatchError(f"System {group.system.name} is not a direct power")
    return retract(t.mid)


def clone_matches_expansion(group: ThompsonGroup, t: ThompsonElement, forest: ForestWord) -> bool:
    """The middle of an expansion is the clone of the middle along the forest."""
    return group.system.eq(group.expand(t, forest).mid, clone_by_forest(group.system, t.mid, forest, t.feet))

