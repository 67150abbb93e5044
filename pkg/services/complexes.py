"""
Finite complexes attached to cloning systems.

- matching complexes of the linear graph with every edge s-fold
- descending links: simplices are dangling classes [g, Gamma] of a group
  element and a nonempty matching, faces pass to submatchings
- small balls of the Stein-Farley complex around a vertex, as an inventory
  of vertices and cubes
"""
import logging
import os
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from services.cloning import CloningSystem, act_on_forest
from services.errors import BudgetExceededError, CloneforgeError, UnsupportedOperationError
from services.forest_monoid import (EMPTY_FOREST, ForestWord, elementary_forests,
                                    forest_to_matching, forests_with_rank_at_most,
                                    matching_to_forest, matchings)
from services.matrix_systems import BBarSystem
from services.rings import PrimeField
from services.thompson import (FractionTriple, ThompsonElement, fraction_in_group,
                               fraction_inv, fraction_mul)

logger = logging.getLogger(__name__)

Element = Any
Simplex = Tuple[int, ...]

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    raw = os.environ.get('CLONEFORGE_BUDGET')
    if raw:
        try:
            return max(1, int(float(raw)))
        except ValueError:
            logger.warning(f"Ignoring invalid CLONEFORGE_BUDGET value: {raw}")
    return DEFAULT_BUDGET


def _require_budget(what: str, projected: int, budget: Optional[int]) -> None:
    budget = default_budget() if budget is None else budget
    logger.info(f"{what}: projected size {projected} (budget {budget})")
    if projected > budget:
        raise BudgetExceededError(f"{what} needs {projected} simplices, over the budget of {budget}",
                                  projected=projected, budget=budget)


# ---------------------------------------------------------------- simplicial complexes

class SimplicialComplex:
    """Vertices 0..v-1 with labels; simplices stored per dimension as sorted tuples, closed under faces."""

    def __init__(self, labels: Iterable[str] = ()):
        self.labels: List[str] = []
        self._index: Dict[str, int] = {}
        self._simplices: Dict[int, Set[Simplex]] = defaultdict(set)
        for label in labels:
            self.add_vertex(label)

    def add_vertex(self, label: str) -> int:
        index = self._index.get(label)
        if index is None:
            index = len(self.labels)
            self.labels.append(label)
            self._index[label] = index
            self._simplices[0].add((index,))
        return index

    def vertex(self, label: str) -> int:
        return self._index[label]

    def add_simplex(self, vertices: Iterable[int]) -> Simplex:
        simplex = tuple(sorted(set(vertices)))
        d = len(simplex) - 1
        if d < 0 or simplex in self._simplices[d]:
            return simplex
        self._simplices[d].add(simplex)
        for size in range(len(simplex) - 1, 0, -1):
            for face in combinations(simplex, size):
                self._simplices[size - 1].add(face)
        return simplex

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def dimension(self) -> int:
        dims = [d for d, simplices in self._simplices.items() if simplices]
        return max(dims) if dims else -1

    def simplices(self, d: int) -> List[Simplex]:
        return sorted(self._simplices.get(d, ()))

    def counts(self) -> List[int]:
        return [len(self._simplices.get(d, ())) for d in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * count for d, count in enumerate(self.counts()))

    def maximal_simplices(self) -> List[Simplex]:
        maximal = []
        for d in range(self.dimension + 1):
            covered = set()
            for simplex in self._simplices.get(d + 1, ()):
                for position in range(len(simplex)):
                    covered.add(simplex[:position] + simplex[position + 1:])
            maximal.extend(sorted(self._simplices[d] - covered))
        return maximal

    def export(self) -> str:
        """Header 'dim <n> vertices <v>', then one line 'k v1 ... vk' per maximal simplex, 1-based."""
        lines = [f"dim {self.dimension} vertices {self.vertex_count}"]
        for simplex in self.maximal_simplices():
            lines.append(" ".join([str(len(simplex))] + [str(v + 1) for v in simplex]))
        return "\n".join(lines) + "\n"

    def image(self, mapping: Dict[int, int]) -> Dict[int, Set[Simplex]]:
        return {d: {tuple(sorted(mapping[v] for v in simplex)) for simplex in simplices}
                for d, simplices in self._simplices.items() if simplices}

    def simplex_sets(self) -> Dict[int, Set[Simplex]]:
        return {d: set(simplices) for d, simplices in self._simplices.items() if simplices}


def parse_complex(text: str) -> SimplicialComplex:
    """Read back the export format; labels become the 1-based ids."""
    lines = [line for line in text.splitlines() if line.strip()]
    header = lines[0].split()
    complex_ = SimplicialComplex(str(v) for v in range(1, int(header[3]) + 1))
    for line in lines[1:]:
        values = [int(part) for part in line.split()]
        complex_.add_simplex(v - 1 for v in values[1:1 + values[0]])
    return complex_


# ---------------------------------------------------------------- matching complexes

def matching_vertex_label(edge: int, copy: int, s: int) -> str:
    return f"e{edge}" if s == 1 else f"e{edge}.{copy}"


def build_matching_complex(n: int, s: int = 1, budget: Optional[int] = None) -> SimplicialComplex:
    """Matchings of the linear graph on n vertices with each edge repeated s times."""
    if n < 1 or s < 1:
        raise ValueError(f"Matching complex needs n >= 1 and s >= 1, got n={n}, s={s}")
    projected = sum(s ** len(matching) for matching in matchings(n) if matching)
    _require_budget(f"matching complex n={n} s={s}", projected, budget)
    complex_ = SimplicialComplex(matching_vertex_label(e, c, s)
                                 for e in range(1, n) for c in range(1, s + 1))
    for matching in matchings(n):
        if not matching:
            continue
        for copies in product(range(1, s + 1), repeat=len(matching)):
            complex_.add_simplex(complex_.vertex(matching_vertex_label(e, c, s))
                                 for e, c in zip(matching, copies))
    return complex_


# ---------------------------------------------------------------- descending links

@dataclass(frozen=True)
class DanglingClass:
    """Canonical (lexicographically least) representative of a dangling class."""

    element: str
    edges: Tuple[int, ...]

    def label(self) -> str:
        return f"[{self.element} | {','.join(f'e{e}' for e in self.edges)}]"


@dataclass
class DescendingLink:
    complex: SimplicialComplex
    classes: Dict[int, List[DanglingClass]] = field(default_factory=dict)
    representatives: Dict[DanglingClass, Element] = field(default_factory=dict)

    def class_counts(self) -> List[int]:
        return [len(self.classes.get(d, ())) for d in range(max(self.classes, default=-1) + 1)]


def projected_link_size(system: CloningSystem, n: int) -> int:
    order = system.order(n)
    if order is None:
        raise UnsupportedOperationError(f"{system.name} has infinite groups; descending links need G_{n} finite")
    total = 0
    for matching in matchings(n):
        if matching:
            total += order // system.order(n - len(matching))
    return total


def build_dlk(system: CloningSystem, n: int, budget: Optional[int] = None) -> DescendingLink:
    """The descending link at a vertex with n feet."""
    if not system.finite:
        raise UnsupportedOperationError(f"{system.name} has infinite groups; descending links need G_{n} finite")
    if getattr(system, 'supports_reduction', False):
        _require_budget(f"descending link of {system.name} at n={n}", projected_link_size(system, n), budget)
        return _build_dlk_reduced(system, n)
    pairs = system.order(n) * sum(1 for matching in matchings(n) if matching)
    _require_budget(f"descending link of {system.name} at n={n} (orbit enumeration)", pairs, budget)
    return _build_dlk_orbits(system, n)


def _dangling_orbit(system: CloningSystem, g: Element, edges: Tuple[int, ...], n: int):
    """All (g kappa_E(h)^-1, Gamma(h.E)) for h in G_{n-m}."""
    forest = matching_to_forest(edges, n)
    lower = n - len(edges)
    for h in system.elements(lower):
        moved, cloned = act_on_forest(system, h, forest, lower)
        yield system.mul(g, system.inv(cloned)), forest_to_matching(moved)


def _build_dlk_orbits(system: CloningSystem, n: int) -> DescendingLink:
    class_of: Dict[Tuple[str, Tuple[int, ...]], DanglingClass] = {}
    link = DescendingLink(SimplicialComplex())
    members: Dict[DanglingClass, Tuple[Element, Tuple[int, ...]]] = {}
    for matching in matchings(n):
        if not matching:
            continue
        for g in system.elements(n):
            if (system.key(g, n), matching) in class_of:
                continue
            orbit = [(system.key(h, n), edges, h) for h, edges in _dangling_orbit(system, g, matching, n)]
            key, edges, representative = min(orbit, key=lambda entry: (entry[0], entry[1]))
            dangling = DanglingClass(key, edges)
            for member_key, member_edges, _ in orbit:
                class_of[(member_key, member_edges)] = dangling
            members[dangling] = (representative, edges)
    logger.info(f"{system.name} n={n}: {len(members)} dangling classes")
    _fill_link(link, members, lambda g, edge: class_of[(system.key(g, n), (edge,))])
    return link


def _build_dlk_reduced(system, n: int) -> DescendingLink:
    link = DescendingLink(SimplicialComplex())
    members: Dict[DanglingClass, Tuple[Element, Tuple[int, ...]]] = {}
    for matching in matchings(n):
        if not matching:
            continue
        for g in system.reduced_representatives(matching, n):
            members[DanglingClass(system.serialize(g), matching)] = (g, matching)
    logger.info(f"{system.name} n={n}: {len(members)} reduced representatives")

    def vertex_class(g, edge):
        return DanglingClass(system.serialize(system.reduce_rel_gamma(g, (edge,))), (edge,))

    _fill_link(link, members, vertex_class)
    return link


def _fill_link(link: DescendingLink, members, vertex_class) -> None:
    ordered = sorted(members, key=lambda c: (len(c.edges), c.edges, c.element))
    for dangling in ordered:
        if len(dangling.edges) == 1:
            link.complex.add_vertex(dangling.label())
    for dangling in ordered:
        g, edges = members[dangling]
        vertices = [link.complex.vertex(vertex_class(g, edge).label()) for edge in edges]
        link.complex.add_simplex(vertices)
        link.classes.setdefault(len(edges) - 1, []).append(dangling)
        link.representatives[dangling] = g
    if link.class_counts() != link.complex.counts():
        raise CloneforgeError(f"Dangling classes {link.class_counts()} and simplices {link.complex.counts()} differ")


def canonical_class(system: CloningSystem, g: Element, edges: Sequence[int], n: int) -> DanglingClass:
    """Canonical form of [g, Gamma], by orbit enumeration or by reduction."""
    edges = tuple(sorted(edges))
    if getattr(system, 'supports_reduction', False):
        return DanglingClass(system.serialize(system.reduce_rel_gamma(g, edges)), edges)
    key, found, _ = min(((system.key(h, n), moved, h) for h, moved in _dangling_orbit(system, g, edges, n)),
                        key=lambda entry: (entry[0], entry[1]))
    return DanglingClass(key, found)


# ---------------------------------------------------------------- B-bar identification

@dataclass
class SimplicialIsomorphism:
    source: SimplicialComplex
    target: SimplicialComplex
    mapping: Dict[int, int]


def dlk_bbar_isomorphism(n: int, p: int, budget: Optional[int] = None) -> Optional[SimplicialIsomorphism]:
    """Match the descending link of B-bar over F_p with the matching complex of sL_n, s = (p-1)p.

    A vertex [x, e] goes to edge e labelled by the pair (x_ee / x_(e+1)(e+1), x_e(e+1) / x_(e+1)(e+1)),
    read off its reduced representative. Returns None if that is not an isomorphism.
    """
    ring = PrimeField(p)
    system = BBarSystem(ring)
    link = build_dlk(system, n, budget)
    labels = list(product(ring.units(), ring.elements()))
    s = len(labels)
    target = build_matching_complex(n, s, budget)
    copy_of = {label: copy for copy, label in enumerate(labels, start=1)}
    mapping: Dict[int, int] = {}
    for dangling in link.classes.get(0, []):
        g = link.representatives[dangling]
        (edge,) = dangling.edges
        scale = ring.unit_inverse(g.diag[edge])
        label = (ring.mul(g.diag[edge - 1], scale), ring.mul(g.offdiag[edge - 1], scale))
        mapping[link.complex.vertex(dangling.label())] = target.vertex(
            matching_vertex_label(edge, copy_of[label], s))
    if len(set(mapping.values())) != len(mapping) or len(mapping) != target.vertex_count:
        logger.warning(f"B-bar link n={n} p={p}: vertex map is not a bijection")
        return None
    if link.complex.image(mapping) != target.simplex_sets():
        logger.warning(f"B-bar link n={n} p={p}: simplices do not correspond")
        return None
    return SimplicialIsomorphism(link.complex, target, mapping)


# ---------------------------------------------------------------- Stein-Farley balls

@dataclass
class SteinBall:
    system: str
    basepoint_feet: int
    feet_max: int
    vertex_feet: List[int] = field(default_factory=list)
    cube_counts: List[int] = field(default_factory=list)
    face_euler_characteristic: int = 0

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_feet)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d * count for d, count in enumerate(self.cube_counts))

    def vertices_by_feet(self) -> Dict[int, int]:
        counts: Dict[int, int] = defaultdict(int)
        for feet in self.vertex_feet:
            counts[feet] += 1
        return dict(sorted(counts.items()))

    def to_rows(self) -> List[List[str]]:
        rows = [["vertices", str(feet), str(count)] for feet, count in self.vertices_by_feet().items()]
        rows += [["cubes", str(d), str(count)] for d, count in enumerate(self.cube_counts)]
        rows.append(["euler", "cubes", str(self.euler_characteristic)])
        rows.append(["euler", "faces", str(self.face_euler_characteristic)])
        return rows


class _VertexIndex:
    """Vertices as fractions modulo G on the right, bucketed by feet."""

    def __init__(self, system: CloningSystem, by_forest: bool):
        self.system = system
        self.by_forest = by_forest
        self.reps: List[FractionTriple] = []
        self.feet: List[int] = []
        self._forests: Dict[ForestWord, int] = {}
        self._buckets: Dict[int, List[int]] = defaultdict(list)

    def find(self, x: FractionTriple, feet: int, up: Optional[ForestWord] = None) -> Optional[int]:
        if self.by_forest:
            return self._forests.get(up)
        for index in self._buckets[feet]:
            quotient = fraction_mul(self.system, fraction_inv(self.system, self.reps[index]), x)
            if fraction_in_group(self.system, quotient) is not None:
                return index
        return None

    def add(self, x: FractionTriple, feet: int, up: Optional[ForestWord] = None) -> int:
        found = self.find(x, feet, up)
        if found is not None:
            return found
        index = len(self.reps)
        self.reps.append(x)
        self.feet.append(feet)
        self._buckets[feet].append(index)
        if self.by_forest:
            self._forests[up] = index
        return index


def _elementary_from_roots(roots: Iterable[int]) -> ForestWord:
    return ForestWord(tuple(root + position for position, root in enumerate(sorted(roots))))


def _roots_of(forest: ForestWord) -> Tuple[int, ...]:
    return tuple(index - position for position, index in enumerate(forest.indices))


def build_stein_ball(system: CloningSystem, basepoint: ThompsonElement, feet_max: int,
                     lift: Optional[ForestWord] = None, budget: Optional[int] = None) -> SteinBall:
    """Vertices y >= z for some z <= t L with at most feet_max feet, and the cubes [x, x E] among them."""
    lift = lift or EMPTY_FOREST
    if not lift.is_semisimple():
        raise ValueError(f"Lift {lift} must be a single tree")
    start_feet = lift.leaves
    if feet_max < start_feet:
        raise ValueError(f"feet_max {feet_max} is below the basepoint's {start_feet} feet")
    if not system.finite:
        raise UnsupportedOperationError(f"{system.name} has infinite groups; Stein balls need G_n finite")
    by_forest = start_feet == 1
    if not by_forest and not system.supports_unclone:
        raise UnsupportedOperationError(f"{system.name} cannot unclone; vertices cannot be identified")

    origin = fraction_mul(system, FractionTriple(basepoint.left, basepoint.mid, basepoint.right),
                          FractionTriple(lift, system.identity(1), EMPTY_FOREST))
    down: List[Tuple[FractionTriple, int]] = []
    if by_forest:
        down.append((origin, 1))
    else:
        group = list(system.elements(start_feet))
        for length in range(start_feet):
            for forest in forests_with_rank_at_most(start_feet - length, length):
                for g in group:
                    down.append((fraction_mul(system, origin, FractionTriple(EMPTY_FOREST, g, forest)),
                                 start_feet - length))
    _require_budget(f"Stein ball of {system.name} up to {feet_max} feet", len(down) * 4 ** feet_max, budget)

    index = _VertexIndex(system, by_forest)
    for z, feet in down:
        for length in range(feet_max - feet + 1):
            for forest in forests_with_rank_at_most(feet, length):
                up = fraction_mul(system, z, FractionTriple(forest, system.identity(1), EMPTY_FOREST))
                index.add(up, feet + length, forest if by_forest else None)
    up_forest = {i: forest for forest, i in index._forests.items()}

    def locate(vertex: int, roots: Iterable[int]) -> int:
        forest = _elementary_from_roots(roots)
        x = index.reps[vertex]
        top = fraction_mul(system, x, FractionTriple(forest, system.identity(1), EMPTY_FOREST))
        found = index.find(top, index.feet[vertex] + len(forest),
                           up_forest[vertex] * forest if by_forest else None)
        if found is None:
            raise RuntimeError(f"Cube top {top} escaped the ball")
        return found

    cube_counts: Dict[int, int] = defaultdict(int)
    faces: Set[Tuple[int, int, int]] = set()
    for vertex, feet in enumerate(list(index.feet)):
        for forest in elementary_forests(feet, feet_max - feet):
            cube_counts[len(forest)] += 1
            roots = _roots_of(forest)
            for bottom_size in range(len(roots) + 1):
                for bottom in combinations(roots, bottom_size):
                    rest = [r for r in roots if r not in bottom]
                    for top_size in range(len(rest) + 1):
                        for extra in combinations(rest, top_size):
                            low = locate(vertex, bottom) if bottom else vertex
                            high = locate(vertex, bottom + extra) if bottom or extra else vertex
                            faces.add((low, high, top_size))
    ball = SteinBall(system.name, start_feet, feet_max, list(index.feet),
                     [cube_counts[d] for d in range(max(cube_counts, default=-1) + 1)],
                     sum((-1) ** size for _, _, size in faces))
    logger.info(f"Stein ball of {system.name}: {ball.vertex_count} vertices, cubes {ball.cube_counts}, "
                f"euler {ball.euler_characteristic} (faces {ball.face_euler_characteristic})")
    return ball
