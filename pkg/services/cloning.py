"""
Cloning systems.

A cloning system on a directed family of groups G_1 <= G_2 <= ... consists of
homomorphisms rho_n: G_n -> S_n and cloning maps kappa_k^n: G_n -> G_{n+1}
describing how a split at strand k moves past a group element. This module
holds the permutation type, the abstract system interface, the derived
actions of group elements on forests, and the axiom checkers.
"""
import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from services.errors import ElementParseError, UnsupportedOperationError
from services.forest_monoid import ForestWord, forest_normal_form
from utils.concurrency import parallel_map

logger = logging.getLogger(__name__)

Element = Any


# ---------------------------------------------------------------- permutations

@dataclass(frozen=True)
class Permutation:
    """Finitary permutation of the positive integers acting on the left.

    ``images[i - 1]`` is the image of i; trailing fixed points are dropped,
    so equal permutations compare equal whatever degree they were built in.
    Composition: (g * h)(x) = g(h(x)).
    """

    images: Tuple[int, ...] = ()

    def __post_init__(self):
        images = list(self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"Not a permutation: {self.images}")
        while images and images[-1] == len(images):
            images.pop()
        object.__setattr__(self, "images", tuple(images))

    @classmethod
    def identity(cls) -> "Permutation":
        return cls()

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> "Permutation":
        cycles = [tuple(cycle) for cycle in cycles]
        size = max((max(cycle) for cycle in cycles if cycle), default=0)
        images = list(range(1, size + 1))
        seen = set()
        for cycle in cycles:
            if seen & set(cycle) or len(set(cycle)) != len(cycle):
                raise ValueError(f"Cycles are not disjoint: {cycles}")
            seen |= set(cycle)
            for position, point in enumerate(cycle):
                images[point - 1] = cycle[(position + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def transposition(cls, i: int, j: int) -> "Permutation":
        return cls.from_cycles([(i, j)])

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse cycle notation such as '(1 3 2)(4 5)'; '()' is the identity."""
        source = text.strip()
        if source in ("", "()", "1", "id"):
            return cls()
        cycles = []
        try:
            for chunk in source.replace(")", ")|").split("|"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                if not (chunk.startswith("(") and chunk.endswith(")")):
                    raise ValueError(f"bad cycle {chunk!r}")
                body = chunk[1:-1].replace(",", " ").split()
                if body:
                    cycles.append(tuple(int(point) for point in body))
            return cls.from_cycles(cycles)
        except ValueError as e:
            raise ElementParseError(f"Invalid permutation {text!r}: {e}")

    def __call__(self, point: int) -> int:
        if point <= len(self.images):
            return self.images[point - 1]
        return point

    def __mul__(self, other: "Permutation") -> "Permutation":
        size = max(len(self.images), len(other.images))
        return Permutation(tuple(self(other(x)) for x in range(1, size + 1)))

    def inverse(self) -> "Permutation":
        images = [0] * len(self.images)
        for source, target in enumerate(self.images, start=1):
            images[target - 1] = source
        return Permutation(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def images_on(self, n: int) -> Tuple[int, ...]:
        return tuple(self(x) for x in range(1, n + 1))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        cycles = []
        for start in range(1, len(self.images) + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            point = self(start)
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self(point)
            cycles.append(tuple(cycle))
        return cycles

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(point) for point in cycle) + ")" for cycle in cycles)


def symm_clone(g: Permutation, k: int) -> Permutation:
    """Double strand k of g; the two copies keep their order."""
    size = max(g.degree, k) + 1
    gk = g(k)
    images = []
    for m in range(1, size + 1):
        if m <= k:
            value = g(m)
            images.append(value if value <= gk else value + 1)
        else:
            value = g(m - 1)
            images.append(value if value < gk else value + 1)
    return Permutation(tuple(images))


# ---------------------------------------------------------------- systems

class CloningSystem(ABC):
    """Interface every concrete cloning system implements.

    Elements are plain immutable values. Degrees are explicit: ``kappa(g, k, n)``
    treats g as an element of G_n and returns an element of G_{n+1}; for
    k > n it is the inclusion.
    """

    name: str = "abstract"
    # compatibility also holds at i = k, k + 1
    strict_compatibility: bool = True
    # kappa_k kappa_k = kappa_{k+1} kappa_k
    factors_through_hedges: bool = False
    finite: bool = True
    presented: bool = False
    rho_trivial: bool = False
    supports_unclone: bool = False
    supports_reduction: bool = False

    # -- group structure

    @abstractmethod
    def identity(self, n: int = 1) -> Element:
        """The identity of G_n."""

    @abstractmethod
    def mul(self, g: Element, h: Element) -> Element:
        """Product g h."""

    @abstractmethod
    def inv(self, g: Element) -> Element:
        """Inverse of g."""

    def eq(self, g: Element, h: Element) -> bool:
        size = max(self.degree(g), self.degree(h))
        return self.include(g, size) == self.include(h, size)

    def compare(self, g: Element, h: Element) -> Optional[bool]:
        """Equality that may answer None when it cannot be decided."""
        return self.eq(g, h)

    @abstractmethod
    def degree(self, g: Element) -> int:
        """Least n >= 1 with g in G_n."""

    @abstractmethod
    def include(self, g: Element, n: int) -> Element:
        """Image of g under the inclusion into G_n (n >= degree(g))."""

    def restrict(self, g: Element, n: int) -> Optional[Element]:
        """The preimage of g in G_n under inclusion, or None."""
        if self.degree(g) <= n:
            return self.include(g, n)
        return None

    # -- cloning data

    @abstractmethod
    def rho(self, g: Element, n: int) -> Permutation:
        """The permutation of strands 1..n induced by g."""

    @abstractmethod
    def _clone(self, g: Element, k: int, n: int) -> Element:
        """kappa_k^n for 1 <= k <= n; g is already in G_n."""

    def kappa(self, g: Element, k: int, n: int) -> Element:
        if k < 1:
            raise ValueError(f"Cloning index must be positive, got {k}")
        if self.degree(g) > n:
            raise ValueError(f"Element of degree {self.degree(g)} cloned as an element of G_{n}")
        g = self.include(g, n)
        if k > n:
            return self.include(g, n + 1)
        return self._clone(g, k, n)

    def _unclone(self, h: Element, k: int, n: int) -> Optional[Element]:
        raise UnsupportedOperationError(f"System {self.name} does not provide unclone")

    def unclone(self, h: Element, k: int, n: int) -> Optional[Element]:
        """The g in G_n with kappa(g, k, n) == h, or None if h is not a clone."""
        if not self.supports_unclone:
            raise UnsupportedOperationError(f"System {self.name} does not provide unclone")
        if self.degree(h) > n + 1:
            return None
        h = self.include(h, n + 1)
        if k > n:
            return self.restrict(h, n)
        return self._unclone(h, k, n)

    # -- enumeration and sampling

    def elements(self, n: int) -> Iterable[Element]:
        raise UnsupportedOperationError(f"System {self.name} cannot enumerate G_{n}")

    def order(self, n: int) -> Optional[int]:
        return None

    @abstractmethod
    def random_element(self, n: int, rng: random.Random) -> Element:
        """A random element of G_n."""

    def generators(self, n: int) -> List[Element]:
        return []

    def relators(self, n: int) -> List[Tuple[Element, Element]]:
        return []

    # -- text

    @abstractmethod
    def serialize(self, g: Element) -> str:
        """Text form of g."""

    @abstractmethod
    def parse(self, text: str, n: Optional[int] = None) -> Element:
        """Inverse of serialize."""

    def key(self, g: Element, n: int) -> str:
        """Comparison key of g regarded as an element of G_n."""
        return self.serialize(self.include(g, n))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


# ---------------------------------------------------------------- derived actions

def _working_degree(system: CloningSystem, g: Element, forest: ForestWord, n: Optional[int]) -> int:
    if n is None:
        return max(system.degree(g), forest.rank, 1)
    forest.require_rank(n)
    return n


def clone_by_forest(system: CloningSystem, g: Element, forest: ForestWord,
                    n: Optional[int] = None) -> Element:
    """g^E: clone g along the carets of E in word order."""
    degree = _working_degree(system, g, forest, n)
    current = system.include(g, degree)
    for k in forest.indices:
        current = system.kappa(current, k, degree)
        degree += 1
    return current


def act_on_forest(system: CloningSystem, g: Element, forest: ForestWord,
                  n: Optional[int] = None) -> Tuple[ForestWord, Element]:
    """Return (g . E, g^E), so that g E = (g . E) g^E in the Zappa-Szep product."""
    degree = _working_degree(system, g, forest, n)
    current = system.include(g, degree)
    moved = []
    for k in forest.indices:
        moved.append(system.rho(current, degree)(k))
        current = system.kappa(current, k, degree)
        degree += 1
    return forest_normal_form(moved), current


def unclone_by_forest(system: CloningSystem, h: Element, forest: ForestWord,
                      n: int) -> Optional[Element]:
    """The g in G_n with clone_by_forest(g, E, n) == h, or None."""
    current = h
    for position in range(len(forest) - 1, -1, -1):
        current = system.unclone(current, forest.indices[position], n + position)
        if current is None:
            return None
    return current


# ---------------------------------------------------------------- reports

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_UNDECIDED = "undecided"
STATUS_NOT_CHECKED = "not checked"
STATUS_BUDGET = "budget"

INFORMATIONAL_AXIOMS = {"compatibility_strict"}


@dataclass
class AxiomResult:
    axiom: str
    n: int
    status: str
    mode: str
    checked: int = 0
    witness: str = ""


@dataclass
class AxiomReport:
    system: str
    results: List[AxiomResult] = field(default_factory=list)

    def add(self, result: AxiomResult) -> None:
        self.results.append(result)

    def extend(self, other: "AxiomReport") -> None:
        self.results.extend(other.results)

    @property
    def passed(self) -> bool:
        return all(result.status in (STATUS_PASS, STATUS_NOT_CHECKED)
                   for result in self.results if result.axiom not in INFORMATIONAL_AXIOMS)

    @property
    def strict_compatibility(self) -> bool:
        strict = [r for r in self.results if r.axiom == "compatibility_strict"]
        return bool(strict) and all(r.status == STATUS_PASS for r in strict)

    def failures(self) -> List[AxiomResult]:
        return [r for r in self.results
                if r.status in (STATUS_FAIL, STATUS_UNDECIDED, STATUS_BUDGET)
                and r.axiom not in INFORMATIONAL_AXIOMS]

    def find(self, axiom: str, n: Optional[int] = None) -> List[AxiomResult]:
        return [r for r in self.results if r.axiom == axiom and (n is None or r.n == n)]

    def to_rows(self) -> List[List[str]]:
        return [[r.axiom, str(r.n), r.status, r.mode, str(r.checked), r.witness]
                for r in self.results]

    HEADER = ["axiom", "n", "status", "mode", "checked", "witness"]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'system': self.system,
            'passed': self.passed,
            'strict_compatibility': self.strict_compatibility,
            'results': [dict(zip(self.HEADER, row)) for row in self.to_rows()],
        }


class _Tally:
    """Accumulates outcomes of individual identity checks for one report row."""

    def __init__(self, axiom: str, n: int, mode: str):
        self.axiom = axiom
        self.n = n
        self.mode = mode
        self.checked = 0
        self.failure: Optional[str] = None
        self.undecided: Optional[str] = None

    def record(self, outcome: Optional[bool], witness) -> None:
        self.checked += 1
        if outcome is False and self.failure is None:
            self.failure = witness() if callable(witness) else witness
        elif outcome is None and self.undecided is None:
            self.undecided = witness() if callable(witness) else witness

    def result(self) -> AxiomResult:
        if self.failure is not None:
            return AxiomResult(self.axiom, self.n, STATUS_FAIL, self.mode, self.checked, self.failure)
        if self.undecided is not None:
            return AxiomResult(self.axiom, self.n, STATUS_UNDECIDED, self.mode, self.checked, self.undecided)
        return AxiomResult(self.axiom, self.n, STATUS_PASS, self.mode, self.checked)


# ---------------------------------------------------------------- axiom checks

EXHAUSTIVE_ORDER_LIMIT = 20000
PAIR_LIMIT = 600000
DEFAULT_SAMPLES = 300


def _sample_pool(system: CloningSystem, n: int, rng: random.Random, samples: int) -> List[Element]:
    pool = list(system.generators(n))
    base = pool or [system.random_element(n, rng) for _ in range(4)]
    pool.append(system.identity(n))
    while len(pool) < samples:
        if rng.random() < 0.5:
            pool.append(system.random_element(n, rng))
        else:
            left = rng.choice(base)
            right = rng.choice(pool)
            pool.append(system.mul(left, right))
    return pool


def _fmt(system: CloningSystem, **parts) -> str:
    rendered = []
    for name, value in parts.items():
        if isinstance(value, int):
            rendered.append(f"{name}={value}")
        else:
            rendered.append(f"{name}={system.serialize(value)}")
    return " ".join(rendered)


def _check_single(system: CloningSystem, g: Element, n: int) -> Dict[str, list]:
    """All single-element identities for g in G_n: commutation of clones (also per hedge) and both forms of compatibility."""
    outcomes: Dict[str, list] = {"clone_commutation": [], "hedge_commutation": [], "compatibility": [], "compatibility_strict": []}
    clones = {k: system.kappa(g, k, n) for k in range(1, n + 1)}
    rho_g = system.rho(g, n)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            left = system.kappa(clones[l], k, n + 1)
            right = system.kappa(clones[k], l + 1, n + 1)
            outcomes["clone_commutation"].append((system.compare(left, right), (g, k, l)))
        if system.factors_through_hedges:
            left = system.kappa(clones[k], k, n + 1)
            right = system.kappa(clones[k], k + 1, n + 1)
            outcomes["hedge_commutation"].append((system.compare(left, right), (g, k, k)))
        cloned_rho = system.rho(clones[k], n + 1)
        expected = symm_clone(rho_g, k)
        relaxed = all(cloned_rho(i) == expected(i) for i in range(1, n + 2) if i not in (k, k + 1))
        strict = relaxed and cloned_rho(k) == expected(k) and cloned_rho(k + 1) == expected(k + 1)
        outcomes["compatibility"].append((relaxed, (g, k, None)))
        outcomes["compatibility_strict"].append((strict, (g, k, None)))
    return outcomes


def _check_pair(system: CloningSystem, pair: Tuple[Element, Element], n: int) -> List[tuple]:
    """Cloning of products and multiplicativity of rho for one pair."""
    g, h = pair
    gh = system.mul(g, h)
    outcomes = []
    rho_h = system.rho(h, n)
    hom = system.rho(gh, n) == system.rho(g, n) * rho_h
    outcomes.append(("rho_homomorphism", hom, (g, h, None)))
    for k in range(1, n + 1):
        left = system.kappa(gh, k, n)
        right = system.mul(system.kappa(g, rho_h(k), n), system.kappa(h, k, n))
        outcomes.append(("cloning_product", system.compare(left, right), (g, h, k)))
    return outcomes


def check_axioms(system: CloningSystem, n_max: int, rng: Optional[random.Random] = None,
                 samples: int = DEFAULT_SAMPLES, relators: bool = False,
                 order_limit: int = EXHAUSTIVE_ORDER_LIMIT,
                 pair_limit: int = PAIR_LIMIT) -> AxiomReport:
    """Check the cloning-system axioms for every degree 1..n_max.

    Finite groups below ``order_limit`` are checked exhaustively; otherwise the
    checks run over generators plus random products, and presented systems can
    additionally check every defining relator and its clones.
    """
    rng = rng or random.Random(0)
    report = AxiomReport(system.name)
    logger.info(f"Checking cloning axioms for {system.name} up to n={n_max}")
    for n in range(1, n_max + 1):
        order = system.order(n) if system.finite else None
        exhaustive = order is not None and order <= order_limit
        if exhaustive:
            pool = list(system.elements(n))
            mode = "exhaustive"
        else:
            pool = _sample_pool(system, n, rng, samples)
            mode = "generators" if system.presented else "sampled"
        logger.info(f"{system.name}: n={n}, {len(pool)} elements ({mode})")

        singles = {name: _Tally(name, n, mode) for name in ("clone_commutation", "hedge_commutation", "compatibility", "compatibility_strict")}
        for outcome in parallel_map(lambda g: _check_single(system, g, n), pool):
            for name, entries in outcome.items():
                for value, (g, k, l) in entries:
                    parts = {"g": g, "k": k} if l is None else {"g": g, "k": k, "l": l}
                    singles[name].record(value, lambda parts=parts: _fmt(system, **parts))

        if exhaustive and len(pool) ** 2 <= pair_limit:
            pairs = list(product(pool, repeat=2))
            pair_mode = "exhaustive"
        else:
            count = min(samples, len(pool) ** 2)
            pairs = [(rng.choice(pool), rng.choice(pool)) for _ in range(count)]
            pair_mode = "sampled"
        pair_tallies = {name: _Tally(name, n, pair_mode) for name in ("rho_homomorphism", "cloning_product")}
        for outcome in parallel_map(lambda pair: _check_pair(system, pair, n), pairs):
            for name, value, (g, h, k) in outcome:
                parts = {"g": g, "h": h} if k is None else {"g": g, "h": h, "k": k}
                pair_tallies[name].record(value, lambda parts=parts: _fmt(system, **parts))

        report.add(pair_tallies["rho_homomorphism"].result())
        report.add(pair_tallies["cloning_product"].result())
        report.add(singles["clone_commutation"].result())
        if system.factors_through_hedges:
            report.add(singles["hedge_commutation"].result())
        report.add(singles["compatibility"].result())
        report.add(singles["compatibility_strict"].result())

        if exhaustive:
            report.add(_check_injective(system, pool, n))
            if system.supports_unclone:
                report.add(_check_unclone(system, pool, n))
        if relators or (system.presented and not exhaustive):
            report.add(check_relators(system, n))
    return report


def _check_injective(system: CloningSystem, pool: List[Element], n: int) -> AxiomResult:
    tally = _Tally("kappa_injective", n, "exhaustive")
    for k in range(1, n + 1):
        seen: Dict[str, Element] = {}
        for g in pool:
            key = system.key(system.kappa(g, k, n), n + 1)
            clash = seen.get(key)
            tally.record(clash is None, lambda: _fmt(system, g=g, h=clash, k=k))
            seen[key] = g
    return tally.result()


def _check_unclone(system: CloningSystem, pool: List[Element], n: int) -> AxiomResult:
    tally = _Tally("unclone", n, "exhaustive")
    for k in range(1, n + 1):
        for g in pool:
            back = system.unclone(system.kappa(g, k, n), k, n)
            tally.record(back is not None and system.eq(back, g), lambda: _fmt(system, g=g, k=k))
    return tally.result()


def check_relators(system: CloningSystem, n: int) -> AxiomResult:
    """Each defining relator u = v holds, and so does (u)kappa_p = (v)kappa_p for all p <= n."""
    tally = _Tally("relators", n, "relators")
    for u, v in system.relators(n):
        tally.record(system.compare(u, v), lambda: _fmt(system, u=u, v=v))
        for p in range(1, n + 1):
            tally.record(system.compare(system.kappa(u, p, n), system.kappa(v, p, n)),
                         lambda: _fmt(system, u=u, v=v, k=p))
    return tally.result()


def check_properly_graded(system: CloningSystem, n_max: int,
                          order_limit: int = EXHAUSTIVE_ORDER_LIMIT) -> AxiomReport:
    """If a clone of h lies in the previous level, then so does h itself."""
    report = AxiomReport(system.name)
    for n in range(1, n_max + 1):
        if not system.finite:
            report.add(AxiomResult("properly_graded", n, STATUS_NOT_CHECKED, "exhaustive"))
            continue
        order = system.order(n)
        if order is None or order > order_limit:
            report.add(AxiomResult("properly_graded", n, STATUS_BUDGET, "exhaustive",
                                   witness=f"|G_{n}|={order} exceeds {order_limit}"))
            continue
        tally = _Tally("properly_graded", n, "exhaustive")
        for h in system.elements(n):
            for k in range(1, n + 1):
                lands_low = system.restrict(system.kappa(h, k, n), n) is not None
                holds = (not lands_low) or _in_level(system, h, n - 1)
                tally.record(holds, lambda: _fmt(system, h=h, k=k))
        report.add(tally.result())
    return report


def _in_level(system: CloningSystem, h: Element, m: int) -> bool:
    # G_0 is the trivial group
    if m == 0:
        return system.eq(h, system.identity(1))
    return system.restrict(h, m) is not None
