"""
Upper triangular matrix groups as cloning systems.

Cloning strand k of a matrix duplicates its kth row and column in the block
pattern below (k = 2):

    [[a, b, c],        [[a, b, b, c],
     [0, d, e],   ->    [0, d, 0, 0],
     [0, 0, f]]         [0, 0, d, e],
                        [0, 0, 0, f]]

The induced permutations are trivial, and cloning factors through hedges,
so a spanning subgraph of the linear graph clones a matrix in one step.
"""
import logging
import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from services.cloning import CloningSystem, Permutation
from services.errors import ElementParseError, UnsupportedOperationError
from services.forest_monoid import subgraph_components
from services.rings import ExactRing, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UpperTriangularMatrix:
    rows: Tuple[Tuple[Scalar, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        """Entry at 1-based (i, j)."""
        i, j = index
        return self.rows[i - 1][j - 1]

    def diagonal(self) -> Tuple[Scalar, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))


def _build(n: int, entry) -> UpperTriangularMatrix:
    return UpperTriangularMatrix(tuple(tuple(entry(i, j) for j in range(1, n + 1))
                                       for i in range(1, n + 1)))


@dataclass(frozen=True)
class BBarElement:
    """Class of an upper triangular matrix modulo everything above the first off-diagonal."""

    diag: Tuple[Scalar, ...]
    offdiag: Tuple[Scalar, ...]

    @property
    def n(self) -> int:
        return len(self.diag)


class BorelSystem(CloningSystem):
    """Invertible upper triangular matrices B_n(R)."""

    factors_through_hedges = True
    rho_trivial = True
    supports_unclone = True
    # coset representatives relative to a subgraph are available in closed form
    supports_reduction = True

    def __init__(self, ring: ExactRing):
        self.ring = ring
        self.name = f"borel:{ring.name}"
        self.finite = ring.finite

    # -- matrices

    def matrix(self, rows: Sequence[Sequence]) -> UpperTriangularMatrix:
        n = len(rows)
        coerced = []
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ElementParseError(f"Matrix row {i + 1} has {len(row)} entries, expected {n}")
            coerced.append(tuple(self.ring.coerce(value) for value in row))
        matrix = UpperTriangularMatrix(tuple(coerced))
        self._validate(matrix)
        return matrix

    def _validate(self, A: UpperTriangularMatrix) -> None:
        for i in range(1, A.n + 1):
            if not self.ring.is_unit(A[i, i]):
                raise ElementParseError(f"Diagonal entry {A[i, i]} at {i} is not a unit of {self.ring.name}")
            for j in range(1, i):
                if A[i, j] != self.ring.zero:
                    raise ElementParseError(f"Entry ({i},{j}) below the diagonal is nonzero")

    def identity(self, n: int = 1) -> UpperTriangularMatrix:
        one, zero = self.ring.one, self.ring.zero
        return _build(n, lambda i, j: one if i == j else zero)

    def mul(self, A: UpperTriangularMatrix, B: UpperTriangularMatrix) -> UpperTriangularMatrix:
        size = max(A.n, B.n)
        A, B = self.include(A, size), self.include(B, size)
        ring = self.ring

        def entry(i, j):
            total = ring.zero
            for m in range(i, j + 1):
                total = ring.add(total, ring.mul(A[i, m], B[m, j]))
            return total

        return _build(size, lambda i, j: entry(i, j) if j >= i else ring.zero)

    def inv(self, A: UpperTriangularMatrix) -> UpperTriangularMatrix:
        ring = self.ring
        n = A.n
        result = [[ring.zero] * n for _ in range(n)]
        for i in range(n, 0, -1):
            result[i - 1][i - 1] = ring.unit_inverse(A[i, i])
            for j in range(i + 1, n + 1):
                total = ring.zero
                for m in range(i + 1, j + 1):
                    total = ring.add(total, ring.mul(A[i, m], result[m - 1][j - 1]))
                result[i - 1][j - 1] = ring.neg(ring.mul(result[i - 1][i - 1], total))
        return UpperTriangularMatrix(tuple(tuple(row) for row in result))

    def _is_identity_entry(self, A: UpperTriangularMatrix, i: int, j: int) -> bool:
        return A[i, j] == (self.ring.one if i == j else self.ring.zero)

    def degree(self, A: UpperTriangularMatrix) -> int:
        for m in range(A.n, 0, -1):
            if not all(self._is_identity_entry(A, i, m) and self._is_identity_entry(A, m, i)
                       for i in range(1, A.n + 1)):
                return m
        return 1

    def include(self, A: UpperTriangularMatrix, n: int) -> UpperTriangularMatrix:
        if n == A.n:
            return A
        if n < A.n:
            restricted = self.restrict(A, n)
            if restricted is None:
                raise ValueError(f"Matrix of size {A.n} does not lie in degree {n}")
            return restricted
        one, zero = self.ring.one, self.ring.zero
        return _build(n, lambda i, j: A[i, j] if i <= A.n and j <= A.n else (one if i == j else zero))

    def restrict(self, A: UpperTriangularMatrix, n: int) -> Optional[UpperTriangularMatrix]:
        if n < 1 or self.degree(A) > n:
            return None
        if n >= A.n:
            return self.include(A, n)
        return _build(n, lambda i, j: A[i, j])

    def rho(self, A, n: int) -> Permutation:
        return Permutation()

    # -- cloning

    def _clone(self, A: UpperTriangularMatrix, k: int, n: int) -> UpperTriangularMatrix:
        return matrix_kappa(A, k, self.ring)

    def _unclone(self, H: UpperTriangularMatrix, k: int, n: int) -> Optional[UpperTriangularMatrix]:
        def shift(j):
            return j if j <= k else j + 1

        def entry(i, j):
            if i < k:
                return H[i, shift(j)]
            if i == k:
                return H[k, j] if j <= k else H[k + 1, j + 1]
            return H[i + 1, shift(j)]

        candidate = _build(n, entry)
        if not all(self.ring.is_unit(candidate[i, i]) for i in range(1, n + 1)):
            return None
        if self._clone(candidate, k, n) != H:
            return None
        return candidate

    def kappa_gamma(self, A: UpperTriangularMatrix, edges: Iterable[int], n: int) -> UpperTriangularMatrix:
        return matrix_kappa_gamma(A, edges, n, self.ring)

    def reduce_rel_gamma(self, A: UpperTriangularMatrix, edges: Iterable[int]) -> UpperTriangularMatrix:
        return matrix_reduce_rel_gamma(A, edges, self)

    def reduced_representatives(self, edges: Sequence[int], n: int) -> Iterator[UpperTriangularMatrix]:
        """All matrices B with B - I zero at stable-stable positions: one per coset of the clone image."""
        stable = {component[-1] for component in subgraph_components(edges, n)}
        ring = self.ring
        positions = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)
                     if not (i in stable and j in stable)]
        choices = [ring.units() if i == j else ring.elements() for i, j in positions]
        for values in product(*choices):
            assigned = dict(zip(positions, values))
            yield _build(n, lambda i, j: assigned.get((i, j), ring.one if i == j else ring.zero)
                         if j >= i else ring.zero)

    # -- enumeration

    def order(self, n: int) -> Optional[int]:
        if not self.ring.finite:
            return None
        return self.ring.unit_count() ** n * self.ring.size() ** (n * (n - 1) // 2)

    def elements(self, n: int) -> Iterator[UpperTriangularMatrix]:
        ring = self.ring
        positions = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
        choices = [ring.units() if i == j else ring.elements() for i, j in positions]
        for values in product(*choices):
            assigned = dict(zip(positions, values))
            yield _build(n, lambda i, j: assigned[(i, j)] if j >= i else ring.zero)

    def random_element(self, n: int, rng: random.Random) -> UpperTriangularMatrix:
        ring = self.ring
        return _build(n, lambda i, j: ring.random_unit(rng) if i == j
                      else (ring.random_element(rng) if j > i else ring.zero))

    def generators(self, n: int) -> List[UpperTriangularMatrix]:
        ring = self.ring
        gens = []
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                gens.append(_build(n, lambda a, b: ring.one if a == b else
                                   (ring.one if (a, b) == (i, j) else ring.zero)))
        return gens

    # -- text

    def serialize(self, A: UpperTriangularMatrix) -> str:
        return ";".join(",".join(self.ring.serialize(value) for value in row) for row in A.rows)

    def parse(self, text: str, n: Optional[int] = None) -> UpperTriangularMatrix:
        source = text.strip()
        if not source:
            raise ElementParseError("Empty matrix text")
        rows = [[self.ring.parse(value) for value in row.split(",")] for row in source.split(";")]
        matrix = self.matrix(rows)
        return self.include(matrix, n) if n is not None and n > matrix.n else matrix


def matrix_kappa(A: UpperTriangularMatrix, k: int, ring: ExactRing) -> UpperTriangularMatrix:
    """Clone strand k: rows above k see column k twice, row k splits into two diagonal copies."""
    n = A.n
    if not 1 <= k <= n:
        raise ValueError(f"Cloning index {k} out of range for a {n}x{n} matrix")

    def source(j):
        return j if j <= k else j - 1

    def entry(i, j):
        if i < k:
            return A[i, source(j)]
        if i == k:
            return A[k, j] if j <= k else ring.zero
        if i == k + 1:
            if j <= k:
                return ring.zero
            return A[k, k] if j == k + 1 else A[k, j - 1]
        return A[i - 1, source(j)] if j > k else ring.zero

    return _build(n + 1, entry)


def matrix_kappa_gamma(A: UpperTriangularMatrix, edges: Iterable[int], n: int,
                       ring: ExactRing) -> UpperTriangularMatrix:
    """Clone an m x m matrix along a spanning subgraph of the linear graph with m components.

    Diagonal blocks are scalar copies of the diagonal entries; an entry above
    the diagonal fills the bottom row of its block, that is the row of the
    rightmost vertex of its component.
    """
    components = subgraph_components(edges, n)
    if len(components) != A.n:
        raise ValueError(f"Subgraph has {len(components)} components but the matrix is {A.n}x{A.n}")
    component_of = {}
    rightmost = {}
    for index, component in enumerate(components, start=1):
        for vertex in component:
            component_of[vertex] = index
        rightmost[index] = component[-1]

    def entry(i, j):
        ci, cj = component_of[i], component_of[j]
        if ci == cj:
            return A[ci, ci] if i == j else ring.zero
        if ci < cj and i == rightmost[ci]:
            return A[ci, cj]
        return ring.zero

    return _build(n, entry)


def matrix_reduce_rel_gamma(A: UpperTriangularMatrix, edges: Iterable[int],
                            system: BorelSystem) -> UpperTriangularMatrix:
    """The representative B of A * kappa_Gamma(B_m) with identity stable-stable block."""
    edges = tuple(edges)
    components = subgraph_components(edges, A.n)
    stable = [component[-1] for component in components]
    block = UpperTriangularMatrix(tuple(tuple(A[i, j] for j in stable) for i in stable))
    correction = system.kappa_gamma(system.inv(block), edges, A.n)
    return system.mul(A, correction)


class AbelsSystem(BorelSystem):
    """G_n = Ab_{n-1}(R): matrices in B_n(R) with upper-left and lower-right entry 1."""

    supports_reduction = False

    def __init__(self, ring: ExactRing):
        super().__init__(ring)
        self.name = f"abels:{ring.name}"

    def is_member(self, A: UpperTriangularMatrix) -> bool:
        return A[1, 1] == self.ring.one and A[A.n, A.n] == self.ring.one

    def matrix(self, rows: Sequence[Sequence]) -> UpperTriangularMatrix:
        matrix = super().matrix(rows)
        if not self.is_member(matrix):
            raise ElementParseError("Abels matrices need corner entries equal to 1")
        return matrix

    def degree(self, A: UpperTriangularMatrix) -> int:
        low = super().degree(A)
        return low if A[low, low] == self.ring.one else low + 1

    def restrict(self, A: UpperTriangularMatrix, n: int) -> Optional[UpperTriangularMatrix]:
        restricted = super().restrict(A, n)
        if restricted is None or not self.is_member(restricted):
            return None
        return restricted

    def _unclone(self, H: UpperTriangularMatrix, k: int, n: int) -> Optional[UpperTriangularMatrix]:
        candidate = super()._unclone(H, k, n)
        if candidate is None or not self.is_member(candidate):
            return None
        return candidate

    def order(self, n: int) -> Optional[int]:
        if not self.ring.finite:
            return None
        if n == 1:
            return 1
        return self.ring.unit_count() ** (n - 2) * self.ring.size() ** (n * (n - 1) // 2)

    def elements(self, n: int) -> Iterator[UpperTriangularMatrix]:
        return (A for A in super().elements(n) if self.is_member(A))

    def random_element(self, n: int, rng: random.Random) -> UpperTriangularMatrix:
        A = super().random_element(n, rng)
        ring = self.ring
        return _build(n, lambda i, j: ring.one if i == j and i in (1, n) else A[i, j])

    def reduced_representatives(self, edges, n):
        raise UnsupportedOperationError("Abels cosets are enumerated through orbits")

    def reduce_rel_gamma(self, A, edges):
        raise UnsupportedOperationError("Abels cosets are enumerated through orbits")


class BBarSystem(CloningSystem):
    """The quotient of B_n(R) that keeps only the diagonal and the first off-diagonal."""

    factors_through_hedges = True
    rho_trivial = True
    supports_unclone = True
    supports_reduction = True

    def __init__(self, ring: ExactRing):
        self.ring = ring
        self.name = f"bbar:{ring.name}"
        self.finite = ring.finite
        self.borel = BorelSystem(ring)

    def element(self, diag: Sequence, offdiag: Sequence) -> BBarElement:
        if len(offdiag) != max(len(diag) - 1, 0):
            raise ElementParseError(f"Expected {len(diag) - 1} off-diagonal entries, got {len(offdiag)}")
        diag = tuple(self.ring.coerce(value) for value in diag)
        if not all(self.ring.is_unit(value) for value in diag):
            raise ElementParseError(f"Diagonal {diag} contains a non-unit")
        return BBarElement(diag, tuple(self.ring.coerce(value) for value in offdiag))

    def lift(self, x: BBarElement) -> UpperTriangularMatrix:
        ring = self.ring
        return _build(x.n, lambda i, j: x.diag[i - 1] if i == j
                      else (x.offdiag[i - 1] if j == i + 1 else ring.zero))

    def project(self, A: UpperTriangularMatrix) -> BBarElement:
        return BBarElement(A.diagonal(), tuple(A[i, i + 1] for i in range(1, A.n)))

    def identity(self, n: int = 1) -> BBarElement:
        return BBarElement((self.ring.one,) * n, (self.ring.zero,) * (n - 1))

    def mul(self, a: BBarElement, b: BBarElement) -> BBarElement:
        size = max(a.n, b.n)
        a, b = self.include(a, size), self.include(b, size)
        ring = self.ring
        diag = tuple(ring.mul(x, y) for x, y in zip(a.diag, b.diag))
        offdiag = tuple(ring.add(ring.mul(a.diag[i], b.offdiag[i]), ring.mul(a.offdiag[i], b.diag[i + 1]))
                        for i in range(size - 1))
        return BBarElement(diag, offdiag)

    def inv(self, a: BBarElement) -> BBarElement:
        ring = self.ring
        diag = tuple(ring.unit_inverse(x) for x in a.diag)
        offdiag = tuple(ring.neg(ring.mul(ring.mul(diag[i], a.offdiag[i]), diag[i + 1]))
                        for i in range(a.n - 1))
        return BBarElement(diag, offdiag)

    def degree(self, a: BBarElement) -> int:
        top = 1
        for i, value in enumerate(a.diag, start=1):
            if value != self.ring.one:
                top = max(top, i)
        for i, value in enumerate(a.offdiag, start=1):
            if value != self.ring.zero:
                top = max(top, i + 1)
        return top

    def include(self, a: BBarElement, n: int) -> BBarElement:
        if n == a.n:
            return a
        if n < a.n:
            if self.degree(a) > n:
                raise ValueError(f"Element of size {a.n} does not lie in degree {n}")
            return BBarElement(a.diag[:n], a.offdiag[:n - 1])
        extra = n - a.n
        return BBarElement(a.diag + (self.ring.one,) * extra, a.offdiag + (self.ring.zero,) * extra)

    def rho(self, a, n: int) -> Permutation:
        return Permutation()

    def _clone(self, a: BBarElement, k: int, n: int) -> BBarElement:
        return self.project(matrix_kappa(self.lift(a), k, self.ring))

    def _unclone(self, h: BBarElement, k: int, n: int) -> Optional[BBarElement]:
        if h.offdiag[k - 1] != self.ring.zero or h.diag[k] != h.diag[k - 1]:
            return None
        candidate = BBarElement(h.diag[:k] + h.diag[k + 1:], h.offdiag[:k - 1] + h.offdiag[k:])
        return candidate if self._clone(candidate, k, n) == h else None

    def kappa_gamma(self, a: BBarElement, edges: Iterable[int], n: int) -> BBarElement:
        return self.project(matrix_kappa_gamma(self.lift(a), edges, n, self.ring))

    def reduce_rel_gamma(self, x: BBarElement, edges: Iterable[int]) -> BBarElement:
        """Normalize x within x * kappa_Gamma(B-bar_m): stable diagonal 1, off-diagonal 0 outside Gamma."""
        edges = tuple(edges)
        ring = self.ring
        components = subgraph_components(edges, x.n)
        stable = [component[-1] for component in components]
        y_diag = [ring.unit_inverse(x.diag[j - 1]) for j in stable]
        y_off = []
        for c in range(len(components) - 1):
            j = stable[c]
            value = ring.mul(ring.mul(ring.unit_inverse(x.diag[j - 1]), x.offdiag[j - 1]), y_diag[c + 1])
            y_off.append(ring.neg(value))
        y = BBarElement(tuple(y_diag), tuple(y_off))
        return self.mul(x, self.kappa_gamma(y, edges, x.n))

    def reduced_representatives(self, edges: Sequence[int], n: int) -> Iterator[BBarElement]:
        ring = self.ring
        edge_list = sorted(edges)
        for values in product(*([ring.units(), ring.elements()] * len(edge_list))):
            diag = [ring.one] * n
            offdiag = [ring.zero] * (n - 1)
            for position, edge in enumerate(edge_list):
                diag[edge - 1] = values[2 * position]
                offdiag[edge - 1] = values[2 * position + 1]
            yield BBarElement(tuple(diag), tuple(offdiag))

    def order(self, n: int) -> Optional[int]:
        if not self.ring.finite:
            return None
        return self.ring.unit_count() ** n * self.ring.size() ** (n - 1)

    def elements(self, n: int) -> Iterator[BBarElement]:
        ring = self.ring
        for diag in product(ring.units(), repeat=n):
            for offdiag in product(ring.elements(), repeat=n - 1):
                yield BBarElement(tuple(diag), tuple(offdiag))

    def random_element(self, n: int, rng: random.Random) -> BBarElement:
        return BBarElement(tuple(self.ring.random_unit(rng) for _ in range(n)),
                           tuple(self.ring.random_element(rng) for _ in range(n - 1)))

    def serialize(self, a: BBarElement) -> str:
        diag = ",".join(self.ring.serialize(value) for value in a.diag)
        offdiag = ",".join(self.ring.serialize(value) for value in a.offdiag)
        return f"{diag};{offdiag}" if offdiag else diag

    def parse(self, text: str, n: Optional[int] = None) -> BBarElement:
        diag_text, _, off_text = text.strip().partition(";")
        diag = [self.ring.parse(value) for value in diag_text.split(",")]
        offdiag = [self.ring.parse(value) for value in off_text.split(",")] if off_text else []
        element = self.element(diag, offdiag)
        return self.include(element, n) if n is not None and n > element.n else element
