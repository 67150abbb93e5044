"""
Exact reduced homology of finite simplicial complexes.

Boundary matrices are kept sparse, one column per simplex with its d + 1
signed faces. Ranks are computed by column reduction keyed on the lowest
nonzero row: XOR of bitmasks over F2, modular elimination over F_p (dense
numpy for small matrices), and fraction-free integer elimination over Q.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from services.errors import CloneforgeError, ElementParseError
from services.rings import PrimeField, RationalField, ring_from_name
from utils.concurrency import parallel_map

logger = logging.getLogger(__name__)

Column = Dict[int, int]

# rows * columns up to which the dense modular kernel is used
DENSE_LIMIT = 250_000


def field_characteristic(name: str) -> int:
    """0 for Q, p for F_p ('F2', 'Fp:3', 'GF(5)')."""
    ring = ring_from_name(name)
    if isinstance(ring, RationalField):
        return 0
    if isinstance(ring, PrimeField):
        return ring.p
    raise ElementParseError(f"Homology needs a field, got {ring.name}")


def field_name(characteristic: int) -> str:
    return "Q" if characteristic == 0 else f"F{characteristic}"


# ---------------------------------------------------------------- chain complexes

@dataclass
class ChainComplex:
    """Ordered simplex bases and integer boundary columns per dimension."""

    bases: List[List[Tuple[int, ...]]]
    boundaries: List[List[Column]] = field(default_factory=list)

    @classmethod
    def from_complex(cls, complex_) -> "ChainComplex":
        bases = [complex_.simplices(d) for d in range(complex_.dimension + 1)]
        boundaries: List[List[Column]] = [[{} for _ in bases[0]]] if bases else []
        for d in range(1, len(bases)):
            index = {simplex: i for i, simplex in enumerate(bases[d - 1])}
            columns = []
            for simplex in bases[d]:
                column = {}
                for position in range(len(simplex)):
                    face = simplex[:position] + simplex[position + 1:]
                    column[index[face]] = -1 if position % 2 else 1
                columns.append(column)
            boundaries.append(columns)
        return cls(bases, boundaries)

    @property
    def dimension(self) -> int:
        return len(self.bases) - 1

    def check_boundary_squared(self) -> None:
        for d in range(2, len(self.bases)):
            lower = self.boundaries[d - 1]
            for simplex, column in zip(self.bases[d], self.boundaries[d]):
                total: Column = {}
                for row, coefficient in column.items():
                    for face, sign in lower[row].items():
                        total[face] = total.get(face, 0) + coefficient * sign
                if any(total.values()):
                    raise CloneforgeError(f"Boundary of boundary is nonzero at {simplex}")


# ---------------------------------------------------------------- rank kernels

def rank_f2(columns: Sequence[Column]) -> int:
    pivots: Dict[int, int] = {}
    rank = 0
    for column in columns:
        mask = 0
        for row, coefficient in column.items():
            if coefficient % 2:
                mask ^= 1 << row
        while mask:
            low = mask.bit_length() - 1
            if low not in pivots:
                pivots[low] = mask
                rank += 1
                break
            mask ^= pivots[low]
    return rank


def rank_mod_p(columns: Sequence[Column], p: int, rows: Optional[int] = None) -> int:
    if p == 2:
        return rank_f2(columns)
    if rows is None:
        rows = 1 + max((max(column) for column in columns if column), default=-1)
    if rows * len(columns) <= DENSE_LIMIT:
        return _dense_rank_mod(columns, p, rows)
    pivots: Dict[int, Column] = {}
    rank = 0
    for column in columns:
        current = {row: value % p for row, value in column.items() if value % p}
        while current:
            low = max(current)
            pivot = pivots.get(low)
            if pivot is None:
                scale = pow(current[low], -1, p)
                pivots[low] = {row: value * scale % p for row, value in current.items()}
                rank += 1
                break
            factor = current[low]
            for row, value in pivot.items():
                updated = (current.get(row, 0) - factor * value) % p
                if updated:
                    current[row] = updated
                else:
                    current.pop(row, None)
    return rank


def _dense_rank_mod(columns: Sequence[Column], p: int, rows: int) -> int:
    if not columns or rows == 0:
        return 0
    A = np.zeros((rows, len(columns)), dtype=np.int64)
    for j, column in enumerate(columns):
        for row, value in column.items():
            A[row, j] = value % p
    rank = 0
    m, n = A.shape
    for c in range(n):
        nonzero = np.nonzero(A[rank:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + nonzero[0]
        if pivot != rank:
            A[[rank, pivot]] = A[[pivot, rank]]
        A[rank] = A[rank] * pow(int(A[rank, c]), -1, p) % p
        below = np.nonzero(A[rank + 1:, c])[0] + rank + 1
        if below.size:
            A[below] = (A[below] - np.outer(A[below, c], A[rank])) % p
        rank += 1
        if rank == m:
            break
    return rank


def rank_rational(columns: Sequence[Column]) -> int:
    pivots: Dict[int, Column] = {}
    rank = 0
    for column in columns:
        current = {row: value for row, value in column.items() if value}
        while current:
            low = max(current)
            pivot = pivots.get(low)
            if pivot is None:
                pivots[low] = _primitive(current)
                rank += 1
                break
            a, b = pivot[low], current[low]
            combined: Column = {}
            for row in current.keys() | pivot.keys():
                value = a * current.get(row, 0) - b * pivot.get(row, 0)
                if value:
                    combined[row] = value
            current = _primitive(combined) if combined else combined
    return rank


def _primitive(column: Column) -> Column:
    divisor = 0
    for value in column.values():
        divisor = gcd(divisor, value)
    if divisor in (0, 1):
        return column
    return {row: value // divisor for row, value in column.items()}


def boundary_rank(chains: ChainComplex, d: int, characteristic: int) -> int:
    """Rank of the boundary C_d -> C_{d-1}; d = 0 is the augmentation."""
    if d > chains.dimension or d < 0:
        return 0
    if d == 0:
        return 1 if chains.bases[0] else 0
    columns = chains.boundaries[d]
    if characteristic == 0:
        return rank_rational(columns)
    return rank_mod_p(columns, characteristic, len(chains.bases[d - 1]))


# ---------------------------------------------------------------- betti numbers

def betti(complex_, field_spec="Q", max_dim: Optional[int] = None, check: bool = True) -> List[int]:
    """Reduced Betti numbers in degrees 0..max_dim (default: the dimension); [] when empty."""
    characteristic = field_spec if isinstance(field_spec, int) else field_characteristic(field_spec)
    chains = complex_ if isinstance(complex_, ChainComplex) else ChainComplex.from_complex(complex_)
    if not chains.bases or not chains.bases[0]:
        return []
    if check:
        chains.check_boundary_squared()
    top = chains.dimension if max_dim is None else min(max_dim, chains.dimension)
    sizes = [len(basis) for basis in chains.bases]
    logger.info(f"Computing reduced homology over {field_name(characteristic)} "
                f"through degree {top}, chain sizes {sizes}")
    ranks = parallel_map(lambda d: boundary_rank(chains, d, characteristic), range(top + 2))
    return [sizes[d] - ranks[d] - ranks[d + 1] for d in range(top + 1)]


def homological_connectivity(complex_, field_spec="Q") -> int:
    """Largest d with vanishing reduced homology through degree d.

    -2 for the empty complex, -1 when nonempty but disconnected, and the
    dimension when every reduced Betti number vanishes. A homology bound only:
    fundamental groups are not computed.
    """
    numbers = betti(complex_, field_spec)
    if not numbers:
        return -2
    for d, value in enumerate(numbers):
        if value:
            return d - 1
    return len(numbers) - 1


def betti_rows(complex_, fields: Sequence[str] = ("Q", "F2")) -> List[List[str]]:
    """Rows (dimension, rank per field) for the Betti TSV."""
    columns = [betti(complex_, name) for name in fields]
    depth = max((len(numbers) for numbers in columns), default=0)
    return [[str(d)] + [str(numbers[d]) if d < len(numbers) else "0" for numbers in columns]
            for d in range(depth)]
