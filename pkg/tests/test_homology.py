import random

import pytest

from services import homology
from services.complexes import SimplicialComplex
from services.errors import CloneforgeError, ElementParseError
from services.homology import (ChainComplex, betti, betti_rows, field_characteristic,
                               homological_connectivity, rank_f2, rank_mod_p, rank_rational)

RP2_TRIANGLES = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
                 (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]


def complex_from(simplices, vertices):
    complex_ = SimplicialComplex(str(v) for v in range(1, vertices + 1))
    for simplex in simplices:
        complex_.add_simplex(v - 1 for v in simplex)
    return complex_


@pytest.fixture
def rp2():
    return complex_from(RP2_TRIANGLES, 6)


@pytest.fixture
def circle():
    return complex_from([(1, 2), (2, 3), (1, 3)], 3)


def test_projective_plane(rp2):
    assert rp2.counts() == [6, 15, 10]
    assert rp2.euler_characteristic() == 1
    assert betti(rp2, "Q") == [0, 0, 0]
    assert betti(rp2, "F2") == [0, 1, 1]
    assert betti(rp2, "Fp:3") == [0, 0, 0]
    assert homological_connectivity(rp2, "Q") == 2
    assert homological_connectivity(rp2, "F2") == 0


def test_betti_rows(rp2):
    assert betti_rows(rp2, ("Q", "F2")) == [["0", "0", "0"], ["1", "0", "1"], ["2", "0", "1"]]


def test_small_spaces(circle):
    assert betti(circle) == [0, 1]
    assert homological_connectivity(circle) == 0
    sphere = complex_from([(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)], 4)
    assert betti(sphere, "F2") == [0, 0, 1]
    two_points = SimplicialComplex(["a", "b"])
    assert betti(two_points) == [1]
    assert homological_connectivity(two_points) == -1
    assert betti(SimplicialComplex(["a"])) == [0]


def test_empty_complex():
    empty = SimplicialComplex()
    assert betti(empty) == []
    assert homological_connectivity(empty) == -2


def test_rank_depends_on_characteristic():
    unsigned = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: 1}]
    assert rank_rational(unsigned) == 3
    assert rank_f2(unsigned) == 2
    assert rank_mod_p(unsigned, 3) == 3
    signed = [{0: -1, 1: 1}, {1: -1, 2: 1}, {0: -1, 2: 1}]
    assert rank_rational(signed) == rank_f2(signed) == rank_mod_p(signed, 5) == 2


def test_dense_and_sparse_kernels_agree(monkeypatch):
    rng = random.Random(1729)
    matrices = [[{row: rng.randint(-3, 3) for row in rng.sample(range(12), 4)} for _ in range(15)]
                for _ in range(20)]
    dense = [rank_mod_p(columns, 3, 12) for columns in matrices]
    monkeypatch.setattr(homology, "DENSE_LIMIT", 0)
    assert [rank_mod_p(columns, 3, 12) for columns in matrices] == dense


def test_boundary_of_boundary_is_checked():
    bases = [[(0,), (1,), (2,)], [(0, 1), (1, 2), (0, 2)], [(0, 1, 2)]]
    boundaries = [[{}, {}, {}],
                  [{1: 1, 0: -1}, {2: 1, 1: -1}, {2: 1, 0: -1}],
                  [{0: 1, 1: 1, 2: 1}]]
    with pytest.raises(CloneforgeError):
        betti(ChainComplex(bases, boundaries), "Q")


@pytest.mark.parametrize("name,expected", [("Q", 0), ("F2", 2), ("Fp:3", 3), ("GF(5)", 5)])
def test_field_names(name, expected):
    assert field_characteristic(name) == expected


def test_field_names_reject_rings():
    with pytest.raises(ElementParseError):
        field_characteristic("Z")
