import random

import pytest

from services.cloning import check_axioms, check_properly_graded, clone_by_forest
from services.errors import ElementParseError
from services.forest_monoid import subgraph_components, subgraph_to_forest
from services.matrix_systems import AbelsSystem, BBarSystem, BorelSystem
from services.rings import PrimeField, RationalField


@pytest.fixture
def borel_q():
    return BorelSystem(RationalField())


@pytest.fixture
def borel_f2():
    return BorelSystem(PrimeField(2))


@pytest.fixture
def borel_f3():
    return BorelSystem(PrimeField(3))


def test_matrix_expansion_figure(borel_q):
    A = borel_q.parse("1,2,3;0,4,5;0,0,6")
    cloned = borel_q.kappa(A, 2, 3)
    assert borel_q.serialize(cloned) == "1,2,2,3;0,4,0,0;0,0,4,5;0,0,0,6"
    assert borel_q.unclone(cloned, 2, 3) == A


def test_parse_rejects_non_units_and_lower_entries(borel_f2):
    with pytest.raises(ElementParseError):
        borel_f2.parse("0,1;0,1")
    with pytest.raises(ElementParseError):
        borel_f2.parse("1,0;1,1")


def test_inverse_and_inclusion(borel_q):
    rng = random.Random(3)
    for _ in range(20):
        A = borel_q.random_element(4, rng)
        assert borel_q.eq(borel_q.mul(A, borel_q.inv(A)), borel_q.identity(4))
    small = borel_q.parse("1,2;0,1")
    assert borel_q.degree(borel_q.include(small, 4)) == 2
    assert borel_q.restrict(borel_q.include(small, 4), 2) == small


def test_borel_f2_axioms_and_grading(borel_f2, rng):
    assert check_axioms(borel_f2, 4, rng).passed
    assert check_properly_graded(borel_f2, 4).passed


def test_borel_f3_axioms_and_grading(borel_f3, rng):
    assert check_axioms(borel_f3, 3, rng).passed
    assert check_properly_graded(borel_f3, 3).passed


def test_rational_borel_sampled(borel_q, rng):
    report = check_axioms(borel_q, 3, rng, samples=60)
    assert report.passed
    assert {r.mode for r in report.results} <= {"sampled"}


@pytest.mark.parametrize("edges", [(1,), (2,), (1, 2), (1, 3), (2, 3, 5)])
def test_subgraph_clone_matches_forest_clone(borel_f3, edges):
    rng = random.Random(11)
    n = 6
    m = len(subgraph_components(edges, n))
    for _ in range(10):
        A = borel_f3.random_element(m, rng)
        assert borel_f3.kappa_gamma(A, edges, n) == clone_by_forest(borel_f3, A, subgraph_to_forest(edges), m)


@pytest.mark.parametrize("edges", [(1,), (2,), (1, 3)])
def test_reduced_representatives_count_cosets(borel_f2, edges):
    n = 4
    m = n - len(edges)
    representatives = list(borel_f2.reduced_representatives(edges, n))
    assert len(representatives) == borel_f2.order(n) // borel_f2.order(m)
    assert len({borel_f2.serialize(B) for B in representatives}) == len(representatives)


def test_reduce_rel_gamma_is_idempotent_and_normalizes(borel_f3):
    rng = random.Random(5)
    edges = (1, 3)
    stable = [component[-1] for component in subgraph_components(edges, 5)]
    for _ in range(20):
        A = borel_f3.random_element(5, rng)
        B = borel_f3.reduce_rel_gamma(A, edges)
        assert all(B[i, j] == (1 if i == j else 0) for i in stable for j in stable if j >= i)
        assert borel_f3.reduce_rel_gamma(B, edges) == B
        h = borel_f3.random_element(3, rng)
        shifted = borel_f3.mul(A, borel_f3.kappa_gamma(h, edges, 5))
        assert borel_f3.reduce_rel_gamma(shifted, edges) == B


def test_abels_system_closed_under_cloning(rng):
    system = AbelsSystem(PrimeField(3))
    assert len(list(system.elements(3))) == system.order(3) == 54
    for A in system.elements(3):
        for k in range(1, 4):
            assert system.is_member(system.kappa(A, k, 3))
    assert check_axioms(system, 3, rng).passed


def test_bbar_projection_is_a_morphism(borel_f3):
    bbar = BBarSystem(PrimeField(3))
    rng = random.Random(13)
    for _ in range(30):
        A, B = borel_f3.random_element(4, rng), borel_f3.random_element(4, rng)
        assert bbar.project(borel_f3.mul(A, B)) == bbar.mul(bbar.project(A), bbar.project(B))
        for k in range(1, 5):
            assert bbar.kappa(bbar.project(A), k, 4) == bbar.project(borel_f3.kappa(A, k, 4))


def test_bbar_text_and_axioms(rng):
    bbar = BBarSystem(PrimeField(2))
    x = bbar.element((1, 1, 1), (1, 0))
    assert bbar.serialize(x) == "1,1,1;1,0"
    assert bbar.parse("1,1,1;1,0") == x
    assert check_axioms(bbar, 4, rng).passed
    rational = BBarSystem(RationalField())
    y = rational.parse("1/2,1;3/4")
    assert rational.serialize(y) == "1/2,1;3/4"


def test_bbar_reduce_rel_gamma_normal_form():
    bbar = BBarSystem(PrimeField(3))
    rng = random.Random(17)
    for _ in range(20):
        x = bbar.random_element(4, rng)
        y = bbar.reduce_rel_gamma(x, (2,))
        assert y.diag[0] == y.diag[2] == y.diag[3] == 1
        assert y.offdiag[0] == y.offdiag[2] == 0
        assert bbar.reduce_rel_gamma(y, (2,)) == y
