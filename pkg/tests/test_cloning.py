import random

import pytest
from hypothesis import given, strategies as st

from services.cloning import (STATUS_FAIL, STATUS_NOT_CHECKED, STATUS_PASS, Permutation, act_on_forest,
                              check_axioms, check_properly_graded, check_relators, clone_by_forest,
                              symm_clone, unclone_by_forest)
from services.direct_power import CyclicGroup, DirectPowerSystem, IotaSystem
from services.errors import ElementParseError, UnsupportedOperationError
from services.forest_monoid import ForestWord
from services.loop_braid import LoopBraidSystem

permutations_of_5 = st.permutations(list(range(1, 6))).map(lambda images: Permutation(tuple(images)))


def test_clone_figure_example():
    assert symm_clone(Permutation.parse("(1 2)"), 2) == Permutation.parse("(1 3 2)")
    assert str(symm_clone(Permutation.parse("(1 2)"), 2)) == "(1 3 2)"


def test_permutation_text():
    g = Permutation.parse("(1 3 2)(4 5)")
    assert str(g) == "(1 3 2)(4 5)"
    assert g(1) == 3 and g(3) == 2 and g(2) == 1
    assert str(Permutation()) == "()"
    with pytest.raises(ElementParseError):
        Permutation.parse("(1 1)")


def test_permutations_act_on_the_left():
    g, h = Permutation.transposition(1, 2), Permutation.transposition(2, 3)
    assert (g * h)(3) == g(h(3)) == 1


@given(permutations_of_5, permutations_of_5)
def test_inverse_and_trailing_fixed_points(g, h):
    assert g * g.inverse() == Permutation()
    assert (g * h).inverse() == h.inverse() * g.inverse()
    assert Permutation(g.images_on(7)) == g


def test_symmetric_axioms_small(symmetric, rng):
    report = check_axioms(symmetric, 4, rng)
    assert report.passed
    assert {r.mode for r in report.results} == {"exhaustive"}
    assert report.find("cloning_product", 4)[0].checked == 24 * 24 * 4
    assert report.strict_compatibility


@pytest.mark.slow
def test_symmetric_axioms_exhaustive_through_six(symmetric, rng):
    report = check_axioms(symmetric, 6, rng)
    assert report.passed
    assert check_properly_graded(symmetric, 6).passed


def test_corrupted_canary_fails(corrupted, rng):
    report = check_axioms(corrupted, 3, rng)
    assert not report.passed
    failed = {r.axiom for r in report.failures()}
    assert "cloning_product" in failed
    assert all(r.witness for r in report.failures())


def test_relators_and_their_clones(symmetric):
    result = check_relators(symmetric, 4)
    assert result.status == STATUS_PASS
    assert result.checked == len(symmetric.relators(4)) * 5


def test_power_system_axioms_and_grading(rng):
    system = DirectPowerSystem(CyclicGroup(3))
    report = check_axioms(system, 4, rng)
    assert report.passed
    assert report.find("hedge_commutation")
    assert check_properly_graded(system, 4).passed


def test_iota_system_is_not_properly_graded(rng):
    system = IotaSystem(CyclicGroup(2))
    assert check_axioms(system, 3, rng).passed
    report = check_properly_graded(system, 3)
    assert not report.passed
    failure = report.failures()[0]
    assert failure.status == STATUS_FAIL
    assert "h=" in failure.witness


def test_properly_graded_skips_infinite_systems():
    report = check_properly_graded(LoopBraidSystem(), 2)
    assert {r.status for r in report.results} == {STATUS_NOT_CHECKED}


def test_report_rows_and_dict(symmetric, rng):
    report = check_axioms(symmetric, 2, rng)
    rows = report.to_rows()
    assert all(len(row) == 6 for row in rows)
    data = report.to_dict()
    assert data['system'] == "symmetric"
    assert data['passed'] is True
    assert data['results'][0]['axiom'] == rows[0][0]


def test_act_on_forest_splits_the_product(symmetric):
    g = Permutation.parse("(1 2)")
    moved, cloned = act_on_forest(symmetric, g, ForestWord((1,)), 2)
    # (1 2) lambda_1 = lambda_2 (1 2)^lambda_1
    assert moved == ForestWord((2,))
    assert cloned == symm_clone(g, 1)
    assert clone_by_forest(symmetric, g, ForestWord((1,)), 2) == cloned


def test_clone_by_forest_includes_low_degree_elements(symmetric):
    g = Permutation.parse("(1 2)")
    assert clone_by_forest(symmetric, g, ForestWord((4,))) == g


def test_unclone_by_forest_inverts_cloning(symmetric):
    rng = random.Random(7)
    for _ in range(50):
        g = symmetric.random_element(4, rng)
        forest = ForestWord.from_word(rng.randint(1, 4 + i) for i in range(3))
        h = clone_by_forest(symmetric, g, forest, 4)
        assert unclone_by_forest(symmetric, h, forest, 4) == g


def test_unclone_rejects_non_clones(symmetric):
    assert symmetric.unclone(Permutation.parse("(1 2)"), 1, 1) is None


def test_unclone_unsupported():
    with pytest.raises(UnsupportedOperationError):
        LoopBraidSystem().unclone(LoopBraidSystem().identity(2), 1, 2)
