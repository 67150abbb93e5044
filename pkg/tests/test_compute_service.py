import pytest

from services.cloning import STATUS_BUDGET, STATUS_FAIL, AxiomReport, AxiomResult
from services.compute_service import (EXIT_BUDGET, EXIT_FALSE, EXIT_OK, ComputeService,
                                      connectivity_bound, homology_table, report_exit_code,
                                      verification_report)
from services.direct_power import CyclicGroup, DirectPowerSystem, IotaSystem
from services.matrix_systems import AbelsSystem, BBarSystem, BorelSystem
from services.rings import PrimeField

SWAP = "(·,·) | (1 2) | (·,·)"


@pytest.fixture
def service():
    return ComputeService()


# -- verification

def test_symmetric_report_passes(symmetric):
    report = verification_report(symmetric, 3, seed=1729, samples=50)
    assert report.passed
    assert report_exit_code(report) == EXIT_OK
    assert {r.axiom for r in report.results} >= {"properly_graded"}


def test_power_report_includes_the_splitting():
    report = verification_report(DirectPowerSystem(CyclicGroup(2)), 3, seed=1, samples=20)
    assert report.passed
    assert report.find("splitting_section")


def test_iota_report_fails():
    report = verification_report(IotaSystem(CyclicGroup(2)), 3, seed=1, samples=20)
    assert not report.passed
    assert report_exit_code(report) == EXIT_FALSE


def test_exit_codes_rank_failures_above_budget():
    report = AxiomReport("made-up")
    report.add(AxiomResult("cloning_product", 2, STATUS_BUDGET, "exhaustive"))
    assert report_exit_code(report) == EXIT_BUDGET
    report.add(AxiomResult("compatibility", 2, STATUS_FAIL, "exhaustive", witness="g=()"))
    assert report_exit_code(report) == EXIT_FALSE


def test_reports_are_reproducible(symmetric):
    first = verification_report(symmetric, 4, seed=7, samples=40).to_rows()
    assert verification_report(symmetric, 4, seed=7, samples=40).to_rows() == first


# -- homology tables

@pytest.mark.parametrize("kind,system,n,expected", [
    ("matching", None, 8, 1),
    ("dlk", BBarSystem(PrimeField(2)), 8, 1),
    ("dlk", BorelSystem(PrimeField(2)), 10, 1),
    ("dlk", AbelsSystem(PrimeField(2)), 10, None),
])
def test_connectivity_bound(kind, system, n, expected):
    assert connectivity_bound(kind, system, n) == expected


class UpperTriangularOverF3(BorelSystem):
    pass


def test_connectivity_bound_follows_subclasses():
    assert connectivity_bound("dlk", UpperTriangularOverF3(PrimeField(3)), 14) == 2
    assert connectivity_bound("dlk", AbelsSystem(PrimeField(3)), 14) is None


def test_trivial_link_table_matches_the_matching_table(trivial):
    matching = homology_table("matching", [6])
    link = homology_table("dlk", [6], trivial)
    assert link.rows == matching.rows
    assert matching.header == ["n", "degree", "rank_Q", "rank_F2", "bound", "within_bound"]
    assert matching.within_bound


def test_empty_complex_row():
    table = homology_table("matching", [1])
    assert table.rows == [["1", "-1", "1", "1", "-2", "-"]]


def test_single_field_table():
    table = homology_table("matching", [5], fields=("F2",))
    assert table.header == ["n", "degree", "rank_F2", "bound", "within_bound"]
    assert table.rows == [["5", "0", "0", "0", "yes"], ["5", "1", "0", "0", "-"]]


# -- service wrappers

def test_normal_form(service):
    result = service.normal_form("3,1")
    assert result['success']
    assert result['forest'] == "1,4"
    assert not service.normal_form("0")['success']


def test_element_operations(service):
    assert service.element_operation('multiply', 'symmetric', SWAP, SWAP)['result'] == "· | () | ·"
    assert service.element_operation('inverse', 'symmetric', SWAP)['result'] == SWAP
    assert service.element_operation('reduce', 'symmetric', "(·,·) | () | (·,·)")['result'] == "· | () | ·"
    equal = service.element_operation('equal', 'symmetric', SWAP, SWAP)
    assert equal['equal'] is True and equal['decided']


def test_element_errors(service):
    unknown = service.element_operation('divide', 'symmetric', SWAP, SWAP)
    assert not unknown['success']
    assert unknown['error_type'] == "ElementParseError"
    assert not service.element_operation('inverse', 'nothing', SWAP)['success']


def test_verify_result(service):
    result = service.verify('symmetric', 3, seed=11, samples=30)
    assert result['success']
    assert result['passed']
    assert result['seed'] == 11
    assert result['exit_code'] == EXIT_OK
    assert service.verify('iota:Z/2', 3, samples=10)['exit_code'] == EXIT_FALSE


def test_homology_result(service):
    result = service.homology('matching', "4..5", fields=["F2"])
    assert result['success']
    assert result['simplex_counts'] == {"4": [3, 1], "5": [4, 3]}
    assert result['within_bound']


def test_budget_errors_carry_sizes(service):
    result = service.homology('matching', [12], budget=10)
    assert not result['success']
    assert result['error_type'] == "BudgetExceededError"
    assert result['budget'] == 10
    assert result['projected'] > 10


def test_stein_result(service):
    result = service.stein('trivial', None, 3)
    assert result['success']
    assert result['cube_counts'] == [4, 3]
    assert result['vertices'] == 4
    assert result['euler'] == 1
