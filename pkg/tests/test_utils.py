import io

import pytest

from utils.concurrency import parallel_map, pool_size
from utils.reports import header_line, parse_n_values, write_tsv
from utils.validators import RunConfigValidator


@pytest.fixture
def validator():
    return RunConfigValidator()


# -- reports

def test_header_line():
    assert header_line("verify", 1729) == "# cloneforge verify seed=1729"


def test_write_tsv():
    out = io.StringIO()
    write_tsv(out, ["a", "b"], [["1", 2], ["x", "y"]])
    assert out.getvalue() == "a\tb\n1\t2\nx\ty\n"


@pytest.mark.parametrize("text,expected", [
    ("6", [6]), ("5..8", [5, 6, 7, 8]), ("3,5..6", [3, 5, 6]), (" 4 .. 4 ", [4]),
])
def test_parse_n_values(text, expected):
    assert parse_n_values(text) == expected


@pytest.mark.parametrize("text", ["", "a", "8..5", "1..", "-1"])
def test_parse_n_values_rejects(text):
    with pytest.raises(ValueError):
        parse_n_values(text)


# -- validation

def test_valid_payloads(validator):
    assert validator.validate({'command': 'nf'})['valid']
    assert validator.validate({'command': 'verify', 'system': 'symmetric', 'n_max': 4, 'seed': 7})['valid']
    assert validator.validate({'command': 'homology', 'kind': 'matching', 'n_values': '5..8',
                               'field': 'F2'})['valid']
    assert validator.validate({'command': 'homology', 'kind': 'dlk', 'system': 'borel', 'ring': 'F2',
                               'n_values': '4'})['valid']
    assert validator.validate({'command': 'mul', 'system': 'symmetric', 'a': 'x', 'b': 'y'})['valid']


def test_missing_data(validator):
    result = validator.validate({})
    assert not result['valid']
    assert result['errors'] == ["No data provided"]
    assert validator.validate({'command': 'explode'})['errors'] == ["Invalid command: explode"]


@pytest.mark.parametrize("payload,fragment", [
    ({'command': 'verify', 'system': 'symmetric'}, "n_max is required"),
    ({'command': 'verify', 'n_max': 3}, "needs a system"),
    ({'command': 'verify', 'system': 'nothing', 'n_max': 3}, "Unknown system"),
    ({'command': 'verify', 'system': 'symmetric', 'n_max': 0}, "n_max must be between"),
    ({'command': 'verify', 'system': 'symmetric', 'n_max': 3, 'samples': 'many'}, "samples must be a valid"),
    ({'command': 'verify', 'system': 'symmetric', 'n_max': 3, 'seed': -1}, "64-bit"),
    ({'command': 'verify', 'system': 'symmetric', 'n_max': 3, 'seed': 'abc'}, "valid integer"),
    ({'command': 'homology', 'kind': 'matching'}, "n_values is required"),
    ({'command': 'homology', 'kind': 'cubes', 'n_values': '3'}, "Invalid complex kind"),
    ({'command': 'homology', 'kind': 'matching', 'n_values': '3', 'field': 'Z'}, "Invalid field"),
    ({'command': 'homology', 'kind': 'matching', 'n_values': '99'}, "n values must be between"),
    ({'command': 'homology', 'kind': 'dlk', 'n_values': '3'}, "needs a system"),
    ({'command': 'eq', 'system': 'symmetric', 'a': 'x'}, "Element b is required"),
    ({'command': 'stein', 'system': 'trivial', 'feet_max': 3, 'budget': 0}, "budget must be at least 1"),
])
def test_invalid_payloads(validator, payload, fragment):
    result = validator.validate(payload)
    assert not result['valid']
    assert any(fragment in error for error in result['errors'])


# -- thread pool

def test_pool_size_from_environment(monkeypatch):
    monkeypatch.setenv('CLONEFORGE_THREADS', '3')
    assert pool_size() == 3


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setenv('CLONEFORGE_THREADS', '4')
    assert parallel_map(lambda x: x * x, range(200)) == [x * x for x in range(200)]
