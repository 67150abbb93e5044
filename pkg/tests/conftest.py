import random

import pytest

from services.cloning import Permutation, symm_clone
from services.permutation_systems import SymmetricSystem, TrivialSystem
from services.thompson import ThompsonGroup


class CorruptedSymmetricSystem(SymmetricSystem):
    """Symmetric cloning with the two outputs of one input swapped."""

    name = "corrupted"

    def _clone(self, g: Permutation, k: int, n: int) -> Permutation:
        cloned = symm_clone(g, k)
        if g == Permutation.transposition(1, 2) and k == 1:
            return Permutation.transposition(1, 2) * cloned
        return cloned


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    monkeypatch.setenv('CLONEFORGE_THREADS', '1')


@pytest.fixture
def rng():
    return random.Random(1729)


@pytest.fixture
def symmetric():
    return SymmetricSystem()


@pytest.fixture
def trivial():
    return TrivialSystem()


@pytest.fixture
def thompson_f(trivial):
    return ThompsonGroup(trivial)


@pytest.fixture
def thompson_v(symmetric):
    return ThompsonGroup(symmetric)


@pytest.fixture
def corrupted():
    return CorruptedSymmetricSystem()
