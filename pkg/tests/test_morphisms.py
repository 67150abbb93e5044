import random

import pytest

from services.cloning import Permutation
from services.direct_power import CyclicGroup, DirectPowerSystem
from services.errors import SystemMismatchError
from services.forest_monoid import ForestWord
from services.matrix_systems import BorelSystem
from services.morphisms import (SystemMorphism, borel_to_bbar, check_morphism, compose_morphisms,
                                rho_morphism, trivial_inclusion)
from services.permutation_systems import SymmetricSystem
from services.rings import PrimeField
from services.thompson import ThompsonGroup, transposition_sigma


def test_rho_morphism_of_symmetric_is_identity(symmetric, rng):
    morphism = rho_morphism(symmetric)
    assert check_morphism(morphism, 4, rng, 30).passed
    g = Permutation.parse("(1 3)")
    assert morphism.apply(g, 3) == g


def test_borel_projection_is_a_morphism(rng):
    morphism = borel_to_bbar(BorelSystem(PrimeField(3)))
    assert check_morphism(morphism, 4, rng, 30).passed
    assert morphism.target.name == "bbar:F3"


def test_trivial_inclusion_induces_f_inside_v(thompson_f, symmetric):
    morphism = trivial_inclusion(symmetric)
    image = thompson_f.apply_morphism(morphism, thompson_f.identity())
    assert image.mid == Permutation()
    assert morphism.ensure_verified().passed


def test_composition(symmetric):
    inclusion = trivial_inclusion(symmetric)
    composite = compose_morphisms(inclusion, rho_morphism(symmetric))
    assert composite.source.name == "trivial"
    assert composite.target.name == "symmetric"
    assert composite.apply((), 3) == Permutation()
    with pytest.raises(SystemMismatchError):
        compose_morphisms(rho_morphism(symmetric), borel_to_bbar(BorelSystem(PrimeField(2))))


def test_induced_map_on_thompson_groups(thompson_v):
    power = DirectPowerSystem(CyclicGroup(3))
    group = ThompsonGroup(power)
    morphism = rho_morphism(power)
    rng = random.Random(9)
    for _ in range(10):
        s = group.random_element(rng.randint(1, 4), rng)
        t = group.random_element(rng.randint(1, 4), rng)
        image = thompson_v.mul(group.apply_morphism(morphism, s), group.apply_morphism(morphism, t))
        assert thompson_v.eq(group.apply_morphism(morphism, group.mul(s, t)), image)


def test_broken_morphism_is_refused(symmetric, thompson_v):
    # sending every permutation to its inverse is not a homomorphism of S_3
    broken = SystemMorphism(symmetric, SymmetricSystem(), "inverse", lambda g, n: g.inverse())
    report = check_morphism(broken, 3, random.Random(1), 40)
    assert not report.passed
    sigma = transposition_sigma(thompson_v, Permutation.transposition(1, 2))
    with pytest.raises(SystemMismatchError):
        thompson_v.apply_morphism(broken, thompson_v.expand(sigma, ForestWord((1,))))


def test_wrong_source_is_refused(thompson_f, symmetric):
    with pytest.raises(SystemMismatchError):
        thompson_f.apply_morphism(rho_morphism(symmetric), thompson_f.identity())
