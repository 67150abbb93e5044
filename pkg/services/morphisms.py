"""Morphisms of cloning systems and the maps they induce on Thompson groups."""
import logging
import random
import threading
from typing import Any, Callable, Optional

from services.cloning import AxiomReport, CloningSystem, _Tally
from services.errors import SystemMismatchError
from services.matrix_systems import BBarSystem, BorelSystem
from services.permutation_systems import SymmetricSystem, TrivialSystem

logger = logging.getLogger(__name__)

Element = Any

VERIFY_DEGREE = 4
VERIFY_SAMPLES = 40
VERIFY_SEED = 1729


class SystemMorphism:
    """A family of homomorphisms G_n -> H_n commuting with cloning and rho."""

    def __init__(self, source: CloningSystem, target: CloningSystem, name: str,
                 map_fn: Callable[[Element, int], Element]):
        self.source = source
        self.target = target
        self.name = name
        self._map_fn = map_fn
        self._verified: Optional[AxiomReport] = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"<SystemMorphism {self.name}: {self.source.name} -> {self.target.name}>"

    def apply(self, g: Element, n: int) -> Element:
        return self._map_fn(self.source.include(g, n), n)

    def ensure_verified(self, n_max: int = VERIFY_DEGREE, samples: int = VERIFY_SAMPLES) -> AxiomReport:
        """Sample-check the morphism identities once; raise if any fails."""
        with self._lock:
            if self._verified is None:
                self._verified = check_morphism(self, n_max, random.Random(VERIFY_SEED), samples)
            report = self._verified
        if not report.passed:
            failure = report.failures()[0]
            raise SystemMismatchError(f"{self.name} is not a morphism of cloning systems: "
                                      f"{failure.axiom} at n={failure.n}: {failure.witness}")
        return report


def check_morphism(morphism: SystemMorphism, n_max: int, rng: random.Random,
                   samples: int) -> AxiomReport:
    source, target = morphism.source, morphism.target
    report = AxiomReport(morphism.name)
    for n in range(1, n_max + 1):
        homomorphism = _Tally("morphism_homomorphism", n, "sampled")
        cloning = _Tally("morphism_cloning", n, "sampled")
        rho = _Tally("morphism_rho", n, "sampled")
        for _ in range(samples):
            g = source.random_element(n, rng)
            h = source.random_element(n, rng)
            image_g = morphism.apply(g, n)
            homomorphism.record(
                target.compare(morphism.apply(source.mul(g, h), n),
                               target.mul(image_g, morphism.apply(h, n))),
                lambda: f"g={source.serialize(g)} h={source.serialize(h)}")
            rho.record(target.rho(target.include(image_g, n), n).images_on(n) == source.rho(g, n).images_on(n),
                       lambda: f"g={source.serialize(g)}")
            for k in range(1, n + 1):
                cloning.record(
                    target.compare(morphism.apply(source.kappa(source.include(g, n), k, n), n + 1),
                                   target.kappa(target.include(image_g, n), k, n)),
                    lambda: f"g={source.serialize(g)} k={k}")
        report.add(homomorphism.result())
        report.add(cloning.result())
        report.add(rho.result())
    logger.info(f"Morphism {morphism.name} checked up to n={n_max}: "
                f"{'pass' if report.passed else 'fail'}")
    return report


def compose_morphisms(first: SystemMorphism, second: SystemMorphism) -> SystemMorphism:
    """second after first."""
    if first.target.name != second.source.name:
        raise SystemMismatchError(f"Cannot compose {first.name} into {second.name}: "
                                  f"{first.target.name} is not {second.source.name}")
    return SystemMorphism(first.source, second.target, f"{second.name}*{first.name}",
                          lambda g, n: second.apply(first.apply(g, n), n))


def rho_morphism(system: CloningSystem) -> SystemMorphism:
    """G -> S given by rho; induces the canonical map to V."""
    return SystemMorphism(system, SymmetricSystem(), f"rho:{system.name}",
                          lambda g, n: system.rho(g, n))


def trivial_inclusion(system: CloningSystem) -> SystemMorphism:
    """1 -> G; induces the inclusion of F."""
    return SystemMorphism(TrivialSystem(), system, f"inclusion:{system.name}",
                          lambda g, n: system.identity(n))


def borel_to_bbar(source: BorelSystem) -> SystemMorphism:
    """Keep the diagonal and the first superdiagonal."""
    target = BBarSystem(source.ring)
    return SystemMorphism(source, target, f"project:{source.name}",
                          lambda g, n: target.project(source.include(g, n)))
