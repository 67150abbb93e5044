"""Lookup of cloning systems by their text names."""
import logging
from functools import lru_cache
from typing import Callable, Dict, Optional

from services.cloning import CloningSystem
from services.direct_power import DirectPowerSystem, IotaSystem, base_group_from_name
from services.errors import SystemMismatchError
from services.loop_braid import BraidSystem, LoopBraidSystem, PureLoopBraidSystem
from services.matrix_systems import AbelsSystem, BBarSystem, BorelSystem
from services.mock_system import MockSymmetricSystem
from services.permutation_systems import SymmetricSystem, TrivialSystem
from services.rings import ring_from_name

logger = logging.getLogger(__name__)

_PLAIN: Dict[str, Callable[[], CloningSystem]] = {
    'trivial': TrivialSystem,
    'symmetric': SymmetricSystem,
    'mock': MockSymmetricSystem,
    'loopbraid': LoopBraidSystem,
    'pureloopbraid': PureLoopBraidSystem,
    'braid': BraidSystem,
}

_WITH_BASE = {
    'power': DirectPowerSystem,
    'iota': IotaSystem,
}

_WITH_RING = {
    'borel': BorelSystem,
    'abels': AbelsSystem,
    'bbar': BBarSystem,
}

SYSTEM_NAMES = tuple(_PLAIN) + tuple(f"{name}:<base>" for name in _WITH_BASE) \
    + tuple(f"{name}:<ring>" for name in _WITH_RING)


def system_from_name(spec: str, ring: Optional[str] = None) -> CloningSystem:
    """Build a system from 'symmetric', 'power:Z/3', 'borel:F2', 'bbar:Fp:3', ...

    A separate ring name may be given for the matrix families ('borel' with ring 'F2').
    """
    return _cached_system(spec.strip(), ring.strip() if ring else None)


@lru_cache(maxsize=64)
def _cached_system(spec: str, ring: Optional[str]) -> CloningSystem:
    family, _, parameter = spec.partition(':')
    family = family.lower()
    if family in _PLAIN:
        if parameter:
            raise SystemMismatchError(f"System {family} takes no parameter")
        return _PLAIN[family]()
    if family in _WITH_BASE:
        if not parameter:
            raise SystemMismatchError(f"System {family} needs a base group, e.g. {family}:Z/3")
        return _WITH_BASE[family](base_group_from_name(parameter))
    if family in _WITH_RING:
        ring_name = parameter or ring
        if not ring_name:
            raise SystemMismatchError(f"System {family} needs a ring, e.g. {family}:F2")
        return _WITH_RING[family](ring_from_name(ring_name))
    raise SystemMismatchError(f"Unknown system {spec!r}; known systems: {', '.join(SYSTEM_NAMES)}")
