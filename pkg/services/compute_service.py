"""
Entry points shared by the CLI, the HTTP API and the background tasks.

The module-level builders raise domain errors; ``ComputeService`` wraps them
into ``{'success': ..., 'error': ..., 'error_type': ...}`` dictionaries.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from services.cloning import (EXHAUSTIVE_ORDER_LIMIT, STATUS_BUDGET, STATUS_FAIL, STATUS_UNDECIDED,
                              AxiomReport, check_axioms, check_properly_graded)
from services.complexes import build_dlk, build_matching_complex, build_stein_ball
from services.errors import BudgetExceededError, CloneforgeError, ElementParseError
from services.forest_monoid import ForestWord, parse_tree
from services.homology import betti, field_characteristic, field_name
from services.matrix_systems import AbelsSystem, BBarSystem, BorelSystem
from services.permutation_systems import TrivialSystem
from services.system_registry import system_from_name
from services.thompson import ThompsonGroup
from utils.reports import parse_n_values

logger = logging.getLogger(__name__)

DEFAULT_SEED = 1729
DEFAULT_FIELDS = ("Q", "F2")
SPLITTING_SAMPLES = 100

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


# ---------------------------------------------------------------- verification

def verification_report(system, n_max: int, seed: int, samples: int, relators: bool = False,
                        order_limit: Optional[int] = None) -> AxiomReport:
    """Cloning axioms, proper grading and, for trivial rho, the splitting over F."""
    rng = random.Random(seed)
    limit = order_limit or EXHAUSTIVE_ORDER_LIMIT
    report = check_axioms(system, n_max, rng, samples=samples, relators=relators, order_limit=limit)
    if system.finite:
        report.extend(check_properly_graded(system, n_max, order_limit=limit))
    if system.rho_trivial:
        group = ThompsonGroup(system)
        report.extend(group.kernel_splitting_check(min(samples, SPLITTING_SAMPLES), rng))
    return report


def report_exit_code(report: AxiomReport) -> int:
    statuses = {r.status for r in report.failures()}
    if statuses & {STATUS_FAIL, STATUS_UNDECIDED}:
        return EXIT_FALSE
    if STATUS_BUDGET in statuses:
        return EXIT_BUDGET
    return EXIT_OK


# ---------------------------------------------------------------- homology tables

def connectivity_bound(kind: str, system, n: int) -> Optional[int]:
    """Degree through which reduced homology is known to vanish, if a bound is known."""
    if kind == "matching" or isinstance(system, (TrivialSystem, BBarSystem)):
        return (n - 2) // 3 - 1
    if isinstance(system, AbelsSystem):
        # Abels subgroups have no known bound at this scale
        return None
    if isinstance(system, BorelSystem):
        return (n - 2) // 4 - 1
    return None


@dataclass
class HomologyTable:
    fields: Sequence[str]
    rows: List[List[str]] = field(default_factory=list)
    complexes: Dict[int, Any] = field(default_factory=dict)

    @property
    def header(self) -> List[str]:
        names = [f"rank_{field_name(field_characteristic(name))}" for name in self.fields]
        return ["n", "degree"] + names + ["bound", "within_bound"]

    @property
    def within_bound(self) -> bool:
        return all(row[-1] != "no" for row in self.rows)


def homology_table(kind: str, n_values: Sequence[int], system=None, fields: Sequence[str] = DEFAULT_FIELDS,
                   multiplicity: int = 1, budget: Optional[int] = None) -> HomologyTable:
    table = HomologyTable(tuple(fields))
    for n in n_values:
        if kind == "matching":
            complex_ = build_matching_complex(n, multiplicity, budget=budget)
        elif kind == "dlk":
            complex_ = build_dlk(system, n, budget=budget).complex
        else:
            raise ElementParseError(f"Unknown complex kind {kind!r}")
        table.complexes[n] = complex_
        bound = connectivity_bound(kind, system, n)
        numbers = [betti(complex_, name) for name in fields]
        if not numbers[0]:
            # the empty complex has reduced homology in degree -1
            table.rows.append(_homology_row(n, -1, [1] * len(fields), bound))
            continue
        for d in range(len(numbers[0])):
            table.rows.append(_homology_row(n, d, [column[d] for column in numbers], bound))
    return table


def _homology_row(n: int, d: int, ranks: List[int], bound: Optional[int]) -> List[str]:
    if bound is None or d > bound:
        verdict = "-"
    else:
        verdict = "yes" if not any(ranks) else "no"
    return [str(n), str(d)] + [str(r) for r in ranks] + ["-" if bound is None else str(bound), verdict]


# ---------------------------------------------------------------- elements

def load_group(system_spec: str, ring: Optional[str] = None) -> ThompsonGroup:
    return ThompsonGroup(system_from_name(system_spec, ring))


def parse_lift(text: Optional[str]) -> Optional[ForestWord]:
    if not text:
        return None
    return ForestWord.tree(parse_tree(text))


class ComputeService:
    """Domain operations returning JSON-ready result dictionaries"""

    def __init__(self, default_seed: int = DEFAULT_SEED):
        self.default_seed = default_seed

    @staticmethod
    def _error(e: Exception, where: str) -> Dict[str, Any]:
        logger.error(f"Error in {where}: {e}")
        result = {'success': False, 'error': str(e), 'error_type': type(e).__name__}
        if isinstance(e, BudgetExceededError):
            result['projected'] = e.projected
            result['budget'] = e.budget
        return result

    def normal_form(self, word: str) -> Dict[str, Any]:
        try:
            forest = ForestWord.parse(word or "")
            return {'success': True, 'forest': str(forest), 'leaves': forest.leaves, 'feet': forest.feet}
        except (CloneforgeError, ValueError) as e:
            return self._error(e, "normal_form")

    def element_operation(self, operation: str, system: str, a: str, b: Optional[str] = None,
                          ring: Optional[str] = None) -> Dict[str, Any]:
        try:
            group = load_group(system, ring)
            s = group.parse(a)
            if operation == 'multiply':
                product = group.reduce(group.mul(s, group.parse(b)))
                return {'success': True, 'result': group.format(product)}
            if operation == 'inverse':
                return {'success': True, 'result': group.format(group.reduce(group.inv(s)))}
            if operation == 'reduce':
                return {'success': True, 'result': group.format(group.reduce(s))}
            if operation == 'equal':
                outcome = group.compare(s, group.parse(b))
                return {'success': True, 'equal': outcome,
                        'decided': outcome is not None}
            raise ElementParseError(f"Unknown element operation {operation!r}")
        except (CloneforgeError, ValueError) as e:
            return self._error(e, f"element_operation {operation}")

    def verify(self, system: str, n_max: int, relators: bool = False, seed: Optional[int] = None,
               samples: int = 300, ring: Optional[str] = None,
               order_limit: Optional[int] = None) -> Dict[str, Any]:
        try:
            seed = self.default_seed if seed is None else int(seed)
            instance = system_from_name(system, ring)
            report = verification_report(instance, int(n_max), seed, int(samples), relators, order_limit)
            result = report.to_dict()
            result.update({'success': True, 'seed': seed, 'exit_code': report_exit_code(report)})
            return result
        except (CloneforgeError, ValueError) as e:
            return self._error(e, "verify")

    def homology(self, kind: str, n_values, system: Optional[str] = None, fields=None,
                 ring: Optional[str] = None, multiplicity: int = 1,
                 budget: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        try:
            instance = system_from_name(system, ring) if system else None
            values = parse_n_values(n_values) if isinstance(n_values, str) else [int(n) for n in n_values]
            table = homology_table(kind, values, instance, tuple(fields or DEFAULT_FIELDS),
                                   multiplicity, budget)
            return {
                'success': True,
                'seed': self.default_seed if seed is None else int(seed),
                'header': table.header,
                'rows': table.rows,
                'within_bound': table.within_bound,
                'simplex_counts': {str(n): c.counts() for n, c in table.complexes.items()},
            }
        except (CloneforgeError, ValueError) as e:
            return self._error(e, "homology")

    def stein(self, system: str, basepoint: Optional[str], feet_max: int, lift: Optional[str] = None,
              ring: Optional[str] = None, budget: Optional[int] = None) -> Dict[str, Any]:
        try:
            group = load_group(system, ring)
            point = group.parse(basepoint) if basepoint else group.identity()
            ball = build_stein_ball(group.system, point, int(feet_max), parse_lift(lift), budget)
            return {'success': True, 'rows': ball.to_rows(), 'vertices': ball.vertex_count,
                    'cube_counts': ball.cube_counts, 'euler': ball.euler_characteristic}
        except (CloneforgeError, ValueError) as e:
            return self._error(e, "stein")
