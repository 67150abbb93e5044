"""
cloneforge command line.

    python cli.py nf --forest 3,1
    python cli.py verify --system symmetric --nmax 5
    python cli.py homology --matching --n 5..10
    python cli.py mul --system symmetric "(·,·) | (1 2) | (·,·)" "(·,·) | (1 2) | (·,·)"
    python cli.py stein --system trivial --feet-max 3

Exit codes: 0 success or true, 1 false or failed check, 2 usage or parse error,
3 budget exceeded. Reports go to stdout (or --out); logs go to stderr.
"""
import argparse
import io
import logging
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from dotenv import load_dotenv

from services.cloning import AxiomReport
from services.compute_service import (DEFAULT_FIELDS, DEFAULT_SEED, EXIT_BUDGET, EXIT_FALSE, EXIT_OK,
                                      EXIT_USAGE, homology_table, load_group, parse_lift,
                                      report_exit_code, verification_report)
from services.complexes import build_stein_ball
from services.errors import BudgetExceededError, CloneforgeError
from services.forest_monoid import ForestWord
from services.system_registry import system_from_name
from utils.reports import header_line, parse_n_values, write_tsv
from utils.validators import RunConfigValidator

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
    command: str
    system: Optional[str] = None
    ring: Optional[str] = None
    n_max: Optional[int] = None
    n_values: Optional[str] = None
    seed: int = DEFAULT_SEED
    budget: Optional[int] = None
    out: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            system=getattr(args, 'system', None),
            ring=getattr(args, 'ring', None),
            n_max=getattr(args, 'nmax', None),
            n_values=getattr(args, 'n', None),
            seed=args.seed,
            budget=args.budget,
            out=args.out,
        )

    def to_payload(self, args: argparse.Namespace) -> dict:
        payload = {
            'command': self.command,
            'system': self.system,
            'ring': self.ring,
            'n_max': self.n_max,
            'n_values': self.n_values,
            'seed': self.seed,
            'budget': self.budget,
        }
        if self.command == 'homology':
            payload['kind'] = 'dlk' if args.dlk else 'matching'
            payload['field'] = args.field
        if self.command in ('mul', 'eq', 'inv'):
            payload['a'] = args.a
            payload['b'] = getattr(args, 'b', None)
        if self.command == 'stein':
            payload['feet_max'] = args.feet_max
        if self.command == 'verify':
            payload['samples'] = args.samples
        return {key: value for key, value in payload.items() if value is not None}


def _default_seed() -> int:
    raw = os.environ.get('CLONEFORGE_SEED')
    try:
        return int(raw) if raw else DEFAULT_SEED
    except ValueError:
        logger.warning(f"Ignoring invalid CLONEFORGE_SEED value: {raw}")
        return DEFAULT_SEED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=_default_seed(),
                        help="seed for every sampled check (default CLONEFORGE_SEED or 1729)")
    common.add_argument("--budget", type=int, default=None, help="size cap for enumerations")
    common.add_argument("--out", default=None, help="write the report to this file instead of stdout")

    with_system = argparse.ArgumentParser(add_help=False)
    with_system.add_argument("--system", help="system name, e.g. symmetric, borel:F2, power:Z/3")
    with_system.add_argument("--ring", default=None, help="ring for the matrix systems, e.g. F2, Q, Fp:3")

    parser = argparse.ArgumentParser(prog="cloneforge", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    commands = parser.add_subparsers(dest="command", required=True)

    nf = commands.add_parser("nf", parents=[common, with_system], help="normal form of a forest or element")
    nf.add_argument("--forest", default=None, help="comma separated generator word, e.g. 3,1")
    nf.add_argument("--element", default=None, help="'left | mid | right' element to reduce")

    verify = commands.add_parser("verify", parents=[common, with_system], help="check the cloning axioms")
    verify.add_argument("--nmax", type=int, required=True)
    verify.add_argument("--samples", type=int, default=300)
    verify.add_argument("--relators", action="store_true", help="also check every defining relator")

    homology = commands.add_parser("homology", parents=[common, with_system], help="reduced Betti numbers")
    kind = homology.add_mutually_exclusive_group(required=True)
    kind.add_argument("--matching", action="store_true", help="matching complex of the linear graph")
    kind.add_argument("--dlk", action="store_true", help="descending link of --system")
    homology.add_argument("--n", required=True, help="N or A..B")
    homology.add_argument("--field", default=None, help="Q, F2 or Fp:p (default: Q and F2)")
    homology.add_argument("--multiplicity", type=int, default=1, help="edge multiplicity s of sL_n")
    homology.add_argument("--export", default=None, help="write each complex to PATH (PATH.n<N> for ranges)")

    for name, arity in (("mul", 2), ("eq", 2), ("inv", 1)):
        sub = commands.add_parser(name, parents=[common, with_system], help=f"{name} of elements")
        sub.add_argument("a")
        if arity == 2:
            sub.add_argument("b")

    stein = commands.add_parser("stein", parents=[common, with_system], help="ball in the Stein-Farley complex")
    stein.add_argument("--feet-max", dest="feet_max", type=int, required=True)
    stein.add_argument("--basepoint", default=None, help="'left | mid | right' element (default identity)")
    stein.add_argument("--lift", default=None, help="tree giving the basepoint more feet")
    return parser


# ---------------------------------------------------------------- commands

def cmd_nf(args, config: RunConfig, out) -> int:
    if args.element:
        if not config.system:
            raise CloneforgeError("--element needs --system")
        group = load_group(config.system, config.ring)
        out.write(group.format(group.reduce(group.parse(args.element))) + "\n")
        return EXIT_OK
    out.write(str(ForestWord.parse(args.forest or "")) + "\n")
    return EXIT_OK


def cmd_verify(args, config: RunConfig, out) -> int:
    system = system_from_name(config.system, config.ring)
    report: AxiomReport = verification_report(system, config.n_max, config.seed, args.samples,
                                              args.relators, config.budget)
    out.write(header_line("verify", config.seed) + f" system={system.name}\n")
    write_tsv(out, AxiomReport.HEADER, report.to_rows())
    return report_exit_code(report)


def cmd_homology(args, config: RunConfig, out) -> int:
    system = system_from_name(config.system, config.ring) if config.system else None
    if args.dlk and system is None:
        raise CloneforgeError("--dlk needs --system")
    n_values = parse_n_values(config.n_values)
    fields = (args.field,) if args.field else DEFAULT_FIELDS
    table = homology_table("dlk" if args.dlk else "matching", n_values, system, fields,
                           args.multiplicity, config.budget)
    out.write(header_line("homology", config.seed) + "\n")
    write_tsv(out, table.header, table.rows)
    if args.export:
        for n, complex_ in table.complexes.items():
            path = args.export if len(n_values) == 1 else f"{args.export}.n{n}"
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(complex_.export())
            logger.info(f"Exported complex for n={n} to {path}")
    return EXIT_OK if table.within_bound else EXIT_FALSE


def cmd_elements(args, config: RunConfig, out) -> int:
    group = load_group(config.system, config.ring)
    a = group.parse(args.a)
    if config.command == "mul":
        out.write(group.format(group.reduce(group.mul(a, group.parse(args.b)))) + "\n")
        return EXIT_OK
    if config.command == "inv":
        out.write(group.format(group.reduce(group.inv(a))) + "\n")
        return EXIT_OK
    outcome = group.compare(a, group.parse(args.b))
    if outcome is None:
        # the word search in the middle group ran out of room
        out.write("undecided\n")
        return EXIT_BUDGET
    out.write("true\n" if outcome else "false\n")
    return EXIT_OK if outcome else EXIT_FALSE


def cmd_stein(args, config: RunConfig, out) -> int:
    group = load_group(config.system, config.ring)
    basepoint = group.parse(args.basepoint) if args.basepoint else group.identity()
    ball = build_stein_ball(group.system, basepoint, args.feet_max, parse_lift(args.lift), config.budget)
    out.write(header_line("stein", config.seed) + f" system={group.system.name}\n")
    write_tsv(out, ["kind", "index", "count"], ball.to_rows())
    return EXIT_OK


COMMANDS = {
    'nf': cmd_nf,
    'verify': cmd_verify,
    'homology': cmd_homology,
    'mul': cmd_elements,
    'eq': cmd_elements,
    'inv': cmd_elements,
    'stein': cmd_stein,
}


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)

    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig.from_args(args)

    validation = RunConfigValidator().validate(config.to_payload(args))
    if not validation['valid']:
        for error in validation['errors']:
            print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE

    buffer = io.StringIO()
    try:
        code = COMMANDS[config.command](args, config, buffer)
    except BudgetExceededError as e:
        logger.error(f"Error in {config.command}: {e}")
        return EXIT_BUDGET
    except (CloneforgeError, ValueError) as e:
        logger.error(f"Error in {config.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
