import argparse
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

import yaml
from pydantic import ValidationError

from bulk_spanner.cli_operations import (
    bench,
    format_table,
    junction_instance,
    load_instance,
    oracle_instance,
    rcsp_instance,
    solve_instance,
    verify_report,
)
from bulk_spanner.config.loader import Config
from bulk_spanner.errors import (
    CapExceededError,
    GreedyStallError,
    InfeasibleError,
    InstanceValidationError,
    ReductionChainError,
    SolverError,
)
from bulk_spanner.generators import GENERATORS, generate
from bulk_spanner.models.documents import BenchSuite, ReportDocument, write_yaml
from bulk_spanner.models.fields import format_rational, parse_rational
from bulk_spanner.models.reports import SolverConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_INFEASIBLE = 4
EXIT_CAP = 5
EXIT_SOLVER = 6


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _param(text: str) -> tuple:
    if '=' not in text:
        raise argparse.ArgumentTypeError(f"Expected key=value, got {text!r}")
    key, value = text.split('=', 1)
    return key.strip(), yaml.safe_load(value)


def _solver_flags(parser: argparse.ArgumentParser, theta_default: Optional[str] = None) -> None:
    parser.add_argument('--theta', type=_rational, default=theta_default, help="relaxation of the distance budgets")
    parser.add_argument('--epsilon', type=_rational, help="RCSP tolerance; also sets the tree height ceil(1/epsilon)")
    parser.add_argument('--seed', type=int)
    parser.add_argument('--max-patterns', type=int, help="RCSP pattern table cap")
    parser.add_argument('--max-layered-vertices', type=int)
    parser.add_argument('--max-tree-nodes', type=int)
    parser.add_argument('--max-oracle-vertices', type=int)
    parser.add_argument('--output', '-o', help="write the YAML result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="YAML file overriding config/solver.yaml")
    common.add_argument('--verbose', '-v', action='store_true', help="log at DEBUG level")

    parser = argparse.ArgumentParser(prog='bulk-spanner', description="Directed buy-at-bulk spanner solvers")
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('generate', parents=[common], help="write a seeded instance")
    gen.add_argument('kind', choices=sorted(GENERATORS))
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--param', '-p', type=_param, action='append', default=[], help="generator parameter key=value")
    gen.add_argument('--output', '-o')

    solve = commands.add_parser('solve', parents=[common], help="route every pair of an instance")
    solve.add_argument('instance')
    solve.add_argument('--algo', choices=['n45', 'k', 'single-source'])
    solve.add_argument('--zeta', type=_rational)
    solve.add_argument('--tau', type=_rational, help="initial guess of the optimum")
    _solver_flags(solve)

    rcsp = commands.add_parser('rcsp', parents=[common], help="standalone resource-constrained shortest path")
    rcsp.add_argument('instance')
    rcsp.add_argument('--pair', type=int, help="take source, sink, budget and demand from this demand pair")
    rcsp.add_argument('--source', type=int)
    rcsp.add_argument('--sink', type=int)
    rcsp.add_argument('--budget', type=_rational, help="length budget")
    rcsp.add_argument('--sigma-budget', type=_rational, help="optional upfront-cost budget")
    rcsp.add_argument('--exact', action='store_true', help="exact answer on integral weights")
    _solver_flags(rcsp)

    junction = commands.add_parser('junction', parents=[common], help="one minimum-density junction tree")
    junction.add_argument('instance')
    junction.add_argument('--root', type=int)
    junction.add_argument('--height', type=int)
    _solver_flags(junction)

    oracle = commands.add_parser('oracle', parents=[common], help="brute-force optimum of a tiny instance")
    oracle.add_argument('instance')
    _solver_flags(oracle, theta_default='0')

    verify = commands.add_parser('verify', parents=[common], help="recompute a report against its instance")
    verify.add_argument('instance')
    verify.add_argument('report')

    bench_cmd = commands.add_parser('bench', parents=[common], help="run a benchmark suite")
    bench_cmd.add_argument('suite')
    bench_cmd.add_argument('--output', '-o', help="also write the rows as YAML")
    return parser


def solver_config(args: argparse.Namespace, config: Config) -> SolverConfig:
    """Defaults from the configuration files, overridden by any flag given."""
    cfg = SolverConfig.from_config(
        config,
        algorithm=getattr(args, 'algo', None),
        theta=None if args.command == 'oracle' else getattr(args, 'theta', None),
        epsilon=getattr(args, 'epsilon', None),
        zeta=getattr(args, 'zeta', None),
        seed=getattr(args, 'seed', None),
        tau_initial=getattr(args, 'tau', None),
    )
    caps = {
        ('rcsp', 'max_patterns'): getattr(args, 'max_patterns', None),
        ('junction', 'max_layered_vertices'): getattr(args, 'max_layered_vertices', None),
        ('junction', 'max_tree_nodes'): getattr(args, 'max_tree_nodes', None),
        ('oracle', 'max_vertices'): getattr(args, 'max_oracle_vertices', None),
    }
    for (section, name), value in caps.items():
        if value is not None:
            nested = getattr(cfg, section).model_copy(update={name: value})
            cfg = cfg.model_copy(update={section: nested})
    return cfg


def _emit(data: Dict[str, Any], output: Optional[str]) -> None:
    if output:
        write_yaml(output, data)
        logger.info("Wrote %s", output)
    else:
        yaml.safe_dump(data, sys.stdout, sort_keys=False)


def _dump(document, output: Optional[str]) -> None:
    _emit(document.model_dump(mode='json', exclude_none=True), output)


def run_generate(args: argparse.Namespace, config: Config) -> int:
    document = generate(args.kind, dict(args.param), args.seed)
    _dump(document, args.output)
    return EXIT_OK


def run_solve(args: argparse.Namespace, config: Config) -> int:
    report = solve_instance(load_instance(args.instance), solver_config(args, config))
    _dump(report, args.output)
    return EXIT_OK


def run_rcsp(args: argparse.Namespace, config: Config) -> int:
    inst = load_instance(args.instance)
    cfg = solver_config(args, config)
    if args.pair is not None:
        if args.pair < 0 or args.pair >= inst.k:
            raise ValueError(f"No demand pair {args.pair}")
        demand = inst.demands[args.pair]
        source, sink, budget, weight = demand.source, demand.sink, demand.dist_budget, demand.demand
    elif None in (args.source, args.sink, args.budget):
        raise ValueError("rcsp needs --pair or all of --source, --sink and --budget")
    else:
        source, sink, budget, weight = args.source, args.sink, args.budget, 1
    result = rcsp_instance(inst, source, sink, budget, cfg, weight, args.sigma_budget, args.exact)
    _emit({
        'source': source,
        'sink': sink,
        'path': list(result.path),
        'cost': format_rational(result.cost),
        'consumption': [format_rational(c) for c in result.consumption],
        'patterns': result.patterns,
        'relaxations': result.relaxations,
    }, args.output)
    return EXIT_OK


def run_junction(args: argparse.Namespace, config: Config) -> int:
    report = junction_instance(load_instance(args.instance), solver_config(args, config), args.root, args.height)
    _dump(report, args.output)
    return EXIT_OK


def run_oracle(args: argparse.Namespace, config: Config) -> int:
    report = oracle_instance(load_instance(args.instance), solver_config(args, config), args.theta)
    _dump(report, args.output)
    return EXIT_OK


def run_verify(args: argparse.Namespace, config: Config) -> int:
    result = verify_report(load_instance(args.instance), ReportDocument.load(args.report))
    if result.passed:
        print("PASS")
        return EXIT_OK
    print("FAIL")
    for diff in result.diffs:
        print(f"  {diff}")
    return EXIT_VALIDATION


def run_bench(args: argparse.Namespace, config: Config) -> int:
    suite = BenchSuite.load(args.suite)
    rows = bench(suite, SolverConfig.from_config(config))
    print(format_table(rows, with_oracle=any(case.oracle for case in suite.cases)))
    if args.output:
        write_yaml(args.output, {'rows': [row.model_dump(mode='json') for row in rows]})
    return EXIT_OK


COMMANDS = {
    'generate': run_generate,
    'solve': run_solve,
    'rcsp': run_rcsp,
    'junction': run_junction,
    'oracle': run_oracle,
    'verify': run_verify,
    'bench': run_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = Config(args.config)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else config.log_level,
        stream=sys.stderr,
        force=True
        )

    try:
        return COMMANDS[args.command](args, config)
    except (InstanceValidationError, ValidationError) as e:
        print(f"validation failed: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (InfeasibleError, GreedyStallError) as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CapExceededError as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (SolverError, ReductionChainError) as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
