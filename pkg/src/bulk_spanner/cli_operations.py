import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from bulk_spanner.core.evaluation import cost_breakdown, is_walk, path_length, relaxed_budget
from bulk_spanner.core.streams import child_seed, substream
from bulk_spanner.errors import BulkSpannerError, InfeasibleError, OracleCapExceeded
from bulk_spanner.generators import generate
from bulk_spanner.junction.pipeline import min_density_junction_tree
from bulk_spanner.models.documents import BenchRow, BenchSuite, InstanceDocument, ReportCost, ReportDocument
from bulk_spanner.models.fields import format_rational
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import SolverConfig, StageRecord, StageReport
from bulk_spanner.models.solution import RouteSolution
from bulk_spanner.oracle.brute_force import brute_force_optimum
from bulk_spanner.rcsp.query import RcspQuery, RcspResult
from bulk_spanner.rcsp.solver import solve as solve_rcsp
from bulk_spanner.rcsp.solver import solve_exact_integer
from bulk_spanner.solvers.dispatch import solve

logger = logging.getLogger(__name__)


def load_instance(path: Union[str, Path]) -> Instance:
    """
    Read an instance document.

    Raises:
        pydantic.ValidationError: If the document does not match the schema.
    """
    return InstanceDocument.load(path).to_instance()


def feasibility_margins(inst: Instance, solution: RouteSolution) -> Dict[int, Fraction]:
    """Relaxed budget minus route length per routed pair; negative means infeasible."""
    return {
        pair: relaxed_budget(inst.demands[pair].dist_budget, solution.theta) - path_length(inst, route)
        for pair, route in sorted(solution.routes.items())
    }


def build_report(
    inst: Instance,
    solution: RouteSolution,
    solver: str,
    cfg: SolverConfig,
    stages: Optional[StageReport] = None,
    timings: Optional[Dict[str, float]] = None,
    root: Optional[int] = None,
) -> ReportDocument:
    """
    Assemble a report whose numbers are all recomputable from the instance.

    Args:
        inst: The solved instance.
        solution: Routes and the theta they were checked under.
        solver: Name of the algorithm that produced the routes.
        cfg: Configuration echoed into the report.
        stages: Stage records of the run, if any.
        timings: Seconds per phase.
        root: Junction root, for single-tree reports.

    Returns:
        A ReportDocument ready to dump.
    """
    breakdown = cost_breakdown(inst, solution)
    stages = stages or StageReport()
    return ReportDocument(
        solver=solver,
        config=cfg.model_dump(mode='json', exclude_none=True),
        seed=cfg.seed,
        theta=solution.theta,
        tau=stages.tau,
        root=root,
        routes={p: list(r) for p, r in sorted(solution.routes.items())},
        cost=ReportCost(sigma=breakdown.sigma, delta=breakdown.delta, total=breakdown.total),
        margins=feasibility_margins(inst, solution),
        stages=list(stages.records),
        timings=timings or {},
    )


def solve_instance(inst: Instance, cfg: SolverConfig) -> ReportDocument:
    """
    Run the configured algorithm and report on it.

    Raises:
        InstanceValidationError: If the instance fails validation.
        InfeasibleError: If no solution is found.
        CapExceededError: If a size cap is hit.
    """
    started = time.perf_counter()
    outcome = solve(inst, cfg)
    elapsed = time.perf_counter() - started
    report = outcome.report
    report.tau = outcome.tau if outcome.tau is not None else report.tau
    return build_report(inst, outcome.solution, cfg.algorithm, cfg, report, {'solve': elapsed})


def junction_instance(inst: Instance, cfg: SolverConfig, root: Optional[int] = None,
                      height: Optional[int] = None) -> ReportDocument:
    """
    One minimum-density junction tree, over every root or the given one.

    Raises:
        NoResolvablePairs: If no root resolves a pair.
    """
    started = time.perf_counter()
    found = min_density_junction_tree(
        inst, cfg.theta, substream(cfg.seed, 'label-cover'), height=height or cfg.height,
        roots=None if root is None else [root], settings=cfg.junction, lp_settings=cfg.lp,
    )
    elapsed = time.perf_counter() - started
    stages = StageReport(records=[StageRecord(stage='junction', pairs=found.resolved, cost=found.cost,
                                              density=found.density)])
    return build_report(inst, found.tree.to_solution(), 'junction', cfg, stages, {'junction': elapsed},
                        root=found.root)


def oracle_instance(inst: Instance, cfg: SolverConfig, theta: Fraction = Fraction(0)) -> ReportDocument:
    """
    Exact optimum by enumeration.

    Raises:
        OracleCapExceeded: If the instance is beyond the oracle caps.
        InfeasibleError: If some pair has no theta-feasible route.
    """
    started = time.perf_counter()
    solution, _ = brute_force_optimum(inst, Fraction(theta), cfg.oracle)
    return build_report(inst, solution, 'oracle', cfg, timings={'oracle': time.perf_counter() - started})


def rcsp_instance(inst: Instance, source: int, sink: int, budget: Fraction, cfg: SolverConfig,
                  demand: int = 1, sigma_budget: Optional[Fraction] = None, exact: bool = False) -> RcspResult:
    """
    Cheapest sigma + delta*demand path from source to sink with length at most
    `budget` (and sigma at most `sigma_budget` when given), within the configured epsilon.

    Raises:
        RcspInfeasible: If no path meets the budgets.
        ValueError: If exact is requested on fractional weights.
    """
    weights = [lambda e: inst.edges[e].length]
    budgets = [Fraction(budget)]
    if sigma_budget is not None:
        weights.append(lambda e: inst.edges[e].sigma)
        budgets.append(Fraction(sigma_budget))
    tolerances = [cfg.epsilon * (1 if b > 0 else -1) for b in budgets]
    query = RcspQuery.from_instance(
        inst, source, sink,
        cost=lambda e: inst.edges[e].sigma + inst.edges[e].delta * demand,
        weights=weights, budgets=budgets, tolerances=tolerances,
    )
    if exact:
        return solve_exact_integer(query, cfg.rcsp)
    return solve_rcsp(query, cfg.rcsp)


@dataclass
class VerifyResult:
    diffs: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.diffs


def _valid_route(inst: Instance, pair: int, route: List[int], diffs: List[str]) -> bool:
    if pair < 0 or pair >= inst.k:
        diffs.append(f"pair {pair}: no such demand pair")
        return False
    unknown = [e for e in route if e < 0 or e >= inst.m]
    if unknown:
        diffs.append(f"pair {pair}: unknown edge ids {unknown}")
        return False
    demand = inst.demands[pair]
    if not is_walk(inst, demand.source, demand.sink, route):
        diffs.append(f"pair {pair}: route {route} is not a walk from {demand.source} to {demand.sink}")
        return False
    return True


def verify_report(inst: Instance, report: ReportDocument) -> VerifyResult:
    """
    Recompute every route, cost and margin of a report exactly.

    Returns:
        A VerifyResult listing each mismatch; it passes when the list is empty.
    """
    result = VerifyResult()
    diffs = result.diffs
    for pair in range(inst.k):
        if pair not in report.routes:
            diffs.append(f"pair {pair}: no route")
    valid = {p: r for p, r in sorted(report.routes.items()) if _valid_route(inst, p, r, diffs)}
    if len(valid) != len(report.routes):
        return result

    solution = report.to_solution()
    margins = feasibility_margins(inst, solution)
    for pair, margin in margins.items():
        if margin < 0:
            bound = relaxed_budget(inst.demands[pair].dist_budget, report.theta)
            diffs.append(f"pair {pair}: length {format_rational(bound - margin)} exceeds bound "
                         f"{format_rational(bound)} at theta {format_rational(report.theta)}")
        reported = report.margins.get(pair)
        if reported != margin:
            shown = 'missing' if reported is None else format_rational(reported)
            diffs.append(f"margins[{pair}]: reported {shown}, recomputed {format_rational(margin)}")

    breakdown = cost_breakdown(inst, solution)
    for name, recomputed in (('sigma', breakdown.sigma), ('delta', breakdown.delta), ('total', breakdown.total)):
        reported = getattr(report.cost, name)
        if reported != recomputed:
            diffs.append(f"cost.{name}: reported {format_rational(reported)}, recomputed {format_rational(recomputed)}")
    if diffs:
        logger.info("Report failed verification with %d differences", len(diffs))
    return result


def _oracle_cost(inst: Instance, cfg: SolverConfig) -> Tuple[Optional[Fraction], str]:
    try:
        _, cost = brute_force_optimum(inst, Fraction(0), cfg.oracle)
    except OracleCapExceeded:
        return None, 'oracle-cap'
    except InfeasibleError:
        return None, 'oracle-infeasible'
    return cost, 'ok'


def bench(suite: BenchSuite, cfg: Optional[SolverConfig] = None) -> List[BenchRow]:
    """
    Generate every (kind, seed) instance of the suite and run each listed
    algorithm on it, optionally against the brute-force optimum.

    Each job gets its own configuration copy and a seed drawn from the
    'bench' substream of the instance seed.

    Returns:
        One row per (instance, algorithm) job.
    """
    cfg = cfg or SolverConfig()
    rows: List[BenchRow] = []
    for case in suite.cases:
        for seed in case.seeds:
            name = f"{case.kind}-{seed}"
            inst = generate(case.kind, case.params, seed).to_instance()
            oracle_cost, oracle_status = _oracle_cost(inst, cfg) if case.oracle else (None, 'ok')
            job_seed = child_seed(substream(seed, 'bench'))
            for algorithm in case.algorithms:
                job_cfg = cfg.model_copy(update={'algorithm': algorithm, 'seed': job_seed})
                row = BenchRow(instance=name, algorithm=algorithm)
                started = time.perf_counter()
                try:
                    outcome = solve(inst, job_cfg)
                    row.cost = cost_breakdown(inst, outcome.solution).total
                except (BulkSpannerError, ValueError) as e:
                    logger.warning("%s on %s failed: %s", algorithm, name, e)
                    row.status = type(e).__name__
                row.seconds = time.perf_counter() - started
                if row.status == 'ok' and oracle_status != 'ok':
                    row.status = oracle_status
                row.oracle_cost = oracle_cost
                if row.cost is not None and oracle_cost is not None:
                    row.ratio = 1.0 if oracle_cost == 0 else float(row.cost / oracle_cost)
                rows.append(row)
                logger.info("%s %s: cost=%s time=%.2fs", name, algorithm, row.cost, row.seconds)
    return rows


def format_table(rows: List[BenchRow], with_oracle: bool) -> str:
    """Aligned text table; the oracle and ratio columns appear only with_oracle."""
    header = ('instance', 'algorithm', 'cost') + (('oracle', 'ratio') if with_oracle else ()) + ('seconds', 'status')
    lines = [header] + [row.cells(with_oracle) for row in rows]
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return '\n'.join('  '.join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in lines)
