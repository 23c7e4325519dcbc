import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from bulk_spanner.core.evaluation import split_demands
from bulk_spanner.core.validation import ensure_valid
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import SolverConfig, StageReport
from bulk_spanner.models.solution import RouteSolution
from bulk_spanner.solvers.greedy import solve_k, solve_single_source
from bulk_spanner.solvers.n45 import solve_n45
from bulk_spanner.solvers.tau import guess_tau

logger = logging.getLogger(__name__)


@dataclass
class SolveOutcome:
    solution: RouteSolution
    report: StageReport
    tau: Optional[Fraction] = None


def _remap(report: StageReport, pair_map) -> StageReport:
    records = [record.model_copy(update={'pairs': sorted(pair_map[p] for p in record.pairs)})
               for record in report.records]
    return StageReport(records=records, tau=report.tau)


def solve(inst: Instance, cfg: Optional[SolverConfig] = None) -> SolveOutcome:
    """
    Validate, then run the configured algorithm. For `n45`, non-unit demands
    are split into power-of-two classes solved separately (each with its own
    tau search) and merged.

    Raises:
        InstanceValidationError: If the instance fails validation.
    """
    cfg = cfg or SolverConfig()
    ensure_valid(inst)
    logger.info("Solving %d pairs on %d vertices with %s", inst.k, inst.n, cfg.algorithm)
    if cfg.algorithm == 'k':
        solution, report = solve_k(inst, cfg)
        return SolveOutcome(solution=solution, report=report)
    if cfg.algorithm == 'single-source':
        solution, report = solve_single_source(inst, cfg)
        return SolveOutcome(solution=solution, report=report)

    split = split_demands(inst)
    solutions: Dict[int, RouteSolution] = {}
    report = StageReport()
    tau: Optional[Fraction] = None
    for part in split.parts:
        part_tau, solution, part_report = guess_tau(
            part.instance, lambda t, sub=part.instance: solve_n45(sub, t, cfg), cfg)
        solutions[part.weight] = solution
        report = report.extended(_remap(part_report, part.pair_map))
        tau = part_tau if tau is None else max(tau, part_tau)
        logger.info("Weight class %d: %d pairs at tau=%s", part.weight, part.instance.k, float(part_tau))
    report.tau = tau
    merged = split.merge(solutions)
    return SolveOutcome(solution=merged, report=report, tau=tau)
