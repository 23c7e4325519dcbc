"""Unit-demand driver: thick sampling, then the thin-pair loop choosing between junction trees and LP rounding."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from bulk_spanner.core.evaluation import solution_cost, strict_theta
from bulk_spanner.core.streams import substream
from bulk_spanner.core.thresholds import Thresholds
from bulk_spanner.errors import InfeasibleError, LpInfeasible, NoResolvablePairs
from bulk_spanner.junction.pipeline import min_density_junction_tree
from bulk_spanner.lpflow.thin import prune, round_solution, solve_thin_lp
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import SolverConfig, StageRecord, StageReport, StageTag
from bulk_spanner.models.solution import RouteSolution
from bulk_spanner.solvers.greedy import commit_routes, greedy_junction
from bulk_spanner.solvers.thick import resolve_thick

logger = logging.getLogger(__name__)


@dataclass
class Candidate:
    stage: StageTag
    routes: Dict[int, Tuple[int, ...]]
    density: Fraction


def check_n45_preconditions(inst: Instance) -> None:
    """
    Raises:
        ValueError: On a non-unit demand or a fractional edge length.
    """
    for index, demand in enumerate(inst.demands):
        if demand.demand != 1:
            raise ValueError(f"Demand {index} is {demand.demand}; split demands first")
    for index, edge in enumerate(inst.edges):
        if edge.length.denominator != 1:
            raise ValueError(f"Edge {index} has fractional length {edge.length}")


def _standalone_density(inst: Instance, routes: Dict[int, Tuple[int, ...]]) -> Fraction:
    return solution_cost(inst, RouteSolution(routes=routes)) / len(routes)


def junction_candidate(inst: Instance, cfg: SolverConfig, remaining: List[int], theta: Fraction,
                       rng: np.random.Generator) -> Optional[Candidate]:
    try:
        found = min_density_junction_tree(inst, theta, rng, height=cfg.height, pairs=remaining,
                                          settings=cfg.junction, lp_settings=cfg.lp)
    except NoResolvablePairs:
        return None
    routes = {p: found.tree.route(p) for p in found.resolved}
    return Candidate(stage='junction', routes=routes, density=found.density)


def lp_candidate(inst: Instance, cfg: SolverConfig, remaining: List[int], tau: Fraction,
                 rng: np.random.Generator) -> Optional[Candidate]:
    try:
        fractional = solve_thin_lp(inst, remaining, tau, cfg.zeta, cfg.lp, cfg.rcsp)
    except LpInfeasible as e:
        logger.debug("No LP candidate: %s", e)
        return None
    rounded = round_solution(inst, prune(fractional, inst), rng, cfg.rcsp)
    if not rounded.paths:
        return None
    return Candidate(stage='lp-round', routes=dict(rounded.paths), density=_standalone_density(inst, rounded.paths))


def solve_n45(
    inst: Instance,
    tau: Fraction,
    cfg: Optional[SolverConfig] = None,
    fallback_limit: Optional[Fraction] = None,
) -> Tuple[RouteSolution, StageReport]:
    """
    One run for a fixed guess tau. Every returned route is strictly feasible.

    fallback_limit overrides the 4 n^{6/5} remaining-pair count below which
    the rest is handed to the greedy junction loop.

    Raises:
        ValueError: If demands are not unit or lengths are fractional.
        InfeasibleError: If an iteration finds neither a junction tree nor an LP rounding.
    """
    cfg = cfg or SolverConfig()
    check_n45_preconditions(inst)
    tau = Fraction(tau)
    thresholds = Thresholds.for_guess(inst.n, inst.k, tau)
    theta = strict_theta(inst)
    limit = thresholds.fallback_limit if fallback_limit is None else Fraction(fallback_limit)
    routes: Dict[int, Tuple[int, ...]] = {}
    report = StageReport(tau=tau)

    thick = resolve_thick(inst, thresholds, substream(cfg.seed, 'thick'), cfg.thick_zeta, settings=cfg.rcsp)
    if thick.routes:
        cost = commit_routes(inst, routes, thick.routes, theta)
        report.add(StageRecord(stage='thick', pairs=sorted(thick.routes), cost=cost,
                               density=cost / len(thick.routes)))
    remaining = sorted(set(range(inst.k)) - set(routes))

    lp_rng = substream(cfg.seed, 'lp-round')
    junction_rng = substream(cfg.seed, 'label-cover')
    while remaining:
        if len(remaining) <= limit:
            logger.info("%d thin pairs left (limit %s): greedy fallback", len(remaining), float(limit))
            fallback = greedy_junction(inst, cfg, junction_rng, theta, pairs=remaining,
                                       stage='fallback-k', routes=routes)
            report = report.extended(fallback)
            break
        candidates = [c for c in (junction_candidate(inst, cfg, remaining, theta, junction_rng),
                                  lp_candidate(inst, cfg, remaining, tau, lp_rng)) if c is not None]
        if not candidates:
            raise InfeasibleError(f"Neither a junction tree nor LP rounding resolves any of {remaining} at tau={tau}")
        chosen = min(candidates, key=lambda c: c.density)
        cost = commit_routes(inst, routes, chosen.routes, theta)
        report.add(StageRecord(stage=chosen.stage, pairs=sorted(chosen.routes), cost=cost, density=chosen.density))
        remaining = [p for p in remaining if p not in chosen.routes]
        logger.info("Thin-pair round: %s resolved %d pairs, %d left", chosen.stage, len(chosen.routes), len(remaining))

    return RouteSolution(routes=routes, theta=Fraction(0)), report
