"""Greedy density loop over minimum-density junction trees."""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from bulk_spanner.core.evaluation import remove_cycles, solution_cost
from bulk_spanner.core.streams import substream
from bulk_spanner.errors import GreedyStallError, NoResolvablePairs
from bulk_spanner.junction.pipeline import min_density_junction_tree
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import SolverConfig, StageRecord, StageReport, StageTag
from bulk_spanner.models.solution import RouteSolution

logger = logging.getLogger(__name__)


def commit_routes(inst: Instance, routes: Dict[int, Tuple[int, ...]], new: Dict[int, Sequence[int]],
                  theta: Fraction) -> Fraction:
    """Add cycle-free copies of `new` to `routes`; returns the resulting increase of the total cost."""
    before = solution_cost(inst, RouteSolution(routes=routes, theta=theta))
    for pair, route in new.items():
        routes[pair] = remove_cycles(inst, inst.demands[pair].source, route)
    return solution_cost(inst, RouteSolution(routes=routes, theta=theta)) - before


def greedy_junction(
    inst: Instance,
    cfg: SolverConfig,
    rng: np.random.Generator,
    theta: Fraction,
    pairs: Optional[Iterable[int]] = None,
    roots: Optional[Sequence[int]] = None,
    stage: StageTag = 'greedy',
    routes: Optional[Dict[int, Tuple[int, ...]]] = None,
) -> StageReport:
    """
    Commit minimum-density junction trees until every pair is routed.

    Routes are written into `routes` (a fresh dict when omitted).

    Raises:
        GreedyStallError: If an iteration resolves no remaining pair.
    """
    routes = {} if routes is None else routes
    remaining = set(range(inst.k) if pairs is None else pairs)
    report = StageReport()
    iteration = 0
    while remaining:
        iteration += 1
        try:
            found = min_density_junction_tree(
                inst, theta, rng, height=cfg.height, pairs=remaining, roots=roots,
                settings=cfg.junction, lp_settings=cfg.lp,
            )
        except NoResolvablePairs as e:
            raise GreedyStallError(
                f"Greedy iteration {iteration} resolved none of {len(remaining)} pairs: {sorted(remaining)}") from e
        new = {p: found.tree.route(p) for p in found.resolved if p in remaining}
        if not new:
            raise GreedyStallError(f"Greedy iteration {iteration} resolved no remaining pair")
        cost = commit_routes(inst, routes, new, theta)
        report.add(StageRecord(stage=stage, pairs=sorted(new), cost=cost, density=found.density))
        remaining -= set(new)
        logger.info("Greedy iteration %d: root %d resolved %d pairs, %d left",
                    iteration, found.root, len(new), len(remaining))
    return report


def solve_k(inst: Instance, cfg: Optional[SolverConfig] = None,
            rng: Optional[np.random.Generator] = None) -> Tuple[RouteSolution, StageReport]:
    """Greedy over all roots with the configured theta."""
    cfg = cfg or SolverConfig()
    rng = rng if rng is not None else substream(cfg.seed, 'label-cover')
    routes: Dict[int, Tuple[int, ...]] = {}
    report = greedy_junction(inst, cfg, rng, cfg.theta, routes=routes)
    return RouteSolution(routes=routes, theta=cfg.theta), report


def solve_single_source(inst: Instance, cfg: Optional[SolverConfig] = None,
                        rng: Optional[np.random.Generator] = None) -> Tuple[RouteSolution, StageReport]:
    """
    Greedy with the root fixed at the shared source.

    Raises:
        ValueError: If the pairs do not share one source.
    """
    cfg = cfg or SolverConfig()
    sources = {d.source for d in inst.demands}
    if len(sources) > 1:
        raise ValueError(f"Single-source solving needs one shared source, got {sorted(sources)}")
    rng = rng if rng is not None else substream(cfg.seed, 'label-cover')
    routes: Dict[int, Tuple[int, ...]] = {}
    if not sources:
        return RouteSolution(routes=routes, theta=cfg.theta), StageReport()
    report = greedy_junction(inst, cfg, rng, cfg.theta, roots=sorted(sources), routes=routes)
    return RouteSolution(routes=routes, theta=cfg.theta), report
