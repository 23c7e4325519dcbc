import logging
from fractions import Fraction
from typing import Callable, Optional, Tuple

from bulk_spanner.errors import GreedyStallError, InfeasibleError, RcspInfeasible, TauExhausted
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import RcspSettings, SolverConfig, StageReport
from bulk_spanner.models.solution import RouteSolution
from bulk_spanner.rcsp.query import RcspQuery
from bulk_spanner.rcsp.solver import solve, solve_exact_integer

logger = logging.getLogger(__name__)

Attempt = Callable[[Fraction], Tuple[RouteSolution, StageReport]]


def single_pair_cost(inst: Instance, pair: int, epsilon: Fraction = Fraction(1, 2),
                     settings: Optional[RcspSettings] = None) -> Fraction:
    """
    Cheapest sigma + delta*Dem of a strictly feasible route for one pair.
    Exact on integral lengths; otherwise a value no larger than the optimum.

    Raises:
        RcspInfeasible: If the pair has no feasible route.
    """
    demand = inst.demands[pair]
    query = RcspQuery.from_instance(
        inst, demand.source, demand.sink,
        cost=lambda e: inst.edges[e].sigma + inst.edges[e].delta * demand.demand,
        weights=[lambda e: inst.edges[e].length],
        budgets=[demand.dist_budget],
        tolerances=[Fraction(epsilon) * (1 if demand.dist_budget > 0 else -1)],
    )
    if all(edge.length.denominator == 1 for edge in inst.edges):
        return solve_exact_integer(query, settings).cost
    return solve(query, settings).cost


def initial_tau(inst: Instance, cfg: SolverConfig) -> Fraction:
    """Largest single-pair cost: a lower bound on the optimum. Falls back to 1 when every pair is free."""
    if cfg.tau_initial is not None:
        return Fraction(cfg.tau_initial)
    tau = max((single_pair_cost(inst, p, cfg.epsilon, cfg.rcsp) for p in range(inst.k)), default=Fraction(0))
    return tau if tau > 0 else Fraction(1)


def guess_tau(inst: Instance, attempt: Attempt, cfg: Optional[SolverConfig] = None
              ) -> Tuple[Fraction, RouteSolution, StageReport]:
    """
    Double tau from its lower bound until an attempt resolves every pair.

    Raises:
        TauExhausted: After cfg.max_tau_doublings doublings without success.
        RcspInfeasible: If some pair has no feasible route at all.
    """
    cfg = cfg or SolverConfig()
    tau = initial_tau(inst, cfg)
    for doubling in range(cfg.max_tau_doublings + 1):
        try:
            solution, report = attempt(tau)
        except (GreedyStallError, InfeasibleError) as e:
            if isinstance(e, RcspInfeasible):
                raise
            logger.info("tau=%s failed (%s); doubling", float(tau), e)
            tau *= 2
            continue
        if len(solution.routes) == inst.k:
            logger.info("tau=%s resolved all %d pairs after %d doublings", float(tau), inst.k, doubling)
            return tau, solution, report
        logger.info("tau=%s resolved %d of %d pairs; doubling", float(tau), len(solution.routes), inst.k)
        tau *= 2
    raise TauExhausted(f"No complete solution after {cfg.max_tau_doublings} doublings (last tau {tau / 2})",
                       size=cfg.max_tau_doublings, cap=cfg.max_tau_doublings)
