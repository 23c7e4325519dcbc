from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from bulk_spanner.core.evaluation import path_metric
from bulk_spanner.core.thresholds import Thresholds
from bulk_spanner.errors import RcspInfeasible
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import RcspSettings
from bulk_spanner.rcsp.query import RcspQuery
from bulk_spanner.rcsp.solver import solve_one_rational


@dataclass(frozen=True)
class PathColumn:
    pair: int
    edges: Tuple[int, ...]
    sigma: Fraction
    delta: Fraction
    length: Fraction

    @classmethod
    def from_path(cls, inst: Instance, pair: int, edges: Sequence[int]) -> "PathColumn":
        edges = tuple(edges)
        return cls(pair=pair, edges=edges, sigma=path_metric(inst, edges, 'sigma'),
                   delta=path_metric(inst, edges, 'delta'), length=path_metric(inst, edges, 'length'))

    @property
    def key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.pair, self.edges)

    def in_family(self, inst: Instance, thresholds: Thresholds, zeta: Fraction = Fraction(0)) -> bool:
        """Member of the (1+zeta)-relaxed cheap feasible family of its pair."""
        budget = inst.demands[self.pair].dist_budget
        return self.length <= budget and self.sigma <= (1 + zeta) * thresholds.upfront


def cheapest_column(
    inst: Instance,
    pair: int,
    edge_cost: Dict[int, Fraction],
    thresholds: Thresholds,
    zeta: Fraction,
    settings: Optional[RcspSettings] = None,
) -> Optional[PathColumn]:
    """
    Min edge_cost path of the pair with length <= Dis exactly and
    sigma <= (1 + zeta) * tau / n^{4/5}; None if no path qualifies.
    """
    demand = inst.demands[pair]
    query = RcspQuery.from_instance(
        inst, demand.source, demand.sink,
        cost=lambda e: edge_cost.get(e, Fraction(0)),
        weights=[lambda e: inst.edges[e].length, lambda e: inst.edges[e].sigma],
        budgets=[demand.dist_budget, thresholds.upfront],
        tolerances=[Fraction(1), Fraction(zeta)],
    )
    try:
        result = solve_one_rational(query, zeta, settings)
    except RcspInfeasible:
        return None
    return PathColumn.from_path(inst, pair, result.path)
