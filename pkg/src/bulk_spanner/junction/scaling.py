import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from bulk_spanner.core.evaluation import relaxed_budget
from bulk_spanner.models.instance import Instance


@dataclass(frozen=True)
class ScaledGraph:
    """
    Edge lengths rounded up to multiples of delta: edge e has scaled length
    multipliers[e] * delta with (d_e - 1) * delta < length <= d_e * delta.
    Layer labels range over [lower, upper].
    """

    inst: Instance
    theta: Fraction
    delta: Fraction
    multipliers: Tuple[int, ...]
    lower: int
    upper: int

    def scaled_length(self, edge: int) -> Fraction:
        return self.multipliers[edge] * self.delta

    def scaled_path_length(self, path) -> Fraction:
        return sum((self.scaled_length(e) for e in path), Fraction(0))

    def bound(self, pair: int) -> Fraction:
        return relaxed_budget(self.inst.demands[pair].dist_budget, self.theta)

    def related(self, pair: int, in_label: int, out_label: int) -> bool:
        return (in_label + out_label) * self.delta <= self.bound(pair)

    @property
    def labels(self) -> range:
        return range(self.lower, self.upper + 1)


def scale_graph(inst: Instance, theta: Fraction) -> ScaledGraph:
    """
    Scale with delta = theta * l_min / (n - 1), l_min the smallest |budget|.

    Raises:
        ValueError: If theta <= 0, n < 2 or the demand set is empty.
    """
    theta = Fraction(theta)
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    if inst.n < 2:
        raise ValueError("Scaling needs at least two vertices")
    if not inst.demands:
        raise ValueError("Scaling needs at least one demand pair")

    budgets = [abs(d.dist_budget) for d in inst.demands]
    l_min, l_max = min(budgets), max(budgets)
    delta = theta * l_min / (inst.n - 1)
    multipliers = tuple(math.ceil(edge.length / delta) for edge in inst.edges)
    min_length = min((edge.length for edge in inst.edges), default=Fraction(0))
    lower = math.floor(min(min_length * (inst.n - 1) / delta, 0))
    upper = math.ceil(l_max * (1 + theta) / delta) + abs(lower)
    return ScaledGraph(inst=inst, theta=theta, delta=delta, multipliers=multipliers, lower=lower, upper=upper)
