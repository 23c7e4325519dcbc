"""Cost, feasibility and condition-number evaluation on exact rationals."""

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from bulk_spanner.models.instance import Demand, Instance
from bulk_spanner.models.solution import ConditionNumbers, CostBreakdown, JunctionTree, RouteSolution


def sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def relaxed_budget(budget: Fraction, theta: Fraction) -> Fraction:
    """Largest length a route may have: (1 + theta*sign(Dis)) * Dis."""
    return (1 + theta * sign(budget)) * budget


def path_metric(inst: Instance, path: Iterable[int], metric: str) -> Fraction:
    """Sum of one edge attribute ('length', 'sigma' or 'delta') along a path."""
    total = Fraction(0)
    for edge_id in path:
        total += getattr(inst.edge(edge_id), metric)
    return total


def path_length(inst: Instance, path: Iterable[int]) -> Fraction:
    return path_metric(inst, path, 'length')


def is_walk(inst: Instance, source: int, sink: int, path: Sequence[int]) -> bool:
    """True iff the edges chain head-to-tail from source to sink."""
    current = source
    for edge_id in path:
        edge = inst.edge(edge_id)
        if edge.tail != current:
            return False
        current = edge.head
    return current == sink


def walk_vertices(inst: Instance, source: int, path: Sequence[int]) -> List[int]:
    vertices = [source]
    for edge_id in path:
        vertices.append(inst.edge(edge_id).head)
    return vertices


def remove_cycles(inst: Instance, source: int, path: Sequence[int]) -> Tuple[int, ...]:
    """
    Shortcut every revisited vertex of a walk.

    With no negative cycles the result is never longer and never costs more.
    """
    kept: List[int] = []
    position = {source: 0}
    for edge_id in path:
        head = inst.edge(edge_id).head
        if head in position:
            cut = position[head]
            for dropped in kept[cut:]:
                position.pop(inst.edge(dropped).head, None)
            del kept[cut:]
            position[head] = cut
        else:
            kept.append(edge_id)
            position[head] = len(kept)
    return tuple(kept)


def is_theta_feasible(inst: Instance, pair: int, path: Sequence[int], theta: Fraction) -> bool:
    budget = inst.demands[pair].dist_budget
    return path_length(inst, path) <= relaxed_budget(budget, Fraction(theta))


def strict_theta(inst: Instance) -> Fraction:
    """
    Tolerance under which theta-feasibility equals strict feasibility for
    integral lengths: theta*|Dis| stays below floor(Dis) + 1 - Dis for every
    pair. Integral budgets give 1/(max|Dis| + 1).
    """
    if not inst.demands:
        return Fraction(1)
    theta = None
    for d in inst.demands:
        budget = d.dist_budget
        gap = math.floor(budget) + 1 - budget
        candidate = gap / (abs(budget) + 1)
        theta = candidate if theta is None else min(theta, candidate)
    return theta


def cost_breakdown(inst: Instance, sol: RouteSolution) -> CostBreakdown:
    """
    Upfront part: sigma over the union of route edges, each edge once.
    Pay-per-use part: delta along every route times the pair's demand.

    Raises:
        KeyError: If a route references an unknown edge id or pair.
    """
    used = set()
    delta_part = Fraction(0)
    for pair, route in sol.routes.items():
        if pair < 0 or pair >= inst.k:
            raise KeyError(f"Unknown demand pair: {pair}")
        demand = inst.demands[pair].demand
        for edge_id in route:
            edge = inst.edge(edge_id)
            used.add(edge_id)
            delta_part += edge.delta * demand
    sigma_part = sum((inst.edges[e].sigma for e in used), Fraction(0))
    return CostBreakdown(sigma=sigma_part, delta=delta_part)


def solution_cost(inst: Instance, sol: RouteSolution) -> Fraction:
    return cost_breakdown(inst, sol).total


def junction_cost(inst: Instance, tree: JunctionTree) -> Fraction:
    """Cost of a junction tree: shared sigma once, delta per s->r->t path times demand."""
    return solution_cost(inst, tree.to_solution())


def edge_loads(inst: Instance, sol: RouteSolution) -> Dict[int, int]:
    """Demand routed through each edge (per occurrence along a route)."""
    loads: Dict[int, int] = defaultdict(int)
    for pair, route in sol.routes.items():
        for edge_id in route:
            loads[edge_id] += inst.demands[pair].demand
    return dict(loads)


def condition_numbers(inst: Instance) -> ConditionNumbers:
    """
    eta: most negative edge length relative to the smallest |budget|.
    xi: largest |budget| relative to the smallest.

    Raises:
        ValueError: If the demand set is empty or a budget is zero.
    """
    if not inst.demands:
        raise ValueError("Condition numbers need a non-empty demand set")
    magnitudes = [abs(d.dist_budget) for d in inst.demands]
    smallest = min(magnitudes)
    if smallest == 0:
        raise ValueError("Condition numbers are undefined with a zero distance budget")
    most_negative = min([e.length for e in inst.edges] + [Fraction(0)])
    return ConditionNumbers(eta=abs(most_negative) / smallest, xi=max(magnitudes) / smallest)


@dataclass(frozen=True)
class SplitPart:
    """Unit-demand sub-instance of one power-of-two weight class."""

    weight: int
    instance: Instance
    pair_map: Tuple[int, ...]


@dataclass(frozen=True)
class DemandSplit:
    original: Instance
    parts: Tuple[SplitPart, ...] = field(default_factory=tuple)

    def merge(self, solutions: Dict[int, RouteSolution]) -> RouteSolution:
        """
        Recombine sub-solutions keyed by weight.

        Each original pair takes, among the sub-routes found for it, the one
        with the smallest delta sum; ties go to the heavier weight class.
        """
        chosen: Dict[int, Tuple[Tuple[Fraction, int], Tuple[int, ...]]] = {}
        theta = Fraction(0)
        for part in self.parts:
            sol = solutions.get(part.weight)
            if sol is None:
                continue
            theta = max(theta, sol.theta)
            for sub_pair, route in sol.routes.items():
                pair = part.pair_map[sub_pair]
                key = (path_metric(self.original, route, 'delta'), -part.weight)
                if pair not in chosen or key < chosen[pair][0]:
                    chosen[pair] = (key, tuple(route))
        return RouteSolution(routes={p: r for p, (_, r) in sorted(chosen.items())}, theta=theta)

    def weighted_loads(self, solutions: Dict[int, RouteSolution]) -> Dict[int, int]:
        """Per-edge load of the sub-solutions, each weighted by its class."""
        loads: Dict[int, int] = defaultdict(int)
        for part in self.parts:
            sol = solutions.get(part.weight)
            if sol is None:
                continue
            for edge_id, load in edge_loads(part.instance, sol).items():
                loads[edge_id] += load * part.weight
        return dict(loads)


def split_demands(inst: Instance) -> DemandSplit:
    """Split demands along their binary expansions into unit-demand instances."""
    if not inst.demands:
        return DemandSplit(original=inst, parts=())
    largest = max(d.demand for d in inst.demands)
    parts = []
    bit = 0
    while (1 << bit) <= largest:
        weight = 1 << bit
        members = [i for i, d in enumerate(inst.demands) if d.demand & weight]
        if members:
            demands = [
                Demand(source=inst.demands[i].source, sink=inst.demands[i].sink,
                       demand=1, dist_budget=inst.demands[i].dist_budget)
                for i in members
            ]
            parts.append(SplitPart(weight=weight, instance=inst.with_demands(demands),
                                   pair_map=tuple(members)))
        bit += 1
    return DemandSplit(original=inst, parts=tuple(parts))
