"""
Thick-pair resolution by vertex sampling.

Sampled vertices act as meeting points: for every sample u and terminal,
the shortest length budget that still admits a cheap path to (or from) u is
found by binary search over integral lengths, and the two halves are joined
into s ~> u ~> t routes that are strictly feasible and cheap in both costs.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from bulk_spanner.core.evaluation import path_metric, remove_cycles
from bulk_spanner.core.thresholds import Thresholds
from bulk_spanner.errors import RcspInfeasible
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import RcspSettings
from bulk_spanner.rcsp.query import RcspQuery
from bulk_spanner.rcsp.solver import solve_one_rational

logger = logging.getLogger(__name__)

Half = Tuple[Tuple[int, ...], Fraction]


@dataclass
class ThickResult:
    samples: List[int]
    routes: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    meeting_points: Dict[int, int] = field(default_factory=dict)


def length_range(inst: Instance) -> Tuple[int, int]:
    """Integral length budgets worth scanning: n * MinLength .. n * MaxLength, widened to include 0."""
    lengths = [edge.length for edge in inst.edges] or [Fraction(0)]
    return math.floor(inst.n * min(min(lengths), 0)), math.ceil(inst.n * max(max(lengths), 0))


def _cheap_half(inst: Instance, source: int, sink: int, limit: int, thresholds: Thresholds,
                zeta: Fraction, settings: Optional[RcspSettings]) -> Optional[Tuple[int, ...]]:
    """Min-sigma path with length <= limit and delta <= (1+zeta) L2, kept only if sigma <= L1."""
    query = RcspQuery.from_instance(
        inst, source, sink,
        cost=lambda e: inst.edges[e].sigma,
        weights=[lambda e: inst.edges[e].length, lambda e: inst.edges[e].delta],
        budgets=[Fraction(limit) + Fraction(1, 2), thresholds.per_use],
        tolerances=[Fraction(1), zeta],
    )
    try:
        result = solve_one_rational(query, zeta, settings)
    except RcspInfeasible:
        return None
    if result.cost > thresholds.upfront:
        return None
    return result.path


def shortest_cheap_half(inst: Instance, source: int, sink: int, thresholds: Thresholds, zeta: Fraction,
                        settings: Optional[RcspSettings] = None) -> Optional[Half]:
    """Binary search for the smallest integral length budget admitting a cheap half."""
    low, high = length_range(inst)
    best = _cheap_half(inst, source, sink, high, thresholds, zeta, settings)
    if best is None:
        return None
    while low < high:
        middle = (low + high) // 2
        found = _cheap_half(inst, source, sink, middle, thresholds, zeta, settings)
        if found is None:
            low = middle + 1
        else:
            best, high = found, middle
    return best, path_metric(inst, best, 'length')


def resolve_thick(
    inst: Instance,
    thresholds: Thresholds,
    rng: np.random.Generator,
    zeta: Fraction = Fraction(1),
    pairs: Optional[Iterable[int]] = None,
    settings: Optional[RcspSettings] = None,
) -> ThickResult:
    """
    Sample ceil(3 beta ln n) vertices with replacement and join cheap halves
    through them. A joined route is kept when its length is within Dis, its
    sigma within 2 L1 and its delta within 2 (1+zeta) L2; among sample points
    the cheapest route (sigma + delta) wins.
    """
    zeta = Fraction(zeta)
    pairs = range(inst.k) if pairs is None else sorted(pairs)
    samples = sorted({int(v) for v in rng.integers(0, inst.n, size=thresholds.sample_size)})
    result = ThickResult(samples=samples)
    into: Dict[Tuple[int, int], Optional[Half]] = {}
    out_of: Dict[Tuple[int, int], Optional[Half]] = {}

    for pair in pairs:
        demand = inst.demands[pair]
        best = None
        for u in samples:
            if (demand.source, u) not in into:
                into[(demand.source, u)] = shortest_cheap_half(inst, demand.source, u, thresholds, zeta, settings)
            if (u, demand.sink) not in out_of:
                out_of[(u, demand.sink)] = shortest_cheap_half(inst, u, demand.sink, thresholds, zeta, settings)
            first, second = into[(demand.source, u)], out_of[(u, demand.sink)]
            if first is None or second is None:
                continue
            if first[1] + second[1] > demand.dist_budget:
                continue
            route = remove_cycles(inst, demand.source, first[0] + second[0])
            sigma = path_metric(inst, route, 'sigma')
            delta = path_metric(inst, route, 'delta')
            if sigma > 2 * thresholds.upfront or delta > 2 * (1 + zeta) * thresholds.per_use:
                continue
            if best is None or (sigma + delta, u) < best[0]:
                best = ((sigma + delta, u), route)
        if best is not None:
            result.routes[pair] = best[1]
            result.meeting_points[pair] = best[0][1]

    logger.info("Thick stage: %d distinct samples resolved %d of %d pairs",
                len(samples), len(result.routes), len(pairs))
    return result
