import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from bulk_spanner.errors import RcspInfeasible, SolverError
from bulk_spanner.models.reports import RcspSettings
from bulk_spanner.rcsp.patterns import count_valid_patterns, most_negative, scale_weights
from bulk_spanner.rcsp.query import RcspQuery, RcspResult, ScaledQuery
from bulk_spanner.rcsp.table import INFINITY, DensePatternTable, SparsePatternTable

logger = logging.getLogger(__name__)

EXACT_DENOMINATOR = 10**6


def resource_condition(query: RcspQuery) -> Tuple[Fraction, ...]:
    """gamma_i = |min(min_e w_i(e), 0)| / |L_i|."""
    return tuple(neg / abs(budget) for neg, budget in zip(most_negative(query), query.budgets))


def path_consumption(query: RcspQuery, arc_indices: Sequence[int]) -> Tuple[Fraction, ...]:
    totals = [Fraction(0)] * query.m
    for a in arc_indices:
        for i, w in enumerate(query.arcs[a].weights):
            totals[i] += w
    return tuple(totals)


def _shortcut(query: RcspQuery, arc_indices: Sequence[int]) -> List[int]:
    kept: List[int] = []
    position = {query.source: 0}
    for a in arc_indices:
        head = query.arcs[a].head
        if head in position:
            cut = position[head]
            for dropped in kept[cut:]:
                position.pop(query.arcs[dropped].head, None)
            del kept[cut:]
            position[head] = cut
        else:
            kept.append(a)
            position[head] = len(kept)
    return kept


def _costs(query: RcspQuery, settings: RcspSettings) -> Tuple[List, float]:
    """Exact costs when every denominator is small, floats with a tolerance otherwise."""
    if all(arc.cost.denominator <= EXACT_DENOMINATOR for arc in query.arcs):
        return [arc.cost for arc in query.arcs], 0.0
    return [float(arc.cost) for arc in query.arcs], settings.float_tolerance


def build_table(scaled: ScaledQuery, settings: Optional[RcspSettings] = None):
    """Dense table when n * |H| fits dense_max_cells, label table otherwise."""
    settings = settings or RcspSettings()
    costs, tolerance = _costs(scaled.query, settings)
    cells = scaled.query.n * count_valid_patterns(scaled)
    if cells <= settings.dense_max_cells:
        table = DensePatternTable(scaled, costs, cap=settings.max_patterns, tolerance=tolerance)
    else:
        table = SparsePatternTable(scaled, costs, cap=settings.max_patterns, tolerance=tolerance)
    table.fill()
    return table


def _result(query: RcspQuery, arc_indices: Sequence[int], patterns: int, relaxations: int) -> RcspResult:
    simple = _shortcut(query, arc_indices)
    return RcspResult(
        path=tuple(query.arcs[a].key for a in simple),
        cost=sum((query.arcs[a].cost for a in simple), Fraction(0)),
        consumption=path_consumption(query, simple),
        patterns=patterns,
        relaxations=relaxations,
    )


def solve(query: RcspQuery, settings: Optional[RcspSettings] = None) -> RcspResult:
    """
    Min-cost path whose consumption is within (1 + eps_i) * L_i in every
    dimension, costing no more than the best path meeting L_i exactly.

    Raises:
        RcspInfeasible: If no valid-pattern walk reaches the sink within n arcs.
        PatternSpaceOverflow: If the table exceeds rcsp.max_patterns.
    """
    settings = settings or RcspSettings()
    if query.source == query.sink and all(b > 0 for b in query.budgets):
        return RcspResult(path=(), cost=Fraction(0), consumption=tuple(Fraction(0) for _ in query.budgets))
    if query.n < 2:
        raise RcspInfeasible("No path within budgets on a single vertex")

    scaled = scale_weights(query)
    if any(t < lo for t, lo in zip(scaled.target, scaled.lower)):
        raise RcspInfeasible("Relaxed budgets lie below every valid pattern")
    table = build_table(scaled, settings)
    walk = table.walk(query.sink, scaled.target, query.n)
    if walk is None:
        raise RcspInfeasible(f"No path from {query.source} to {query.sink} within the resource budgets")
    result = _result(query, walk, table.size, table.relaxations)
    logger.debug("RCSP %d->%d: cost %s, %d patterns, %d relaxations",
                 query.source, query.sink, result.cost, result.patterns, result.relaxations)
    return result


def _integral_budgets(query: RcspQuery, dims: Sequence[int], settings: RcspSettings):
    """
    Budgets and tolerances that make integer dimensions exact: L' = floor(L)+1/2
    (clamped to the reachable range) and eps = sign(L')/(n^2 W_max), so that
    |eps L'| < 1/2.

    Raises:
        ValueError: If a weight is fractional or outside the polynomial bound.
    """
    n = query.n
    bound = settings.poly_bound(n)
    largest = 0
    for arc in query.arcs:
        for i in dims:
            w = arc.weights[i]
            if w.denominator != 1:
                raise ValueError(f"Resource {i} of arc {arc.key} is not integral: {w}")
            if abs(w) > bound:
                raise ValueError(f"Resource {i} of arc {arc.key} exceeds the polynomial bound {bound}: {w}")
            largest = max(largest, abs(int(w)))
    w_max = max(1, (n - 1) * largest)
    zeta_1 = Fraction(1, n * n * w_max)
    budgets, tolerances = {}, {}
    for i in dims:
        shifted = math.floor(query.budgets[i]) + Fraction(1, 2)
        limit = w_max + Fraction(1, 2)
        shifted = max(-limit, min(limit, shifted))
        budgets[i] = shifted
        tolerances[i] = zeta_1 if shifted > 0 else -zeta_1
    return budgets, tolerances, zeta_1


def solve_exact_integer(query: RcspQuery, settings: Optional[RcspSettings] = None) -> RcspResult:
    """
    Exact min-cost path meeting every integral budget strictly.

    Raises:
        ValueError: If some weight is fractional or not poly-bounded.
        RcspInfeasible: If no path meets the budgets.
    """
    settings = settings or RcspSettings()
    if query.n < 2:
        return solve(query, settings)
    dims = range(query.m)
    budgets, tolerances, _ = _integral_budgets(query, dims, settings)
    exact = query.with_budgets([budgets[i] for i in dims], [tolerances[i] for i in dims])
    result = solve(exact, settings)
    _check_strict(query, result, dims)
    return result


def solve_one_rational(query: RcspQuery, zeta: Fraction, settings: Optional[RcspSettings] = None) -> RcspResult:
    """
    Integral dimensions 0..m-2 met exactly, the last (rational, non-negative)
    dimension within (1 + zeta), cost at most the strict optimum.

    Raises:
        ValueError: On a negative last-dimension weight or budget, or zeta <= 0.
        RcspInfeasible: If no path qualifies.
    """
    settings = settings or RcspSettings()
    zeta = Fraction(zeta)
    if zeta <= 0:
        raise ValueError(f"zeta must be positive, got {zeta}")
    last = query.m - 1
    if query.budgets[last] <= 0:
        raise ValueError("The rational resource needs a positive budget")
    if any(arc.weights[last] < 0 for arc in query.arcs):
        raise ValueError("The rational resource must be non-negative")

    if last > 0 and all(arc.weights[last] == 0 for arc in query.arcs):
        reduced = RcspQuery(
            n=query.n,
            arcs=tuple(arc.model_copy(update={'weights': arc.weights[:last]}) for arc in query.arcs),
            source=query.source, sink=query.sink,
            budgets=query.budgets[:last], tolerances=query.tolerances[:last],
        )
        result = solve_exact_integer(reduced, settings)
        return result.model_copy(update={'consumption': result.consumption + (Fraction(0),)})

    if query.n < 2:
        return solve(query.with_budgets(query.budgets, [Fraction(1)] * query.m), settings)
    dims = range(last)
    budgets, tolerances, zeta_1 = _integral_budgets(query, dims, settings)
    budgets[last] = query.budgets[last]
    tolerances[last] = min(zeta_1, zeta)
    order = range(query.m)
    relaxed = query.with_budgets([budgets[i] for i in order], [tolerances[i] for i in order])
    result = solve(relaxed, settings)
    _check_strict(query, result, dims)
    return result


def _check_strict(query: RcspQuery, result: RcspResult, dims) -> None:
    for i in dims:
        if result.consumption[i] > query.budgets[i]:
            raise SolverError(
                f"Integral resource {i} overshoots: {result.consumption[i]} > {query.budgets[i]}")
