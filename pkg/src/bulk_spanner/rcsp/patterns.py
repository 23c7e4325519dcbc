import itertools
import math
from fractions import Fraction
from typing import List, Optional, Tuple

from bulk_spanner.errors import PatternSpaceOverflow
from bulk_spanner.rcsp.query import RcspQuery, ScaledQuery

Pattern = Tuple[int, ...]


def most_negative(query: RcspQuery) -> Tuple[Fraction, ...]:
    """N_i = |min(min_e w_i(e), 0)| per dimension."""
    result = []
    for i in range(query.m):
        smallest = min([arc.weights[i] for arc in query.arcs] + [Fraction(0)])
        result.append(abs(smallest))
    return tuple(result)


def scale_weights(query: RcspQuery) -> ScaledQuery:
    """
    Round every weight up to a multiple of Delta_i = eps_i * L_i / (n-1).

    Raises:
        ValueError: If n < 2 or some eps_i * L_i <= 0.
    """
    n = query.n
    if n < 2:
        raise ValueError("Scaling needs at least two vertices")
    deltas = []
    for budget, tolerance in zip(query.budgets, query.tolerances):
        if tolerance * budget <= 0:
            raise ValueError(f"Tolerance and budget must have a positive product, got {tolerance} * {budget}")
        deltas.append(Fraction(tolerance) * budget / (n - 1))

    multipliers = tuple(
        tuple(math.ceil(Fraction(w) / d) for w, d in zip(arc.weights, deltas))
        for arc in query.arcs
    )
    negatives = most_negative(query)

    lower, upper, target = [], [], []
    for i in range(query.m):
        delta = deltas[i]
        slack = negatives[i] * n
        lo = math.ceil(-slack / delta)
        hi = math.floor((abs(1 + query.tolerances[i]) * query.budgets[i] + slack) / delta)
        lower.append(lo)
        upper.append(hi)
        target.append(min(math.floor((1 + query.tolerances[i]) * query.budgets[i] / delta), hi))

    return ScaledQuery(query=query, deltas=tuple(deltas), multipliers=multipliers,
                       negatives=negatives, lower=tuple(lower), upper=tuple(upper),
                       target=tuple(target))


def count_valid_patterns(scaled: ScaledQuery) -> int:
    return math.prod(scaled.box_sizes)


def enumerate_valid_patterns(scaled: ScaledQuery, cap: Optional[int] = None) -> List[Pattern]:
    """
    Every valid pattern, in lexicographic order (component-wise smaller
    patterns always come first).

    Raises:
        PatternSpaceOverflow: If the pattern count exceeds cap.
    """
    total = count_valid_patterns(scaled)
    if cap is not None and total > cap:
        raise PatternSpaceOverflow(f"{total} valid patterns exceed the cap of {cap}", size=total, cap=cap)
    ranges = [range(lo, hi + 1) for lo, hi in zip(scaled.lower, scaled.upper)]
    return list(itertools.product(*ranges))


def pattern_bound(scaled: ScaledQuery, constant: int = 4) -> Fraction:
    """Closed form constant^m * prod_i (n + n/|eps_i| + n^2 N_i/|eps_i L_i| + 1)."""
    query = scaled.query
    n = query.n
    bound = Fraction(constant) ** query.m
    for i in range(query.m):
        eps = abs(Fraction(query.tolerances[i]))
        factor = n + n / eps + Fraction(n * n) * scaled.negatives[i] / abs(eps * query.budgets[i]) + 1
        bound *= factor
    return bound


def in_box(scaled: ScaledQuery, pattern: Pattern) -> bool:
    return all(lo <= p <= hi for p, lo, hi in zip(pattern, scaled.lower, scaled.upper))
