import logging
from fractions import Fraction
from typing import Dict, List, Optional

from bulk_spanner.errors import InstanceValidationError
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.solution import ValidationReport, Violation

logger = logging.getLogger(__name__)


def relax_rounds(inst: Instance, sources: List[int], rounds: int,
                 metric: str = 'length') -> Dict[str, object]:
    """
    Bellman-Ford style sweeps starting from the given sources at distance 0.

    Returns the distances after `rounds` sweeps together with the vertex
    relaxed during the last sweep (None if that sweep changed nothing).
    """
    dist: Dict[int, Optional[Fraction]] = {v: None for v in range(inst.n)}
    pred: Dict[int, Optional[int]] = {v: None for v in range(inst.n)}
    for s in sources:
        dist[s] = Fraction(0)
    last_relaxed = None
    for _ in range(rounds):
        last_relaxed = None
        for index, edge in enumerate(inst.edges):
            if dist[edge.tail] is None:
                continue
            candidate = dist[edge.tail] + getattr(edge, metric)
            if dist[edge.head] is None or candidate < dist[edge.head]:
                dist[edge.head] = candidate
                pred[edge.head] = index
                last_relaxed = edge.head
        if last_relaxed is None:
            break
    return {'dist': dist, 'pred': pred, 'last_relaxed': last_relaxed}


def find_negative_cycle(inst: Instance, metric: str = 'length') -> Optional[List[int]]:
    """
    Edge ids of a negative cycle in the given metric, or None.

    Runs n sweeps from a virtual source attached to every vertex; a change in
    sweep n certifies a negative cycle.
    """
    sweep = relax_rounds(inst, list(range(inst.n)), inst.n, metric)
    vertex = sweep['last_relaxed']
    if vertex is None:
        return None
    pred = sweep['pred']
    for _ in range(inst.n):
        if pred.get(vertex) is None:
            return None
        vertex = inst.edges[pred[vertex]].tail
    cycle = []
    current = vertex
    while True:
        edge_id = pred.get(current)
        if edge_id is None or len(cycle) > inst.n:
            return None
        cycle.append(edge_id)
        current = inst.edges[edge_id].tail
        if current == vertex:
            break
    return list(reversed(cycle))


def shortest_lengths(inst: Instance, source: int) -> Dict[int, Optional[Fraction]]:
    """Min path length from source to every vertex (None if unreachable); assumes no negative cycle."""
    return relax_rounds(inst, [source], max(inst.n - 1, 1))['dist']


def validate_instance(inst: Instance) -> ValidationReport:
    violations: List[Violation] = []

    seen = {}
    for index, edge in enumerate(inst.edges):
        if edge.tail == edge.head:
            violations.append(Violation(kind='self-loop', edge=index,
                                        message=f"edge {index} is a self-loop at vertex {edge.tail}"))
        key = (edge.tail, edge.head)
        if key in seen:
            violations.append(Violation(kind='duplicate-edge', edge=index,
                                        message=f"edge {index} duplicates edge {seen[key]} ({edge.tail}->{edge.head})"))
        else:
            seen[key] = index

    for index, pair in enumerate(inst.demands):
        if pair.dist_budget == 0:
            violations.append(Violation(kind='zero-budget', pair=index,
                                        message=f"pair {index} ({pair.source}->{pair.sink}) has a zero distance budget"))

    cycle = find_negative_cycle(inst)
    if cycle is not None:
        total = sum((inst.edges[e].length for e in cycle), Fraction(0))
        violations.append(Violation(kind='negative-cycle', edge=cycle[0],
                                    message=f"negative-length cycle through edges {cycle} (total {total})"))
    else:
        by_source: Dict[int, Dict[int, Optional[Fraction]]] = {}
        for index, pair in enumerate(inst.demands):
            if pair.source not in by_source:
                by_source[pair.source] = shortest_lengths(inst, pair.source)
            best = by_source[pair.source][pair.sink]
            if best is None:
                violations.append(Violation(kind='infeasible-pair', pair=index,
                                            message=f"pair {index}: no path from {pair.source} to {pair.sink}"))
            elif best > pair.dist_budget:
                violations.append(Violation(kind='infeasible-pair', pair=index,
                                            message=f"pair {index}: shortest length {best} exceeds budget {pair.dist_budget}"))

    if violations:
        logger.debug("Instance has %d violations", len(violations))
    return ValidationReport(violations=violations)


def ensure_valid(inst: Instance) -> ValidationReport:
    """
    Validate and raise on any violation.

    Raises:
        InstanceValidationError: With the report attached.
    """
    report = validate_instance(inst)
    if not report.is_valid:
        raise InstanceValidationError(f"Invalid instance: {report.summary()}", report=report)
    return report
