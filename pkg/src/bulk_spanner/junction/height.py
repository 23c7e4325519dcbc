"""
Height reduction of one side of a layered graph to h+1 levels.

Level 0 holds the root copy, levels 1..h-1 every copy of the side (the
root included, so shorter routes can idle), level h the terminal
attachment copies. An edge between a copy x on level i+1 and a copy y on
level i stands for an x ~> y path (up side) or y ~> x path (down side) of
the side graph; it comes in parallel versions, one per witness path kept
from the (sigma, delta) Pareto frontier.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Literal, Tuple

from bulk_spanner.junction.layered import LayeredGraph, Vertex, layered_walk_edges
from bulk_spanner.rcsp.labels import ParetoLabel, pareto_paths

logger = logging.getLogger(__name__)

Side = Literal['up', 'down']


@dataclass(frozen=True)
class Witness:
    """A side-graph path in travel direction, with its original edge ids."""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[int, ...]
    sigma: Fraction
    delta: Fraction


@dataclass
class LeveledGraph:
    side: Side
    height: int
    levels: List[List[Vertex]]
    witnesses: Dict[Tuple[Vertex, Vertex], List[Witness]] = field(default_factory=dict)

    def parallel(self, deep: Vertex, shallow: Vertex) -> List[Witness]:
        """Parallel edges between `deep` on level i+1 and `shallow` on level i."""
        return self.witnesses.get((deep, shallow), [])

    @property
    def edge_count(self) -> int:
        return sum(len(w) for w in self.witnesses.values())


def _power_of_two_at_least(value: Fraction) -> Fraction:
    bucket = Fraction(1)
    while bucket < value:
        bucket *= 2
    while bucket / 2 >= value:
        bucket /= 2
    return bucket


def thin_frontier(witnesses: List[Witness]) -> List[Witness]:
    """
    Keep, for every power-of-two budget B on sigma (and B = 0), the min-delta
    witness with sigma <= B.
    """
    budgets = sorted({Fraction(0) if w.sigma == 0 else _power_of_two_at_least(w.sigma) for w in witnesses})
    kept: List[Witness] = []
    for budget in budgets:
        within = [w for w in witnesses if w.sigma <= budget]
        if not within:
            continue
        best = min(within, key=lambda w: (w.delta, w.sigma))
        if best not in kept:
            kept.append(best)
    return kept


def _witness(layered: LayeredGraph, side: Side, label: ParetoLabel) -> Witness:
    graph = layered.graph(side)
    vertices = label.nodes()
    if side == 'up':
        vertices.reverse()
    return Witness(vertices=tuple(vertices), edges=layered_walk_edges(graph, vertices),
                   sigma=label.costs[0], delta=label.costs[1])


def height_reduce(layered: LayeredGraph, side: Side, height: int, thinning: bool = True) -> LeveledGraph:
    """
    Raises:
        ValueError: If height < 1.
    """
    if height < 1:
        raise ValueError(f"Height must be at least 1, got {height}")
    graph = layered.graph(side)
    root = layered.root_vertex
    middle = sorted(graph.nodes)
    levels = [[root]] + [list(middle) for _ in range(height - 1)] + [sorted(layered.attachments(side))]
    leveled = LeveledGraph(side=side, height=height, levels=levels)

    deep_candidates = set(levels[-1]) | (set(middle) if height > 1 else set())
    shallow = {root} | (set(middle) if height > 1 else set())
    for anchor in sorted(shallow):
        frontier = pareto_paths(graph, anchor, criteria=('sigma', 'delta'), reverse=(side == 'up'))
        for other, labels in frontier.items():
            if other not in deep_candidates:
                continue
            found = [_witness(layered, side, label) for label in labels]
            if thinning:
                found = thin_frontier(found)
            leveled.witnesses[(other, anchor)] = found

    logger.debug("Height reduction (%s, h=%d): %d levels, %d parallel edges",
                 side, height, len(levels), leveled.edge_count)
    return leveled
