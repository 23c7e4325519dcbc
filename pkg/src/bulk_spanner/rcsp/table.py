"""
Hop-indexed dynamic programs over resource patterns.

DensePatternTable stores DP(v, eta, h) for every valid pattern in a flat
array per (hop, vertex). SparsePatternTable keeps only non-dominated labels
and answers DP(v, eta, h) as the cheapest label at v with pattern <= eta and
at most h hops; it is used when the valid box is too large to materialise.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from bulk_spanner.errors import PatternSpaceOverflow
from bulk_spanner.rcsp.patterns import Pattern, count_valid_patterns, in_box
from bulk_spanner.rcsp.query import ScaledQuery

logger = logging.getLogger(__name__)

INFINITY = math.inf


class DensePatternTable:
    """
    DP(v, eta, h): cheapest walk from the source to v with at most h arcs whose
    scaled consumption fits eta. Entries start at infinity except
    DP(source, eta >= 0, h) = 0; layer h copies layer h-1 and then relaxes
    every arc. Ties keep the first candidate examined.
    """

    def __init__(self, scaled: ScaledQuery, costs: List, cap: Optional[int] = None, tolerance: float = 0.0):
        self.scaled = scaled
        self.query = scaled.query
        self.costs = costs
        self.tolerance = tolerance
        self.size = count_valid_patterns(scaled)
        if cap is not None and self.size > cap:
            raise PatternSpaceOverflow(f"{self.size} valid patterns exceed the cap of {cap}",
                                       size=self.size, cap=cap)
        self.strides = self._strides()
        self.values: List[List[List]] = []
        self.preds: List[Dict[Tuple[int, int], Tuple[int, int]]] = []
        self.relaxations = 0

    def _strides(self) -> Tuple[int, ...]:
        strides = []
        step = 1
        for size in reversed(self.scaled.box_sizes):
            strides.append(step)
            step *= size
        return tuple(reversed(strides))

    def index(self, pattern: Pattern) -> int:
        return sum((p - lo) * s for p, lo, s in zip(pattern, self.scaled.lower, self.strides))

    def pattern(self, index: int) -> Pattern:
        result = []
        for lo, stride, size in zip(self.scaled.lower, self.strides, self.scaled.box_sizes):
            result.append(lo + (index // stride) % size)
        return tuple(result)

    def fill(self) -> None:
        n = self.query.n
        source = self.query.source
        size = self.size
        lower, upper = self.scaled.lower, self.scaled.upper
        patterns = [self.pattern(i) for i in range(size)]

        base = [[INFINITY] * size for _ in range(n)]
        for i, eta in enumerate(patterns):
            if all(p >= 0 for p in eta):
                base[source][i] = 0
        self.values = [base]
        self.preds = [{}]

        incoming: Dict[int, List[int]] = {v: [] for v in range(n)}
        for a, arc in enumerate(self.query.arcs):
            incoming[arc.head].append(a)

        for h in range(1, n + 1):
            previous = self.values[h - 1]
            layer = [list(row) for row in previous]
            preds: Dict[Tuple[int, int], Tuple[int, int]] = {}
            for v in range(n):
                row = layer[v]
                arcs = incoming[v]
                for i, eta in enumerate(patterns):
                    best = row[i]
                    for a in arcs:
                        self.relaxations += 1
                        d = self.scaled.multipliers[a]
                        back = []
                        below = False
                        for p, dd, lo, hi in zip(eta, d, lower, upper):
                            q = p - dd
                            if q < lo:
                                below = True
                                break
                            back.append(min(q, hi))
                        if below:
                            continue
                        j = self.index(back)
                        prior = previous[self.query.arcs[a].tail][j]
                        if prior == INFINITY:
                            continue
                        candidate = prior + self.costs[a]
                        if candidate < best - self.tolerance:
                            best = candidate
                            preds[(v, i)] = (a, j)
                    row[i] = best
            self.values.append(layer)
            self.preds.append(preds)
        logger.debug("Dense table filled: %d patterns, %d relaxations", size, self.relaxations)

    def value(self, vertex: int, pattern: Pattern, hops: int):
        if any(p < lo for p, lo in zip(pattern, self.scaled.lower)):
            return INFINITY
        clipped = tuple(min(p, hi) for p, hi in zip(pattern, self.scaled.upper))
        return self.values[hops][vertex][self.index(clipped)]

    def walk(self, vertex: int, pattern: Pattern, hops: int) -> Optional[List[int]]:
        """Arc indices of the walk realising DP(vertex, pattern, hops), or None if infinite."""
        if self.value(vertex, pattern, hops) == INFINITY:
            return None
        clipped = tuple(min(p, hi) for p, hi in zip(pattern, self.scaled.upper))
        index = self.index(clipped)
        arcs: List[int] = []
        h = hops
        while h > 0:
            step = self.preds[h].get((vertex, index))
            if step is not None:
                a, index = step
                arcs.append(a)
                vertex = self.query.arcs[a].tail
            h -= 1
        arcs.reverse()
        return arcs


@dataclass(eq=False)
class PatternLabel:
    """Partial path: cost, accumulated pattern, hop count and back pointer."""

    vertex: int
    cost: object
    pattern: Pattern
    hops: int
    arc: Optional[int] = None
    prev: Optional["PatternLabel"] = field(default=None, repr=False)
    alive: bool = True

    def dominates(self, other: "PatternLabel") -> bool:
        return (self.cost <= other.cost and self.hops <= other.hops
                and all(a <= b for a, b in zip(self.pattern, other.pattern)))

    def arcs(self) -> List[int]:
        result = []
        label = self
        while label.arc is not None:
            result.append(label.arc)
            label = label.prev
        result.reverse()
        return result


class SparsePatternTable:
    """
    Label version of the same dynamic program. Labels created at hop h-1 are
    extended along every arc; a label leaving the valid box or dominated by
    a kept label at its vertex is dropped.
    """

    def __init__(self, scaled: ScaledQuery, costs: List, cap: Optional[int] = None, tolerance: float = 0.0):
        self.scaled = scaled
        self.query = scaled.query
        self.costs = costs
        self.cap = cap
        self.tolerance = tolerance
        self.labels: Dict[int, List[PatternLabel]] = {}
        self.relaxations = 0

    @property
    def size(self) -> int:
        return sum(len(labels) for labels in self.labels.values())

    def _insert(self, label: PatternLabel) -> bool:
        kept = self.labels.setdefault(label.vertex, [])
        for other in kept:
            if other.dominates(label):
                return False
        survivors = []
        for other in kept:
            if label.dominates(other):
                other.alive = False
            else:
                survivors.append(other)
        survivors.append(label)
        kept[:] = survivors
        return True

    def fill(self) -> None:
        n = self.query.n
        origin = PatternLabel(vertex=self.query.source, cost=0, pattern=tuple(0 for _ in self.scaled.lower), hops=0)
        self.labels = {v: [] for v in range(n)}
        self.labels[self.query.source].append(origin)
        frontier = [origin]
        outgoing: Dict[int, List[int]] = {v: [] for v in range(n)}
        for a, arc in enumerate(self.query.arcs):
            outgoing[arc.tail].append(a)

        for h in range(1, n + 1):
            created: List[PatternLabel] = []
            for label in frontier:
                if not label.alive:
                    continue
                for a in outgoing[label.vertex]:
                    self.relaxations += 1
                    pattern = tuple(p + d for p, d in zip(label.pattern, self.scaled.multipliers[a]))
                    if not in_box(self.scaled, pattern):
                        continue
                    child = PatternLabel(vertex=self.query.arcs[a].head, cost=label.cost + self.costs[a],
                                         pattern=pattern, hops=h, arc=a, prev=label)
                    if self._insert(child):
                        created.append(child)
            if self.cap is not None and self.size > self.cap:
                raise PatternSpaceOverflow(f"{self.size} pattern labels exceed the cap of {self.cap}",
                                           size=self.size, cap=self.cap)
            frontier = created
            if not frontier:
                break
        logger.debug("Sparse table filled: %d labels, %d relaxations", self.size, self.relaxations)

    def best(self, vertex: int, pattern: Pattern, hops: int) -> Optional[PatternLabel]:
        chosen = None
        for label in self.labels.get(vertex, []):
            if label.hops > hops:
                continue
            if any(a > b for a, b in zip(label.pattern, pattern)):
                continue
            if chosen is None or label.cost < chosen.cost - self.tolerance:
                chosen = label
        return chosen

    def value(self, vertex: int, pattern: Pattern, hops: int):
        label = self.best(vertex, pattern, hops)
        return INFINITY if label is None else label.cost

    def walk(self, vertex: int, pattern: Pattern, hops: int) -> Optional[List[int]]:
        label = self.best(vertex, pattern, hops)
        return None if label is None else label.arcs()
