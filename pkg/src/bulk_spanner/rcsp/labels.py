import heapq
import itertools
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import networkx as nx


@dataclass(eq=False)
class ParetoLabel:
    """A path ending at `node`, with one accumulated value per criterion."""

    node: Hashable
    costs: Tuple
    prev: Optional["ParetoLabel"] = field(default=None, repr=False)

    def dominates(self, other: "ParetoLabel") -> bool:
        return all(a <= b for a, b in zip(self.costs, other.costs))

    def nodes(self) -> List[Hashable]:
        """Nodes from the search origin to this label's node."""
        result = []
        label = self
        while label is not None:
            result.append(label.node)
            label = label.prev
        result.reverse()
        return result


def pareto_paths(
    graph: nx.DiGraph,
    source: Hashable,
    criteria: Sequence[str] = ('sigma', 'delta'),
    reverse: bool = False,
) -> Dict[Hashable, List[ParetoLabel]]:
    """
    Pareto frontier of non-negative additive criteria from source to every
    reachable node (to source from every node when reverse is set).

    Labels are settled in lexicographic order of their costs; a label equal
    to or dominated by a settled label at the same node is discarded.
    For reverse searches each label's nodes() runs from source outwards, i.e.
    it is the path read backwards.
    """
    zero = tuple(0 for _ in criteria)
    settled: Dict[Hashable, List[ParetoLabel]] = {}
    counter = itertools.count()
    heap = [(zero, next(counter), ParetoLabel(node=source, costs=zero))]
    neighbours = graph.predecessors if reverse else graph.successors

    while heap:
        costs, _, label = heapq.heappop(heap)
        kept = settled.setdefault(label.node, [])
        if any(other.dominates(label) for other in kept):
            continue
        kept.append(label)
        for other in neighbours(label.node):
            data = graph[other][label.node] if reverse else graph[label.node][other]
            extended = tuple(c + data[name] for c, name in zip(costs, criteria))
            if any(done.dominates(ParetoLabel(node=other, costs=extended)) for done in settled.get(other, ())):
                continue
            heapq.heappush(heap, (extended, next(counter), ParetoLabel(node=other, costs=extended, prev=label)))
    return settled
