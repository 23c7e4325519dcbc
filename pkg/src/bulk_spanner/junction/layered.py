"""
Distance-indexed layered copy of the scaled graph around a root r.

The in-side ("up") graph labels a copy (v, I) with the scaled length I*delta
still to be travelled to r, so an edge (u, v) of scaled length d*delta yields
(u, I) -> (v, I - d). The out-side ("down") graph labels (v, J) with the
scaled length travelled from r, so (u, J) -> (v, J + d). The root appears
only as (r, 0) on both sides: the up graph has no edges leaving r and the
down graph none entering it.

Both sides are pruned to copies that lie on a terminal-to-root (resp.
root-to-terminal) path for some related label combination.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx

from bulk_spanner.errors import LayerRangeOverflow
from bulk_spanner.junction.scaling import ScaledGraph

logger = logging.getLogger(__name__)

Vertex = Tuple[int, int]


@dataclass
class LayeredGraph:
    scaled: ScaledGraph
    root: int
    up: nx.DiGraph
    down: nx.DiGraph
    sources: Dict[int, Dict[int, Vertex]] = field(default_factory=dict)
    sinks: Dict[int, Dict[int, Vertex]] = field(default_factory=dict)
    relation: Dict[int, Set[Tuple[int, int]]] = field(default_factory=dict)

    @property
    def root_vertex(self) -> Vertex:
        return (self.root, 0)

    @property
    def size(self) -> int:
        return self.up.number_of_nodes() + self.down.number_of_nodes()

    @property
    def pairs(self) -> List[int]:
        return sorted(p for p, related in self.relation.items() if related)

    def graph(self, side: str) -> nx.DiGraph:
        return self.up if side == 'up' else self.down

    def attachments(self, side: str) -> Set[Vertex]:
        terminals = self.sources if side == 'up' else self.sinks
        return {v for labels in terminals.values() for v in labels.values()}


def _sweep(scaled: ScaledGraph, root: int, side: str, cap: int) -> nx.DiGraph:
    """All copies that reach (r, 0) on the up side, or are reached from it on the down side."""
    inst = scaled.inst
    graph = nx.DiGraph()
    start = (root, 0)
    graph.add_node(start)
    queue = deque([start])
    while queue:
        v, label = queue.popleft()
        if side == 'up':
            incident = ((e, inst.edges[e].tail, label + scaled.multipliers[e]) for e in inst.in_edges(v))
        else:
            incident = ((e, inst.edges[e].head, label + scaled.multipliers[e]) for e in inst.out_edges(v))
        for e, other, other_label in incident:
            if other == root or not scaled.lower <= other_label <= scaled.upper:
                continue
            copy = (other, other_label)
            if copy not in graph:
                if graph.number_of_nodes() >= cap:
                    raise LayerRangeOverflow(
                        f"Layered graph at root {root} exceeds {cap} vertices", size=graph.number_of_nodes() + 1, cap=cap)
                queue.append(copy)
            edge = inst.edges[e]
            tail, head = (copy, (v, label)) if side == 'up' else ((v, label), copy)
            graph.add_edge(tail, head, id=e, sigma=edge.sigma, delta=edge.delta, length=edge.length)
    return graph


def _terminal_copies(graph: nx.DiGraph, vertex: int, root: int, scaled: ScaledGraph) -> Dict[int, Vertex]:
    if vertex == root:
        return {0: (root, 0)}
    return {label: (vertex, label) for label in scaled.labels if (vertex, label) in graph}


def build_layered(scaled: ScaledGraph, root: int, pairs: Optional[Iterable[int]] = None,
                  max_vertices: int = 200_000) -> LayeredGraph:
    """
    Layered graph of the given pairs (all pairs by default) at one root.

    Raises:
        LayerRangeOverflow: If either side exceeds max_vertices copies.
        ValueError: If the root is not a vertex.
    """
    inst = scaled.inst
    if not 0 <= root < inst.n:
        raise ValueError(f"Root {root} outside 0..{inst.n - 1}")
    pairs = range(inst.k) if pairs is None else sorted(pairs)
    up = _sweep(scaled, root, 'up', max_vertices)
    down = _sweep(scaled, root, 'down', max_vertices)

    layered = LayeredGraph(scaled=scaled, root=root, up=up, down=down)
    for p in pairs:
        demand = inst.demands[p]
        sources = _terminal_copies(up, demand.source, root, scaled)
        sinks = _terminal_copies(down, demand.sink, root, scaled)
        related = {(i, j) for i in sources for j in sinks if scaled.related(p, i, j)}
        used_in = {i for i, _ in related}
        used_out = {j for _, j in related}
        layered.sources[p] = {i: v for i, v in sources.items() if i in used_in}
        layered.sinks[p] = {j: v for j, v in sinks.items() if j in used_out}
        layered.relation[p] = related

    for side in ('up', 'down'):
        graph = layered.graph(side)
        keep = {layered.root_vertex}
        for copy in layered.attachments(side):
            keep.add(copy)
            keep |= nx.descendants(graph, copy) if side == 'up' else nx.ancestors(graph, copy)
        graph.remove_nodes_from([v for v in list(graph) if v not in keep])

    logger.debug("Layered graph at root %d: %d up and %d down copies, %d related pairs",
                 root, up.number_of_nodes(), down.number_of_nodes(), len(layered.pairs))
    return layered


def layered_walk_edges(graph: nx.DiGraph, vertices: List[Vertex]) -> Tuple[int, ...]:
    """Original edge ids along consecutive layered copies."""
    return tuple(graph[a][b]['id'] for a, b in zip(vertices, vertices[1:]))
