"""Exhaustive simple-path enumeration, capped by vertex and path counts."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx

from bulk_spanner.core.evaluation import path_metric, relaxed_budget
from bulk_spanner.errors import OracleCapExceeded
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import OracleSettings


@dataclass(frozen=True)
class CatalogPath:
    edges: Tuple[int, ...]
    length: Fraction
    sigma: Fraction
    delta: Fraction

    @classmethod
    def of(cls, inst: Instance, edges: Tuple[int, ...]) -> "CatalogPath":
        return cls(edges=edges, length=path_metric(inst, edges, 'length'),
                   sigma=path_metric(inst, edges, 'sigma'), delta=path_metric(inst, edges, 'delta'))


def check_size(inst: Instance, settings: OracleSettings) -> None:
    if inst.n > settings.max_vertices:
        raise OracleCapExceeded(f"Oracle limited to {settings.max_vertices} vertices, got {inst.n}",
                                size=inst.n, cap=settings.max_vertices)


def simple_paths(inst: Instance, source: int, sink: int, settings: Optional[OracleSettings] = None,
                 graph: Optional[nx.DiGraph] = None) -> List[Tuple[int, ...]]:
    """
    Every simple source->sink path as edge ids; the empty path when source == sink.

    Raises:
        OracleCapExceeded: Above oracle.max_vertices or oracle.max_paths.
    """
    settings = settings or OracleSettings()
    check_size(inst, settings)
    if source == sink:
        return [()]
    graph = graph if graph is not None else inst.to_digraph()
    found = []
    for vertices in nx.all_simple_paths(graph, source, sink):
        found.append(tuple(graph[a][b]['id'] for a, b in zip(vertices, vertices[1:])))
        if len(found) > settings.max_paths:
            raise OracleCapExceeded(f"More than {settings.max_paths} simple paths from {source} to {sink}",
                                    size=len(found), cap=settings.max_paths)
    return found


def enumerate_feasible_paths(inst: Instance, pair: int, theta: Fraction = Fraction(0),
                             settings: Optional[OracleSettings] = None) -> List[Tuple[int, ...]]:
    """Simple paths of the pair with length <= (1 + theta*sign(Dis)) * Dis, in enumeration order."""
    demand = inst.demands[pair]
    bound = relaxed_budget(demand.dist_budget, Fraction(theta))
    return [p for p in simple_paths(inst, demand.source, demand.sink, settings)
            if path_metric(inst, p, 'length') <= bound]


@dataclass
class PathCatalog:
    """Every simple path of every pair with its metrics, plus feasibility lookups."""

    inst: Instance
    paths: Dict[int, List[CatalogPath]] = field(default_factory=dict)

    @classmethod
    def build(cls, inst: Instance, settings: Optional[OracleSettings] = None) -> "PathCatalog":
        graph = inst.to_digraph()
        catalog = cls(inst=inst)
        for pair, demand in enumerate(inst.demands):
            catalog.paths[pair] = [CatalogPath.of(inst, p)
                                   for p in simple_paths(inst, demand.source, demand.sink, settings, graph)]
        return catalog

    def feasible(self, pair: int, theta: Fraction = Fraction(0)) -> List[CatalogPath]:
        bound = relaxed_budget(self.inst.demands[pair].dist_budget, Fraction(theta))
        return [p for p in self.paths[pair] if p.length <= bound]

    def is_feasible(self, pair: int, edges: Tuple[int, ...], theta: Fraction = Fraction(0)) -> bool:
        return any(p.edges == tuple(edges) for p in self.feasible(pair, theta))
