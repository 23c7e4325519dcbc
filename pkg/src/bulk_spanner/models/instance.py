from fractions import Fraction
from typing import Dict, List, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from bulk_spanner.models.fields import Rational


class Edge(BaseModel):
    """Directed edge with length, upfront cost (sigma) and pay-per-use cost (delta)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tail: int = Field(ge=0)
    head: int = Field(ge=0)
    length: Rational
    sigma: Rational = Fraction(0)
    delta: Rational = Fraction(0)

    @field_validator('sigma', 'delta')
    @classmethod
    def check_costs(cls, v):
        if v < 0:
            raise ValueError(f"Edge cost cannot be negative: {v}")
        return v


class Demand(BaseModel):
    """Terminal pair with an integral demand and a nonzero distance budget."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: int = Field(ge=0)
    sink: int = Field(ge=0)
    demand: int = 1
    dist_budget: Rational

    @field_validator('demand')
    @classmethod
    def check_demand(cls, v):
        if v < 1:
            raise ValueError(f"Demand must be a positive integer, got {v}")
        return v


class Instance(BaseModel):
    """
    Buy-at-bulk spanner instance.

    Vertices are the integers 0..n-1; edges and demands are addressed by their
    position in the corresponding tuple. Structural conditions that need a
    report rather than an exception (self-loops, duplicate edges, zero budgets,
    negative cycles, unreachable budgets) are checked by
    core.validation.validate_instance.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    edges: Tuple[Edge, ...] = ()
    demands: Tuple[Demand, ...] = ()

    _out: Dict[int, List[int]] = PrivateAttr(default_factory=dict)
    _in: Dict[int, List[int]] = PrivateAttr(default_factory=dict)

    @model_validator(mode='after')
    def check_vertex_ids(self):
        for index, edge in enumerate(self.edges):
            if edge.tail >= self.n or edge.head >= self.n:
                raise ValueError(f"Edge {index} references a vertex outside 0..{self.n - 1}")
        for index, pair in enumerate(self.demands):
            if pair.source >= self.n or pair.sink >= self.n:
                raise ValueError(f"Demand {index} references a vertex outside 0..{self.n - 1}")
        return self

    def model_post_init(self, __context) -> None:
        out_edges: Dict[int, List[int]] = {v: [] for v in range(self.n)}
        in_edges: Dict[int, List[int]] = {v: [] for v in range(self.n)}
        for index, edge in enumerate(self.edges):
            out_edges[edge.tail].append(index)
            in_edges[edge.head].append(index)
        self._out = out_edges
        self._in = in_edges

    @property
    def k(self) -> int:
        return len(self.demands)

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_edges(self, vertex: int) -> List[int]:
        return self._out[vertex]

    def in_edges(self, vertex: int) -> List[int]:
        return self._in[vertex]

    def edge(self, edge_id: int) -> Edge:
        if edge_id < 0 or edge_id >= len(self.edges):
            raise KeyError(f"Unknown edge id: {edge_id}")
        return self.edges[edge_id]

    def with_demands(self, demands) -> "Instance":
        """Same graph, different terminal pairs."""
        return Instance(n=self.n, edges=self.edges, demands=tuple(demands))

    def to_digraph(self) -> nx.DiGraph:
        """networkx view with edge ids and the three metrics as edge attributes."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        for index, edge in enumerate(self.edges):
            graph.add_edge(edge.tail, edge.head, id=index, length=edge.length,
                           sigma=edge.sigma, delta=edge.delta)
        return graph
