"""Seeded instance generators. Every generated instance passes validate_instance."""

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from bulk_spanner.core.streams import substream
from bulk_spanner.core.validation import ensure_valid, find_negative_cycle, shortest_lengths
from bulk_spanner.models.documents import InstanceDocument, InstanceMetadata
from bulk_spanner.models.fields import Rational
from bulk_spanner.models.instance import Demand, Edge, Instance

logger = logging.getLogger(__name__)


class GeneratorParams(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra='forbid')

    n: int = Field(default=8, ge=2)
    k: int = Field(default=3, ge=1)
    density: float = Field(default=0.3, ge=0, le=1)
    max_length: int = Field(default=5, ge=1)
    max_sigma: int = Field(default=10, ge=0)
    max_delta: int = Field(default=3, ge=0)
    max_demand: int = Field(default=1, ge=1)
    slack: Rational = Fraction(1, 2)
    hubs: Optional[int] = Field(default=None, ge=1)
    backbone: int = Field(default=3, ge=1)
    negative_fraction: float = Field(default=0.3, ge=0, le=1)
    max_negative: int = Field(default=3, ge=1)


class EdgeSet:
    """Edges keyed by (tail, head); self-loops and repeats are ignored."""

    def __init__(self, n: int):
        self.n = n
        self.edges: List[Edge] = []
        self.index: Dict[Tuple[int, int], int] = {}

    def add(self, tail: int, head: int, length, sigma, delta) -> Optional[int]:
        if tail == head or (tail, head) in self.index:
            return self.index.get((tail, head))
        self.index[(tail, head)] = len(self.edges)
        self.edges.append(Edge(tail=tail, head=head, length=Fraction(length),
                               sigma=Fraction(sigma), delta=Fraction(delta)))
        return len(self.edges) - 1

    def set_length(self, edge_id: int, length: Fraction) -> None:
        self.edges[edge_id] = self.edges[edge_id].model_copy(update={'length': Fraction(length)})

    def instance(self, demands: Sequence[Demand] = ()) -> Instance:
        return Instance(n=self.n, edges=tuple(self.edges), demands=tuple(demands))


def _draw(rng: np.random.Generator, low: int, high: int) -> int:
    return int(rng.integers(low, high + 1))


def _random_edge(edges: EdgeSet, rng: np.random.Generator, params: GeneratorParams,
                 tail: int, head: int, length: Optional[int] = None) -> Optional[int]:
    if length is None:
        length = _draw(rng, 1, params.max_length)
    return edges.add(tail, head, length, _draw(rng, 0, params.max_sigma), _draw(rng, 0, params.max_delta))


def _strong_cycle(edges: EdgeSet, rng: np.random.Generator, params: GeneratorParams) -> np.ndarray:
    """A cycle through every vertex in random order; returns the order."""
    order = rng.permutation(edges.n)
    for i in range(edges.n):
        _random_edge(edges, rng, params, int(order[i]), int(order[(i + 1) % edges.n]))
    return order


def _noise(edges: EdgeSet, rng: np.random.Generator, params: GeneratorParams,
           vertices: Optional[Sequence[int]] = None,
           length: Optional[Callable[[int, int], int]] = None) -> None:
    vertices = range(edges.n) if vertices is None else vertices
    for u in vertices:
        for v in vertices:
            if u != v and rng.random() < params.density:
                _random_edge(edges, rng, params, u, v, None if length is None else length(u, v))


def _pick_pairs(rng: np.random.Generator, candidates: List[Tuple[int, int]], k: int) -> List[Tuple[int, int]]:
    if len(candidates) < k:
        raise ValueError(f"Only {len(candidates)} candidate pairs for k={k}")
    chosen = rng.choice(len(candidates), size=k, replace=False)
    return [candidates[int(i)] for i in chosen]


def _budget(length: Fraction, slack: Fraction) -> Fraction:
    """At least `length`, never zero."""
    budget = Fraction(math.ceil(length + slack * abs(length)))
    return budget if budget != 0 else Fraction(1)


def _demand(rng: np.random.Generator, params: GeneratorParams, source: int, sink: int, length: Fraction) -> Demand:
    return Demand(source=source, sink=sink, demand=_draw(rng, 1, params.max_demand),
                  dist_budget=_budget(length, params.slack))


def _shortest_demands(inst: Instance, rng: np.random.Generator, params: GeneratorParams,
                      pairs: List[Tuple[int, int]]) -> List[Demand]:
    distances: Dict[int, Dict] = {}
    demands = []
    for s, t in pairs:
        if s not in distances:
            distances[s] = shortest_lengths(inst, s)
        best = distances[s][t]
        if best is None:
            raise ValueError(f"Vertex {t} is unreachable from {s}")
        demands.append(_demand(rng, params, s, t, best))
    return demands


def _all_pairs(vertices: Sequence[int]) -> List[Tuple[int, int]]:
    return [(s, t) for s in vertices for t in vertices if s != t]


GeneratedParts = Tuple[EdgeSet, List[Demand], Dict[int, List[int]], Dict[str, object]]


def random_instance(rng: np.random.Generator, params: GeneratorParams) -> GeneratedParts:
    edges = EdgeSet(params.n)
    _strong_cycle(edges, rng, params)
    _noise(edges, rng, params)
    pairs = _pick_pairs(rng, _all_pairs(range(params.n)), params.k)
    return edges, _shortest_demands(edges.instance(), rng, params, pairs), {}, {}


def hub_planted_instance(rng: np.random.Generator, params: GeneratorParams) -> GeneratedParts:
    """
    Every non-hub vertex has free (sigma 0, delta 1, length 1) edges to and
    from every hub, so each pair owns feasible cheap routes through all hubs.
    Other edges carry sigma above max_sigma.
    """
    n = params.n
    hub_count = params.hubs or max(1, math.ceil(n ** 0.4))
    if n < hub_count + 2:
        raise ValueError(f"n={n} leaves fewer than two terminals beside {hub_count} hubs")
    hubs = sorted(int(v) for v in rng.choice(n, size=hub_count, replace=False))
    others = [v for v in range(n) if v not in hubs]
    edges = EdgeSet(n)
    for v in others:
        for hub in hubs:
            edges.add(v, hub, 1, 0, 1)
            edges.add(hub, v, 1, 0, 1)
    for u in others:
        for v in others:
            if u != v and rng.random() < params.density:
                edges.add(u, v, _draw(rng, 1, params.max_length), _draw(rng, params.max_sigma + 1, 2 * params.max_sigma + 1),
                          _draw(rng, 0, params.max_delta))
    pairs = _pick_pairs(rng, _all_pairs(others), params.k)
    demands, planted = [], {}
    for index, (s, t) in enumerate(pairs):
        demands.append(_demand(rng, params, s, t, Fraction(2)))
        planted[index] = [edges.index[(s, hubs[0])], edges.index[(hubs[0], t)]]
    return edges, demands, planted, {'hubs': hubs}


def backbone_planted_instance(rng: np.random.Generator, params: GeneratorParams) -> GeneratedParts:
    """
    A shared backbone path (sigma max_sigma per edge, delta 0) reachable from
    and leaving to every terminal at sigma 1; each pair also has a direct
    edge at sigma max_sigma and delta max_delta.
    """
    n, length = params.n, params.backbone
    if n < length + 3:
        raise ValueError(f"n={n} is too small for a backbone of {length} edges and two terminals")
    order = [int(v) for v in rng.permutation(n)]
    backbone, others = order[:length + 1], sorted(order[length + 1:])
    edges = EdgeSet(n)
    spine = [edges.add(backbone[i], backbone[i + 1], 1, params.max_sigma, 0) for i in range(length)]
    for v in others:
        edges.add(v, backbone[0], 1, 1, 0)
        edges.add(backbone[-1], v, 1, 1, 0)
    pairs = _pick_pairs(rng, _all_pairs(others), params.k)
    demands, planted = [], {}
    for index, (s, t) in enumerate(pairs):
        edges.add(s, t, 1, params.max_sigma, params.max_delta)
        demands.append(_demand(rng, params, s, t, Fraction(length + 2)))
        planted[index] = [edges.index[(s, backbone[0])]] + spine + [edges.index[(backbone[-1], t)]]
    return edges, demands, planted, {'backbone': backbone}


def repair_negative_cycles(edges: EdgeSet, rng: np.random.Generator, params: GeneratorParams) -> int:
    """
    Re-roll a non-negative edge of each negative-length cycle until none is
    left. Returns the number of repairs.

    Raises:
        ValueError: If a cycle has no non-negative edge or repairs do not converge.
    """
    repairs = 0
    limit = max(1, len(edges.edges)) * edges.n
    while True:
        inst = edges.instance()
        cycle = find_negative_cycle(inst)
        if cycle is None:
            return repairs
        if repairs >= limit:
            raise ValueError(f"Negative cycles remain after {repairs} repairs")
        total = sum((inst.edges[e].length for e in cycle), Fraction(0))
        candidates = [e for e in cycle if inst.edges[e].length >= 0]
        if not candidates:
            raise ValueError(f"Negative cycle {cycle} has no edge to re-roll")
        target = candidates[int(rng.integers(len(candidates)))]
        edges.set_length(target, inst.edges[target].length - total + _draw(rng, 0, params.max_length))
        logger.debug("Re-rolled edge %d to break negative cycle %s", target, cycle)
        repairs += 1


def negative_length_instance(rng: np.random.Generator, params: GeneratorParams) -> GeneratedParts:
    """
    Random strongly connected instance where edges going forward in a hidden
    vertex order may have negative length. The first cycle edge is always
    negative; negative cycles are repaired by lengthening backward edges.
    """
    edges = EdgeSet(params.n)
    order = [int(v) for v in rng.permutation(params.n)]
    rank = {v: i for i, v in enumerate(order)}

    def length(u: int, v: int) -> int:
        if rank[u] < rank[v] and rng.random() < params.negative_fraction:
            return -_draw(rng, 1, params.max_negative)
        return _draw(rng, 1, params.max_length)

    _random_edge(edges, rng, params, order[0], order[1], -_draw(rng, 1, params.max_negative))
    for i in range(1, params.n):
        u, v = order[i], order[(i + 1) % params.n]
        _random_edge(edges, rng, params, u, v, length(u, v))
    _noise(edges, rng, params, length=length)
    repairs = repair_negative_cycles(edges, rng, params)
    pairs = _pick_pairs(rng, _all_pairs(range(params.n)), params.k)
    return edges, _shortest_demands(edges.instance(), rng, params, pairs), {}, {'repairs': repairs}


def single_source_instance(rng: np.random.Generator, params: GeneratorParams) -> GeneratedParts:
    """Random out-arborescence from one source plus noise; planted routes follow the tree."""
    n = params.n
    if params.k > n - 1:
        raise ValueError(f"k={params.k} exceeds the {n - 1} possible sinks")
    order = [int(v) for v in rng.permutation(n)]
    source = order[0]
    edges = EdgeSet(n)
    parent_edge: Dict[int, int] = {}
    for i in range(1, n):
        parent = order[_draw(rng, 0, i - 1)]
        parent_edge[order[i]] = _random_edge(edges, rng, params, parent, order[i])
    _noise(edges, rng, params)

    def tree_path(v: int) -> List[int]:
        path = []
        while v != source:
            path.append(parent_edge[v])
            v = edges.edges[parent_edge[v]].tail
        return list(reversed(path))

    sinks = [order[int(i)] for i in rng.choice(np.arange(1, n), size=params.k, replace=False)]
    demands, planted = [], {}
    for index, sink in enumerate(sinks):
        path = tree_path(sink)
        length = sum((edges.edges[e].length for e in path), Fraction(0))
        demands.append(_demand(rng, params, source, sink, length))
        planted[index] = path
    return edges, demands, planted, {'source': source}


GENERATORS: Dict[str, Callable[[np.random.Generator, GeneratorParams], GeneratedParts]] = {
    'random': random_instance,
    'hub-planted': hub_planted_instance,
    'backbone-planted': backbone_planted_instance,
    'negative-length': negative_length_instance,
    'single-source': single_source_instance,
}


def generate(kind: str, params: Optional[Dict[str, object]] = None, seed: int = 0) -> InstanceDocument:
    """
    Build a seeded instance of the given kind.

    Args:
        kind: One of GENERATORS.
        params: Overrides of GeneratorParams fields.
        seed: Root seed; generation draws from its 'generate' substream.

    Returns:
        An InstanceDocument whose metadata records the parameters and any planted routes.

    Raises:
        ValueError: On an unknown kind or parameters that cannot yield a valid instance.
    """
    if kind not in GENERATORS:
        raise ValueError(f"Unknown instance kind: {kind}. Known: {', '.join(GENERATORS)}")
    parsed = GeneratorParams(**(params or {}))
    rng = substream(seed, 'generate')
    edges, demands, planted, extra = GENERATORS[kind](rng, parsed)
    inst = edges.instance(demands)
    ensure_valid(inst)
    logger.info("Generated %s instance: n=%d, m=%d, k=%d", kind, inst.n, inst.m, inst.k)
    recorded = parsed.model_dump(mode='json', exclude_none=True)
    recorded.update(extra)
    metadata = InstanceMetadata(kind=kind, seed=seed, params=recorded, planted_routes=planted)
    return InstanceDocument.from_instance(inst, metadata)
