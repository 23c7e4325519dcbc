"""Exhaustive reference solvers for desk-scale instances."""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from bulk_spanner.core.evaluation import relaxed_budget
from bulk_spanner.errors import InfeasibleError, OracleCapExceeded, RcspInfeasible
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import OracleSettings
from bulk_spanner.models.solution import JunctionTree, RouteSolution
from bulk_spanner.oracle.catalog import CatalogPath, PathCatalog, simple_paths
from bulk_spanner.rcsp.query import RcspQuery, RcspResult
from bulk_spanner.rcsp.solver import path_consumption

logger = logging.getLogger(__name__)


def _sigma_of(inst: Instance, counts: Counter) -> Fraction:
    return sum((inst.edges[e].sigma for e, c in counts.items() if c > 0), Fraction(0))


def brute_force_optimum(inst: Instance, theta: Fraction = Fraction(0),
                        settings: Optional[OracleSettings] = None) -> Tuple[RouteSolution, Fraction]:
    """
    Cheapest choice of one theta-feasible simple path per pair, by
    branch-and-bound over the product of per-pair path lists.

    Raises:
        InfeasibleError: If some pair has no theta-feasible path.
        OracleCapExceeded: If the search visits more than oracle.max_combinations nodes.
    """
    settings = settings or OracleSettings()
    theta = Fraction(theta)
    if not inst.demands:
        return RouteSolution(routes={}, theta=theta), Fraction(0)
    catalog = PathCatalog.build(inst, settings)
    options: Dict[int, List[CatalogPath]] = {}
    for pair, demand in enumerate(inst.demands):
        feasible = catalog.feasible(pair, theta)
        if not feasible:
            raise InfeasibleError(f"Pair {pair} has no feasible path")
        options[pair] = sorted(feasible, key=lambda p: (p.sigma + p.delta * demand.demand, p.edges))
    order = sorted(options, key=lambda p: (len(options[p]), p))
    floor = {p: min(c.delta for c in options[p]) * inst.demands[p].demand for p in order}
    remaining_floor = [sum((floor[p] for p in order[i:]), Fraction(0)) for i in range(len(order) + 1)]

    best_cost: Optional[Fraction] = None
    best_choice: Dict[int, Tuple[int, ...]] = {}
    counts: Counter = Counter()
    choice: Dict[int, Tuple[int, ...]] = {}
    visited = 0

    def search(depth: int, sigma: Fraction, delta: Fraction) -> None:
        nonlocal best_cost, best_choice, visited
        visited += 1
        if visited > settings.max_combinations:
            raise OracleCapExceeded(f"Optimum search exceeds {settings.max_combinations} nodes",
                                    size=visited, cap=settings.max_combinations)
        if best_cost is not None and sigma + delta + remaining_floor[depth] >= best_cost:
            return
        if depth == len(order):
            best_cost = sigma + delta
            best_choice = dict(choice)
            return
        pair = order[depth]
        demand = inst.demands[pair].demand
        for path in options[pair]:
            added = Fraction(0)
            for e in path.edges:
                if counts[e] == 0:
                    added += inst.edges[e].sigma
                counts[e] += 1
            choice[pair] = path.edges
            search(depth + 1, sigma + added, delta + path.delta * demand)
            for e in path.edges:
                counts[e] -= 1
            del choice[pair]

    search(0, Fraction(0), Fraction(0))
    logger.debug("Brute-force optimum %s after %d search nodes", best_cost, visited)
    return RouteSolution(routes=best_choice, theta=theta), best_cost


def brute_force_rcsp(query: RcspQuery, settings: Optional[OracleSettings] = None) -> RcspResult:
    """
    Min-cost simple path meeting every budget exactly; ties go to the
    lexicographically smallest key sequence.

    Raises:
        RcspInfeasible: If no simple path meets the budgets.
        OracleCapExceeded: Above the vertex or path caps.
    """
    settings = settings or OracleSettings()
    if query.n > settings.max_vertices:
        raise OracleCapExceeded(f"Oracle limited to {settings.max_vertices} vertices, got {query.n}",
                                size=query.n, cap=settings.max_vertices)
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(query.n))
    for index, arc in enumerate(query.arcs):
        graph.add_edge(arc.tail, arc.head, key=index)

    if query.source == query.sink:
        walks: Iterable[List[int]] = [[]]
    else:
        walks = ([key for _, _, key in path]
                 for path in nx.all_simple_edge_paths(graph, query.source, query.sink))
    best = None
    for count, arcs in enumerate(walks):
        if count > settings.max_paths:
            raise OracleCapExceeded(f"More than {settings.max_paths} simple paths", size=count, cap=settings.max_paths)
        consumption = path_consumption(query, arcs)
        if any(c > b for c, b in zip(consumption, query.budgets)):
            continue
        cost = sum((query.arcs[a].cost for a in arcs), Fraction(0))
        keys = tuple(query.arcs[a].key for a in arcs)
        if best is None or (cost, keys) < (best[0], best[1]):
            best = (cost, keys, consumption)
    if best is None:
        raise RcspInfeasible(f"No simple path from {query.source} to {query.sink} within the budgets")
    return RcspResult(path=best[1], cost=best[0], consumption=best[2])


@dataclass
class OracleJunction:
    root: int
    tree: JunctionTree
    cost: Fraction

    @property
    def density(self) -> Fraction:
        return self.cost / len(self.tree.pairs)


def _through_routes(inst: Instance, pair: int, root: int, theta: Fraction, settings: OracleSettings,
                    graph: nx.DiGraph) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    demand = inst.demands[pair]
    bound = relaxed_budget(demand.dist_budget, theta)
    ins = [CatalogPath.of(inst, p) for p in simple_paths(inst, demand.source, root, settings, graph)]
    outs = [CatalogPath.of(inst, p) for p in simple_paths(inst, root, demand.sink, settings, graph)]
    return [(a.edges, b.edges) for a in ins for b in outs if a.length + b.length <= bound]


def brute_force_min_density_junction_tree(
    inst: Instance,
    theta: Fraction = Fraction(0),
    settings: Optional[OracleSettings] = None,
    pairs: Optional[Iterable[int]] = None,
) -> OracleJunction:
    """
    Minimum over roots and non-empty pair subsets of the cheapest
    junction-tree cost divided by the subset size.

    Raises:
        InfeasibleError: If no pair has a theta-feasible route through any root.
        OracleCapExceeded: If a root's choice space exceeds oracle.max_combinations.
    """
    settings = settings or OracleSettings()
    theta = Fraction(theta)
    pairs = list(range(inst.k)) if pairs is None else sorted(pairs)
    graph = inst.to_digraph()
    best: Optional[OracleJunction] = None

    for root in range(inst.n):
        routes = {p: _through_routes(inst, p, root, theta, settings, graph) for p in pairs}
        active = [p for p in pairs if routes[p]]
        if not active:
            continue
        space = math.prod(len(routes[p]) + 1 for p in active)
        if space > settings.max_combinations:
            raise OracleCapExceeded(f"Root {root}: {space} junction combinations", size=space,
                                    cap=settings.max_combinations)
        for picks in itertools.product(*[[None] + routes[p] for p in active]):
            chosen = {p: pick for p, pick in zip(active, picks) if pick is not None}
            if not chosen:
                continue
            counts: Counter = Counter()
            delta = Fraction(0)
            for p, (in_path, out_path) in chosen.items():
                counts.update(in_path + out_path)
                for e in in_path + out_path:
                    delta += inst.edges[e].delta * inst.demands[p].demand
            cost = _sigma_of(inst, counts) + delta
            density = cost / len(chosen)
            if best is None or (density, -len(chosen)) < (best.density, -len(best.tree.pairs)):
                tree = JunctionTree(root=root, in_paths={p: r[0] for p, r in chosen.items()},
                                    out_paths={p: r[1] for p, r in chosen.items()}, theta=theta)
                best = OracleJunction(root=root, tree=tree, cost=cost)
    if best is None:
        raise InfeasibleError("No pair has a feasible route through any root")
    return best


def cheap_feasible_paths(inst: Instance, pair: int, upfront: Fraction, per_use: Fraction,
                         theta: Fraction = Fraction(0), settings: Optional[OracleSettings] = None) -> List[CatalogPath]:
    demand = inst.demands[pair]
    bound = relaxed_budget(demand.dist_budget, Fraction(theta))
    paths = [CatalogPath.of(inst, p) for p in simple_paths(inst, demand.source, demand.sink, settings)]
    return [p for p in paths if p.length <= bound and p.sigma <= upfront and p.delta <= per_use]


def local_graph(inst: Instance, pair: int, upfront: Fraction, per_use: Fraction,
                theta: Fraction = Fraction(0), settings: Optional[OracleSettings] = None) -> FrozenSet[int]:
    """Vertices on cheap feasible paths of the pair; a pair is thick when this has >= n/beta vertices."""
    vertices = set()
    for path in cheap_feasible_paths(inst, pair, upfront, per_use, theta, settings):
        vertices.add(inst.demands[pair].source)
        for e in path.edges:
            vertices.add(inst.edges[e].head)
    return frozenset(vertices)


def enumerate_anti_spanners(inst: Instance, pair: int, upfront: Fraction, per_use: Fraction,
                            theta: Fraction = Fraction(0),
                            settings: Optional[OracleSettings] = None) -> List[FrozenSet[int]]:
    """
    Minimal edge sets whose removal leaves the pair no feasible path with
    sigma <= upfront and delta <= per_use, in order of size.

    Raises:
        OracleCapExceeded: If the candidate edge subsets exceed oracle.max_combinations.
    """
    settings = settings or OracleSettings()
    cheap = [frozenset(p.edges) for p in cheap_feasible_paths(inst, pair, upfront, per_use, theta, settings)]
    if not cheap:
        return [frozenset()]
    if any(not edges for edges in cheap):
        return []
    universe = sorted(set().union(*cheap))
    if 2 ** len(universe) > settings.max_combinations:
        raise OracleCapExceeded(f"{len(universe)} candidate edges for anti-spanner enumeration",
                                size=2 ** len(universe), cap=settings.max_combinations)
    minimal: List[FrozenSet[int]] = []
    for size in range(1, len(universe) + 1):
        for subset in itertools.combinations(universe, size):
            candidate = frozenset(subset)
            if any(found <= candidate for found in minimal):
                continue
            if all(edges & candidate for edges in cheap):
                minimal.append(candidate)
    return minimal


def anti_spanner_bound(pairs: int, n: int, beta: Fraction) -> float:
    """|D| * 2^((n/beta)^2 / 2): the count bound on minimal anti-spanners of thin pairs."""
    exponent = (n / float(beta)) ** 2 / 2
    return pairs * 2.0 ** exponent
