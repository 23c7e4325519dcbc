"""
Thin-pair path-flow LP.

    min  sum_e sigma(e) x_e
    s.t. sum_p y_p >= k_b / 4
         sum_{c of p, e in c} f_c <= x_e        for every pair p and edge e
         sum_{c of p} f_c >= y_p                for every pair p
         sum_{c of p} delta(c) f_c <= (n^{4/5} tau / 2k) y_p
         0 <= x, y, f <= 1

The master is restricted to generated path columns; columns are priced by
the one-rational RCSP with the current duals.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from bulk_spanner.core.thresholds import Thresholds
from bulk_spanner.errors import LpInfeasible, RcspInfeasible
from bulk_spanner.lpflow.columns import PathColumn, cheapest_column
from bulk_spanner.lpflow.simplex import LinearProgram, solve_lp, to_fraction
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import LpSettings, RcspSettings
from bulk_spanner.rcsp.query import RcspQuery
from bulk_spanner.rcsp.solver import solve_exact_integer

logger = logging.getLogger(__name__)


@dataclass
class LpSolution:
    pairs: Tuple[int, ...]
    thresholds: Thresholds
    columns: List[PathColumn]
    x: Dict[int, Fraction]
    y: Dict[int, Fraction]
    f: List[Fraction]
    objective: Fraction
    iterations: int = 0
    backend: str = 'exact'
    shortfall: List[int] = field(default_factory=list)

    def columns_of(self, pair: int) -> List[int]:
        return [i for i, c in enumerate(self.columns) if c.pair == pair]

    def flow_through(self, pair: int, edge: int) -> Fraction:
        return sum((self.f[i] for i in self.columns_of(pair) if edge in self.columns[i].edges), Fraction(0))


@dataclass
class _Master:
    program: LinearProgram
    x_index: Dict[int, int]
    y_index: Dict[int, int]
    f_index: List[int]
    cover_row: int
    cap_rows: Dict[Tuple[int, int], int]
    link_rows: Dict[int, int]
    per_use_rows: Dict[int, int]


def _build_master(inst: Instance, pairs: Sequence[int], columns: List[PathColumn],
                  thresholds: Thresholds) -> _Master:
    program = LinearProgram()
    edges = sorted({e for c in columns for e in c.edges})
    x_index = {e: program.add_variable(('x', e), inst.edges[e].sigma, 1) for e in edges}
    y_index = {p: program.add_variable(('y', p), 0, 1) for p in pairs}
    f_index = [program.add_variable(('f', i), 0, 1) for i in range(len(columns))]

    cover_row = program.add_le({y_index[p]: -1 for p in pairs}, -Fraction(len(pairs), 4))
    cap_rows: Dict[Tuple[int, int], int] = {}
    link_rows: Dict[int, int] = {}
    per_use_rows: Dict[int, int] = {}
    for p in pairs:
        mine = [i for i, c in enumerate(columns) if c.pair == p]
        touched = sorted({e for i in mine for e in columns[i].edges})
        for e in touched:
            row = {f_index[i]: 1 for i in mine if e in columns[i].edges}
            row[x_index[e]] = -1
            cap_rows[(p, e)] = program.add_le(row, 0)
        link = {f_index[i]: -1 for i in mine}
        link[y_index[p]] = 1
        link_rows[p] = program.add_le(link, 0)
        per_use = {f_index[i]: columns[i].delta for i in mine}
        per_use[y_index[p]] = -thresholds.flow_per_use
        per_use_rows[p] = program.add_le(per_use, 0)
    return _Master(program, x_index, y_index, f_index, cover_row, cap_rows, link_rows, per_use_rows)


def solve_thin_lp(
    inst: Instance,
    pairs: Sequence[int],
    tau: Fraction,
    zeta: Fraction,
    lp_settings: Optional[LpSettings] = None,
    rcsp_settings: Optional[RcspSettings] = None,
) -> LpSolution:
    """
    Column generation for the thin-pair LP.

    Raises:
        LpInfeasible: If fewer than k_b/4 pairs have a cheap feasible column
            meeting the pay-per-use constraint.
    """
    lp_settings = lp_settings or LpSettings()
    pairs = tuple(pairs)
    zeta = Fraction(zeta)
    thresholds = Thresholds.for_guess(inst.n, inst.k, tau)

    columns: List[PathColumn] = []
    qualifying = 0
    for p in pairs:
        delta_cost = {e: edge.delta for e, edge in enumerate(inst.edges)}
        column = cheapest_column(inst, p, delta_cost, thresholds, zeta, rcsp_settings)
        if column is None:
            continue
        columns.append(column)
        if column.delta <= thresholds.flow_per_use:
            qualifying += 1
    if qualifying < Fraction(len(pairs), 4):
        raise LpInfeasible(
            f"Only {qualifying} of {len(pairs)} pairs have a cheap feasible path; {len(pairs) / 4} needed")

    known: Set[Tuple[int, Tuple[int, ...]]] = {c.key for c in columns}
    iterations = 0
    while True:
        iterations += 1
        master = _build_master(inst, pairs, columns, thresholds)
        result = solve_lp(master.program, lp_settings)
        if result.status != 'optimal':
            raise LpInfeasible(f"Restricted master is {result.status}")
        objective = to_fraction(result.objective)
        if iterations >= lp_settings.max_iterations:
            logger.warning("Column generation stopped at the iteration cap (%d)", iterations)
            break

        threshold = zeta * objective / (len(pairs) + inst.m)
        if result.backend != 'exact':
            threshold = max(threshold, Fraction(lp_settings.float_floor))
        added = 0
        for p in pairs:
            alpha = {e: max(Fraction(0), -to_fraction(result.duals_ub[row]))
                     for (q, e), row in master.cap_rows.items() if q == p}
            beta = -to_fraction(result.duals_ub[master.link_rows[p]])
            gamma = max(Fraction(0), -to_fraction(result.duals_ub[master.per_use_rows[p]]))
            price = {e: alpha.get(e, Fraction(0)) + gamma * edge.delta for e, edge in enumerate(inst.edges)}
            column = cheapest_column(inst, p, price, thresholds, zeta, rcsp_settings)
            if column is None or column.key in known:
                continue
            reduced = sum((price[e] for e in column.edges), Fraction(0)) - beta
            logger.debug("Pricing pair %d: reduced cost %s", p, reduced)
            if reduced < -threshold:
                columns.append(column)
                known.add(column.key)
                added += 1
        if not added:
            break

    logger.info("Thin LP converged after %d iterations with %d columns, objective %s",
                iterations, len(columns), float(objective))
    return LpSolution(
        pairs=pairs,
        thresholds=thresholds,
        columns=columns,
        x={e: to_fraction(result.x[j]) for e, j in master.x_index.items()},
        y={p: to_fraction(result.x[j]) for p, j in master.y_index.items()},
        f=[to_fraction(result.x[j]) for j in master.f_index],
        objective=objective,
        iterations=iterations,
        backend=result.backend,
    )


def prune(sol: LpSolution, inst: Instance) -> LpSolution:
    """
    Double x and f, drop every column whose delta exceeds n^{4/5} tau / k,
    scale each pair's remaining flow down to y, and shrink x_e to the largest
    per-pair flow through e.

    Pairs whose remaining flow cannot cover y are listed in `shortfall` and
    their y is lowered to the flow they keep.
    """
    cap = sol.thresholds.per_use
    flows = [2 * value if column.delta <= cap else Fraction(0) for column, value in zip(sol.columns, sol.f)]
    y = {p: min(Fraction(1), max(Fraction(0), v)) for p, v in sol.y.items()}
    shortfall = []
    for p in sol.pairs:
        mine = sol.columns_of(p)
        total = sum((flows[i] for i in mine), Fraction(0))
        if total >= y[p]:
            if total > 0:
                for i in mine:
                    flows[i] = flows[i] * y[p] / total
        else:
            logger.warning("Pruning left pair %d with flow %s below y=%s", p, total, y[p])
            shortfall.append(p)
            y[p] = total

    x: Dict[int, Fraction] = defaultdict(Fraction)
    for p in sol.pairs:
        through: Dict[int, Fraction] = defaultdict(Fraction)
        for i in sol.columns_of(p):
            for e in sol.columns[i].edges:
                through[e] += flows[i]
        for e, value in through.items():
            x[e] = max(x[e], value)
    x = {e: x.get(e, Fraction(0)) for e in sol.x}
    objective = sum((inst.edges[e].sigma * v for e, v in x.items()), Fraction(0))
    return LpSolution(pairs=sol.pairs, thresholds=sol.thresholds, columns=list(sol.columns), x=x, y=y,
                      f=flows, objective=objective, iterations=sol.iterations, backend=sol.backend,
                      shortfall=shortfall)


def check_thin_constraints(sol: LpSolution, inst: Instance, per_use_budget: Optional[Fraction] = None) -> List[str]:
    """
    Exact check of every constraint; returns human-readable violations.

    per_use_budget defaults to the master's n^{4/5} tau / 2k coefficient;
    pruned solutions are checked against n^{4/5} tau / k since pruning doubles
    the flow.
    """
    budget = sol.thresholds.flow_per_use if per_use_budget is None else per_use_budget
    problems = []
    covered = sum(sol.y.values(), Fraction(0))
    if covered < Fraction(len(sol.pairs), 4):
        problems.append(f"cover: sum y = {covered} < {Fraction(len(sol.pairs), 4)}")
    for name, values in (('x', sol.x.values()), ('y', sol.y.values()), ('f', sol.f)):
        for v in values:
            if v < 0 or v > 1:
                problems.append(f"bounds: {name} value {v} outside [0, 1]")
    for p in sol.pairs:
        mine = sol.columns_of(p)
        flow = sum((sol.f[i] for i in mine), Fraction(0))
        if flow < sol.y[p]:
            problems.append(f"link: pair {p} flow {flow} < y {sol.y[p]}")
        per_use = sum((sol.columns[i].delta * sol.f[i] for i in mine), Fraction(0))
        if per_use > budget * sol.y[p]:
            problems.append(f"per-use: pair {p} has {per_use} > {budget * sol.y[p]}")
        for e in {e for i in mine for e in sol.columns[i].edges}:
            through = sol.flow_through(p, e)
            if through > sol.x.get(e, Fraction(0)):
                problems.append(f"capacity: pair {p} edge {e} flow {through} > x {sol.x.get(e, Fraction(0))}")
    return problems


def inclusion_probabilities(sol: LpSolution) -> Dict[int, Fraction]:
    factor = sol.thresholds.sampling_factor
    return {e: min(factor * v, Fraction(1)) for e, v in sol.x.items()}


def expected_sampling_cost(sol: LpSolution, inst: Instance) -> Fraction:
    """Closed-form expected upfront cost of the sampled subgraph."""
    return sum((inst.edges[e].sigma * q for e, q in inclusion_probabilities(sol).items()), Fraction(0))


@dataclass
class RoundingResult:
    sampled: Set[int]
    paths: Dict[int, Tuple[int, ...]]


def round_solution(inst: Instance, sol: LpSolution, rng: np.random.Generator,
                   rcsp_settings: Optional[RcspSettings] = None) -> RoundingResult:
    """
    Keep each edge with probability min(n^{4/5} ln n x_e, 1); then give every
    pair its min-delta path of length <= Dis inside the sample, kept only if its
    delta is at most n^{4/5} tau / k.
    """
    probabilities = inclusion_probabilities(sol)
    edges = sorted(probabilities)
    draws = rng.random(len(edges))
    sampled = {e for e, u in zip(edges, draws) if u < float(probabilities[e]) or probabilities[e] == 1}
    paths: Dict[int, Tuple[int, ...]] = {}
    if not sampled:
        return RoundingResult(sampled=sampled, paths=paths)
    for p in sol.pairs:
        demand = inst.demands[p]
        query = RcspQuery.from_instance(
            inst, demand.source, demand.sink,
            cost=lambda e: inst.edges[e].delta,
            weights=[lambda e: inst.edges[e].length],
            budgets=[demand.dist_budget], tolerances=[Fraction(1)],
            edge_ids=sampled,
        )
        try:
            result = solve_exact_integer(query, rcsp_settings)
        except RcspInfeasible:
            continue
        if result.cost <= sol.thresholds.per_use:
            paths[p] = result.path
    logger.debug("Rounding kept %d edges and resolved %d pairs", len(sampled), len(paths))
    return RoundingResult(sampled=sampled, paths=paths)
