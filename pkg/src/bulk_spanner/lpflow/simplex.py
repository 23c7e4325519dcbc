"""
Linear programs of the form

    minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  0 <= x <= u

solved either exactly (two-phase tableau simplex over Fractions, Bland's
rule) or in floating point through scipy's HiGHS interface. Both backends
report duals with the same sign convention: the derivative of the optimal
objective with respect to each right-hand side (non-positive for <= rows of
a minimisation).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Literal, Optional

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from bulk_spanner.errors import SolverError
from bulk_spanner.models.reports import LpSettings

logger = logging.getLogger(__name__)

Status = Literal['optimal', 'infeasible', 'unbounded']


@dataclass
class LinearProgram:
    costs: List = field(default_factory=list)
    upper: List[Optional[object]] = field(default_factory=list)
    names: List[object] = field(default_factory=list)
    ub_rows: List[Dict[int, object]] = field(default_factory=list)
    ub_rhs: List = field(default_factory=list)
    eq_rows: List[Dict[int, object]] = field(default_factory=list)
    eq_rhs: List = field(default_factory=list)

    @property
    def n_vars(self) -> int:
        return len(self.costs)

    def add_variable(self, name, cost=0, upper=None) -> int:
        self.costs.append(cost)
        self.upper.append(upper)
        self.names.append(name)
        return len(self.costs) - 1

    def add_le(self, coefficients: Dict[int, object], rhs) -> int:
        self.ub_rows.append({j: a for j, a in coefficients.items() if a != 0})
        self.ub_rhs.append(rhs)
        return len(self.ub_rows) - 1

    def add_eq(self, coefficients: Dict[int, object], rhs) -> int:
        self.eq_rows.append({j: a for j, a in coefficients.items() if a != 0})
        self.eq_rhs.append(rhs)
        return len(self.eq_rows) - 1

    def cells(self) -> int:
        bounded = sum(1 for u in self.upper if u is not None)
        rows = len(self.ub_rows) + len(self.eq_rows) + bounded
        return rows * (self.n_vars + rows)


@dataclass
class LpResult:
    status: Status
    backend: str
    x: List = field(default_factory=list)
    objective: object = None
    duals_ub: List = field(default_factory=list)
    duals_eq: List = field(default_factory=list)
    iterations: int = 0


class ExactSimplex:
    """Dense two-phase tableau simplex on Fractions with Bland's anti-cycling rule."""

    def __init__(self, program: LinearProgram):
        self.program = program
        n = program.n_vars
        rows: List[Dict[int, Fraction]] = [
            {j: Fraction(a) for j, a in row.items()} for row in program.ub_rows
        ]
        rhs: List[Fraction] = [Fraction(b) for b in program.ub_rhs]
        for j, u in enumerate(program.upper):
            if u is not None:
                rows.append({j: Fraction(1)})
                rhs.append(Fraction(u))
        self.n_ub = len(rows)
        rows += [{j: Fraction(a) for j, a in row.items()} for row in program.eq_rows]
        rhs += [Fraction(b) for b in program.eq_rhs]
        self.m = len(rows)
        self.n = n

        self.slack = [n + i for i in range(self.n_ub)]
        self.sign = [1] * self.m
        needs_artificial = []
        for i in range(self.m):
            if rhs[i] < 0:
                self.sign[i] = -1
            if i >= self.n_ub or rhs[i] < 0:
                needs_artificial.append(i)
        first_artificial = n + self.n_ub
        self.artificial = {i: first_artificial + t for t, i in enumerate(needs_artificial)}
        self.width = first_artificial + len(needs_artificial)
        self.is_artificial = [False] * self.width
        for col in self.artificial.values():
            self.is_artificial[col] = True

        self.tableau: List[List[Fraction]] = []
        self.basis: List[int] = []
        zero = Fraction(0)
        for i in range(self.m):
            row = [zero] * (self.width + 1)
            s = self.sign[i]
            for j, a in rows[i].items():
                row[j] = s * a
            if i < self.n_ub:
                row[self.slack[i]] = Fraction(s)
            if i in self.artificial:
                row[self.artificial[i]] = Fraction(1)
                self.basis.append(self.artificial[i])
            else:
                self.basis.append(self.slack[i])
            row[-1] = s * rhs[i]
            self.tableau.append(row)
        self.iterations = 0

    def _reduced_costs(self, costs: List[Fraction]) -> List[Fraction]:
        reduced = list(costs) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb == 0:
                continue
            row = self.tableau[i]
            for j in range(self.width + 1):
                if row[j] != 0:
                    reduced[j] -= cb * row[j]
        return reduced

    def _pivot(self, reduced: List[Fraction], r: int, q: int) -> None:
        pivot_row = self.tableau[r]
        factor = pivot_row[q]
        nonzero = [j for j in range(self.width + 1) if pivot_row[j] != 0]
        for j in nonzero:
            pivot_row[j] /= factor
        for i, row in enumerate(self.tableau):
            if i == r or row[q] == 0:
                continue
            scale = row[q]
            for j in nonzero:
                row[j] -= scale * pivot_row[j]
        if reduced[q] != 0:
            scale = reduced[q]
            for j in nonzero:
                reduced[j] -= scale * pivot_row[j]
        self.basis[r] = q
        self.iterations += 1

    def _iterate(self, reduced: List[Fraction], allowed) -> Status:
        while True:
            entering = None
            for j in range(self.width):
                if allowed[j] and reduced[j] < 0:
                    entering = j
                    break
            if entering is None:
                return 'optimal'
            leaving = None
            best_ratio = None
            for i, row in enumerate(self.tableau):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio and self.basis[i] < self.basis[leaving])):
                        best_ratio = ratio
                        leaving = i
            if leaving is None:
                return 'unbounded'
            self._pivot(reduced, leaving, entering)

    def solve(self) -> LpResult:
        everything = [True] * self.width
        if self.artificial:
            phase_one = [Fraction(1) if self.is_artificial[j] else Fraction(0) for j in range(self.width)]
            reduced = self._reduced_costs(phase_one)
            self._iterate(reduced, everything)
            if -reduced[-1] > 0:
                return LpResult(status='infeasible', backend='exact', iterations=self.iterations)
            for i in range(self.m):
                if not self.is_artificial[self.basis[i]]:
                    continue
                row = self.tableau[i]
                for j in range(self.width):
                    if not self.is_artificial[j] and row[j] != 0:
                        self._pivot(reduced, i, j)
                        break

        costs = [Fraction(c) for c in self.program.costs] + [Fraction(0)] * (self.width - self.n)
        reduced = self._reduced_costs(costs)
        allowed = [not a for a in self.is_artificial]
        status = self._iterate(reduced, allowed)
        if status != 'optimal':
            return LpResult(status=status, backend='exact', iterations=self.iterations)

        x = [Fraction(0)] * self.n
        for i, b in enumerate(self.basis):
            if b < self.n:
                x[b] = self.tableau[i][-1]
        objective = sum((Fraction(c) * v for c, v in zip(self.program.costs, x)), Fraction(0))
        duals_ub = [-reduced[self.slack[i]] for i in range(len(self.program.ub_rows))]
        duals_eq = []
        for t in range(len(self.program.eq_rows)):
            i = self.n_ub + t
            duals_eq.append(-self.sign[i] * reduced[self.artificial[i]])
        return LpResult(status='optimal', backend='exact', x=x, objective=objective,
                        duals_ub=duals_ub, duals_eq=duals_eq, iterations=self.iterations)


def _solve_highs(program: LinearProgram) -> LpResult:
    n = program.n_vars

    def matrix(rows: List[Dict[int, object]]):
        data, indices, pointers = [], [], [0]
        for row in rows:
            for j, a in sorted(row.items()):
                indices.append(j)
                data.append(float(a))
            pointers.append(len(indices))
        return csr_matrix((np.array(data, dtype=float), np.array(indices, dtype=int), np.array(pointers, dtype=int)),
                          shape=(len(rows), n))

    kwargs = {}
    if program.ub_rows:
        kwargs['A_ub'] = matrix(program.ub_rows)
        kwargs['b_ub'] = np.array([float(b) for b in program.ub_rhs])
    if program.eq_rows:
        kwargs['A_eq'] = matrix(program.eq_rows)
        kwargs['b_eq'] = np.array([float(b) for b in program.eq_rhs])
    bounds = [(0, None if u is None else float(u)) for u in program.upper]
    res = linprog(np.array([float(c) for c in program.costs]), bounds=bounds, method='highs', **kwargs)
    if res.status == 2:
        return LpResult(status='infeasible', backend='highs')
    if res.status == 3:
        return LpResult(status='unbounded', backend='highs')
    if res.status != 0:
        raise SolverError(f"HiGHS failed: {res.message}")
    duals_ub = list(res.ineqlin.marginals) if program.ub_rows else []
    duals_eq = list(res.eqlin.marginals) if program.eq_rows else []
    return LpResult(status='optimal', backend='highs', x=[float(v) for v in res.x], objective=float(res.fun),
                    duals_ub=[float(v) for v in duals_ub], duals_eq=[float(v) for v in duals_eq],
                    iterations=int(getattr(res, 'nit', 0)))


def solve_lp(program: LinearProgram, settings: Optional[LpSettings] = None) -> LpResult:
    """Solve with the configured backend; 'auto' goes exact below lp.exact_max_cells."""
    settings = settings or LpSettings()
    backend = settings.backend
    if backend == 'auto':
        backend = 'exact' if program.cells() <= settings.exact_max_cells else 'highs'
    logger.debug("Solving LP with %d variables, %d+%d rows on %s",
                 program.n_vars, len(program.ub_rows), len(program.eq_rows), backend)
    if backend == 'exact':
        return ExactSimplex(program).solve()
    return _solve_highs(program)


def to_fraction(value, max_denominator: int = 10**9) -> Fraction:
    """Exact values pass through; floats are snapped to a nearby small-denominator rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(float(value)).limit_denominator(max_denominator)
