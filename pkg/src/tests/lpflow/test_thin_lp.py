import dataclasses
import unittest
from fractions import Fraction

import numpy as np

from bulk_spanner.core.thresholds import Thresholds
from bulk_spanner.errors import LpInfeasible
from bulk_spanner.lpflow import (
    PathColumn,
    check_thin_constraints,
    cheapest_column,
    expected_sampling_cost,
    inclusion_probabilities,
    prune,
    round_solution,
    solve_thin_lp,
)
from bulk_spanner.models.instance import Demand, Edge, Instance


class TestThinLp(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(solve_thin_lp)

    def setUp(self):
        # One pair 0->3; only the path through 1 meets the distance budget.
        self.inst = Instance(
            n=4,
            edges=(
                Edge(tail=0, head=1, length=1, sigma=1),
                Edge(tail=1, head=3, length=1, sigma=1),
                Edge(tail=0, head=2, length=2, sigma=0),
                Edge(tail=2, head=3, length=2, sigma=0),
            ),
            demands=(Demand(source=0, sink=3, dist_budget=2),),
        )
        self.tau = Fraction(100)
        self.zeta = Fraction(1, 2)

    def test_cheapest_column(self):
        thresholds = Thresholds.for_guess(4, 1, self.tau)

        column = cheapest_column(self.inst, 0, {}, thresholds, self.zeta)

        self.assertEqual(column.edges, (0, 1))
        self.assertEqual((column.sigma, column.length), (Fraction(2), Fraction(2)))
        self.assertTrue(column.in_family(self.inst, thresholds))

    def test_cheapest_column_over_upfront_threshold(self):
        thresholds = Thresholds.for_guess(4, 1, Fraction(1))

        self.assertIsNone(cheapest_column(self.inst, 0, {}, thresholds, self.zeta))

    def test_master_optimum(self):
        # Act
        sol = solve_thin_lp(self.inst, [0], self.tau, self.zeta)

        # Assert
        self.assertEqual(sol.objective, Fraction(1, 2))
        self.assertEqual(sol.x, {0: Fraction(1, 4), 1: Fraction(1, 4)})
        self.assertEqual(sol.y, {0: Fraction(1, 4)})
        self.assertEqual(sol.f, [Fraction(1, 4)])
        self.assertEqual(check_thin_constraints(sol, self.inst), [])

    def test_no_cheap_column(self):
        with self.assertRaises(LpInfeasible) as context:
            solve_thin_lp(self.inst, [0], Fraction(1), self.zeta)
        self.assertIn("Only 0 of 1 pairs", str(context.exception))

    def test_prune_keeps_constraints(self):
        sol = solve_thin_lp(self.inst, [0], self.tau, self.zeta)

        pruned = prune(sol, self.inst)

        self.assertEqual(pruned.shortfall, [])
        self.assertEqual(pruned.f, [Fraction(1, 4)])
        self.assertEqual(pruned.objective, Fraction(1, 2))
        self.assertEqual(check_thin_constraints(pruned, self.inst, pruned.thresholds.per_use), [])

    def test_prune_drops_expensive_columns(self):
        sol = solve_thin_lp(self.inst, [0], self.tau, self.zeta)
        costly = PathColumn(pair=0, edges=(0, 1), sigma=Fraction(2), delta=sol.thresholds.per_use + 1,
                            length=Fraction(2))
        sol = dataclasses.replace(sol, columns=[costly])

        pruned = prune(sol, self.inst)

        self.assertEqual(pruned.shortfall, [0])
        self.assertEqual(pruned.y[0], 0)

    def test_constraint_checker_reports_violations(self):
        sol = solve_thin_lp(self.inst, [0], self.tau, self.zeta)
        broken = dataclasses.replace(sol, y={0: Fraction(0)}, x={0: Fraction(0), 1: Fraction(1, 4)})

        problems = check_thin_constraints(broken, self.inst)

        self.assertTrue(any(p.startswith("cover:") for p in problems))
        self.assertIn("capacity: pair 0 edge 0 flow 1/4 > x 0", problems)

    def test_sampling(self):
        sol = solve_thin_lp(self.inst, [0], self.tau, self.zeta)

        probabilities = inclusion_probabilities(sol)
        rounded = round_solution(self.inst, sol, np.random.default_rng(0))

        # n^{4/5} ln n / 4 exceeds one at n = 4
        self.assertEqual(probabilities, {0: 1, 1: 1})
        self.assertEqual(expected_sampling_cost(sol, self.inst), 2)
        self.assertEqual(rounded.sampled, {0, 1})
        self.assertEqual(rounded.paths, {0: (0, 1)})

    def test_expected_cost_bound(self):
        sol = solve_thin_lp(self.inst, [0], self.tau, self.zeta)

        bound = sol.thresholds.sampling_factor * sol.objective

        self.assertLessEqual(expected_sampling_cost(sol, self.inst), bound)


if __name__ == '__main__':
    unittest.main()
