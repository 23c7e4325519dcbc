import unittest
from fractions import Fraction
from types import SimpleNamespace
from unittest.mock import patch

from bulk_spanner.errors import SolverError
from bulk_spanner.lpflow import ExactSimplex, LinearProgram, solve_lp, to_fraction
from bulk_spanner.models.reports import LpSettings


class TestLinearProgram(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(ExactSimplex)

    def setUp(self):
        # min -2x - 3y  s.t.  x + y <= 4,  x <= 3,  y <= 2
        self.program = LinearProgram()
        self.x = self.program.add_variable('x', -2, 3)
        self.y = self.program.add_variable('y', -3, 2)
        self.row = self.program.add_le({self.x: 1, self.y: 1}, 4)

    def test_zero_coefficients_dropped(self):
        row = self.program.add_le({self.x: 0, self.y: 1}, 1)

        self.assertEqual(self.program.ub_rows[row], {self.y: 1})

    def test_cells(self):
        self.assertEqual(self.program.cells(), 3 * (2 + 3))

    def test_exact_optimum(self):
        # Act
        result = ExactSimplex(self.program).solve()

        # Assert
        self.assertEqual(result.status, 'optimal')
        self.assertEqual(result.x, [Fraction(2), Fraction(2)])
        self.assertEqual(result.objective, Fraction(-10))
        self.assertEqual(result.duals_ub, [Fraction(-2)])

    def test_equality_dual(self):
        program = LinearProgram()
        x = program.add_variable('x', 1, 1)
        y = program.add_variable('y', 2)
        program.add_eq({x: 1, y: 1}, 3)

        result = ExactSimplex(program).solve()

        self.assertEqual(result.x, [Fraction(1), Fraction(2)])
        self.assertEqual(result.duals_eq, [Fraction(2)])

    def test_infeasible(self):
        self.program.add_le({self.x: -1}, -4)

        self.assertEqual(ExactSimplex(self.program).solve().status, 'infeasible')

    def test_unbounded(self):
        program = LinearProgram()
        program.add_variable('x', -1)

        self.assertEqual(ExactSimplex(program).solve().status, 'unbounded')

    def test_auto_backend_small_program_is_exact(self):
        self.assertEqual(solve_lp(self.program).backend, 'exact')

    def test_highs_agrees_with_exact(self):
        result = solve_lp(self.program, LpSettings(backend='highs'))

        self.assertEqual(result.backend, 'highs')
        self.assertAlmostEqual(result.objective, -10.0)
        self.assertAlmostEqual(result.duals_ub[0], -2.0)

    def test_highs_infeasible(self):
        self.program.add_le({self.x: -1}, -4)

        self.assertEqual(solve_lp(self.program, LpSettings(backend='highs')).status, 'infeasible')

    def test_highs_failure_raises_solver_error(self):
        failed = SimpleNamespace(status=4, message="Numerical difficulties encountered")

        with patch('bulk_spanner.lpflow.simplex.linprog', return_value=failed):
            with self.assertRaises(SolverError) as context:
                solve_lp(self.program, LpSettings(backend='highs'))
        self.assertIn("HiGHS failed: Numerical difficulties", str(context.exception))


class TestToFraction(unittest.TestCase):

    def test_exact_values_pass_through(self):
        self.assertEqual(to_fraction(Fraction(1, 7)), Fraction(1, 7))
        self.assertEqual(to_fraction(3), Fraction(3))

    def test_floats_snap(self):
        self.assertEqual(to_fraction(1 / 3), Fraction(1, 3))
        self.assertEqual(to_fraction(0.5), Fraction(1, 2))


if __name__ == '__main__':
    unittest.main()
