import unittest
from fractions import Fraction

from bulk_spanner.errors import InfeasibleError, OracleCapExceeded, RcspInfeasible
from bulk_spanner.models.instance import Demand, Edge, Instance
from bulk_spanner.models.reports import OracleSettings
from bulk_spanner.oracle import (
    PathCatalog,
    anti_spanner_bound,
    brute_force_min_density_junction_tree,
    brute_force_optimum,
    brute_force_rcsp,
    cheap_feasible_paths,
    enumerate_anti_spanners,
    enumerate_feasible_paths,
    local_graph,
    simple_paths,
)
from bulk_spanner.rcsp import RcspArc, RcspQuery, solve_exact_integer


def hub_instance(budget=2):
    """Sources 0 and 1 reach sink 3 directly or through hub 2, whose exit edge is shared."""
    return Instance(
        n=4,
        edges=(
            Edge(tail=0, head=2, length=1, sigma=1),
            Edge(tail=1, head=2, length=1, sigma=1),
            Edge(tail=2, head=3, length=1, sigma=6),
            Edge(tail=0, head=3, length=2, sigma=5),
            Edge(tail=1, head=3, length=2, sigma=5),
        ),
        demands=(Demand(source=0, sink=3, dist_budget=budget), Demand(source=1, sink=3, dist_budget=2)),
    )


class TestPathCatalog(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(PathCatalog)

    def setUp(self):
        self.inst = hub_instance()

    def test_simple_paths(self):
        self.assertEqual(sorted(simple_paths(self.inst, 0, 3)), [(0, 2), (3,)])
        self.assertEqual(simple_paths(self.inst, 2, 2), [()])
        self.assertEqual(simple_paths(self.inst, 3, 0), [])

    def test_path_cap(self):
        with self.assertRaises(OracleCapExceeded) as context:
            simple_paths(self.inst, 0, 3, OracleSettings(max_paths=1))
        self.assertIn("More than 1 simple paths", str(context.exception))

    def test_vertex_cap(self):
        with self.assertRaises(OracleCapExceeded):
            simple_paths(self.inst, 0, 3, OracleSettings(max_vertices=3))

    def test_feasibility(self):
        tight = hub_instance(budget=1)
        catalog = PathCatalog.build(tight)

        self.assertEqual(enumerate_feasible_paths(tight, 0), [])
        self.assertEqual(len(catalog.feasible(0, Fraction(1))), 2)
        self.assertTrue(catalog.is_feasible(0, (0, 2), Fraction(1)))
        self.assertFalse(catalog.is_feasible(0, (0, 2)))


class TestBruteForceOptimum(unittest.TestCase):

    def setUp(self):
        self.inst = hub_instance()

    def test_shared_edge_wins(self):
        # Act
        solution, cost = brute_force_optimum(self.inst)

        # Assert
        self.assertEqual(cost, 8)
        self.assertEqual(solution.routes, {0: (0, 2), 1: (1, 2)})

    def test_infeasible_pair(self):
        with self.assertRaises(InfeasibleError) as context:
            brute_force_optimum(hub_instance(budget=1))
        self.assertIn("Pair 0 has no feasible path", str(context.exception))

    def test_theta_relaxes_budgets(self):
        _, cost = brute_force_optimum(hub_instance(budget=1), Fraction(1))

        self.assertEqual(cost, 8)

    def test_no_demands(self):
        solution, cost = brute_force_optimum(self.inst.with_demands([]))

        self.assertEqual((solution.routes, cost), ({}, 0))

    def test_search_cap(self):
        with self.assertRaises(OracleCapExceeded):
            brute_force_optimum(self.inst, settings=OracleSettings(max_combinations=1))


class TestBruteForceRcsp(unittest.TestCase):

    def setUp(self):
        self.arcs = (
            RcspArc(tail=0, head=1, cost=5, weights=(1,), key=0),
            RcspArc(tail=1, head=3, cost=5, weights=(1,), key=1),
            RcspArc(tail=0, head=2, cost=1, weights=(3,), key=2),
            RcspArc(tail=2, head=3, cost=1, weights=(3,), key=3),
        )

    def query(self, budget):
        return RcspQuery(n=4, arcs=self.arcs, source=0, sink=3, budgets=(budget,), tolerances=(Fraction(1, 2),))

    def test_agrees_with_exact_solver(self):
        for budget in (2, 3, 5, 6, 7):
            with self.subTest(budget=budget):
                self.assertEqual(brute_force_rcsp(self.query(budget)).cost,
                                 solve_exact_integer(self.query(budget)).cost)

    def test_path(self):
        self.assertEqual(brute_force_rcsp(self.query(2)).path, (0, 1))

    def test_infeasible(self):
        with self.assertRaises(RcspInfeasible):
            brute_force_rcsp(self.query(1))


class TestJunctionOracle(unittest.TestCase):

    def test_best_junction(self):
        result = brute_force_min_density_junction_tree(hub_instance())

        self.assertEqual(result.root, 2)
        self.assertEqual(result.cost, 8)
        self.assertEqual(result.density, 4)
        self.assertEqual(result.tree.in_paths, {0: (0,), 1: (1,)})

    def test_single_pair(self):
        result = brute_force_min_density_junction_tree(hub_instance(), pairs=[0])

        self.assertEqual((result.cost, result.tree.pairs), (5, [0]))

    def test_nothing_feasible(self):
        inst = hub_instance().with_demands([Demand(source=3, sink=0, dist_budget=1)])

        with self.assertRaises(InfeasibleError):
            brute_force_min_density_junction_tree(inst)


class TestAntiSpanners(unittest.TestCase):

    def setUp(self):
        self.inst = hub_instance()

    def test_cheap_paths_and_local_graph(self):
        cheap = cheap_feasible_paths(self.inst, 0, Fraction(5), Fraction(0))

        self.assertEqual([p.edges for p in cheap], [(3,)])
        self.assertEqual(local_graph(self.inst, 0, Fraction(5), Fraction(0)), frozenset({0, 3}))

    def test_minimal_cuts(self):
        found = enumerate_anti_spanners(self.inst, 0, Fraction(10), Fraction(0))

        self.assertEqual(found, [frozenset({0, 3}), frozenset({2, 3})])

    def test_no_cheap_paths(self):
        self.assertEqual(enumerate_anti_spanners(self.inst, 0, Fraction(0), Fraction(0)), [frozenset()])

    def test_count_bound(self):
        self.assertEqual(anti_spanner_bound(2, 4, Fraction(2)), 8.0)


if __name__ == '__main__':
    unittest.main()
