import unittest
from fractions import Fraction

import numpy as np

from bulk_spanner.errors import TreeSizeOverflow
from bulk_spanner.junction import (
    LabelCoverInstance,
    Witness,
    build_layered,
    build_tuple_trees,
    height_reduce,
    leaf_walk,
    round_on_tree,
    scale_graph,
    solve_label_cover,
    thin_frontier,
    to_label_cover,
)
from bulk_spanner.junction.tuple_tree import related_options
from bulk_spanner.models.instance import Demand, Edge, Instance


def witness(sigma, delta):
    return Witness(vertices=(), edges=(), sigma=Fraction(sigma), delta=Fraction(delta))


class TestHeightReduction(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(height_reduce)

    def setUp(self):
        inst = Instance(
            n=3,
            edges=(Edge(tail=0, head=1, length=1, sigma=2, delta=1),
                   Edge(tail=1, head=2, length=1, sigma=3, delta=1)),
            demands=(Demand(source=0, sink=2, dist_budget=2),),
        )
        self.layered = build_layered(scale_graph(inst, Fraction(1, 2)), 1)

    def test_levels(self):
        up = height_reduce(self.layered, 'up', 2)

        self.assertEqual(up.levels, [[(1, 0)], [(0, 2), (1, 0)], [(0, 2)]])
        self.assertEqual(up.edge_count, 3)

    def test_up_witness_runs_towards_root(self):
        up = height_reduce(self.layered, 'up', 2)

        [found] = up.parallel((0, 2), (1, 0))

        self.assertEqual(found.vertices, ((0, 2), (1, 0)))
        self.assertEqual((found.edges, found.sigma, found.delta), ((0,), 2, 1))

    def test_down_witness_runs_away_from_root(self):
        down = height_reduce(self.layered, 'down', 1)

        self.assertEqual(down.levels, [[(1, 0)], [(2, 2)]])
        [found] = down.parallel((2, 2), (1, 0))
        self.assertEqual(found.edges, (1,))

    def test_height_must_be_positive(self):
        with self.assertRaises(ValueError) as context:
            height_reduce(self.layered, 'up', 0)
        self.assertIn("at least 1", str(context.exception))

    def test_thin_frontier_keeps_power_of_two_buckets(self):
        found = [witness(0, 10), witness(1, 5), witness(3, 4), witness(4, 1), witness(5, 0)]

        kept = thin_frontier(found)

        self.assertEqual([(w.sigma, w.delta) for w in kept], [(0, 10), (1, 5), (4, 1), (5, 0)])


class TestTupleTrees(unittest.TestCase):

    def setUp(self):
        inst = Instance(
            n=3,
            edges=(Edge(tail=0, head=1, length=1, sigma=2, delta=1),
                   Edge(tail=1, head=2, length=1, sigma=3, delta=1)),
            demands=(Demand(source=0, sink=2, dist_budget=2),),
        )
        self.layered = build_layered(scale_graph(inst, Fraction(1, 2)), 1)
        self.up = height_reduce(self.layered, 'up', 2)
        self.down = height_reduce(self.layered, 'down', 2)

    def test_tree_shape(self):
        # Act
        tree = build_tuple_trees(self.layered, self.up, self.down)

        # Assert
        self.assertEqual((len(tree.up), len(tree.down)), (5, 5))
        self.assertEqual([node.level for node in tree.up], [0, 1, 1, 2, 2])
        self.assertEqual(len(tree.in_options[0]), 2)
        self.assertEqual(len(tree.out_options[0]), 2)

    def test_pay_per_use_folded_into_options(self):
        tree = build_tuple_trees(self.layered, self.up, self.down)

        self.assertEqual({option.cost for option in tree.in_options[0]}, {Fraction(1)})
        self.assertEqual(len(related_options(tree, 0)), 4)

    def test_leaf_walks(self):
        tree = build_tuple_trees(self.layered, self.up, self.down)

        self.assertEqual({leaf_walk(tree, o) for o in tree.in_options[0]}, {(0,)})
        self.assertEqual({leaf_walk(tree, o) for o in tree.out_options[0]}, {(1,)})

    def test_node_cap(self):
        with self.assertRaises(TreeSizeOverflow):
            build_tuple_trees(self.layered, self.up, self.down, cap=6)

    def test_heights_must_agree(self):
        with self.assertRaises(ValueError):
            build_tuple_trees(self.layered, self.up, height_reduce(self.layered, 'down', 1))


class TestLabelCover(unittest.TestCase):

    def setUp(self):
        inst = Instance(
            n=3,
            edges=(Edge(tail=0, head=1, length=1, sigma=2, delta=1),
                   Edge(tail=1, head=2, length=1, sigma=3, delta=1)),
            demands=(Demand(source=0, sink=2, dist_budget=2),),
        )
        layered = build_layered(scale_graph(inst, Fraction(1, 2)), 1)
        tree = build_tuple_trees(layered, height_reduce(layered, 'up', 2), height_reduce(layered, 'down', 2))
        self.lc = to_label_cover(tree)

    def test_arcs(self):
        self.assertEqual(self.lc.arc_count, 12)
        self.assertEqual(self.lc.pairs, [0])
        depths = self.lc.depths()
        for _, arc in self.lc.in_groups[0] + self.lc.out_groups[0]:
            self.assertEqual(depths[arc], 2)

    def test_solve(self):
        solution = solve_label_cover(self.lc, np.random.default_rng(0))

        self.assertEqual(solution.satisfied, [0])
        self.assertEqual(solution.cost, 7)
        self.assertEqual(solution.density, 7)

    def test_nothing_satisfiable(self):
        self.lc.relation = {0: set()}

        solution = solve_label_cover(self.lc, np.random.default_rng(0))

        self.assertTrue(solution.is_empty)
        self.assertIsNone(solution.density)


class TestRoundOnTree(unittest.TestCase):

    def setUp(self):
        self.lc = LabelCoverInstance(costs=[Fraction(1)] * 3, parents=[-1, 0, 0])

    def test_children_follow_parent(self):
        keep = round_on_tree(self.lc, np.array([1.0, 1.0, 0.0]), 1.0, 5, np.random.default_rng(3))

        self.assertEqual(keep.shape, (5, 3))
        self.assertTrue(keep[:, :2].all())
        self.assertFalse(keep[:, 2].any())

    def test_dropped_parent_drops_children(self):
        keep = round_on_tree(self.lc, np.array([0.0, 1.0, 1.0]), 1.0, 5, np.random.default_rng(3))

        self.assertFalse(keep.any())


if __name__ == '__main__':
    unittest.main()
