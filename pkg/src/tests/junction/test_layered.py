import unittest
from fractions import Fraction

from bulk_spanner.errors import LayerRangeOverflow
from bulk_spanner.junction import build_layered, scale_graph
from bulk_spanner.models.instance import Demand, Edge, Instance


def path_instance():
    """0 -> 1 -> 2 with a single pair 0 -> 2."""
    return Instance(
        n=3,
        edges=(Edge(tail=0, head=1, length=1, sigma=2, delta=1),
               Edge(tail=1, head=2, length=1, sigma=3, delta=1)),
        demands=(Demand(source=0, sink=2, dist_budget=2),),
    )


class TestScaleGraph(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(scale_graph)

    def setUp(self):
        self.scaled = scale_graph(path_instance(), Fraction(1, 2))

    def test_delta_and_multipliers(self):
        self.assertEqual(self.scaled.delta, Fraction(1, 2))
        self.assertEqual(self.scaled.multipliers, (2, 2))
        self.assertEqual(self.scaled.scaled_path_length([0, 1]), 2)

    def test_label_range(self):
        self.assertEqual((self.scaled.lower, self.scaled.upper), (0, 6))

    def test_relation(self):
        self.assertEqual(self.scaled.bound(0), Fraction(3))
        self.assertTrue(self.scaled.related(0, 2, 2))
        self.assertTrue(self.scaled.related(0, 6, 0))
        self.assertFalse(self.scaled.related(0, 4, 3))

    def test_negative_lengths_extend_range_downwards(self):
        inst = Instance(n=3, edges=(Edge(tail=0, head=1, length=-1), Edge(tail=1, head=2, length=2)),
                        demands=(Demand(source=0, sink=2, dist_budget=2),))

        scaled = scale_graph(inst, Fraction(1, 2))

        self.assertEqual(scaled.multipliers, (-2, 4))
        self.assertEqual(scaled.lower, -4)
        self.assertEqual(scaled.upper, 10)

    def test_theta_must_be_positive(self):
        with self.assertRaises(ValueError) as context:
            scale_graph(path_instance(), Fraction(0))
        self.assertIn("theta must be positive", str(context.exception))

    def test_needs_demands(self):
        with self.assertRaises(ValueError) as context:
            scale_graph(path_instance().with_demands([]), Fraction(1, 2))
        self.assertIn("at least one demand pair", str(context.exception))


class TestBuildLayered(unittest.TestCase):

    def setUp(self):
        self.scaled = scale_graph(path_instance(), Fraction(1, 2))

    def test_middle_root(self):
        # Act
        layered = build_layered(self.scaled, 1)

        # Assert
        self.assertEqual(sorted(layered.up.edges), [((0, 2), (1, 0))])
        self.assertEqual(sorted(layered.down.edges), [((1, 0), (2, 2))])
        self.assertEqual(layered.sources, {0: {2: (0, 2)}})
        self.assertEqual(layered.sinks, {0: {2: (2, 2)}})
        self.assertEqual(layered.relation, {0: {(2, 2)}})
        self.assertEqual(layered.pairs, [0])
        self.assertEqual(layered.size, 4)

    def test_source_as_root(self):
        layered = build_layered(self.scaled, 0)

        self.assertEqual(layered.up.number_of_nodes(), 1)
        self.assertEqual(layered.sources[0], {0: (0, 0)})
        self.assertEqual(layered.sinks[0], {4: (2, 4)})
        self.assertEqual(layered.down[(1, 2)][(2, 4)]['id'], 1)

    def test_unrelated_labels_leave_no_pairs(self):
        tight = path_instance().with_demands([Demand(source=0, sink=2, dist_budget=1)])
        scaled = scale_graph(tight, Fraction(1, 2))

        layered = build_layered(scaled, 1)

        self.assertEqual(layered.pairs, [])

    def test_vertex_cap(self):
        with self.assertRaises(LayerRangeOverflow) as context:
            build_layered(self.scaled, 1, max_vertices=1)
        self.assertIn("exceeds 1 vertices", str(context.exception))

    def test_root_out_of_range(self):
        with self.assertRaises(ValueError):
            build_layered(self.scaled, 5)


if __name__ == '__main__':
    unittest.main()
