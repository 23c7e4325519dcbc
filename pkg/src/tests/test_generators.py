import unittest
from fractions import Fraction

import numpy as np
from pydantic import ValidationError

from bulk_spanner.core.evaluation import is_walk, path_length
from bulk_spanner.core.validation import find_negative_cycle, validate_instance
from bulk_spanner.generators import GENERATORS, EdgeSet, GeneratorParams, _budget, generate, repair_negative_cycles


class TestGenerate(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(generate)

    def test_every_kind_is_valid(self):
        for kind in GENERATORS:
            with self.subTest(kind=kind):
                # Act
                document = generate(kind, seed=3)
                inst = document.to_instance()

                # Assert
                self.assertTrue(validate_instance(inst).is_valid)
                self.assertEqual((inst.n, inst.k), (8, 3))
                self.assertEqual(document.metadata.kind, kind)
                self.assertEqual(document.metadata.seed, 3)

    def test_seeded(self):
        first = generate('random', {'n': 6, 'k': 2}, seed=11)
        second = generate('random', {'n': 6, 'k': 2}, seed=11)
        other = generate('random', {'n': 6, 'k': 2}, seed=12)

        self.assertEqual(first.model_dump(mode='json'), second.model_dump(mode='json'))
        self.assertNotEqual(first.model_dump(mode='json'), other.model_dump(mode='json'))

    def test_params_recorded(self):
        document = generate('hub-planted', {'n': 7, 'hubs': 2}, seed=1)

        params = document.metadata.params
        self.assertEqual(params['n'], 7)
        self.assertEqual(len(params['hubs']), 2)
        self.assertEqual(params['slack'], '1/2')

    def test_planted_routes_are_feasible(self):
        for kind in ('hub-planted', 'backbone-planted', 'single-source'):
            with self.subTest(kind=kind):
                document = generate(kind, seed=5)
                inst = document.to_instance()

                self.assertEqual(sorted(document.metadata.planted_routes), list(range(inst.k)))
                for pair, route in document.metadata.planted_routes.items():
                    demand = inst.demands[pair]
                    self.assertTrue(is_walk(inst, demand.source, demand.sink, route))
                    self.assertLessEqual(path_length(inst, route), demand.dist_budget)

    def test_hub_routes_are_free_upfront(self):
        document = generate('hub-planted', seed=2)
        inst = document.to_instance()

        for route in document.metadata.planted_routes.values():
            self.assertEqual(sum(inst.edges[e].sigma for e in route), 0)

    def test_negative_lengths_without_negative_cycles(self):
        inst = generate('negative-length', {'n': 7}, seed=4).to_instance()

        self.assertTrue(any(edge.length < 0 for edge in inst.edges))
        self.assertIsNone(find_negative_cycle(inst))

    def test_single_source(self):
        document = generate('single-source', {'k': 4}, seed=9)

        sources = {demand.source for demand in document.demands}
        self.assertEqual(sources, {document.metadata.params['source']})

    def test_demand_range(self):
        inst = generate('random', {'max_demand': 4, 'k': 5}, seed=0).to_instance()

        self.assertTrue(all(1 <= d.demand <= 4 for d in inst.demands))

    def test_unknown_kind(self):
        with self.assertRaises(ValueError) as context:
            generate('grid')
        self.assertIn("Unknown instance kind: grid", str(context.exception))

    def test_unknown_param(self):
        with self.assertRaises(ValidationError):
            generate('random', {'colour': 'blue'})

    def test_backbone_too_long(self):
        with self.assertRaises(ValueError) as context:
            generate('backbone-planted', {'n': 4})
        self.assertIn("too small for a backbone", str(context.exception))


class TestGeneratorParts(unittest.TestCase):

    def test_budgets_cover_length_and_are_nonzero(self):
        self.assertEqual(_budget(Fraction(2), Fraction(1, 2)), 3)
        self.assertEqual(_budget(Fraction(-3), Fraction(1, 2)), -1)
        self.assertEqual(_budget(Fraction(0), Fraction(1, 2)), 1)

    def test_edge_set_skips_loops_and_repeats(self):
        edges = EdgeSet(3)

        first = edges.add(0, 1, 1, 0, 0)

        self.assertIsNone(edges.add(2, 2, 1, 0, 0))
        self.assertEqual(edges.add(0, 1, 5, 5, 5), first)
        self.assertEqual(len(edges.edges), 1)

    def test_repair_negative_cycle(self):
        # Arrange
        edges = EdgeSet(2)
        edges.add(0, 1, -3, 0, 0)
        edges.add(1, 0, 1, 0, 0)

        # Act
        repairs = repair_negative_cycles(edges, np.random.default_rng(0), GeneratorParams())

        # Assert
        self.assertEqual(repairs, 1)
        self.assertEqual(edges.edges[0].length, -3)
        self.assertGreaterEqual(edges.edges[1].length, 3)
        self.assertIsNone(find_negative_cycle(edges.instance()))

    def test_unrepairable_cycle(self):
        edges = EdgeSet(2)
        edges.add(0, 1, -1, 0, 0)
        edges.add(1, 0, -1, 0, 0)

        with self.assertRaises(ValueError) as context:
            repair_negative_cycles(edges, np.random.default_rng(0), GeneratorParams())
        self.assertIn("no edge to re-roll", str(context.exception))


if __name__ == '__main__':
    unittest.main()
