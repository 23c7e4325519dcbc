import unittest
from fractions import Fraction
from functools import lru_cache

import networkx as nx

from bulk_spanner.core.evaluation import is_theta_feasible, is_walk, junction_cost, path_length
from bulk_spanner.core.streams import substream
from bulk_spanner.generators import generate
from bulk_spanner.junction import build_layered, min_density_junction_tree, scale_graph
from bulk_spanner.oracle import brute_force_min_density_junction_tree, simple_paths

SEEDS = range(8)


def small_instance(seed, n=5, k=2):
    return generate('random', {'n': n, 'k': k, 'max_length': 2}, seed=seed).to_instance()


def walk_counter(steps, root):
    """
    Number of distinct (vertex, label) sequences from (v, label) down to
    (root, 0) when step (a, b, d) moves from a to b and lowers the label by d;
    the root is only ever the last vertex.
    """

    @lru_cache(maxsize=None)
    def count(vertex, label):
        if vertex == root:
            return 1 if label == 0 else 0
        if label < 0:
            return 0
        return sum(count(b, label - d) for a, b, d in steps if a == vertex)

    return count


class TestScalingTransfer(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(scale_graph)

    def test_relatedness_carries_over_to_paths(self):
        theta = Fraction(1, 2)
        for seed in SEEDS:
            with self.subTest(seed=seed):
                inst = small_instance(seed)
                scaled = scale_graph(inst, theta)

                for pair, demand in enumerate(inst.demands):
                    for path in simple_paths(inst, demand.source, demand.sink):
                        scaled_length = scaled.scaled_path_length(path)
                        self.assertGreaterEqual(scaled_length, path_length(inst, path))
                        if path_length(inst, path) <= demand.dist_budget:
                            self.assertLessEqual(scaled_length, scaled.bound(pair))
                        if scaled_length <= scaled.bound(pair):
                            self.assertTrue(is_theta_feasible(inst, pair, path, theta))


class TestLayeredBijection(unittest.TestCase):

    def check_side(self, layered, side, steps, terminals):
        graph = layered.graph(side)
        count = walk_counter(frozenset(steps), layered.root)
        for pair, copies in terminals.items():
            for label, copy in copies.items():
                if copy == layered.root_vertex:
                    continue
                if side == 'up':
                    found = list(nx.all_simple_paths(graph, copy, layered.root_vertex))
                else:
                    found = list(nx.all_simple_paths(graph, layered.root_vertex, copy))
                self.assertEqual(len(found), count(copy[0], label), f"pair {pair} {side} label {label}")

    def test_layered_paths_match_exact_length_walks(self):
        for seed in SEEDS:
            with self.subTest(seed=seed):
                # Arrange
                inst = small_instance(seed, n=4)
                scaled = scale_graph(inst, Fraction(1))
                root = int(substream(seed, 'layered-root').integers(0, inst.n))

                # Act
                layered = build_layered(scaled, root)

                # Assert
                toward_root = {(e.tail, e.head, scaled.multipliers[i]) for i, e in enumerate(inst.edges)}
                from_root = {(e.head, e.tail, scaled.multipliers[i]) for i, e in enumerate(inst.edges)}
                self.check_side(layered, 'up', toward_root, layered.sources)
                self.check_side(layered, 'down', from_root, layered.sinks)

    def test_root_copy_only_at_label_zero(self):
        for seed in SEEDS:
            with self.subTest(seed=seed):
                inst = small_instance(seed, n=4)
                root = int(substream(seed, 'layered-root').integers(0, inst.n))

                layered = build_layered(scale_graph(inst, Fraction(1)), root)

                for graph in (layered.up, layered.down):
                    self.assertEqual([v for v in graph if v[0] == root], [layered.root_vertex])


class TestJunctionAgainstOracle(unittest.TestCase):

    def test_density_never_beats_exhaustive_search(self):
        theta = Fraction(1)
        for seed in range(6):
            with self.subTest(seed=seed):
                # Arrange
                inst = small_instance(seed, n=4)

                # Act
                result = min_density_junction_tree(inst, theta, substream(seed, 'junction'))
                oracle = brute_force_min_density_junction_tree(inst, theta)

                # Assert
                self.assertTrue(result.resolved)
                self.assertEqual(result.cost, junction_cost(inst, result.tree))
                for pair in result.resolved:
                    demand = inst.demands[pair]
                    route = result.tree.route(pair)
                    self.assertTrue(is_walk(inst, demand.source, demand.sink, route))
                    self.assertTrue(is_theta_feasible(inst, pair, route, theta))
                self.assertGreaterEqual(result.density, oracle.density)


if __name__ == '__main__':
    unittest.main()
