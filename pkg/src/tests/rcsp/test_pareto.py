import unittest

import networkx as nx

from bulk_spanner.rcsp import pareto_paths


class TestParetoPaths(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(pareto_paths)

    def setUp(self):
        self.graph = nx.DiGraph()
        self.graph.add_edge(0, 1, sigma=1, delta=5)
        self.graph.add_edge(1, 3, sigma=1, delta=5)
        self.graph.add_edge(0, 2, sigma=5, delta=1)
        self.graph.add_edge(2, 3, sigma=5, delta=1)
        self.graph.add_edge(0, 3, sigma=11, delta=11)

    def test_frontier_drops_dominated_paths(self):
        # Act
        frontier = pareto_paths(self.graph, 0)

        # Assert
        self.assertEqual(sorted(label.costs for label in frontier[3]), [(2, 10), (10, 2)])
        self.assertEqual(frontier[0][0].costs, (0, 0))

    def test_label_paths(self):
        frontier = pareto_paths(self.graph, 0)

        paths = {label.costs: label.nodes() for label in frontier[3]}

        self.assertEqual(paths[(2, 10)], [0, 1, 3])
        self.assertEqual(paths[(10, 2)], [0, 2, 3])

    def test_reverse_search(self):
        frontier = pareto_paths(self.graph, 3, reverse=True)

        paths = sorted(label.nodes() for label in frontier[0])

        self.assertEqual(paths, [[3, 1, 0], [3, 2, 0]])

    def test_single_criterion_is_shortest_path(self):
        frontier = pareto_paths(self.graph, 0, criteria=('sigma',))

        self.assertEqual([label.costs for label in frontier[3]], [(2,)])

    def test_unreachable_nodes_absent(self):
        self.graph.add_node(9)

        self.assertNotIn(9, pareto_paths(self.graph, 0))


if __name__ == '__main__':
    unittest.main()
