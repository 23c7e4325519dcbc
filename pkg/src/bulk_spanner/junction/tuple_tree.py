"""
Tuple trees over a pair of leveled graphs.

A node on level i is a tuple (r, v_1, ..., v_i) together with the parallel
edge chosen at every step, so each node has exactly one parent. The up tree
is read leaf-to-root, the down tree root-to-leaf. Terminal copies hang off
every leaf whose last vertex is their attachment copy, at upfront cost
eta * Dem, eta being the delta-sum along the leaf's unique root path; no
other arc keeps a pay-per-use cost.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from bulk_spanner.errors import TreeSizeOverflow
from bulk_spanner.junction.height import LeveledGraph, Side, Witness
from bulk_spanner.junction.layered import LayeredGraph, Vertex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TreeNode:
    parent: int
    level: int
    vertex: Vertex
    witness: Optional[Witness]
    eta: Fraction

    @property
    def sigma(self) -> Fraction:
        return self.witness.sigma if self.witness is not None else Fraction(0)


@dataclass(frozen=True)
class TerminalOption:
    """Terminal copy of `pair` at layer `label`, attached to tree node `leaf`."""

    pair: int
    side: Side
    label: int
    leaf: int
    cost: Fraction


@dataclass
class ReducedTree:
    layered: LayeredGraph
    up: List[TreeNode]
    down: List[TreeNode]
    in_options: Dict[int, List[TerminalOption]] = field(default_factory=dict)
    out_options: Dict[int, List[TerminalOption]] = field(default_factory=dict)

    def nodes(self, side: Side) -> List[TreeNode]:
        return self.up if side == 'up' else self.down

    def root_path(self, side: Side, node: int) -> List[int]:
        """Node indices from `node` up to (excluding) the root node 0."""
        nodes = self.nodes(side)
        path = []
        while node > 0:
            path.append(node)
            node = nodes[node].parent
        return path

    @property
    def size(self) -> int:
        return len(self.up) + len(self.down)


def _grow(leveled: LeveledGraph, cap: int, used: int) -> List[TreeNode]:
    nodes = [TreeNode(parent=-1, level=0, vertex=leveled.levels[0][0], witness=None, eta=Fraction(0))]
    frontier = [0]
    for level in range(1, leveled.height + 1):
        candidates = leveled.levels[level]
        next_frontier = []
        for index in frontier:
            parent = nodes[index]
            for vertex in candidates:
                for witness in leveled.parallel(vertex, parent.vertex):
                    if len(nodes) + used >= cap:
                        raise TreeSizeOverflow(f"Tuple trees exceed {cap} nodes", size=len(nodes) + used + 1, cap=cap)
                    nodes.append(TreeNode(parent=index, level=level, vertex=vertex, witness=witness,
                                          eta=parent.eta + witness.delta))
                    next_frontier.append(len(nodes) - 1)
        frontier = next_frontier
    return nodes


def _options(tree_nodes: List[TreeNode], height: int, side: Side, terminals: Dict[int, Dict[int, Vertex]],
             demands: Dict[int, int]) -> Dict[int, List[TerminalOption]]:
    leaves: Dict[Vertex, List[int]] = {}
    for index, node in enumerate(tree_nodes):
        if node.level == height:
            leaves.setdefault(node.vertex, []).append(index)
    options: Dict[int, List[TerminalOption]] = {}
    for pair, copies in terminals.items():
        found = []
        for label, vertex in sorted(copies.items()):
            for leaf in leaves.get(vertex, []):
                found.append(TerminalOption(pair=pair, side=side, label=label, leaf=leaf,
                                            cost=tree_nodes[leaf].eta * demands[pair]))
        options[pair] = found
    return options


def build_tuple_trees(layered: LayeredGraph, up: LeveledGraph, down: LeveledGraph, cap: int = 60_000) -> ReducedTree:
    """
    Raises:
        TreeSizeOverflow: If the two trees together exceed `cap` nodes.
    """
    if up.height != down.height:
        raise ValueError(f"Leveled graphs disagree on height: {up.height} != {down.height}")
    up_nodes = _grow(up, cap, 0)
    down_nodes = _grow(down, cap, len(up_nodes))
    demands = {p: layered.scaled.inst.demands[p].demand for p in layered.relation}
    tree = ReducedTree(
        layered=layered,
        up=up_nodes,
        down=down_nodes,
        in_options=_options(up_nodes, up.height, 'up', layered.sources, demands),
        out_options=_options(down_nodes, down.height, 'down', layered.sinks, demands),
    )
    logger.debug("Tuple trees at root %d: %d up and %d down nodes", layered.root, len(up_nodes), len(down_nodes))
    return tree


def leaf_walk(tree: ReducedTree, option: TerminalOption) -> Tuple[int, ...]:
    """
    Original edge ids of the route part an option stands for: terminal to
    root on the up side, root to terminal on the down side.
    """
    nodes = tree.nodes(option.side)
    path = tree.root_path(option.side, option.leaf)
    if option.side == 'down':
        path.reverse()
    edges: List[int] = []
    for index in path:
        edges.extend(nodes[index].witness.edges)
    return tuple(edges)


def related_options(tree: ReducedTree, pair: int) -> Set[Tuple[int, int]]:
    """Index pairs (in option, out option) whose labels are related."""
    relation = tree.layered.relation.get(pair, set())
    return {
        (a, b)
        for a, left in enumerate(tree.in_options.get(pair, []))
        for b, right in enumerate(tree.out_options.get(pair, []))
        if (left.label, right.label) in relation
    }
