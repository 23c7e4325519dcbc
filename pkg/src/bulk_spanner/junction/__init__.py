from bulk_spanner.junction.height import LeveledGraph, Witness, height_reduce, thin_frontier
from bulk_spanner.junction.label_cover import (
    LabelCoverInstance,
    LabelCoverSolution,
    round_on_tree,
    solve_label_cover,
    to_label_cover,
)
from bulk_spanner.junction.layered import LayeredGraph, build_layered
from bulk_spanner.junction.pipeline import JunctionResult, extract_paths, junction_at_root, min_density_junction_tree
from bulk_spanner.junction.scaling import ScaledGraph, scale_graph
from bulk_spanner.junction.tuple_tree import ReducedTree, TerminalOption, TreeNode, build_tuple_trees, leaf_walk
