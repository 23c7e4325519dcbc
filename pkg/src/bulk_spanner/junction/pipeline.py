import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from bulk_spanner.core.evaluation import is_theta_feasible, is_walk, junction_cost, remove_cycles
from bulk_spanner.errors import CapExceededError, NoResolvablePairs, ReductionChainError
from bulk_spanner.junction.height import height_reduce
from bulk_spanner.junction.label_cover import (
    LabelCoverInstance,
    LabelCoverSolution,
    solve_label_cover,
    to_label_cover,
)
from bulk_spanner.junction.layered import build_layered
from bulk_spanner.junction.scaling import ScaledGraph, scale_graph
from bulk_spanner.junction.tuple_tree import build_tuple_trees, leaf_walk
from bulk_spanner.models.instance import Instance
from bulk_spanner.models.reports import JunctionSettings, LpSettings
from bulk_spanner.models.solution import JunctionTree

logger = logging.getLogger(__name__)


@dataclass
class JunctionResult:
    root: int
    tree: JunctionTree
    cost: Fraction
    label_cover: LabelCoverSolution

    @property
    def resolved(self):
        return self.tree.pairs

    @property
    def density(self) -> Fraction:
        return self.cost / len(self.resolved)


def extract_paths(inst: Instance, lc: LabelCoverInstance, solution: LabelCoverSolution,
                  theta: Fraction) -> JunctionTree:
    """
    Map the chosen terminal options back to cycle-free s ~> r and r ~> t paths.

    Raises:
        ReductionChainError: If a recovered walk does not connect its endpoints
            or breaks the theta-relaxed budget.
    """
    tree = lc.tree
    root = tree.layered.root
    in_paths: Dict[int, Tuple[int, ...]] = {}
    out_paths: Dict[int, Tuple[int, ...]] = {}
    for pair, (in_arc, out_arc) in sorted(solution.choices.items()):
        demand = inst.demands[pair]
        in_walk = leaf_walk(tree, lc.options[in_arc])
        out_walk = leaf_walk(tree, lc.options[out_arc])
        if not is_walk(inst, demand.source, root, in_walk):
            raise ReductionChainError(f"Pair {pair}: recovered in-path {in_walk} does not reach root {root}")
        if not is_walk(inst, root, demand.sink, out_walk):
            raise ReductionChainError(f"Pair {pair}: recovered out-path {out_walk} does not leave root {root}")
        in_paths[pair] = remove_cycles(inst, demand.source, in_walk)
        out_paths[pair] = remove_cycles(inst, root, out_walk)
        if not is_theta_feasible(inst, pair, in_paths[pair] + out_paths[pair], theta):
            raise ReductionChainError(f"Pair {pair}: recovered route breaks its relaxed budget")
    return JunctionTree(root=root, in_paths=in_paths, out_paths=out_paths, theta=theta)


def junction_at_root(
    scaled: ScaledGraph,
    root: int,
    rng: np.random.Generator,
    height: int = 2,
    pairs: Optional[Iterable[int]] = None,
    settings: Optional[JunctionSettings] = None,
    lp_settings: Optional[LpSettings] = None,
) -> Optional[JunctionResult]:
    """Full reduction chain at one root; None when no pair is resolvable there."""
    settings = settings or JunctionSettings()
    layered = build_layered(scaled, root, pairs, max_vertices=settings.max_layered_vertices)
    if not layered.pairs:
        return None
    up = height_reduce(layered, 'up', height, thinning=settings.pareto_thinning)
    down = height_reduce(layered, 'down', height, thinning=settings.pareto_thinning)
    tree = build_tuple_trees(layered, up, down, cap=settings.max_tree_nodes)
    lc = to_label_cover(tree)
    solution = solve_label_cover(lc, rng, settings, lp_settings)
    if solution.is_empty:
        return None
    inst = scaled.inst
    junction = extract_paths(inst, lc, solution, scaled.theta)
    return JunctionResult(root=root, tree=junction, cost=junction_cost(inst, junction), label_cover=solution)


def min_density_junction_tree(
    inst: Instance,
    theta: Fraction,
    rng: np.random.Generator,
    height: int = 2,
    pairs: Optional[Iterable[int]] = None,
    roots: Optional[Iterable[int]] = None,
    settings: Optional[JunctionSettings] = None,
    lp_settings: Optional[LpSettings] = None,
) -> JunctionResult:
    """
    Lowest-density theta-relaxed junction tree over every root (or the given
    roots). A root whose reduction exceeds a size cap is skipped.

    Raises:
        NoResolvablePairs: If no root resolves any pair.
    """
    scaled = scale_graph(inst, theta)
    pairs = None if pairs is None else sorted(pairs)
    best: Optional[JunctionResult] = None
    for root in (range(inst.n) if roots is None else roots):
        try:
            result = junction_at_root(scaled, root, rng, height, pairs, settings, lp_settings)
        except CapExceededError as e:
            logger.warning("Skipping root %d: %s", root, e)
            continue
        if result is None:
            logger.debug("Root %d resolves no pair", root)
            continue
        logger.debug("Root %d: %d pairs at density %s", root, len(result.resolved), result.density)
        if best is None or (result.density, -len(result.resolved)) < (best.density, -len(best.resolved)):
            best = result
    if best is None:
        raise NoResolvablePairs("No junction tree resolves a pair at any root")
    logger.info("Junction tree at root %d resolves %d pairs at density %s",
                best.root, len(best.resolved), float(best.density))
    return best
