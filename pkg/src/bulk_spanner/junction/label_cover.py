"""
Minimum-density Steiner label cover on a rooted tree.

Every non-root tuple-tree node contributes the arc to its parent, and every
terminal option an arc hanging off its leaf, so each arc has one parent
arc (or touches the root). A pair is satisfied by an edge set F when F
contains the root paths of an in-option and an out-option with related
labels.

Solving goes through the LP relaxation (arc variables x, normalised pair
variables y with sum y = 1, one cross-product block per staircase step of
the relation) followed by tree rounding: an arc is kept with probability
x_a / x_parent given its parent arc is kept, for every threshold on y and a
number of independent trials. A deterministic marginal-cost greedy over all
options is always a candidate as well; the lowest density wins.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import numpy as np

from bulk_spanner.junction.tuple_tree import ReducedTree, TerminalOption
from bulk_spanner.lpflow.simplex import LinearProgram, solve_lp
from bulk_spanner.models.reports import JunctionSettings, LpSettings

logger = logging.getLogger(__name__)

Option = Tuple[int, int]  # (label, terminal arc)


@dataclass
class LabelCoverInstance:
    costs: List[Fraction]
    parents: List[int]
    in_groups: Dict[int, List[Option]] = field(default_factory=dict)
    out_groups: Dict[int, List[Option]] = field(default_factory=dict)
    relation: Dict[int, Set[Tuple[int, int]]] = field(default_factory=dict)
    options: Dict[int, TerminalOption] = field(default_factory=dict)
    tree: Optional[ReducedTree] = None

    @property
    def arc_count(self) -> int:
        return len(self.costs)

    @property
    def pairs(self) -> List[int]:
        return sorted(p for p, related in self.relation.items()
                      if related and self.in_groups.get(p) and self.out_groups.get(p))

    def path(self, arc: int) -> List[int]:
        """The arc and its ancestors, up to the root."""
        path = []
        while arc >= 0:
            path.append(arc)
            arc = self.parents[arc]
        return path

    def depths(self) -> List[int]:
        depths = []
        for parent in self.parents:
            depths.append(0 if parent < 0 else depths[parent] + 1)
        return depths

    def cost_of(self, arcs) -> Fraction:
        return sum((self.costs[a] for a in arcs), Fraction(0))


@dataclass
class LabelCoverSolution:
    arcs: FrozenSet[int] = frozenset()
    choices: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    cost: Fraction = Fraction(0)

    @property
    def satisfied(self) -> List[int]:
        return sorted(self.choices)

    @property
    def is_empty(self) -> bool:
        return not self.choices

    @property
    def density(self) -> Optional[Fraction]:
        if self.is_empty:
            return None
        return self.cost / len(self.choices)


def to_label_cover(tree: ReducedTree) -> LabelCoverInstance:
    costs: List[Fraction] = []
    parents: List[int] = []
    arc_of: Dict[Tuple[str, int], int] = {}
    for side in ('up', 'down'):
        for index, node in enumerate(tree.nodes(side)):
            if index == 0:
                continue
            arc_of[(side, index)] = len(costs)
            costs.append(node.sigma)
            parents.append(arc_of.get((side, node.parent), -1))

    lc = LabelCoverInstance(costs=costs, parents=parents, tree=tree)
    for groups, by_pair in ((lc.in_groups, tree.in_options), (lc.out_groups, tree.out_options)):
        for pair, options in by_pair.items():
            group = []
            for option in options:
                arc = len(costs)
                costs.append(option.cost)
                parents.append(arc_of[(option.side, option.leaf)])
                lc.options[arc] = option
                group.append((option.label, arc))
            groups[pair] = group
    lc.relation = {p: set(related) for p, related in tree.layered.relation.items()}
    return lc


def _blocks(lc: LabelCoverInstance, pair: int) -> List[Tuple[List[int], List[int]]]:
    """
    Cross-product blocks covering the staircase relation: in-labels <= a
    against out-labels related to a; a block whose out-set repeats keeps
    only its largest a.
    """
    relation = lc.relation[pair]
    in_labels = sorted({label for label, _ in lc.in_groups[pair]})
    best_for_out: Dict[FrozenSet[int], int] = {}
    for a in in_labels:
        outs = frozenset(j for i, j in relation if i == a)
        if outs:
            best_for_out[outs] = max(a, best_for_out.get(outs, a))
    blocks = []
    for outs, a in sorted(best_for_out.items(), key=lambda item: item[1]):
        ins = [arc for label, arc in lc.in_groups[pair] if label <= a]
        out_arcs = [arc for label, arc in lc.out_groups[pair] if label in outs]
        if ins and out_arcs:
            blocks.append((ins, out_arcs))
    return blocks


def _relaxation(lc: LabelCoverInstance, pairs: List[int], settings: LpSettings) -> Optional[Tuple[np.ndarray, Dict[int, float]]]:
    program = LinearProgram()
    x = [program.add_variable(('x', a), cost, 1) for a, cost in enumerate(lc.costs)]
    y = {p: program.add_variable(('y', p), 0, 1) for p in pairs}
    program.add_eq({y[p]: 1 for p in pairs}, 1)
    for p in pairs:
        capacity: Dict[int, Dict[int, int]] = {}
        cover = {y[p]: 1}
        for b, (ins, outs) in enumerate(_blocks(lc, p)):
            z = program.add_variable(('z', p, b), 0, 1)
            cover[z] = -1
            for side, arcs in (('in', ins), ('out', outs)):
                flow = {z: 1}
                for arc in arcs:
                    phi = program.add_variable(('phi', p, b, side, arc), 0, 1)
                    flow[phi] = -1
                    for a in lc.path(arc):
                        capacity.setdefault(a, {})[phi] = 1
                program.add_le(flow, 0)
        program.add_le(cover, 0)
        for a, row in capacity.items():
            row = dict(row)
            row[x[a]] = -1
            program.add_le(row, 0)

    result = solve_lp(program, settings)
    if result.status != 'optimal':
        logger.warning("Label cover relaxation is %s; using the greedy candidate only", result.status)
        return None
    values = np.clip(np.array([float(result.x[j]) for j in x], dtype=float), 0.0, 1.0)
    return values, {p: float(result.x[y[p]]) for p in pairs}


def _greedy(lc: LabelCoverInstance, pairs: List[int], allowed: Optional[np.ndarray] = None) -> LabelCoverSolution:
    """
    Repeatedly add the pair whose cheapest related option pair has the
    smallest marginal cost; return the prefix of lowest density.
    """
    def usable(group: List[Option]) -> List[Option]:
        if allowed is None:
            return group
        return [(label, arc) for label, arc in group if allowed[arc]]

    candidates = {p: (usable(lc.in_groups[p]), usable(lc.out_groups[p])) for p in pairs}
    bought: Set[int] = set()
    order: List[Tuple[int, int, int]] = []
    costs: List[Fraction] = []
    total = Fraction(0)
    remaining = set(pairs)
    while remaining:
        best = None
        for p in sorted(remaining):
            ins, outs = candidates[p]
            cheapest_in: Dict[int, Tuple[Fraction, int]] = {}
            for label, arc in ins:
                marginal = lc.cost_of(a for a in lc.path(arc) if a not in bought)
                if label not in cheapest_in or marginal < cheapest_in[label][0]:
                    cheapest_in[label] = (marginal, arc)
            cheapest_out: Dict[int, Tuple[Fraction, int]] = {}
            for label, arc in outs:
                marginal = lc.cost_of(a for a in lc.path(arc) if a not in bought)
                if label not in cheapest_out or marginal < cheapest_out[label][0]:
                    cheapest_out[label] = (marginal, arc)
            for i, j in sorted(lc.relation[p]):
                if i in cheapest_in and j in cheapest_out:
                    marginal = cheapest_in[i][0] + cheapest_out[j][0]
                    if best is None or marginal < best[0]:
                        best = (marginal, p, cheapest_in[i][1], cheapest_out[j][1])
        if best is None:
            break
        marginal, p, in_arc, out_arc = best
        bought.update(lc.path(in_arc))
        bought.update(lc.path(out_arc))
        total += marginal
        order.append((p, in_arc, out_arc))
        costs.append(total)
        remaining.discard(p)

    if not order:
        return LabelCoverSolution()
    prefix = min(range(len(order)), key=lambda i: (costs[i] / (i + 1), -i))
    chosen = order[:prefix + 1]
    arcs = frozenset(a for _, i, o in chosen for a in lc.path(i) + lc.path(o))
    return LabelCoverSolution(arcs=arcs, choices={p: (i, o) for p, i, o in chosen}, cost=lc.cost_of(arcs))


def _trial_count(lc: LabelCoverInstance, settings: JunctionSettings) -> int:
    if settings.label_cover_trials is not None:
        return settings.label_cover_trials
    return max(1, min(settings.max_label_cover_trials, math.ceil(math.log2(max(lc.arc_count, 2))) ** 2))


def round_on_tree(lc: LabelCoverInstance, x: np.ndarray, scale: float, trials: int,
                  rng: np.random.Generator) -> np.ndarray:
    """
    Boolean (trials x arcs) matrix of kept arcs; an arc is kept only if its
    parent arc is.
    """
    scaled = np.minimum(1.0, x / scale)
    parents = np.array(lc.parents, dtype=int)
    has_parent = parents >= 0
    parent_values = np.where(has_parent, scaled[np.maximum(parents, 0)], 1.0)
    ratio = np.divide(scaled, parent_values, out=np.zeros_like(scaled), where=parent_values > 0)
    ratio = np.minimum(ratio, 1.0)

    draws = rng.random((trials, lc.arc_count))
    keep = np.zeros((trials, lc.arc_count), dtype=bool)
    depths = np.array(lc.depths(), dtype=int)
    for depth in range(int(depths.max()) + 1 if lc.arc_count else 0):
        idx = np.flatnonzero(depths == depth)
        hit = draws[:, idx] < ratio[idx]
        if depth > 0:
            hit &= keep[:, parents[idx]]
        keep[:, idx] = hit
    return keep


def solve_label_cover(lc: LabelCoverInstance, rng: np.random.Generator,
                      settings: Optional[JunctionSettings] = None,
                      lp_settings: Optional[LpSettings] = None) -> LabelCoverSolution:
    """Lowest-density candidate among the greedy and every rounding trial; empty when nothing is satisfiable."""
    settings = settings or JunctionSettings()
    lp_settings = lp_settings or LpSettings()
    pairs = lc.pairs
    if not pairs:
        return LabelCoverSolution()

    best = _greedy(lc, pairs)
    relaxation = _relaxation(lc, pairs, lp_settings)
    if relaxation is not None:
        x, y = relaxation
        trials = _trial_count(lc, settings)
        thresholds = sorted({v for v in y.values() if v > lp_settings.float_floor}, reverse=True)
        for threshold in thresholds:
            keep = round_on_tree(lc, x, threshold, trials, rng)
            for row in keep:
                candidate = _greedy(lc, pairs, allowed=row)
                if candidate.is_empty:
                    continue
                if best.is_empty or candidate.density < best.density:
                    best = candidate
        logger.debug("Label cover: %d pairs, %d arcs, %d thresholds x %d trials, best density %s",
                     len(pairs), lc.arc_count, len(thresholds), trials, best.density)
    return best
