from bulk_spanner.core.evaluation import (
    DemandSplit,
    SplitPart,
    condition_numbers,
    cost_breakdown,
    edge_loads,
    is_theta_feasible,
    is_walk,
    junction_cost,
    path_length,
    path_metric,
    relaxed_budget,
    remove_cycles,
    sign,
    solution_cost,
    split_demands,
    strict_theta,
    walk_vertices,
)
from bulk_spanner.core.validation import ensure_valid, find_negative_cycle, shortest_lengths, validate_instance
