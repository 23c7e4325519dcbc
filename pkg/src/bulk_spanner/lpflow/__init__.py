from bulk_spanner.lpflow.columns import PathColumn, cheapest_column
from bulk_spanner.lpflow.simplex import ExactSimplex, LinearProgram, LpResult, solve_lp, to_fraction
from bulk_spanner.lpflow.thin import (
    LpSolution,
    RoundingResult,
    check_thin_constraints,
    expected_sampling_cost,
    inclusion_probabilities,
    prune,
    round_solution,
    solve_thin_lp,
)
