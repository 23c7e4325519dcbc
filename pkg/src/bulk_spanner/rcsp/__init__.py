from bulk_spanner.rcsp.labels import ParetoLabel, pareto_paths
from bulk_spanner.rcsp.patterns import count_valid_patterns, enumerate_valid_patterns, pattern_bound, scale_weights
from bulk_spanner.rcsp.query import RcspArc, RcspQuery, RcspResult, ScaledQuery
from bulk_spanner.rcsp.solver import (
    build_table,
    path_consumption,
    resource_condition,
    solve,
    solve_exact_integer,
    solve_one_rational,
)
from bulk_spanner.rcsp.table import INFINITY, DensePatternTable, SparsePatternTable
