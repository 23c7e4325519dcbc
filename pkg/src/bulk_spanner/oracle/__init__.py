from bulk_spanner.oracle.brute_force import (
    OracleJunction,
    anti_spanner_bound,
    brute_force_min_density_junction_tree,
    brute_force_optimum,
    brute_force_rcsp,
    cheap_feasible_paths,
    enumerate_anti_spanners,
    local_graph,
)
from bulk_spanner.oracle.catalog import CatalogPath, PathCatalog, enumerate_feasible_paths, simple_paths
