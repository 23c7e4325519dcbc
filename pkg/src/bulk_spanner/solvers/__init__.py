from bulk_spanner.solvers.dispatch import SolveOutcome, solve
from bulk_spanner.solvers.greedy import greedy_junction, solve_k, solve_single_source
from bulk_spanner.solvers.n45 import solve_n45
from bulk_spanner.solvers.tau import guess_tau, initial_tau, single_pair_cost
from bulk_spanner.solvers.thick import ThickResult, resolve_thick, shortest_cheap_half
