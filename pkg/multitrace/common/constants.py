"""
Constants for the multitrace library.

All CAPS variables - tolerances, budgets, defaults.
Single source of truth for numerical configuration.
"""

# Tracker defaults
INITIAL_STEP = 0.1
MIN_STEP = 1e-7
NEWTON_TOL = 1e-10
MAX_NEWTON_ITERS = 10
CORRECTOR_ITERS = 3
DIVERGENCE_NORM = 1e8
ESCAPE_NORM = 1e2  # a failed path must end above this norm to count as diverged
ESCAPE_ZONE = 0.9  # "near t=1"
ESCAPE_GROWTH = 10.0  # and must have grown this much since entering the zone
MAX_STEPS = 10000
STEP_GROWTH_STREAK = 5  # consecutive accepted steps before doubling
SINGULAR_CONDITION = 1e12

# Witness sets
RESIDUAL_TOL = 1e-8  # witness point on system + slice
DEDUP_TOL = 1e-6  # max-norm separation of distinct points
MATCH_TOL = 1e-6  # monodromy nearest-neighbour matching
MAX_FAILED_FRACTION = 0.10  # above this, a witness computation is not generic

# Monodromy
MONODROMY_BUDGET = 30
STABLE_LOOPS = 5
MAX_LOOP_FAILURES = 3

# Trace test
TRACE_TOL = 1e-6
TRACE_TAUS = (0.0, -1.0, -2.0)
PENCIL_RETRIES = 3  # fresh pencils drawn before trace sampling gives up

# Multihomogeneous
RANK_TOL = 1e-8
AMBIGUITY_BAND = (0.1, 10.0)
MERGE_RETRIES = 3
PRODUCT_TOL = 1e-6

# CLI
DEFAULT_SEED = 42
