"""Exact-arithmetic EF1 allocations and price-of-EF1 search for indivisible
goods under ternary valuations.
"""

from .core import (
    Allocation,
    BadShape,
    IndexOutOfRange,
    InputError,
    Instance,
    NegativeValue,
    NotNormalized,
    NotTernary,
    Rational,
    ShapeMismatch,
    TernaryProfile,
    WorthlessItem,
    bundle_value,
    canonical_scaling,
    classify_ternary,
    is_normalized,
    validate_instance,
)
from .fairness import Ef1Report, is_ef1, is_envy_free, social_welfare
from .matching import (
    EmptyGraph,
    Matching,
    TooManyAgents,
    ValuationGraph,
    enumerate_max_weight_matchings,
    non_wasteful_max_matching,
)
from .algorithms import (
    AlgorithmTrace,
    NotThreeAgents,
    NotTwoAgents,
    TraceMismatch,
    m2rr,
    replay_trace,
    rmm,
    round_robin,
    run_algorithm,
)
from .generators import (
    EnumerationParams,
    NotPerfectSquare,
    enumerate_ternary_instances,
    gen_intro_example,
    gen_sqrt_n_instance,
    gen_three_agent_tight,
    gen_two_agent_tight,
)
from .oracle import (
    BudgetExceeded,
    PriceReport,
    SearchReport,
    algorithm_ratio,
    max_ef1_welfare,
    optimal_social_welfare,
    price_of_ef1,
    worst_case_search,
)

__version__ = "0.1.0"
