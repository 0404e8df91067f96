"""Exact counterfactual-harm bounds, decision rules and transitivity audits."""

__version__ = "0.1.0"

from .audit import Counterfactual, Interventionist, audit_scenario, detect_cycles, pairwise_matrix
from .bounds import (
    IntervalBound,
    benefit_bounds,
    harm_bounds,
    objective_bounds,
    tie_bounds,
    two_point_strata,
)
from .core import (
    Marginal,
    OutcomeSpace,
    Scenario,
    Utility,
    make_marginal,
    make_outcome_space,
    make_utility,
    parse_rational,
    render_rational,
    validate_scenario,
)
from .coupling import (
    Coupling,
    antimonotone_coupling,
    comonotone_coupling,
    coupling_stats,
    make_coupling,
)
from .decisions import (
    Decision,
    Verdict,
    WeightedRule,
    benefit_threshold,
    counterfactual_verdict,
    expected_utility,
    interventionist_verdict,
)
from .joint import MultiwayJoint, make_multiway_joint, pairwise_from_joint, verify_bounds_contain
from .simulate import sample_population, simulate_rct
from .utility_lab import (
    Infeasible,
    UtilitySearchProblem,
    find_utility_for_ordering,
    rank_by_utility,
    verify_utility_realizes,
)
