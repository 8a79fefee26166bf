"""Generalized NK policy-performance landscapes.

Random signed policy-target networks, budget-constrained hill climbing over
non-binary policy arrays, and ensemble experiments over budgets and model
parameters.
"""

__version__ = "0.1.0"

from .distributions import (
    DomainError,
    RngStream,
    ScaledBetaBinomialSpec,
    ScaledBetaSpec,
    alpha_tilde,
    beta_binomial_pmf,
    sample_scaled_beta,
    sample_scaled_beta_binomial,
)
from .experiments import (
    ConfigError,
    EnsembleResult,
    ExperimentConfig,
    budget_sweep,
    quartiles,
    run_ensemble,
    sensitivity_grid,
)
from .network import InteractionMatrix, NetworkConfig, build_network, density, indegrees
from .optimizer import (
    Landscape,
    Trajectory,
    brute_force_optimum,
    climb,
    feasible_neighbors,
    is_local_optimum,
    neighbors,
    step,
)
from .performance import (
    BudgetSpec,
    ImportanceWeights,
    PerformanceParams,
    cost,
    count_feasible,
    individual_performance,
    is_feasible,
    overall_performance,
    performance_array,
    sample_initial_condition,
    sample_weights,
)
