"""Strategies for the absent-minded driver decision problem: classical
solvers, indistinguishability-polytope vertex enumeration, entangled-state
construction and verification, and payoff-sweep analysis."""

from .model import (
    DeterministicAction,
    DeterministicOptimum,
    InstructionArray,
    PayoffSchedule,
    ProbabilisticOptimum,
    StrategyDistribution,
    deterministic_optimum,
    expected_payoff,
    iid_distribution,
    payoff_of_array,
    probabilistic_optimum,
    probabilistic_payoff,
)
from .polytope import (
    ConstraintSystem,
    PolytopeVertex,
    build_constraints,
    complement,
    enumerate_vertices,
    optimal_vertex,
    verify_membership,
)
from .quantum import (
    ReducedDensityMatrix,
    StateVector,
    born_distribution,
    load_state,
    product_state,
    reduced_density,
    sample_outcomes,
    save_state,
    state_from_vertex,
    verify_indistinguishability,
)
from .analysis import (
    Crossover,
    StrategyComparison,
    SweepCurve,
    SweepRow,
    compare,
    crossovers,
    sweep,
    three_intersection_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "DeterministicAction",
    "DeterministicOptimum",
    "InstructionArray",
    "PayoffSchedule",
    "ProbabilisticOptimum",
    "StrategyDistribution",
    "deterministic_optimum",
    "expected_payoff",
    "iid_distribution",
    "payoff_of_array",
    "probabilistic_optimum",
    "probabilistic_payoff",
    "ConstraintSystem",
    "PolytopeVertex",
    "build_constraints",
    "complement",
    "enumerate_vertices",
    "optimal_vertex",
    "verify_membership",
    "ReducedDensityMatrix",
    "StateVector",
    "born_distribution",
    "load_state",
    "product_state",
    "reduced_density",
    "sample_outcomes",
    "save_state",
    "state_from_vertex",
    "verify_indistinguishability",
    "Crossover",
    "StrategyComparison",
    "SweepCurve",
    "SweepRow",
    "compare",
    "crossovers",
    "sweep",
    "three_intersection_schedule",
    "__version__",
]
