"""Cross-strategy comparison and payoff-parameter sweeps.

The three-intersection family r = (0, n, 4) with motel payoff 1 is a
reconstruction: the three published optimal payoffs 2, (4+n)/3 and n/2,
inverted against the vertex payoff formulas, pin the exit payoffs, and
the motel payoff is carried over from the two-intersection problem. CLI
sweep output labels it as reconstructed.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .model import (
    DeterministicOptimum,
    PayoffSchedule,
    ProbabilisticOptimum,
    deterministic_optimum,
    expected_payoff,
    probabilistic_optimum,
)
from .polytope import PolytopeVertex, enumerate_vertices, optimal_vertex
from .quantum import StateVector, state_from_vertex

SCHEDULE_PROVENANCE = "reconstructed from stated optima"

# Bisection width for locating where two vertex payoffs cross.
CROSSOVER_TOL = 1e-6


class QuantumOptimum(NamedTuple):
    payoff: float
    vertex_id: tuple[int, ...]
    state: StateVector


@dataclass(frozen=True)
class StrategyComparison:
    """The three optima for one schedule: deterministic, coin, entangled."""

    schedule: PayoffSchedule
    deterministic: DeterministicOptimum
    probabilistic: ProbabilisticOptimum
    quantum: QuantumOptimum


@dataclass(frozen=True)
class SweepRow:
    n: float
    deterministic: float
    probabilistic: float
    quantum: float
    optimal_vertex_id: tuple[int, ...]


@dataclass(frozen=True)
class SweepCurve:
    n_values: tuple[float, ...]
    rows: tuple[SweepRow, ...]


@dataclass(frozen=True)
class Crossover:
    n: float
    vertex_before: tuple[int, ...]
    vertex_after: tuple[int, ...]


def compare(
    schedule: PayoffSchedule, vertices: list[PolytopeVertex] | None = None
) -> StrategyComparison:
    """Solve all three strategy families for one schedule. The quantum entry
    carries the tie-broken optimal vertex and a state realizing it."""
    if vertices is None:
        vertices = enumerate_vertices(schedule.n)
    vertex, payoff = optimal_vertex(schedule, vertices)
    return StrategyComparison(
        schedule=schedule,
        deterministic=deterministic_optimum(schedule),
        probabilistic=probabilistic_optimum(schedule),
        quantum=QuantumOptimum(payoff, vertex.vertex_id, state_from_vertex(vertex)),
    )


def three_intersection_schedule(n: float) -> PayoffSchedule:
    """Reconstructed three-intersection schedule r = (0, n, 4), motel 1."""
    if n < 0:
        raise ValueError(f"payoff parameter must be nonnegative, got {n}")
    return PayoffSchedule((0.0, float(n), 4.0), 1.0)


def sweep(n_min: float, n_max: float, step: float) -> SweepCurve:
    """Evaluate all three optima on a grid over the payoff parameter n.

    Vertices are enumerated once and reused across grid points.
    """
    if not 0 <= n_min < n_max:
        raise ValueError(f"need 0 <= n_min < n_max, got [{n_min}, {n_max}]")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    count = int(math.floor((n_max - n_min) / step + 1e-9))
    grid = [n_min + k * step for k in range(count + 1)]

    vertices = enumerate_vertices(3)
    rows = []
    for n in grid:
        schedule = three_intersection_schedule(n)
        vertex, quantum_payoff = optimal_vertex(schedule, vertices)
        rows.append(
            SweepRow(
                n=n,
                deterministic=deterministic_optimum(schedule).payoff,
                probabilistic=probabilistic_optimum(schedule).payoff,
                quantum=quantum_payoff,
                optimal_vertex_id=vertex.vertex_id,
            )
        )
    return SweepCurve(tuple(grid), tuple(rows))


def crossovers(curve: SweepCurve) -> list[Crossover]:
    """Grid intervals where the optimal vertex changes, refined by bisection
    on the payoff difference of the two competing vertices (both linear in
    n) to within CROSSOVER_TOL."""
    if len(curve.rows) < 2:
        raise ValueError("curve needs at least two rows")
    by_id = {v.vertex_id: v for v in enumerate_vertices(3)}
    result = []
    for prev, cur in zip(curve.rows, curve.rows[1:]):
        if prev.optimal_vertex_id == cur.optimal_vertex_id:
            continue
        before = by_id[prev.optimal_vertex_id]
        after = by_id[cur.optimal_vertex_id]

        def gap(n: float) -> float:
            schedule = three_intersection_schedule(n)
            return expected_payoff(before.dist, schedule) - expected_payoff(after.dist, schedule)

        lo, hi = prev.n, cur.n
        while hi - lo > CROSSOVER_TOL:
            mid = 0.5 * (lo + hi)
            if gap(mid) >= 0.0:
                lo = mid
            else:
                hi = mid
        result.append(
            Crossover(0.5 * (lo + hi), prev.optimal_vertex_id, cur.optimal_vertex_id)
        )
    return result
