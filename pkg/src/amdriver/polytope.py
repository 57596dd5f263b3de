"""Indistinguishability polytope over instruction arrays.

A strategy distribution hides the driver's location only when the exit
marginal u(i) is the same at every intersection. Together with
normalization that carves a polytope out of the probability simplex over
the 2^N instruction arrays. Its vertices are the candidate optimal
strategies: every linear payoff is maximized at one of them. Vertices are
found as basic feasible solutions of the constraint system: a support of
at most N arrays whose constraint columns are linearly independent and
whose unique solution is exact and strictly positive.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from .model import InstructionArray, PayoffSchedule, StrategyDistribution, expected_payoff

# Subset enumeration over 2^N columns; the cap keeps a request bounded.
MAX_INTERSECTIONS = 6

RESIDUAL_TOL = 1e-9
WEIGHT_TOL = 1e-9

# Supports scanned per vectorized batch.
_CHUNK = 200_000


@dataclass(frozen=True)
class ConstraintSystem:
    """Equality constraints on weights over the 2^N instruction arrays.

    Row 0 is normalization (all ones). Row k (1 <= k <= N-1) encodes
    u(k+1) - u(1) = 0: the column of array v contributes v(k+1) - v(1).
    A distribution is in the polytope iff rows @ weights == rhs with all
    weights nonnegative.
    """

    n: int
    rows: np.ndarray
    rhs: np.ndarray


@dataclass(frozen=True)
class PolytopeVertex:
    """An extreme point of the indistinguishability polytope.

    vertex_id is the sorted tuple of support encodings; the support
    determines the weights uniquely, so the id is canonical.
    """

    dist: StrategyDistribution
    vertex_id: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.dist.n


class OptimalVertex(NamedTuple):
    vertex: PolytopeVertex
    payoff: float


def _check_cap(n: int, n_max: int) -> None:
    if not 1 <= n <= n_max:
        raise ValueError(f"intersections must lie in [1, {n_max}], got {n}")


def build_constraints(n: int, *, n_max: int = MAX_INTERSECTIONS) -> ConstraintSystem:
    """Constraint system for N intersections; for N=1 only normalization."""
    _check_cap(n, n_max)
    d = 2**n
    rows = np.zeros((n, d))
    rows[0] = 1.0
    for code in range(d):
        bits = InstructionArray.from_int(code, n).bits
        for k in range(1, n):
            rows[k, code] = bits[k] - bits[0]
    rhs = np.zeros(n)
    rhs[0] = 1.0
    return ConstraintSystem(n, rows, rhs)


def _snap_weights(support: list[int], weights: np.ndarray, n: int) -> list[float]:
    """Replace weights by nearby small-denominator rationals when those
    satisfy the constraints exactly; otherwise keep the solver output."""
    cap = 2 * n * 2**n
    fracs = [Fraction(float(w)).limit_denominator(cap) for w in weights]
    if any(abs(float(f) - w) >= 1e-9 for f, w in zip(fracs, weights)):
        return [float(w) for w in weights]
    if sum(fracs) != 1:
        return [float(w) for w in weights]
    bit_rows = [InstructionArray.from_int(code, n).bits for code in support]
    for k in range(1, n):
        if sum(f * (bits[k] - bits[0]) for f, bits in zip(fracs, bit_rows)) != 0:
            return [float(w) for w in weights]
    return [float(f) for f in fracs]


def _support_batches(d: int, k: int) -> Iterator[np.ndarray]:
    """Size-k subsets of range(d) in lexicographic order, as (m, k) index
    arrays of at most _CHUNK rows each."""
    combos = itertools.combinations(range(d), k)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, _CHUNK)), dtype=np.intp
        )
        if flat.size == 0:
            return
        yield flat.reshape(-1, k)


def enumerate_vertices(n: int, *, n_max: int = MAX_INTERSECTIONS) -> list[PolytopeVertex]:
    """All vertices of the polytope, sorted by vertex_id.

    Scans every support subset of 1..N arrays. Per same-size batch: the
    restricted columns are independent (unique solution) iff their Gram
    determinant is nonzero, an exact test here because Gram matrices of
    integer columns are integer; for independent supports the candidate
    weights solve the normal equations, and the squared solve residual is
    1 - sum(weights) because the rhs is the unit vector selecting the
    all-ones normalization row. Supports whose candidate looks exact and
    strictly positive are rare and get confirmed one at a time with a
    direct solve before their weights are snapped to small rationals.
    """
    system = build_constraints(n, n_max=n_max)
    a = system.rows
    rhs = system.rhs
    d = 2**n
    a_t = np.ascontiguousarray(a.T)

    found: dict[tuple[int, ...], PolytopeVertex] = {}

    def confirm(support: tuple[int, ...]) -> None:
        sub = a[:, support]
        weights, _, rank, _ = np.linalg.lstsq(sub, rhs, rcond=None)
        if rank < len(support):
            return
        if np.linalg.norm(sub @ weights - rhs) > RESIDUAL_TOL:
            return
        if weights.min() <= WEIGHT_TOL:
            return
        snapped = _snap_weights(support, weights, n)
        dist = StrategyDistribution(
            {InstructionArray.from_int(code, n): w for code, w in zip(support, snapped)}
        )
        found.setdefault(support, PolytopeVertex(dist, support))

    for k in range(1, n + 1):
        for batch in _support_batches(d, k):
            cols = a_t[batch]
            gram = cols @ cols.transpose(0, 2, 1)
            independent = np.abs(np.linalg.det(gram)) > 0.5
            if not independent.any():
                continue
            batch = batch[independent]
            weights = np.linalg.solve(gram[independent], np.ones((len(batch), k, 1)))[..., 0]
            candidate = (np.abs(1.0 - weights.sum(axis=1)) <= 1e-12) & (
                weights.min(axis=1) > WEIGHT_TOL
            )
            for support in batch[candidate]:
                confirm(tuple(int(code) for code in support))

    return [found[key] for key in sorted(found)]


def optimal_vertex(
    schedule: PayoffSchedule, vertices: list[PolytopeVertex]
) -> OptimalVertex:
    """Vertex maximizing expected payoff.

    Distinct vertices can tie exactly (two equal-weight pair supports pay
    the same under any first-exit schedule symmetric in their exits), so
    ties within RESIDUAL_TOL resolve to the lexicographically largest
    vertex_id; that reports the canonical entangled-state family for the
    three-intersection payoff sweep.
    """
    if not vertices:
        raise ValueError("vertex list is empty")
    if any(v.n != schedule.n for v in vertices):
        raise ValueError("vertex dimensions do not match the schedule")
    payoffs = [expected_payoff(v.dist, schedule) for v in vertices]
    best = max(payoffs)
    winner = max(
        (v for v, p in zip(vertices, payoffs) if p >= best - RESIDUAL_TOL),
        key=lambda v: v.vertex_id,
    )
    return OptimalVertex(winner, expected_payoff(winner.dist, schedule))


def verify_membership(dist: StrategyDistribution, n: int) -> bool:
    """True iff the distribution hides the driver's location: all exit
    marginals equal within RESIDUAL_TOL (weights are valid by construction
    of StrategyDistribution)."""
    if dist.n != n:
        raise ValueError(f"distribution has {dist.n} intersections, expected {n}")
    u = dist.exit_marginals()
    return float(u.max() - u.min()) <= RESIDUAL_TOL


def complement(vertex: PolytopeVertex) -> PolytopeVertex:
    """Flip every bit of every support array, keeping the weights. The
    constraint rows are invariant up to sign under the flip, so the result
    is again a vertex."""
    weights = {v.complement(): w for v, w in vertex.dist.weights.items()}
    dist = StrategyDistribution(weights)
    vertex_id = tuple(sorted(v.to_int() for v in weights))
    return PolytopeVertex(dist, vertex_id)
