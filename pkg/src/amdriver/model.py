"""Core domain types and classical strategy solvers.

The decision problem: a driver passes N indistinguishable highway
intersections and at each one either continues (0) or exits (1). An
instruction array fixes the action at every intersection; the payoff is
decided by the position of the first exit bit, with a motel payoff if the
driver never exits. This module holds the value types shared by the whole
package and solves the two classical strategy families, deterministic
(always continue / always exit) and probabilistic (an i.i.d. coin with
continue-probability p at every intersection).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, NamedTuple

import numpy as np

# Probability mass must balance to this tolerance for a valid distribution.
WEIGHT_SUM_TOL = 1e-12

# Grid resolution and refinement tolerances for the polynomial maximizer.
_OPT_GRID_POINTS = 10_000
_OPT_P_TOL = 1e-12
_OPT_DERIV_TOL = 1e-10


class DeterministicAction(Enum):
    ALWAYS_CONTINUE = "always_continue"
    ALWAYS_EXIT = "always_exit"


@dataclass(frozen=True)
class InstructionArray:
    """Length-N bit vector: bit i is the action at intersection i (1 = exit).

    Canonical integer encoding treats intersection 1 as the most significant
    bit, so for N=2 the array (0,1) encodes to 1 and (1,0) to 2.
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) < 1:
            raise ValueError("instruction array needs at least one intersection")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"instruction bits must be 0 or 1, got {self.bits!r}")

    @property
    def n(self) -> int:
        return len(self.bits)

    @classmethod
    def from_int(cls, code: int, n: int) -> "InstructionArray":
        if n < 1:
            raise ValueError("need at least one intersection")
        if not 0 <= code < 2**n:
            raise ValueError(f"code {code} out of range for {n} intersections")
        return cls(tuple((code >> (n - 1 - i)) & 1 for i in range(n)))

    def to_int(self) -> int:
        code = 0
        for b in self.bits:
            code = (code << 1) | b
        return code

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def first_exit(self) -> int | None:
        """1-based index of the first exit bit, or None when all bits are 0."""
        for i, b in enumerate(self.bits):
            if b:
                return i + 1
        return None

    def complement(self) -> "InstructionArray":
        return InstructionArray(tuple(1 - b for b in self.bits))


@dataclass(frozen=True)
class PayoffSchedule:
    """Exit payoffs r_1..r_N plus the motel payoff for never exiting.

    Payoffs are restricted to finite nonnegative reals.
    """

    exit_payoffs: tuple[float, ...]
    motel_payoff: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "exit_payoffs", tuple(float(r) for r in self.exit_payoffs))
        object.__setattr__(self, "motel_payoff", float(self.motel_payoff))
        if len(self.exit_payoffs) < 1:
            raise ValueError("schedule needs at least one exit payoff")
        for r in (*self.exit_payoffs, self.motel_payoff):
            if not math.isfinite(r):
                raise ValueError("payoffs must be finite")
            if r < 0:
                raise ValueError(f"payoffs must be nonnegative, got {r}")

    @property
    def n(self) -> int:
        return len(self.exit_payoffs)


@dataclass(frozen=True)
class StrategyDistribution:
    """Probability distribution over instruction arrays, stored sparsely.

    Zero-weight arrays are dropped at construction; remaining weights must be
    positive and sum to 1 within WEIGHT_SUM_TOL.
    """

    weights: Mapping[InstructionArray, float]

    def __post_init__(self) -> None:
        pruned = {v: float(w) for v, w in self.weights.items() if w != 0.0}
        if not pruned:
            raise ValueError("distribution has empty support")
        lengths = {v.n for v in pruned}
        if len(lengths) != 1:
            raise ValueError("support arrays have mixed lengths")
        for v, w in pruned.items():
            if w < 0:
                raise ValueError(f"negative weight {w} on {v.bitstring()}")
        total = sum(pruned.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", pruned)

    @property
    def n(self) -> int:
        return next(iter(self.weights)).n

    @property
    def support(self) -> tuple[InstructionArray, ...]:
        return tuple(sorted(self.weights, key=InstructionArray.to_int))

    def weight(self, v: InstructionArray) -> float:
        return self.weights.get(v, 0.0)

    def items(self) -> Iterator[tuple[InstructionArray, float]]:
        for v in self.support:
            yield v, self.weights[v]

    def exit_marginals(self) -> np.ndarray:
        """Per-intersection exit probability u(i) = sum_m p_m v_m(i)."""
        u = np.zeros(self.n)
        for v, w in self.weights.items():
            u += w * np.asarray(v.bits, dtype=float)
        return u


class DeterministicOptimum(NamedTuple):
    payoff: float
    action: DeterministicAction


class ProbabilisticOptimum(NamedTuple):
    p_star: float
    payoff: float


def payoff_of_array(v: InstructionArray, schedule: PayoffSchedule) -> float:
    """Payoff of a single instruction array: the exit payoff at the first
    exit bit, or the motel payoff when the driver never exits. Bits after
    the first exit are unreachable and ignored."""
    if v.n != schedule.n:
        raise ValueError(f"array has {v.n} intersections, schedule has {schedule.n}")
    i = v.first_exit()
    if i is None:
        return schedule.motel_payoff
    return schedule.exit_payoffs[i - 1]


def expected_payoff(dist: StrategyDistribution, schedule: PayoffSchedule) -> float:
    if dist.n != schedule.n:
        raise ValueError(f"distribution has {dist.n} intersections, schedule has {schedule.n}")
    return sum(w * payoff_of_array(v, schedule) for v, w in dist.weights.items())


def deterministic_optimum(schedule: PayoffSchedule) -> DeterministicOptimum:
    """Best of the two deterministic strategies. Always-continue pays the
    motel payoff, always-exit pays the first exit payoff; ties go to
    always-continue so the output is stable."""
    stay = schedule.motel_payoff
    leave = schedule.exit_payoffs[0]
    if leave > stay:
        return DeterministicOptimum(leave, DeterministicAction.ALWAYS_EXIT)
    return DeterministicOptimum(stay, DeterministicAction.ALWAYS_CONTINUE)


def probabilistic_payoff(p: float, schedule: PayoffSchedule) -> float:
    """Expected payoff of the i.i.d. coin strategy with continue-probability p.

    The first exit happens at intersection i with probability p^(i-1)(1-p),
    and the motel is reached with probability p^N.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"continue-probability must lie in [0, 1], got {p}")
    total = 0.0
    for i, r in enumerate(schedule.exit_payoffs, start=1):
        total += r * p ** (i - 1) * (1.0 - p)
    return total + schedule.motel_payoff * p**schedule.n


def _payoff_polynomial(schedule: PayoffSchedule) -> np.polynomial.Polynomial:
    n = schedule.n
    coeffs = np.zeros(n + 1)
    for i, r in enumerate(schedule.exit_payoffs, start=1):
        coeffs[i - 1] += r
        coeffs[i] -= r
    coeffs[n] += schedule.motel_payoff
    return np.polynomial.Polynomial(coeffs)


def probabilistic_optimum(schedule: PayoffSchedule) -> ProbabilisticOptimum:
    """Global maximizer of probabilistic_payoff over [0, 1].

    The payoff is a degree-N polynomial, so every interior maximum is a sign
    change of the derivative. Sign changes are bracketed on a dense grid,
    tightened by bisection, polished by Newton steps on the derivative, and
    compared against the endpoints. Ties resolve to the smallest p.
    """
    poly = _payoff_polynomial(schedule)
    dpoly = poly.deriv()
    d2poly = dpoly.deriv()

    grid = np.linspace(0.0, 1.0, _OPT_GRID_POINTS)
    dvals = dpoly(grid)
    candidates = [0.0, 1.0]
    candidates.extend(grid[np.nonzero(dvals == 0.0)[0]].tolist())
    sign_flips = np.nonzero(dvals[:-1] * dvals[1:] < 0.0)[0]
    for k in sign_flips:
        lo, hi = grid[k], grid[k + 1]
        flo = dvals[k]
        while hi - lo > _OPT_P_TOL:
            mid = 0.5 * (lo + hi)
            fmid = dpoly(mid)
            if flo * fmid <= 0.0:
                hi = mid
            else:
                lo, flo = mid, fmid
        x = 0.5 * (lo + hi)
        for _ in range(4):
            fx = dpoly(x)
            if abs(fx) <= _OPT_DERIV_TOL:
                break
            f2 = d2poly(x)
            if f2 == 0.0:
                break
            step = fx / f2
            if not 0.0 <= x - step <= 1.0:
                break
            x -= step
        candidates.append(float(x))

    best_p, best_val = 0.0, -math.inf
    for p in sorted(candidates):
        val = float(poly(p))
        if val > best_val + 1e-15:
            best_p, best_val = p, val
    return ProbabilisticOptimum(best_p, best_val)


def iid_distribution(p: float, n: int) -> StrategyDistribution:
    """Distribution induced by tossing the same coin at every intersection:
    an array with k exit bits gets weight p^(N-k) (1-p)^k."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"continue-probability must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError("need at least one intersection")
    weights = {}
    for code in range(2**n):
        v = InstructionArray.from_int(code, n)
        ones = sum(v.bits)
        weights[v] = p ** (n - ones) * (1.0 - p) ** ones
    return StrategyDistribution(weights)
