"""N-qubit states over the instruction basis.

One qubit sits at each intersection; the driver measures sigma_z on
arrival, so a joint computational-basis outcome is exactly an instruction
array. Basis labels follow the array encoding with intersection 1 as the
most significant bit, matching ket notation |v1 v2 ... vN>. All
measurements commute, so drawing whole arrays from the Born distribution
is statistically identical to measuring one site at a time.
"""

import cmath
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .model import InstructionArray, StrategyDistribution
from .polytope import PolytopeVertex

NORM_TOL = 1e-12
# Rounding dust below this is dropped from Born distributions.
PRUNE_TOL = 1e-15


@dataclass(frozen=True)
class StateVector:
    """Unit-norm vector of 2^N complex amplitudes indexed by array encoding."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.n < 1:
            raise ValueError("need at least one site")
        if amps.shape != (2**self.n,):
            raise ValueError(f"expected {2 ** self.n} amplitudes, got shape {amps.shape}")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq!r}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Single-site 2x2 state after tracing out the other N-1 sites."""

    site: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (2, 2):
            raise ValueError("reduced density matrix must be 2x2")
        if np.abs(entries - entries.conj().T).max() > NORM_TOL:
            raise ValueError("reduced density matrix is not Hermitian")
        if abs(entries.trace().real - 1.0) > NORM_TOL:
            raise ValueError("reduced density matrix trace is not 1")
        if np.linalg.eigvalsh(entries).min() < -NORM_TOL:
            raise ValueError("reduced density matrix has a negative eigenvalue")
        entries = entries.copy()
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)


def state_from_vertex(
    vertex: PolytopeVertex, phases: tuple[float, ...] | None = None
) -> StateVector:
    """Superposition realizing a vertex: amplitude sqrt(p_m) e^{i phase_m}
    on each support array (in ascending encoding order), zero elsewhere.
    Phases are free: they never change the Born weights."""
    support = vertex.dist.support
    if phases is None:
        phases = (0.0,) * len(support)
    if len(phases) != len(support):
        raise ValueError(f"expected {len(support)} phases, got {len(phases)}")
    amps = np.zeros(2**vertex.n, dtype=complex)
    for v, phase in zip(support, phases):
        amps[v.to_int()] = math.sqrt(vertex.dist.weight(v)) * cmath.exp(1j * phase)
    return StateVector(vertex.n, amps)


def product_state(p: float, n: int) -> StateVector:
    """N-fold tensor power of sqrt(p)|0> + sqrt(1-p)|1>; its Born
    distribution is the i.i.d. coin distribution."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"continue-probability must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError("need at least one site")
    single = np.array([math.sqrt(p), math.sqrt(1.0 - p)], dtype=complex)
    amps = single
    for _ in range(n - 1):
        amps = np.kron(amps, single)
    return StateVector(n, amps)


def reduced_density(state: StateVector, site: int) -> ReducedDensityMatrix:
    """Partial trace onto one site: entry (a, b) sums amplitude products
    over all assignments to the other sites."""
    if not 1 <= site <= state.n:
        raise ValueError(f"site must lie in [1, {state.n}], got {site}")
    tensor = state.amplitudes.reshape((2,) * state.n)
    m = np.moveaxis(tensor, site - 1, 0).reshape(2, -1)
    return ReducedDensityMatrix(site, m @ m.conj().T)


def verify_indistinguishability(
    state: StateVector, tol: float = 1e-9
) -> tuple[bool, float]:
    """Check that every site carries the same reduced density matrix.

    Returns (ok, max_deviation) where the deviation is the largest
    entrywise difference over all site pairs; ok iff it is within tol.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    rhos = [reduced_density(state, site).entries for site in range(1, state.n + 1)]
    max_dev = 0.0
    for i in range(len(rhos)):
        for j in range(i + 1, len(rhos)):
            max_dev = max(max_dev, float(np.abs(rhos[i] - rhos[j]).max()))
    return max_dev <= tol, max_dev


def born_distribution(state: StateVector) -> StrategyDistribution:
    """Measurement statistics of the state: weight |alpha_v|^2 on each
    array, with dust below PRUNE_TOL dropped."""
    probs = np.abs(state.amplitudes) ** 2
    weights = {
        InstructionArray.from_int(code, state.n): float(p)
        for code, p in enumerate(probs)
        if p >= PRUNE_TOL
    }
    return StrategyDistribution(weights)


def sample_outcomes(state: StateVector, shots: int, seed: int) -> list[InstructionArray]:
    """Draw i.i.d. measurement outcomes, reproducible for a given seed."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    probs = np.abs(state.amplitudes) ** 2
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    codes = rng.choice(len(probs), size=shots, p=probs)
    arrays = [InstructionArray.from_int(code, state.n) for code in range(2**state.n)]
    return [arrays[code] for code in codes]


def state_to_dict(state: StateVector) -> dict:
    return {
        "n": state.n,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_dict(payload: dict) -> StateVector:
    try:
        n = int(payload["n"])
        pairs = payload["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValueError("state file needs 'n' and 'amplitudes' entries") from exc
    amps = np.array([complex(re, im) for re, im in pairs])
    return StateVector(n, amps)


def save_state(state: StateVector, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")


def load_state(path: str | os.PathLike) -> StateVector:
    with open(path, encoding="utf-8") as fh:
        return state_from_dict(json.load(fh))
