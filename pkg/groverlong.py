import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dataset import EncodedDataset
from exceptions import InvalidCounts, PhaseDomainError
from oraclesynth import apply_plan, synthesize_oracle
from simcore import (
    MarkedPredicate,
    StateVector,
    SubspaceState,
    apply_marking_phase,
    apply_phase_deflection,
    marked_probability,
    measure_sample,
    prepare_uniform,
    subspace_from_counts,
    subspace_init,
    subspace_iterate,
    subspace_marked_probability,
    subspace_measure,
)

logger = logging.getLogger(__name__)

ClampPolicy = Literal["clamp", "error"]
Engine = Literal["statevector", "subspace"]

# ratios this close to an integer are treated as that integer before floor()
_FLOOR_SNAP = 1e-9
# arcsin arguments this close to 1 are treated as exactly 1
_ARG_SNAP = 1e-12


class GLParams(BaseModel):
    """
    Parameters of one Grover-Long run. Unless the phase was clamped, t >= 1
    requires sin(pi / (4t + 2)) <= sqrt(m_est / n_est) (within 1e-12).
    """

    model_config = ConfigDict(frozen=True)

    t: int = Field(ge=0)
    phi: float = Field(gt=0.0, le=math.pi)
    m_est: int = Field(ge=1)
    n_est: int = Field(ge=1)
    clamped: bool = False

    @model_validator(mode="after")
    def _check_estimates(self) -> "GLParams":
        if self.m_est > self.n_est:
            raise ValueError(f"m_est={self.m_est} exceeds n_est={self.n_est}")
        if self.t >= 1 and not self.clamped:
            if math.sin(math.pi / (4 * self.t + 2)) > math.sqrt(self.m_est / self.n_est) + _ARG_SNAP:
                raise ValueError(f"t={self.t} cannot be phase-matched for M/N={self.m_est}/{self.n_est}")
        return self


@dataclass(frozen=True)
class GroverLongOutcome:
    engine: Engine
    state: Union[StateVector, SubspaceState]
    query_count: int
    threshold: int
    marked_count: int

    def marked_probability(self) -> float:
        if isinstance(self.state, SubspaceState):
            return subspace_marked_probability(self.state)
        return marked_probability(self.state, self.threshold)

    def measure(self, dataset: EncodedDataset, rng: np.random.Generator) -> int:
        if isinstance(self.state, SubspaceState):
            return subspace_measure(self.state, dataset, self.threshold, rng)
        return measure_sample(self.state, rng)


def _check_counts(m: int, n_size: int) -> None:
    if m < 1 or n_size < 1 or m > n_size:
        raise InvalidCounts(f"Need 1 <= M <= N, got M={m}, N={n_size}", m=m, n_size=n_size)


def _snapped_floor(x: float) -> int:
    return math.floor(x + _FLOOR_SNAP)


def compute_tmax(m: int, n_size: int) -> int:
    """t_max = floor((pi/2 - beta) / beta) + 1 with beta = arcsin(sqrt(M/N))."""
    _check_counts(m, n_size)
    beta = math.asin(math.sqrt(m / n_size))
    return _snapped_floor((math.pi / 2 - beta) / beta) + 1


def compute_tmax_alg1(n_size: int) -> int:
    """Worst-case (M = 1) cap used by the driver, without the +1."""
    if n_size < 2:
        raise InvalidCounts(f"Need N >= 2, got N={n_size}", n_size=n_size)
    beta = math.asin(1 / math.sqrt(n_size))
    return _snapped_floor((math.pi / 2 - beta) / beta)


def compute_phi(t: int, m_est: int, n_est: int, clamp_policy: ClampPolicy = "clamp"):
    """
    Purpose:
        Phase-matching angle for exactly t iterations:
            phi = 2 arcsin( sin(pi / (4t + 2)) / sqrt(M/N) )

    Returns:
        (phi, clamped). When the arcsin argument exceeds 1 the clamp policy
        falls back to phi = pi (plain Grover); the error policy raises.

    Raises:
        PhaseDomainError, InvalidCounts
    """
    if t < 1:
        raise InvalidCounts(f"Phase matching needs t >= 1, got t={t}", t=t)
    _check_counts(m_est, n_est)
    argument = math.sin(math.pi / (4 * t + 2)) / math.sqrt(m_est / n_est)
    if abs(argument - 1.0) <= _ARG_SNAP:
        argument = 1.0
    if argument > 1.0:
        if clamp_policy == "error":
            raise PhaseDomainError(t, m_est, n_est, argument)
        logger.debug(f"Clamped phase for t={t}, M/N={m_est}/{n_est} (argument {argument:.4f})")
        return math.pi, True
    return 2 * math.asin(argument), False


def make_params(t: int, m_est: int, n_est: int, clamp_policy: ClampPolicy = "clamp") -> GLParams:
    """t = 0 means "measure the prepared state"; its phase is never applied."""
    if t == 0:
        _check_counts(m_est, n_est)
        return GLParams(t=0, phi=math.pi, m_est=m_est, n_est=n_est)
    phi, clamped = compute_phi(t, m_est, n_est, clamp_policy)
    return GLParams(t=t, phi=phi, m_est=m_est, n_est=n_est, clamped=clamped)


def rotation_angle(beta: float, phi: float) -> float:
    """Per-iteration rotation w of the Grover-Long operator: sin(w/2) = sin(phi/2) sin(beta)."""
    return 2 * math.asin(min(1.0, math.sin(phi / 2) * math.sin(beta)))


def _statevector_oracle(d_prime: int, n_qubits: int, phi: float) -> Callable[[StateVector], StateVector]:
    if d_prime < 0:
        return lambda state: state
    if d_prime >= 2 ** n_qubits - 1:
        # everything marked: the synthesizer rejects this threshold
        return lambda state: apply_marking_phase(state, MarkedPredicate(d_prime), phi)
    plan = synthesize_oracle(d_prime, n_qubits, phi)
    return lambda state: apply_plan(state, plan)


def grover_long_search(
    dataset: EncodedDataset,
    d_prime: int,
    t: int,
    params: GLParams,
    engine: Engine = "subspace",
) -> GroverLongOutcome:
    """
    Purpose:
        Prepare the uniform state over the dataset and apply exactly t
        iterations of (oracle with phi, deflection with the same phi).
        The engine always evolves the true amplitudes; params carry the
        phase computed from the estimates.

    Args:
        dataset: items to search.
        d_prime: threshold; codes <= d_prime are marked. -1 marks nothing.
        t: iteration count (0 returns the prepared state).
        params: GLParams providing phi.
        engine: "statevector" or "subspace".

    Returns:
        GroverLongOutcome with query_count = t.
    """
    return evolve(dataset, d_prime, t, params.phi, engine)


def evolve(dataset: EncodedDataset, d_prime: int, t: int, phi: float, engine: Engine = "subspace") -> GroverLongOutcome:
    """grover_long_search with a bare phase in place of GLParams; any real phi is accepted."""
    if t < 0:
        raise InvalidCounts(f"Iteration count must be >= 0, got {t}", t=t)
    m = dataset.count_at_most(d_prime)

    if engine == "statevector":
        prepared = prepare_uniform(dataset)
        oracle = _statevector_oracle(d_prime, dataset.n_qubits, phi)
        state = prepared
        for _ in range(t):
            state = oracle(state)
            state = apply_phase_deflection(state, prepared, phi)
        return GroverLongOutcome("statevector", state, t, d_prime, m)

    s = subspace_from_counts(m, dataset.size)
    for _ in range(t):
        s = subspace_iterate(s, phi)
    return GroverLongOutcome("subspace", s, t, d_prime, m)


def exact_success_probability(m: int, n_size: int, t: int, phi: float) -> float:
    """Marked probability after t subspace iterations from the uniform state. No sampling."""
    _check_counts(m, n_size)
    if t < 0:
        raise InvalidCounts(f"Iteration count must be >= 0, got {t}", t=t)
    s = subspace_init(m, n_size)
    for _ in range(t):
        s = subspace_iterate(s, phi)
    return subspace_marked_probability(s)
