"""
Amplitude-amplification engines.

Two interchangeable representations of the same dynamics:

- StateVector: all 2**n amplitudes (exact, bounded by the qubit limit).
- SubspaceState: the two amplitudes on |mu> (uniform over marked dataset
  items) and |nu> (uniform over unmarked items). Oracle phases and the
  deflection about the prepared state never leave span{|mu>, |nu>}, so this
  is exact for any N.

Global phases are dropped everywhere; all contracts are on probabilities.
"""
import cmath
import json
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import sim_config
from dataset import EncodedDataset
from exceptions import DimensionMismatch, InvalidCounts, QubitLimitExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        # numpy's pairwise summation: fixed order, independent of threading
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class SubspaceState:
    a: complex
    b: complex
    beta: float

    def norm(self) -> float:
        return abs(self.a) ** 2 + abs(self.b) ** 2


@dataclass(frozen=True)
class MarkedPredicate:
    """Marks code c iff c <= threshold (the d' of the oracle)."""

    threshold: int

    def limit(self, n_qubits: int) -> int:
        """Number of marked codes among 0..2**n - 1."""
        return max(0, min(self.threshold + 1, 2 ** n_qubits))


# Statevector engine
def prepare_uniform(dataset: EncodedDataset, max_qubits: Optional[int] = None) -> StateVector:
    """Amplitude 1/sqrt(size) on every dataset code, 0 elsewhere (W|0>)."""
    limit = sim_config.statevector_qubit_limit if max_qubits is None else max_qubits
    if dataset.n_qubits > limit:
        raise QubitLimitExceeded(dataset.n_qubits, limit)
    amplitudes = np.zeros(dataset.n_codes, dtype=np.complex128)
    amplitudes[np.fromiter(dataset.values, dtype=np.int64, count=dataset.size)] = 1.0 / math.sqrt(dataset.size)
    return StateVector(n_qubits=dataset.n_qubits, amplitudes=amplitudes)


def apply_marking_phase(state: StateVector, pred: MarkedPredicate, phi: float) -> StateVector:
    """Multiply every code <= d' by e^{i phi}. Marked codes form the prefix 0..d'."""
    amplitudes = state.amplitudes.copy()
    amplitudes[: pred.limit(state.n_qubits)] *= cmath.exp(1j * phi)
    return StateVector(n_qubits=state.n_qubits, amplitudes=amplitudes)


def apply_phase_deflection(state: StateVector, prep_state: StateVector, phi: float) -> StateVector:
    """
    W I0 W^-1 as the rank-1 update  I + (e^{i phi} - 1)|s><s|  about s = prep_state.
    """
    if state.n_qubits != prep_state.n_qubits:
        raise DimensionMismatch(prep_state.n_qubits, state.n_qubits)
    overlap = np.sum(np.conj(prep_state.amplitudes) * state.amplitudes)
    amplitudes = state.amplitudes + (cmath.exp(1j * phi) - 1.0) * overlap * prep_state.amplitudes
    return StateVector(n_qubits=state.n_qubits, amplitudes=amplitudes)


def marked_probability(state: StateVector, threshold: int) -> float:
    limit = MarkedPredicate(threshold).limit(state.n_qubits)
    return float(np.sum(np.abs(state.amplitudes[:limit]) ** 2))


def sample_codes(state: StateVector, rng: np.random.Generator, shots: int) -> np.ndarray:
    """
    Draw `shots` codes with probability |amplitude|^2. Inverse-CDF sampling
    with side="right" never returns a zero-probability code.
    """
    cdf = np.cumsum(state.probabilities())
    u = rng.random(shots) * cdf[-1]
    codes = np.searchsorted(cdf, u, side="right")
    return np.minimum(codes, cdf.size - 1)


def measure_sample(state: StateVector, rng: np.random.Generator) -> int:
    """Measure without collapsing; a fresh state is prepared every round."""
    return int(sample_codes(state, rng, 1)[0])


def dump_statevector(state: StateVector) -> str:
    return json.dumps([[float(z.real), float(z.imag)] for z in state.amplitudes])


# Subspace engine
def subspace_from_counts(m: int, size: int) -> SubspaceState:
    """Like subspace_init but also accepts m = 0 (nothing marked)."""
    if size < 1 or m < 0 or m > size:
        raise InvalidCounts(f"Need 0 <= M <= size and size >= 1, got M={m}, size={size}", m=m, size=size)
    if m == 0:
        return SubspaceState(a=0j, b=1 + 0j, beta=0.0)
    if m == size:
        return SubspaceState(a=1 + 0j, b=0j, beta=math.pi / 2)
    beta = math.asin(math.sqrt(m / size))
    return SubspaceState(a=complex(math.sin(beta)), b=complex(math.cos(beta)), beta=beta)


def subspace_init(m: int, size: int) -> SubspaceState:
    if m < 1 or m > size:
        raise InvalidCounts(f"Need 1 <= M <= size, got M={m}, size={size}", m=m, size=size)
    return subspace_from_counts(m, size)


def subspace_iterate(s: SubspaceState, phi: float) -> SubspaceState:
    """One Grover-Long iteration: oracle phase on |mu>, then deflection about the prepared state."""
    phase = cmath.exp(1j * phi)
    sin_b, cos_b = math.sin(s.beta), math.cos(s.beta)
    a = phase * s.a
    c = (phase - 1.0) * (sin_b * a + cos_b * s.b)
    return SubspaceState(a=a + c * sin_b, b=s.b + c * cos_b, beta=s.beta)


def subspace_marked_probability(s: SubspaceState) -> float:
    return min(1.0, abs(s.a) ** 2)


def subspace_measure(
    s: SubspaceState,
    dataset: EncodedDataset,
    threshold: int,
    rng: np.random.Generator,
) -> int:
    """
    Exact sampling from the 2D state: the marked component is spread evenly
    over the dataset values <= threshold, the unmarked one over the rest.
    """
    m = dataset.count_at_most(threshold)
    if m == dataset.size:
        marked = True
    elif m == 0:
        marked = False
    else:
        marked = rng.random() < subspace_marked_probability(s)
    if marked:
        return dataset.values[int(rng.integers(m))]
    return dataset.values[m + int(rng.integers(dataset.size - m))]
