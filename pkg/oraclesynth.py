import cmath
import logging
from typing import Any, Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from exceptions import DimensionMismatch, ThresholdIsFullRange, ThresholdOutOfRange
from simcore import StateVector

logger = logging.getLogger(__name__)


class OracleBlock(BaseModel):
    """
    One multi-controlled phase block: qubits 0..p-1 must equal `prefix`,
    qubit p must be 0 (the anticontrol line carrying the phase), the
    remaining qubits are free. Marks a contiguous range of 2**free_bits codes.
    """

    model_config = ConfigDict(frozen=True)

    prefix: str
    anticontrol_index: int
    free_bits: int
    marked_count: int

    def marked_range(self) -> Tuple[int, int]:
        # prefix, then the anticontrol bit 0, then free bits at 0
        lo = int(self.prefix + "0" * (self.free_bits + 1), 2)
        return lo, lo + self.marked_count - 1


class OraclePlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_qubits: int
    threshold: int
    phi: float
    blocks: Tuple[OracleBlock, ...]


class GateCostReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    block_count: int
    total_controls: int
    naive_block_count: int


def is_single_block(d_prime: int) -> bool:
    """d' = 2**m - 1: the whole oracle is one anticontrolled phase block."""
    k = d_prime + 1
    return k > 0 and (k & (k - 1)) == 0


def synthesize_oracle(d_prime: int, n_qubits: int, phi: float) -> OraclePlan:
    """
    Purpose:
        Decompose "phase e^{i phi} on every code <= d'" into disjoint
        multi-controlled phase blocks.

        Write d'+1 = a_0 a_1 ... a_{n-1} (MSB first). Every set bit a_i gives
        one block: prefix a_0..a_{i-1}, anticontrol on qubit i. Those blocks
        mark exactly the codes below d'+1, so the plan is their product.
        Blocks whose bit is 0 carry no phase and are not emitted.

    Args:
        d_prime (int): threshold, 0 <= d' < 2**n - 1.
        n_qubits (int): code width.
        phi (float): oracle phase.

    Returns:
        OraclePlan with popcount(d'+1) blocks, most significant first.

    Raises:
        ThresholdIsFullRange: d' = 2**n - 1 (d'+1 needs n+1 bits).
        ThresholdOutOfRange: d' < 0 or d' >= 2**n.
    """
    if d_prime == 2 ** n_qubits - 1:
        raise ThresholdIsFullRange(d_prime, n_qubits)
    if d_prime < 0 or d_prime >= 2 ** n_qubits:
        raise ThresholdOutOfRange(d_prime, n_qubits)

    bits = format(d_prime + 1, f"0{n_qubits}b")
    blocks = [
        OracleBlock(
            prefix=bits[:i],
            anticontrol_index=i,
            free_bits=n_qubits - i - 1,
            marked_count=2 ** (n_qubits - i - 1),
        )
        for i, a in enumerate(bits)
        if a == "1"
    ]
    logger.debug(f"Synthesized oracle d'={d_prime} n={n_qubits}: {len(blocks)} block(s)")
    return OraclePlan(n_qubits=n_qubits, threshold=d_prime, phi=phi, blocks=tuple(blocks))


def materialize_diagonal(plan: OraclePlan) -> np.ndarray:
    """Compose the blocks into the 2**n diagonal; overlapping blocks would show up as e^{2i phi}."""
    diagonal = np.ones(2 ** plan.n_qubits, dtype=np.complex128)
    phase = cmath.exp(1j * plan.phi)
    for block in plan.blocks:
        lo, hi = block.marked_range()
        diagonal[lo : hi + 1] *= phase
    return diagonal


def brute_force_diagonal(d_prime: int, n_qubits: int, phi: float) -> np.ndarray:
    codes = np.arange(2 ** n_qubits)
    return np.where(codes <= d_prime, cmath.exp(1j * phi), 1.0 + 0j)


def apply_plan(state: StateVector, plan: OraclePlan) -> StateVector:
    if state.n_qubits != plan.n_qubits:
        raise DimensionMismatch(plan.n_qubits, state.n_qubits)
    amplitudes = state.amplitudes.copy()
    phase = cmath.exp(1j * plan.phi)
    for block in plan.blocks:
        lo, hi = block.marked_range()
        amplitudes[lo : hi + 1] *= phase
    return StateVector(n_qubits=state.n_qubits, amplitudes=amplitudes)


def gate_cost(plan: OraclePlan) -> GateCostReport:
    return GateCostReport(
        block_count=len(plan.blocks),
        total_controls=sum(len(block.prefix) for block in plan.blocks),
        naive_block_count=plan.threshold + 1,
    )


def plan_report(plan: OraclePlan) -> Dict[str, Any]:
    """JSON document printed by `synth`."""
    cost = gate_cost(plan)
    blocks: List[Dict[str, Any]] = []
    for block in plan.blocks:
        lo, hi = block.marked_range()
        blocks.append({"prefix": block.prefix, "anticontrol": block.anticontrol_index, "marked_range": [lo, hi]})
    return {
        "n": plan.n_qubits,
        "d_prime": plan.threshold,
        "phi": plan.phi,
        "blocks": blocks,
        "cost": {
            "blocks": cost.block_count,
            "controls": cost.total_controls,
            "naive": cost.naive_block_count,
        },
    }
