"""
Property suites behind `verify`.

Each check sweeps its stated range and reports how many cases it looked at,
how many failed and the first failing case.
"""
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from dataset import EncodedDataset, full_range_dataset
from exceptions import InvalidRange, ThresholdIsFullRange, VerificationFailure
from groverlong import (
    compute_phi,
    compute_tmax,
    evolve,
    exact_success_probability,
    grover_long_search,
    make_params,
)
from minsearch import trial_rng
from oraclesynth import brute_force_diagonal, materialize_diagonal, synthesize_oracle

logger = logging.getLogger(__name__)

SUITES = ("oracle", "suresuccess", "engines", "all")

ORACLE_TOLERANCE = 1e-12
SURE_SUCCESS_TOLERANCE = 1e-9
QUARTER_TOLERANCE = 1e-12
ENGINE_TOLERANCE = 1e-10
ORACLE_PHASES = (math.pi, math.pi / 2, 1.0)


class PropertyResult(BaseModel):
    name: str
    checked: int = 0
    failed: int = 0
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, case: Dict[str, Any]) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = case


# Oracle synthesis
def check_oracle(max_qubits: int = 8, phases: Sequence[float] = ORACLE_PHASES) -> List[PropertyResult]:
    """Synthesized diagonal equals the brute-force one for every n <= max_qubits, d' in [0, 2**n - 2] and phase."""
    diagonal = PropertyResult(name="oracle_diagonal")
    blocks = PropertyResult(name="oracle_block_count")
    full_range = PropertyResult(name="oracle_full_range_rejected")

    for n in range(1, max_qubits + 1):
        for d_prime in range(2 ** n - 1):
            for phi in phases:
                plan = synthesize_oracle(d_prime, n, phi)
                error = float(np.max(np.abs(materialize_diagonal(plan) - brute_force_diagonal(d_prime, n, phi))))
                diagonal.record(error <= ORACLE_TOLERANCE, {"n": n, "d_prime": d_prime, "phi": phi, "max_error": error})
            expected = bin(d_prime + 1).count("1")
            blocks.record(
                len(plan.blocks) == expected,
                {"n": n, "d_prime": d_prime, "blocks": len(plan.blocks), "expected": expected},
            )
        try:
            synthesize_oracle(2 ** n - 1, n, phases[0])
            full_range.record(False, {"n": n, "d_prime": 2 ** n - 1})
        except ThresholdIsFullRange:
            full_range.record(True, {})

    return [diagonal, blocks, full_range]


# Sure success
def check_sure_success(max_qubits: int = 10) -> List[PropertyResult]:
    """
    With t = t_max(M, N) and the matched phase the marked probability is 1
    for every N = 2**n, n <= max_qubits, and every M in [1, N]. Also the
    M/N = 1/4 case on both engines: one iteration with phi = pi.
    """
    sweep = PropertyResult(name="sure_success")
    for n in range(1, max_qubits + 1):
        n_size = 2 ** n
        for m in range(1, n_size + 1):
            t = compute_tmax(m, n_size)
            phi, _ = compute_phi(t, m, n_size, "error")
            p = exact_success_probability(m, n_size, t, phi)
            sweep.record(p >= 1 - SURE_SUCCESS_TOLERANCE, {"n": n, "m": m, "t": t, "phi": phi, "probability": p})

    quarter = PropertyResult(name="quarter_ratio_one_step")
    for n in (2, min(10, max_qubits)):
        n_size = 2 ** n
        dataset = full_range_dataset(n)
        params = make_params(1, n_size // 4, n_size)
        for engine in ("statevector", "subspace"):
            p = grover_long_search(dataset, n_size // 4 - 1, 1, params, engine).marked_probability()
            quarter.record(
                abs(p - 1.0) <= QUARTER_TOLERANCE and params.phi == math.pi,
                {"n": n, "engine": engine, "phi": params.phi, "probability": p},
            )

    return [sweep, quarter]


# Engine agreement
def _random_dataset(n: int, rng: np.random.Generator) -> EncodedDataset:
    size = int(rng.integers(1, 2 ** n + 1))
    values = rng.choice(2 ** n, size=size, replace=False)
    return EncodedDataset.from_values((int(v) for v in values), n_qubits=n)


def check_engines(samples: int = 10_000, max_qubits: int = 12, max_t: int = 64, seed: int = 0) -> List[PropertyResult]:
    """Statevector and subspace engines agree on the marked probability for random configurations."""
    agreement = PropertyResult(name="engine_agreement")
    for i in range(samples):
        rng = trial_rng(seed, i, stream=2)
        n = int(rng.integers(1, max_qubits + 1))
        dataset = _random_dataset(n, rng)
        d_prime = int(rng.integers(-1, 2 ** n))
        phi = float(rng.uniform(0.0, 2 * math.pi))
        t = int(rng.integers(0, max_t + 1))
        p_state = evolve(dataset, d_prime, t, phi, "statevector").marked_probability()
        p_sub = evolve(dataset, d_prime, t, phi, "subspace").marked_probability()
        agreement.record(
            abs(p_state - p_sub) <= ENGINE_TOLERANCE,
            {"n": n, "size": dataset.size, "d_prime": d_prime, "phi": phi, "t": t, "statevector": p_state, "subspace": p_sub},
        )
    return [agreement]


def run_suite(suite: str, samples: int = 10_000, seed: int = 0) -> List[PropertyResult]:
    checks: Dict[str, Callable[[], List[PropertyResult]]] = {
        "oracle": check_oracle,
        "suresuccess": check_sure_success,
        "engines": lambda: check_engines(samples=samples, seed=seed),
    }
    if suite == "all":
        names = ["oracle", "suresuccess", "engines"]
    elif suite in checks:
        names = [suite]
    else:
        raise InvalidRange(f"Unknown suite {suite!r}; choose one of {', '.join(SUITES)}", suite=suite)
    results: List[PropertyResult] = []
    for name in names:
        logger.info(f"Running verification suite: {name}")
        results.extend(checks[name]())
    return results


def assert_all_passed(results: List[PropertyResult]) -> None:
    """Raise VerificationFailure carrying the first failing property and its counterexample."""
    for result in results:
        if not result.passed:
            raise VerificationFailure(
                f"Property {result.name} failed in {result.failed}/{result.checked} case(s)",
                property=result.name,
                counterexample=result.counterexample,
                results=[r.model_dump() for r in results],
            )
