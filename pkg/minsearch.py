import logging
import math
from dataclasses import dataclass
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import sim_config
from dataset import EncodedDataset
from groverlong import (
    ClampPolicy,
    Engine,
    compute_tmax,
    compute_tmax_alg1,
    evolve,
    grover_long_search,
    make_params,
)

logger = logging.getLogger(__name__)

Branch = Literal["dynamic", "deterministic", "bbht"]
Algorithm = Literal["oqmsa", "dha"]


class SearchParams(BaseModel):
    """
    Purpose:
        Knobs shared by both drivers.

    Fields:
        lam: growth factor of the iteration schedule (JSON name "lambda").
        ratio_threshold: estimated M/N above which the dynamic branch is used.
        seed: base seed of the experiment.
        clamp_policy: phase fallback inside the dynamic branch.
        tmax_variant: "alg1" (no +1) or "eq5" (with +1), both for M = 1.
        engine: "statevector", "subspace" or "auto" (= subspace).
        max_rounds_per_pass: hard cap on inner rounds in one outer pass
            (the driver never allows more than t_max + 1).
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(6 / 5, gt=1.0, alias="lambda")
    ratio_threshold: float = Field(1 / 9, gt=0.0, lt=1.0)
    seed: int = Field(default_factory=lambda: sim_config.default_seed, ge=0, lt=2 ** 64)
    clamp_policy: ClampPolicy = "clamp"
    tmax_variant: Literal["eq5", "alg1"] = "alg1"
    engine: Literal["statevector", "subspace", "auto"] = "auto"
    max_rounds_per_pass: int = Field(default_factory=lambda: sim_config.max_rounds_per_pass, ge=1)

    def resolved_engine(self) -> Engine:
        return "statevector" if self.engine == "statevector" else "subspace"


class RoundRecord(BaseModel):
    d_prime_before: int
    t_used: int
    phi: float
    clamped: bool
    measured_r: Optional[int]
    accepted: bool
    est_ratio: float
    actual_ratio: float
    branch: Branch
    budget_exhausted: bool = False


class SearchTrace(BaseModel):
    rounds: List[RoundRecord] = Field(default_factory=list)
    total_queries: int = 0
    outer_repeats_at_exit: int = 0


class SearchResult(BaseModel):
    algorithm: Algorithm
    found_min: int
    trace: SearchTrace
    correct: bool


@dataclass(frozen=True)
class IterationChoice:
    t_used: int
    t_next: float
    branch: Branch


@dataclass(frozen=True)
class BBHTOutcome:
    measured: Optional[int]
    queries: int
    exhausted: bool


def trial_rng(seed: int, trial_index: int, stream: int = 0) -> np.random.Generator:
    """Independent stream per (seed, stream, trial); identical whatever the scheduling."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream, trial_index))))


def dynamic_iteration_choice(
    t: float,
    est_ratio: float,
    t_max: int,
    rng: np.random.Generator,
    ratio_threshold: float = 1 / 9,
    lam: float = 6 / 5,
) -> IterationChoice:
    """
    Dynamic strategy: while the estimated marked fraction is above the
    threshold (strictly), draw t' uniformly from 0..ceil(t) inclusive and grow
    t by lam; otherwise run the full t_max and leave t alone.
    """
    if est_ratio > ratio_threshold:
        t_used = int(rng.integers(0, math.ceil(t) + 1))
        return IterationChoice(t_used=t_used, t_next=t * lam, branch="dynamic")
    return IterationChoice(t_used=t_max, t_next=t, branch="deterministic")


def _driver_tmax(n_est: int, variant: str) -> int:
    return compute_tmax_alg1(n_est) if variant == "alg1" else compute_tmax(1, n_est)


def oqmsa_find_min(dataset: EncodedDataset, params: SearchParams, rng: np.random.Generator) -> SearchResult:
    """
    Purpose:
        Minimum finding with exact Grover-Long rounds and the dynamic
        iteration strategy.

        The current minimum d' starts at a random dataset item. Each outer
        pass resets t = 1 and runs rounds until a measurement r <= d', t
        exceeds t_max, or the pass has run t_max + 1 rounds. The phase of
        every round is matched to the estimates M~ = d' + 1 and N~ = 2**n;
        the engine evolves the true amplitudes.
        A pass that ends with r < d' replaces d' and resets the repeat
        counter. The search stops after max(1, ceil(log2 size)) consecutive
        passes without improvement.

    Args:
        dataset (EncodedDataset): items to search.
        params (SearchParams): driver configuration.
        rng (np.random.Generator): the trial's random stream.

    Returns:
        SearchResult with the full per-round trace.
    """
    engine = params.resolved_engine()
    n_est = dataset.n_codes
    t_max = _driver_tmax(n_est, params.tmax_variant)
    passes_needed = max(1, math.ceil(math.log2(dataset.size)))
    # a pass never runs more than t_max + 1 rounds
    pass_cap = min(params.max_rounds_per_pass, t_max + 1)

    d_prime = dataset.values[int(rng.integers(dataset.size))]
    rounds: List[RoundRecord] = []
    stale = 0

    while stale < passes_needed:
        t = 1.0
        r: Optional[int] = None
        rounds_in_pass = 0
        while t <= t_max and (r is None or r > d_prime):
            if rounds_in_pass >= pass_cap:
                logger.debug(f"Pass at d'={d_prime} hit the round cap ({pass_cap})")
                break
            m_est = d_prime + 1
            est_ratio = m_est / n_est
            choice = dynamic_iteration_choice(t, est_ratio, t_max, rng, params.ratio_threshold, params.lam)
            policy = params.clamp_policy if choice.branch == "dynamic" else "error"
            gl = make_params(choice.t_used, m_est, n_est, policy)
            outcome = grover_long_search(dataset, d_prime, choice.t_used, gl, engine)
            r = outcome.measure(dataset, rng)
            rounds.append(
                RoundRecord(
                    d_prime_before=d_prime,
                    t_used=choice.t_used,
                    phi=gl.phi,
                    clamped=gl.clamped,
                    measured_r=r,
                    accepted=r < d_prime,
                    est_ratio=est_ratio,
                    actual_ratio=outcome.marked_count / dataset.size,
                    branch=choice.branch,
                )
            )
            t = choice.t_next
            rounds_in_pass += 1

        if r is not None and r < d_prime:
            d_prime = r
            stale = 0
        else:
            stale += 1

    trace = SearchTrace(
        rounds=rounds,
        total_queries=sum(rec.t_used for rec in rounds),
        outer_repeats_at_exit=stale,
    )
    logger.debug(f"OQMSA finished: d'={d_prime}, rounds={len(rounds)}, queries={trace.total_queries}")
    return SearchResult(algorithm="oqmsa", found_min=d_prime, trace=trace, correct=d_prime == dataset.true_min)


def dha_budget(size: int) -> float:
    """22.5 sqrt(N) + 1.4 (log2 N)^2, in Grover iterations."""
    return 22.5 * math.sqrt(size) + 1.4 * math.log2(size) ** 2


def bbht_search(
    dataset: EncodedDataset,
    d_prime: int,
    rng: np.random.Generator,
    remaining_budget: int,
    lam: float = 6 / 5,
    engine: Engine = "subspace",
) -> BBHTOutcome:
    """
    Purpose:
        Exponential searching for an unknown number of items with value < d'.

        m starts at 1; each attempt draws j uniformly from [0, ceil(m)), runs j
        plain Grover iterations (phi = pi) on a fresh uniform state and
        measures. Stops on a marked outcome; otherwise m grows by lam up to
        sqrt(size). An attempt that would overrun the budget is not started
        and the outcome is flagged as exhausted.

    Returns:
        BBHTOutcome(measured, queries, exhausted). `measured` is the last
        measurement (None if no attempt fit in the budget).
    """
    # with a cap of 1 every draw is j = 0 and a direct call on a singleton
    # would never reach the budget
    cap = max(math.sqrt(dataset.size), 2.0)
    m = 1.0
    queries = 0
    measured: Optional[int] = None

    while True:
        j = int(rng.integers(0, math.ceil(m)))
        if queries + j > remaining_budget:
            logger.debug(f"BBHT below d'={d_prime}: budget exhausted after {queries} queries (next draw j={j})")
            return BBHTOutcome(measured=measured, queries=queries, exhausted=True)
        # strict predicate: value < d' is value <= d' - 1
        outcome = evolve(dataset, d_prime - 1, j, math.pi, engine)
        queries += j
        measured = outcome.measure(dataset, rng)
        if measured < d_prime:
            return BBHTOutcome(measured=measured, queries=queries, exhausted=False)
        m = min(lam * m, cap)


def dha_find_min(dataset: EncodedDataset, params: SearchParams, rng: np.random.Generator) -> SearchResult:
    """
    Purpose:
        Baseline minimum finding: random threshold, repeated exponential
        searching below it, interrupted once the cumulative number of Grover
        iterations would exceed 22.5 sqrt(N) + 1.4 (log2 N)^2. Marking cost is
        not charged to the budget.
    """
    if dataset.size == 1:
        only = dataset.values[0]
        return SearchResult(algorithm="dha", found_min=only, trace=SearchTrace(), correct=True)

    engine = params.resolved_engine()
    budget = dha_budget(dataset.size)
    y = dataset.values[int(rng.integers(dataset.size))]
    rounds: List[RoundRecord] = []
    used = 0

    while True:
        remaining = math.floor(budget - used)
        outcome = bbht_search(dataset, y, rng, remaining, params.lam, engine)
        used += outcome.queries
        ratio = dataset.count_at_most(y - 1) / dataset.size
        accepted = outcome.measured is not None and outcome.measured < y
        rounds.append(
            RoundRecord(
                d_prime_before=y,
                t_used=outcome.queries,
                phi=math.pi,
                clamped=False,
                measured_r=outcome.measured,
                accepted=accepted,
                est_ratio=ratio,
                actual_ratio=ratio,
                branch="bbht",
                budget_exhausted=outcome.exhausted,
            )
        )
        if accepted:
            y = outcome.measured
        if outcome.exhausted:
            break

    trace = SearchTrace(rounds=rounds, total_queries=used, outer_repeats_at_exit=0)
    logger.debug(f"DHA finished: y={y}, rounds={len(rounds)}, queries={used}")
    return SearchResult(algorithm="dha", found_min=y, trace=trace, correct=y == dataset.true_min)


DRIVERS = {
    "oqmsa": oqmsa_find_min,
    "dha": dha_find_min,
}
