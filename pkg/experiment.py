import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from config import APP_VERSION, sim_config
from dataset import EncodedDataset, resolve_dataset
from minsearch import DRIVERS, SearchParams, SearchResult, trial_rng

logger = logging.getLogger(__name__)

NOTES = [
    "query count = number of Grover-Long / Grover iterations (oracle applications)",
    "DHA budget 22.5*sqrt(N) + 1.4*log2(N)^2 counts Grover iterations only; marking cost is not charged",
    "success means found_min equals the dataset minimum",
    "trial i of every algorithm draws from the same seeded stream",
]


class ExperimentConfig(BaseModel):
    algorithm: Literal["oqmsa", "dha", "both"] = "oqmsa"
    dataset: str
    trials: int = Field(1000, ge=1)
    seed: int = Field(default_factory=lambda: sim_config.default_seed, ge=0)
    params: SearchParams = Field(default_factory=SearchParams)
    n_qubits: Optional[int] = Field(None, ge=1)
    jobs: int = Field(default_factory=lambda: sim_config.jobs, ge=1)


class AlgorithmSummary(BaseModel):
    algorithm: str
    success_count: int
    trials: int
    success_rate: float
    mean_queries: float
    stddev_queries: float
    min_found_histogram: Dict[str, int]


class ExperimentReport(BaseModel):
    dataset: str
    dataset_size: int
    n_qubits: int
    true_min: int
    results: Dict[str, AlgorithmSummary]
    environment: Dict[str, Any]
    notes: List[str] = Field(default_factory=lambda: list(NOTES))


def _run_trial(algorithm: str, dataset: EncodedDataset, params: SearchParams, trial_index: int) -> SearchResult:
    # stream 0 for every algorithm: trial i of OQMSA and DHA start from the same draw
    rng = trial_rng(params.seed, trial_index)
    return DRIVERS[algorithm](dataset, params, rng)


def summarize(algorithm: str, results: List[SearchResult]) -> AlgorithmSummary:
    queries = np.array([r.trace.total_queries for r in results], dtype=float)
    success = sum(1 for r in results if r.correct)

    counts: Dict[int, int] = {}
    for r in results:
        counts[r.found_min] = counts.get(r.found_min, 0) + 1

    return AlgorithmSummary(
        algorithm=algorithm,
        success_count=success,
        trials=len(results),
        success_rate=success / len(results),
        mean_queries=float(np.mean(queries)),
        stddev_queries=float(np.std(queries)),
        min_found_histogram={str(k): counts[k] for k in sorted(counts)},
    )


class ExperimentWorkflow:
    """
    Runs an experiment end to end:
    1. Resolve and validate the dataset
    2. Run `trials` seeded trials per selected algorithm (optionally in worker processes)
    3. Summarize success rates, query counts and found minima
    4. Optionally dump every trace as JSON lines
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.params = config.params.model_copy(update={"seed": config.seed})
        self.dataset: Optional[EncodedDataset] = None
        self.results: Dict[str, List[SearchResult]] = {}

    def algorithms(self) -> List[str]:
        if self.config.algorithm == "both":
            return ["oqmsa", "dha"]
        return [self.config.algorithm]

    def load_dataset(self) -> EncodedDataset:
        if self.dataset is None:
            self.dataset = resolve_dataset(self.config.dataset, n_qubits=self.config.n_qubits)
            logger.info(f"Dataset {self.config.dataset}: size={self.dataset.size}, n_qubits={self.dataset.n_qubits}")
        return self.dataset

    def run_trials(self, algorithm: str) -> List[SearchResult]:
        """Results come back in trial order whatever the number of workers."""
        dataset = self.load_dataset()
        indices = range(self.config.trials)
        n = len(indices)

        if self.config.jobs > 1 and n > 1:
            chunk = max(1, n // (self.config.jobs * 4))
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                results = list(
                    pool.map(_run_trial, [algorithm] * n, [dataset] * n, [self.params] * n, indices, chunksize=chunk)
                )
        else:
            results = [_run_trial(algorithm, dataset, self.params, i) for i in indices]

        self.results[algorithm] = results
        return results

    def run(self) -> ExperimentReport:
        dataset = self.load_dataset()
        summaries: Dict[str, AlgorithmSummary] = {}
        for algorithm in self.algorithms():
            logger.info(f"Running {self.config.trials} {algorithm} trial(s) with seed {self.config.seed}")
            summary = summarize(algorithm, self.run_trials(algorithm))
            logger.info(
                f"{algorithm}: {summary.success_count}/{summary.trials} correct, "
                f"mean queries {summary.mean_queries:.1f}"
            )
            summaries[algorithm] = summary

        return ExperimentReport(
            dataset=self.config.dataset,
            dataset_size=dataset.size,
            n_qubits=dataset.n_qubits,
            true_min=dataset.true_min,
            results=summaries,
            environment={
                "seed": self.config.seed,
                "trials": self.config.trials,
                "params": self.params.model_dump(by_alias=True, mode="json"),
                "version": APP_VERSION,
            },
        )

    def write_traces(self, path: Union[str, Path]) -> int:
        """One JSON object per line: the trial index and the full SearchResult."""
        written = 0
        with open(path, "w", encoding="utf-8") as f:
            for algorithm in self.algorithms():
                for i, result in enumerate(self.results.get(algorithm, [])):
                    record = {"trial": i, **result.model_dump(mode="json")}
                    f.write(json.dumps(record, sort_keys=True) + "\n")
                    written += 1
        logger.info(f"Wrote {written} trace(s) to {path}")
        return written
