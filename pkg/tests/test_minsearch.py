import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError

from dataset import EncodedDataset, full_range_dataset
from groverlong import compute_tmax_alg1
from metrics import fit_growth_exponent
from minsearch import (
    SearchParams,
    bbht_search,
    dha_budget,
    dha_find_min,
    dynamic_iteration_choice,
    oqmsa_find_min,
    trial_rng,
)


def _success_rate(driver, dataset, params, trials):
    return sum(driver(dataset, params, trial_rng(params.seed, i)).correct for i in range(trials)) / trials


class TestSearchParams:
    def test_defaults(self):
        params = SearchParams()
        assert params.lam == pytest.approx(1.2)
        assert params.ratio_threshold == pytest.approx(1 / 9)
        assert params.resolved_engine() == "subspace"

    def test_lambda_alias(self):
        params = SearchParams.model_validate({"lambda": 1.5})
        assert params.lam == 1.5
        assert params.model_dump(by_alias=True)["lambda"] == 1.5

    def test_lambda_must_exceed_one(self):
        with pytest.raises(ValidationError):
            SearchParams(lam=1.0)


class TestDynamicChoice:
    def test_dynamic_branch(self, rng):
        choice = dynamic_iteration_choice(1.0, 0.5, 11, rng)
        assert choice.branch == "dynamic"
        assert choice.t_used in (0, 1)
        assert choice.t_next == pytest.approx(1.2)

    def test_draw_covers_both_ends(self, rng):
        draws = {dynamic_iteration_choice(2.0, 0.5, 11, rng).t_used for _ in range(200)}
        assert draws == {0, 1, 2}

    def test_deterministic_branch(self, rng):
        choice = dynamic_iteration_choice(3.0, 0.05, 11, rng)
        assert (choice.t_used, choice.t_next, choice.branch) == (11, 3.0, "deterministic")

    def test_threshold_is_strict(self, rng):
        assert dynamic_iteration_choice(1.0, 1 / 9, 11, rng).branch == "deterministic"


class TestOQMSA:
    def test_singleton(self, params):
        ds = EncodedDataset.from_values([5])
        result = oqmsa_find_min(ds, params, trial_rng(3, 0))
        assert result.found_min == 5
        assert result.correct

    def test_trace_is_consistent(self, table_b, params):
        result = oqmsa_find_min(table_b, params, trial_rng(42, 0))
        trace = result.trace
        assert trace.total_queries == sum(r.t_used for r in trace.rounds)
        assert trace.outer_repeats_at_exit == math.ceil(math.log2(table_b.size))
        assert result.found_min in table_b
        for rec in trace.rounds:
            assert rec.est_ratio == pytest.approx((rec.d_prime_before + 1) / 64)
            assert rec.accepted == (rec.measured_r < rec.d_prime_before)

    def test_threshold_never_increases(self, table_a, params):
        rounds = oqmsa_find_min(table_a, params, trial_rng(42, 5)).trace.rounds
        thresholds = [r.d_prime_before for r in rounds]
        assert thresholds == sorted(thresholds, reverse=True)

    def test_deterministic_rounds_use_tmax(self, full6, params):
        rounds = oqmsa_find_min(full6, params, trial_rng(42, 1)).trace.rounds
        for rec in rounds:
            if rec.branch == "deterministic":
                assert rec.t_used == 11
                assert not rec.clamped

    def test_reproducible(self, table_a, params):
        first = oqmsa_find_min(table_a, params, trial_rng(42, 9))
        second = oqmsa_find_min(table_a, params, trial_rng(42, 9))
        assert first == second

    @pytest.mark.parametrize("max_rounds", [64, 3])
    def test_rounds_after_last_improvement_are_bounded(self, max_rounds):
        ds = EncodedDataset.from_values([0, 1, 2, 60], n_qubits=6)
        params = SearchParams(seed=3, max_rounds_per_pass=max_rounds)
        t_max = compute_tmax_alg1(ds.n_codes)
        bound = (math.ceil(math.log2(ds.size)) + 1) * (t_max + 1)
        for i in range(300):
            rounds = oqmsa_find_min(ds, params, trial_rng(3, i)).trace.rounds
            last = max((k for k, rec in enumerate(rounds) if rec.accepted), default=-1)
            assert len(rounds) - (last + 1) <= bound, i

    def test_statevector_engine(self, table_a):
        params = SearchParams(seed=1, engine="statevector")
        assert _success_rate(oqmsa_find_min, table_a, params, 20) >= 0.8

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["table_a", "table_b", "full6"])
    def test_success_rate(self, name, request, params):
        dataset = request.getfixturevalue(name)
        assert _success_rate(oqmsa_find_min, dataset, params, 1000) >= 0.95

    @pytest.mark.slow
    def test_query_growth(self):
        params = SearchParams(seed=11)
        sizes, costs, per_pass = [], [], []
        for n in (6, 8, 10, 12):
            ds = full_range_dataset(n)
            queries = [oqmsa_find_min(ds, params, trial_rng(11, i)).trace.total_queries for i in range(200)]
            sizes.append(2 ** n)
            costs.append(float(np.mean(queries)))
            per_pass.append(costs[-1] / n)
        # one pass costs O(sqrt N); the stopping rule adds ceil(log2 N) passes
        assert fit_growth_exponent(sizes, per_pass) <= 0.6
        assert fit_growth_exponent(sizes, costs) < 0.75


class TestBBHT:
    def test_finds_smaller_value(self, full6):
        outcome = bbht_search(full6, 32, trial_rng(5, 0), remaining_budget=1000)
        assert not outcome.exhausted
        assert outcome.measured < 32
        assert outcome.queries <= 1000

    def test_exhausts_when_nothing_is_smaller(self, full6):
        outcome = bbht_search(full6, 0, trial_rng(5, 1), remaining_budget=50)
        assert outcome.exhausted
        assert outcome.queries <= 50
        assert outcome.measured is None or outcome.measured >= 0

    def test_singleton_reaches_the_budget(self):
        outcome = bbht_search(EncodedDataset.from_values([5]), 5, trial_rng(5, 2), remaining_budget=20)
        assert outcome.exhausted
        assert outcome.measured == 5
        assert outcome.queries <= 20

    def test_exhaustion_is_logged(self, full6, caplog):
        with caplog.at_level(logging.DEBUG, logger="minsearch"):
            bbht_search(full6, 0, trial_rng(5, 3), remaining_budget=10)
        assert "budget exhausted" in caplog.text

    @pytest.mark.slow
    def test_mean_queries_half_marked(self, full6):
        # values < 31: M = 31 of 64
        queries = np.array([bbht_search(full6, 31, trial_rng(8, i), remaining_budget=10_000).queries for i in range(10_000)])
        bound = 4 * math.sqrt(64 / 31)
        assert queries.mean() <= bound + 3 * queries.std() / math.sqrt(queries.size)


class TestDHA:
    def test_budget(self):
        assert dha_budget(64) == pytest.approx(230.4)

    def test_singleton(self, params):
        result = dha_find_min(EncodedDataset.from_values([5]), params, trial_rng(1, 0))
        assert result.found_min == 5
        assert result.algorithm == "dha"

    def test_stays_within_budget(self, table_a, params):
        result = dha_find_min(table_a, params, trial_rng(42, 0))
        assert result.trace.total_queries <= dha_budget(table_a.size)
        assert result.trace.rounds[-1].budget_exhausted
        assert all(r.branch == "bbht" for r in result.trace.rounds)

    @pytest.mark.slow
    def test_matched_seeds_full_range(self, full6):
        params = SearchParams(seed=7)
        dha_rate = _success_rate(dha_find_min, full6, params, 1000)
        oqmsa_rate = _success_rate(oqmsa_find_min, full6, params, 1000)
        assert dha_rate > 0.5
        assert oqmsa_rate >= 0.95
