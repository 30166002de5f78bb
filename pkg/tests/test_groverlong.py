import logging
import math

import pytest
from pydantic import ValidationError

from dataset import full_range_dataset
from exceptions import InvalidCounts, PhaseDomainError
from groverlong import (
    GLParams,
    compute_phi,
    compute_tmax,
    compute_tmax_alg1,
    evolve,
    exact_success_probability,
    grover_long_search,
    make_params,
    rotation_angle,
)


class TestTmax:
    @pytest.mark.parametrize("m, n_size, expected", [(1, 64, 12), (4, 64, 6), (64, 64, 1), (5, 5, 1)])
    def test_values(self, m, n_size, expected):
        assert compute_tmax(m, n_size) == expected

    @pytest.mark.parametrize("n_size, expected", [(64, 11), (4, 2), (2, 1)])
    def test_alg1(self, n_size, expected):
        assert compute_tmax_alg1(n_size) == expected

    @pytest.mark.parametrize("m, n_size", [(0, 4), (5, 4)])
    def test_invalid(self, m, n_size):
        with pytest.raises(InvalidCounts):
            compute_tmax(m, n_size)

    def test_alg1_needs_two(self):
        with pytest.raises(InvalidCounts):
            compute_tmax_alg1(1)


class TestPhi:
    def test_quarter_recovers_grover(self):
        phi, clamped = compute_phi(1, 1, 4)
        assert phi == math.pi
        assert not clamped

    def test_matched_phase(self):
        phi, clamped = compute_phi(6, 4, 64)
        assert phi == pytest.approx(2 * math.asin(math.sin(math.pi / 26) / 0.25))
        assert phi == pytest.approx(1.0062, abs=1e-3)
        assert not clamped

    def test_clamp(self):
        assert compute_phi(1, 1, 5, "clamp") == (math.pi, True)

    def test_error_policy(self):
        with pytest.raises(PhaseDomainError):
            compute_phi(1, 1, 5, "error")

    def test_t_must_be_positive(self):
        with pytest.raises(InvalidCounts):
            compute_phi(0, 1, 4)

    def test_make_params_zero_iterations(self):
        params = make_params(0, 3, 8)
        assert params.t == 0
        assert params.phi == math.pi
        assert not params.clamped


class TestSearch:
    def test_quarter_case_statevector(self):
        ds = full_range_dataset(2)
        outcome = grover_long_search(ds, 0, 1, make_params(1, 1, 4), "statevector")
        assert outcome.marked_probability() == pytest.approx(1.0, abs=1e-12)
        assert outcome.query_count == 1

    def test_quarter_case_large(self):
        ds = full_range_dataset(10)
        params = make_params(1, 256, 1024)
        for engine in ("statevector", "subspace"):
            assert grover_long_search(ds, 255, 1, params, engine).marked_probability() == pytest.approx(1.0, abs=1e-12)

    def test_zero_iterations(self, table_b):
        outcome = grover_long_search(table_b, 7, 0, make_params(0, 8, 64), "statevector")
        assert outcome.marked_probability() == pytest.approx(6 / 36)

    def test_sure_success_statevector(self, full6):
        t = compute_tmax(4, 64)
        outcome = grover_long_search(full6, 3, t, make_params(t, 4, 64, "error"), "statevector")
        assert t == 6
        assert outcome.marked_probability() >= 1 - 1e-9

    def test_full_threshold_statevector(self, full6):
        outcome = grover_long_search(full6, 63, 3, GLParams(t=3, phi=1.0, m_est=64, n_est=64), "statevector")
        assert outcome.marked_probability() == pytest.approx(1.0)

    def test_nothing_marked(self, full6):
        outcome = evolve(full6, -1, 4, math.pi)
        assert outcome.marked_probability() == 0.0

    def test_measure_after_sure_success(self, full6, rng):
        t = compute_tmax(4, 64)
        params = make_params(t, 4, 64)
        for engine in ("statevector", "subspace"):
            outcome = grover_long_search(full6, 3, t, params, engine)
            assert all(outcome.measure(full6, rng) <= 3 for _ in range(200))

    def test_engines_agree_on_table_a(self, table_a):
        params = GLParams(t=9, phi=2.1, m_est=1, n_est=64)
        p_state = grover_long_search(table_a, 20, 9, params, "statevector").marked_probability()
        p_sub = grover_long_search(table_a, 20, 9, params, "subspace").marked_probability()
        assert p_state == pytest.approx(p_sub, abs=1e-10)

    def test_negative_t(self, full6):
        with pytest.raises(InvalidCounts):
            grover_long_search(full6, 3, -1, make_params(0, 4, 64))


class TestExactProbability:
    def test_zero_iterations(self):
        assert exact_success_probability(5, 40, 0, 1.0) == pytest.approx(5 / 40)

    def test_sure_success_small_sweep(self):
        for n in range(1, 7):
            n_size = 2 ** n
            for m in range(1, n_size + 1):
                t = compute_tmax(m, n_size)
                phi, _ = compute_phi(t, m, n_size, "error")
                assert exact_success_probability(m, n_size, t, phi) >= 1 - 1e-9, (m, n_size)

    def test_rotation_angle_grover(self):
        beta = math.asin(0.5)
        assert rotation_angle(beta, math.pi) == pytest.approx(2 * beta)


class TestGLParams:
    def test_matched_params_accepted(self):
        params = GLParams(t=9, phi=2.1, m_est=1, n_est=64)
        assert not params.clamped

    @pytest.mark.parametrize("phi", [0.0, -1.0, math.pi + 1e-9, 2 * math.pi])
    def test_phase_outside_half_turn(self, phi):
        with pytest.raises(ValidationError):
            GLParams(t=1, phi=phi, m_est=1, n_est=4)

    @pytest.mark.parametrize("m_est, n_est", [(0, 64), (65, 64)])
    def test_estimate_out_of_range(self, m_est, n_est):
        with pytest.raises(ValidationError):
            GLParams(t=0, phi=math.pi, m_est=m_est, n_est=n_est)

    def test_unmatchable_iteration_count(self):
        # sin(pi/18) > sqrt(1/64): four iterations overshoot a single marked item
        with pytest.raises(ValidationError):
            GLParams(t=4, phi=math.pi, m_est=1, n_est=64)

    def test_clamped_skips_matching(self):
        assert GLParams(t=1, phi=math.pi, m_est=1, n_est=64, clamped=True).clamped

    def test_make_params_always_valid(self):
        for t in range(0, 12):
            for m in range(1, 65):
                make_params(t, m, 64)


class TestEvolve:
    def test_matches_grover_long_search(self, table_a):
        params = make_params(3, 16, 64)
        for engine in ("statevector", "subspace"):
            expected = grover_long_search(table_a, 15, 3, params, engine).marked_probability()
            assert evolve(table_a, 15, 3, params.phi, engine).marked_probability() == pytest.approx(expected)

    def test_phase_beyond_pi(self, table_b):
        p_state = evolve(table_b, 20, 7, 5.5, "statevector").marked_probability()
        p_sub = evolve(table_b, 20, 7, 5.5, "subspace").marked_probability()
        assert p_state == pytest.approx(p_sub, abs=1e-10)


class TestClampLogging:
    def test_clamp_is_logged(self, caplog):
        with caplog.at_level(logging.DEBUG, logger="groverlong"):
            assert compute_phi(1, 1, 64) == (math.pi, True)
        assert "Clamped phase for t=1" in caplog.text

    def test_matched_phase_is_quiet(self, caplog):
        with caplog.at_level(logging.DEBUG, logger="groverlong"):
            compute_phi(6, 4, 64)
        assert caplog.text == ""
