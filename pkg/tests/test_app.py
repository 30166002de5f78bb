import pytest
from fastapi.testclient import TestClient

from app import app
from config import sim_config

client = TestClient(app)


class TestInfo:
    def test_root(self):
        body = client.get("/").json()
        assert "POST /oracle/synth" in body["endpoints"]

    def test_health(self):
        body = client.get("/health").json()
        assert body["status"] == "healthy"
        assert "timestamp" in body


class TestOracleSynth:
    def test_two_blocks(self):
        response = client.post("/oracle/synth", json={"d_prime": 35, "n_qubits": 6})
        assert response.status_code == 200
        assert response.json()["response"]["cost"]["blocks"] == 2

    def test_full_range(self):
        response = client.post("/oracle/synth", json={"d_prime": 63, "n_qubits": 6})
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "ThresholdIsFullRange"

    def test_bad_qubits(self):
        assert client.post("/oracle/synth", json={"d_prime": 0, "n_qubits": 0}).status_code == 400


class TestComplexity:
    def test_single_report(self):
        body = client.post("/complexity", json={"n_size": 64}).json()["response"]
        assert body["m0"] == 32
        assert body["r_init"] == pytest.approx(36.0)
        assert body["r_total"] < body["dha_bound"]

    def test_curve(self):
        rows = client.post("/complexity", json={"n_min": 4, "n_max": 6}).json()["response"]
        assert [r["N"] for r in rows] == [16, 32, 64]

    def test_invalid_range(self):
        response = client.post("/complexity", json={"n_min": 6, "n_max": 4})
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "InvalidRange"


class TestExperiment:
    def test_both_algorithms(self):
        response = client.post(
            "/experiment/run",
            json={"algorithm": "both", "dataset": "full:4", "trials": 20, "seed": 1, "params": {"lambda": 1.2}},
        )
        assert response.status_code == 200
        report = response.json()["response"]
        assert set(report["results"]) == {"oqmsa", "dha"}
        assert report["environment"]["seed"] == 1

    def test_trial_cap(self):
        response = client.post(
            "/experiment/run",
            json={"dataset": "full:4", "trials": sim_config.api_max_trials + 1},
        )
        assert response.status_code == 400

    def test_unknown_dataset(self):
        response = client.post("/experiment/run", json={"dataset": "missing.csv", "trials": 1})
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "UnknownDatasetSpec"

    def test_validation(self):
        assert client.post("/experiment/run", json={"dataset": "full:4", "trials": 0}).status_code == 422
