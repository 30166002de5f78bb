from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
import uvicorn
import logging
import math
import time
from typing import Literal, Optional

from config import APP_VERSION, sim_config
from exceptions import QMinSearchError
from experiment import ExperimentConfig, ExperimentWorkflow
from metrics import complexity_curve, complexity_report
from minsearch import SearchParams
from oraclesynth import plan_report, synthesize_oracle

# Setup logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Quantum Minimum Search Simulator API",
    description="Exact-phase Grover-Long minimum search, threshold-oracle synthesis and complexity model over HTTP",
    version=APP_VERSION,
)

# CORS middleware for cross-origin requests
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class SynthRequest(BaseModel):
    d_prime: int
    n_qubits: int
    phi: float = math.pi


class ComplexityRequest(BaseModel):
    n_min: int = 4
    n_max: int = 20
    m0_rule: Literal["half", "one"] = "half"
    n_size: Optional[int] = None  # single report instead of a curve
    m0: Optional[int] = None


class ExperimentRequest(BaseModel):
    algorithm: Literal["oqmsa", "dha", "both"] = "oqmsa"
    dataset: str
    trials: int = Field(100, ge=1)
    seed: int = Field(default_factory=lambda: sim_config.default_seed, ge=0)
    n_qubits: Optional[int] = None
    params: SearchParams = Field(default_factory=SearchParams)


@app.post("/oracle/synth")
async def oracle_synth_endpoint(request: SynthRequest):
    """
    Decompose the threshold oracle "phase on every code <= d'" into blocks.

    Example:
    {
        "d_prime": 35,
        "n_qubits": 6,
        "phi": 3.14159
    }
    """
    try:
        if request.n_qubits < 1:
            raise HTTPException(status_code=400, detail="n_qubits must be at least 1")

        plan = synthesize_oracle(request.d_prime, request.n_qubits, request.phi)
        logger.info(f"Synthesized oracle d'={request.d_prime} n={request.n_qubits}: {len(plan.blocks)} block(s)")
        return {
            "response": plan_report(plan),
            "status_code": 200,
            "timestamp": time.time(),
        }
    except HTTPException as he:
        raise he
    except QMinSearchError as e:
        logger.error(f"Oracle synthesis rejected: {e.message}")
        raise HTTPException(status_code=400, detail=e.to_dict())
    except Exception as e:
        logger.error(f"Error in oracle synthesis: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Error in oracle synthesis: {str(e)}")


@app.post("/complexity")
async def complexity_endpoint(request: ComplexityRequest):
    """
    Analytic complexity model.

    With n_size (and m0, default N/2) a single report is returned; otherwise
    one row per qubit count in [n_min, n_max].
    """
    try:
        if request.n_size is not None:
            m0 = request.m0 if request.m0 is not None else request.n_size // 2
            response = complexity_report(request.n_size, m0).model_dump()
        else:
            response = [row.model_dump() for row in complexity_curve(request.n_min, request.n_max, request.m0_rule)]

        return {
            "response": response,
            "status_code": 200,
            "timestamp": time.time(),
        }
    except HTTPException as he:
        raise he
    except QMinSearchError as e:
        logger.error(f"Complexity request rejected: {e.message}")
        raise HTTPException(status_code=400, detail=e.to_dict())
    except Exception as e:
        logger.error(f"Error computing complexity: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Error computing complexity: {str(e)}")


@app.post("/experiment/run")
def experiment_endpoint(request: ExperimentRequest):
    """
    Run seeded minimum-search trials. Runs in the threadpool; trials are
    capped by QMIN_API_MAX_TRIALS.

    Example:
    {
        "algorithm": "both",
        "dataset": "table-a",
        "trials": 200,
        "seed": 42,
        "params": {"lambda": 1.2}
    }
    """
    try:
        if not request.dataset or request.dataset.strip() == "":
            raise HTTPException(status_code=400, detail="Dataset cannot be empty")

        if request.trials > sim_config.api_max_trials:
            raise HTTPException(
                status_code=400,
                detail=f"At most {sim_config.api_max_trials} trials per request",
            )

        logger.info(f"Starting {request.algorithm} experiment on {request.dataset} ({request.trials} trials)")
        config = ExperimentConfig(
            algorithm=request.algorithm,
            dataset=request.dataset.strip(),
            trials=request.trials,
            seed=request.seed,
            params=request.params,
            n_qubits=request.n_qubits,
            jobs=1,
        )
        report = ExperimentWorkflow(config).run()
        logger.info(f"Finished experiment on {request.dataset}")

        return {
            "response": report.model_dump(mode="json"),
            "status_code": 200,
            "timestamp": time.time(),
        }
    except HTTPException as he:
        raise he
    except QMinSearchError as e:
        logger.error(f"Experiment rejected: {e.message}")
        raise HTTPException(status_code=400, detail=e.to_dict())
    except Exception as e:
        logger.error(f"Error running experiment: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Error running experiment: {str(e)}")


@app.get("/")
async def root():
    """Root endpoint with API information"""
    return {
        "message": "Quantum Minimum Search Simulator API",
        "version": APP_VERSION,
        "endpoints": ["POST /oracle/synth", "POST /complexity", "POST /experiment/run"],
        "description": "Simulated exact-phase minimum search with a DHA baseline and the analytic cost model",
    }


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "timestamp": time.time()
    }


if __name__ == "__main__":
    uvicorn.run(
        "app:app",
        host=sim_config.api_host,
        port=sim_config.api_port,
        reload=True,
        log_level="info"
    )
