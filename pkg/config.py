from dataclasses import dataclass
import os
from dotenv import load_dotenv

load_dotenv()

APP_VERSION = "1.0.0"


@dataclass
class SimulatorConfig:
    statevector_qubit_limit: int = int(os.getenv("QMIN_STATEVECTOR_QUBIT_LIMIT", "24"))
    jobs: int = int(os.getenv("QMIN_JOBS", "1"))
    log_level: str = os.getenv("QMIN_LOG_LEVEL", "WARNING")
    default_seed: int = int(os.getenv("QMIN_DEFAULT_SEED", "42"))
    max_rounds_per_pass: int = int(os.getenv("QMIN_MAX_ROUNDS_PER_PASS", "64"))
    api_host: str = os.getenv("QMIN_API_HOST", "0.0.0.0")
    api_port: int = int(os.getenv("QMIN_API_PORT", "8002"))
    api_max_trials: int = int(os.getenv("QMIN_API_MAX_TRIALS", "2000"))


sim_config = SimulatorConfig()
