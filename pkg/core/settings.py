#!/usr/bin/env python3
"""
Settings
Environment-driven defaults for the CLI and experiment runner
"""
import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


@dataclass(frozen=True)
class Settings:
    data_dir: str = "data"
    log_level: str = "WARNING"
    seed: int = 1
    mbo_max_iter: int = 1000
    mcf_max_steps: int = 200
    ac_rtol: float = 1e-8
    ac_atol: float = 1e-10


def load_settings() -> Settings:
    """Read settings from the environment, falling back to defaults"""
    return Settings(
        data_dir=os.getenv('GRAPHFLOW_DATA_DIR', 'data'),
        log_level=os.getenv('GRAPHFLOW_LOG_LEVEL', 'WARNING').upper(),
        seed=int(os.getenv('GRAPHFLOW_SEED', '1')),
        mbo_max_iter=int(os.getenv('GRAPHFLOW_MBO_MAX_ITER', '1000')),
        mcf_max_steps=int(os.getenv('GRAPHFLOW_MCF_MAX_STEPS', '200')),
        ac_rtol=float(os.getenv('GRAPHFLOW_AC_RTOL', '1e-8')),
        ac_atol=float(os.getenv('GRAPHFLOW_AC_ATOL', '1e-10')),
    )


settings = load_settings()
