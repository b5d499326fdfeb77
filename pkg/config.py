# config.py
import os
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env in the project root
load_dotenv()


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


SPLITMONO_SEED = _env_int("SPLITMONO_SEED", None)
LOG_LEVEL = os.getenv("SPLITMONO_LOG_LEVEL", "INFO").upper()
EXPORT_DIR = os.getenv("SPLITMONO_EXPORT_DIR", "exports")

# Inner loop of the generalized resolvent (U + A)^{-1}
INNER_TOL = _env_float("SPLITMONO_INNER_TOL", 1e-12)
INNER_MAX_ITERS = _env_int("SPLITMONO_INNER_MAX_ITERS", 10000)

# Absolute Loewner tolerance, scaled by (1 + spectral radius) where used
LOEWNER_TOL = _env_float("SPLITMONO_LOEWNER_TOL", 1e-9)


def resolve_seed(config_seed: Optional[int]) -> int:
    """Return the seed to use; SPLITMONO_SEED wins over the config value."""
    if SPLITMONO_SEED is not None:
        return SPLITMONO_SEED
    return 0 if config_seed is None else int(config_seed)
