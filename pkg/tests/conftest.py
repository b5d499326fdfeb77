import os
import sys

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import config  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(autouse=True)
def _no_env_seed(monkeypatch):
    # a seed in the developer's .env would override every config
    monkeypatch.setattr(config, "SPLITMONO_SEED", None)


def numeric_prox(scalar_f, gamma, x):
    """Coordinate-wise argmin of f(y) + (y - x)^2 / (2 gamma) for separable f."""
    out = []
    for xi in np.asarray(x, dtype=np.float64):
        res = minimize_scalar(lambda y: scalar_f(y) + (y - xi) ** 2 / (2.0 * gamma),
                              bounds=(xi - 10.0, xi + 10.0), method="bounded",
                              options={"xatol": 1e-12})
        out.append(res.x)
    return np.array(out)
