import time
from pathlib import Path

import numpy as np
import pytest

from giantcavity import (
    PhysicalParams,
    SimConfig,
    build_model,
    ensemble_stats,
    propagate,
)

from scenario import ENSEMBLE_SEED, ENSEMBLE_SIZE, HORIZON, PAPER_KW, X0, XHAT0


@pytest.fixture(scope="session")
def paper_params():
    return PhysicalParams(**PAPER_KW)


@pytest.fixture(scope="session")
def paper_model(paper_params):
    return build_model(paper_params)


@pytest.fixture(scope="session")
def paper_lattice(paper_model):
    return propagate(paper_model, np.eye(2), HORIZON, paper_model.T / 100)


@pytest.fixture(scope="session")
def paper_ensemble(paper_model, paper_lattice):
    """500 seeded simulate+filter runs of the validation scenario, with the
    wall time they took (consumed by the Monte-Carlo acceptance budget)."""
    cfg = SimConfig(
        horizon=HORIZON,
        h=paper_model.T / 100,
        seed=ENSEMBLE_SEED,
        x0=X0,
    )
    t0 = time.perf_counter()
    stats = ensemble_stats(paper_model, cfg, paper_lattice, XHAT0, ENSEMBLE_SIZE)
    return stats, time.perf_counter() - t0


@pytest.fixture(scope="session")
def artifacts_dir():
    d = Path(__file__).resolve().parent.parent / "test_artifacts"
    d.mkdir(exist_ok=True)
    return d
