"""Seed fan-out and ensemble statistics for simulate-then-filter runs."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .covariance import CovarianceLattice
from .filtering import run_filter
from .model import StateSpaceModel
from .sde import SimConfig, simulate


@dataclass(frozen=True)
class EnsembleStats:
    """Aggregates over an ensemble of seeded runs with a shared lattice."""

    n_seeds: int
    times: np.ndarray  # (K+1,)
    mean_x: np.ndarray  # (K+1, 2) ensemble mean of the true state
    std_x: np.ndarray  # (K+1, 2) per-point standard deviation of the true state
    mean_xhat: np.ndarray  # (K+1, 2)
    mean_err: np.ndarray  # (K+1, 2) ensemble mean of x - xhat
    err_final: np.ndarray  # (n_seeds, 2) per-seed error at the horizon

    def stderr_x(self) -> np.ndarray:
        """Standard error of mean_x, per grid point and component."""
        return self.std_x / np.sqrt(self.n_seeds)

    def err_cov_final(self, centered: bool = True) -> np.ndarray:
        """Empirical covariance of the horizon error across seeds."""
        e = self.err_final
        if centered:
            e = e - e.mean(axis=0)
        return e.T @ e / len(e)


def ensemble_stats(
    m: StateSpaceModel,
    cfg: SimConfig,
    lat: CovarianceLattice,
    xhat0,
    n_seeds: int,
    per_seed: Callable | None = None,
) -> EnsembleStats:
    """Run ``n_seeds`` simulate+filter pairs with seeds cfg.seed, cfg.seed+1,
    ... and accumulate ensemble statistics.  ``per_seed(i, traj, est)`` is
    invoked for every run when given (e.g. to write files)."""
    if n_seeds < 1:
        raise ValueError("n_seeds must be at least 1")
    sum_x = sum_xx = sum_xhat = None
    err_final = np.empty((n_seeds, 2))
    times = None

    for i in range(n_seeds):
        cfg_i = replace(cfg, seed=cfg.seed + i)
        traj = simulate(m, cfg_i)
        est = run_filter(m, lat, traj.dy, xhat0, prehistory=cfg.prehistory)
        if sum_x is None:
            times = traj.times
            sum_x = np.zeros_like(traj.x)
            sum_xx = np.zeros_like(traj.x)
            sum_xhat = np.zeros_like(est.xhat)
        sum_x += traj.x
        sum_xx += traj.x**2
        sum_xhat += est.xhat
        err_final[i] = traj.x[-1] - est.xhat[-1]
        if per_seed is not None:
            per_seed(i, traj, est)

    mean_x = sum_x / n_seeds
    var_x = np.maximum(sum_xx / n_seeds - mean_x**2, 0.0)
    mean_xhat = sum_xhat / n_seeds
    return EnsembleStats(
        n_seeds=n_seeds,
        times=times,
        mean_x=mean_x,
        std_x=np.sqrt(var_x),
        mean_xhat=mean_xhat,
        mean_err=mean_x - mean_xhat,
        err_final=err_final,
    )
