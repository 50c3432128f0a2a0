"""Optimal-filter recursion over a measurement record, using the gain
history of a precomputed covariance lattice, plus innovation diagnostics.

The estimate follows the same explicit Euler discretisation and the same
pre-history convention as the simulator, so a noise-free run started at
the true state reproduces it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceLattice
from .errors import ConfigError
from .model import StateSpaceModel
from .sde import PREHISTORY_CHOICES


@dataclass(frozen=True)
class EstimateTrajectory:
    """Filter output: state estimates on the grid and the innovation
    increments dnu_k = dy_k - dyhat_k."""

    h: float
    N: int
    times: np.ndarray  # (K+1,)
    xhat: np.ndarray  # (K+1, 2)
    dnu: np.ndarray  # (K, 2)
    prehistory: str

    @property
    def K(self) -> int:
        return len(self.xhat) - 1


def run_filter(
    m: StateSpaceModel,
    lat: CovarianceLattice,
    dy: np.ndarray,
    xhat0,
    prehistory: str = "zero",
) -> EstimateTrajectory:
    """Euler recursion of the optimal filter:

        xhat_{k+1} = xhat_k + (A xhat_k + A_d xhat~_{k-N}) h
                     + K_k (dy_k - (C xhat_k + C_d xhat~_{k-N}) h)

    with K_k read from the lattice at the left grid point and the same
    pre-history convention for xhat~ as the simulator used for x~.
    """
    dy = np.asarray(dy, dtype=float)
    if dy.ndim != 2 or dy.shape[1] != 2:
        raise ConfigError("dy must be a (K, 2) array of measurement increments")
    if prehistory not in PREHISTORY_CHOICES:
        raise ConfigError(f"prehistory must be one of {PREHISTORY_CHOICES}")
    K = len(dy)
    if lat.K != K:
        raise ConfigError(
            f"grid mismatch: lattice has {lat.K} steps, record has {K}"
        )
    xhat0 = np.array(xhat0, dtype=float)
    if xhat0.shape != (2,) or not np.all(np.isfinite(xhat0)):
        raise ConfigError("xhat0 must be a finite 2-vector")

    h, N = lat.h, lat.N
    A, A_d, C, C_d = m.A, m.A_d, m.C, m.C_d
    gains = lat.gain
    hold = prehistory == "hold-initial"
    pre = xhat0.copy() if hold else np.zeros(2)

    xhat = np.empty((K + 1, 2))
    xhat[0] = xhat0
    dnu = np.empty((K, 2))
    for k in range(K):
        j = k - N
        xd = xhat[j] if j >= 0 else pre
        xk = xhat[k]
        dn = dy[k] - (C @ xk + C_d @ xd) * h
        dnu[k] = dn
        xhat[k + 1] = xk + (A @ xk + A_d @ xd) * h + gains[k] @ dn

    times = np.arange(K + 1) * h
    for arr in (times, xhat, dnu):
        arr.flags.writeable = False
    return EstimateTrajectory(
        h=h, N=N, times=times, xhat=xhat, dnu=dnu, prehistory=prehistory
    )


@dataclass(frozen=True)
class WhitenessStats:
    """Sample autocorrelation diagnostics of the innovation increments.

    ``autocorr[l - 1, i]`` is the lag-l autocorrelation of channel i,
    normalised by the lag-0 sum of squares; ``band`` is the 3/sqrt(n)
    acceptance band for a white sequence.  ``lag0_cov`` estimates the
    increment covariance, which for a well-tuned filter approaches
    D_d D_d^T h.
    """

    n: int
    lag0_cov: np.ndarray  # (2, 2)
    autocorr: np.ndarray  # (max_lag, 2)
    band: float

    def inside_band(self) -> np.ndarray:
        return np.abs(self.autocorr) <= self.band

    def all_white(self) -> bool:
        return bool(np.all(self.inside_band()))


def innovation_whiteness(est: EstimateTrajectory, max_lag: int) -> WhitenessStats:
    """Per-channel sample autocorrelations of the innovations at lags
    1..max_lag.  Requires at least 10 * max_lag increments."""
    if max_lag < 1:
        raise ConfigError("max_lag must be at least 1")
    d = np.asarray(est.dnu, dtype=float)
    n = len(d)
    if n < 10 * max_lag:
        raise ConfigError(
            f"record too short: {n} increments for max_lag={max_lag} "
            f"(need at least {10 * max_lag})"
        )
    lag0_cov = d.T @ d / n
    centred = d - d.mean(axis=0)
    denom = np.sum(centred * centred, axis=0)
    autocorr = np.empty((max_lag, 2))
    for lag in range(1, max_lag + 1):
        autocorr[lag - 1] = np.sum(centred[:-lag] * centred[lag:], axis=0) / denom
    return WhitenessStats(
        n=n, lag0_cov=lag0_cov, autocorr=autocorr, band=3.0 / math.sqrt(n)
    )
