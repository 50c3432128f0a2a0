"""Brute-force references for validating the primary path.

* ``build_augmented`` / ``augmented_kalman``: the delay is removed by
  stacking the state over one delay window together with the still-in-flight
  noise increments, after which an exact discrete Kalman recursion applies.
  This discretises first and filters optimally, the opposite order from the
  continuous filter, so agreement with ``run_filter`` is O(h).
* ``discrete_kalman_markov``: the textbook zero-delay Kalman recursion
  (gain / estimate / Riccati arranged in the standard -K R K^T form) for the
  collapsed Markovian model.
* ``riccati_markov``: the standard Kalman-Bucy covariance flow for the
  collapsed model, integrated with RK4.

State layout of the augmented model, for delay steps N >= 1:

    z_k = [x_k, x_{k-1}, ..., x_{k-N},  dw_{k-1}, ..., dw_{k-N}]

The step from k to k+1 injects the single fresh increment dw_k; together
with the buffered past increments the recursion therefore spans the last
N+1 increments dw_k .. dw_{k-N}.  The measurement reads D_d dw_{k-N} out of
the buffer, so it carries no fresh noise.  For N = 0 the state is just x_k
and the same increment dw_k drives both the transition (through B + B_d)
and the measurement (through D_d); that correlation enters the recursion
as a process/measurement noise cross-covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .model import StateSpaceModel
from .sde import delay_steps


@dataclass(frozen=True)
class AugmentedModel:
    """Discrete model z_{k+1} = F z_k + Gam dw_k, dy_k = H z_k + J dw_k."""

    N: int
    h: float
    n_x: int  # size of the stacked-state block, 2 (N+1)
    dim: int  # full state size including the noise buffer
    F: np.ndarray
    Gam: np.ndarray  # (dim, 2) fresh-noise injection
    H: np.ndarray  # (2, dim)
    J: np.ndarray  # (2, 2) fresh-noise feedthrough (zero for N >= 1)

    def x_slot(self, j: int) -> slice:
        """Columns of the stacked block holding x_{k-j}."""
        if not 0 <= j <= self.N:
            raise IndexError(f"stacked slot {j} outside 0..{self.N}")
        return slice(2 * j, 2 * j + 2)

    def buffer_slot(self, i: int) -> slice:
        """Columns holding dw_{k-1-i}, for i = 0..N-1."""
        if not 0 <= i < self.N:
            raise IndexError(f"buffer slot {i} outside 0..{self.N - 1}")
        return slice(self.n_x + 2 * i, self.n_x + 2 * i + 2)


def build_augmented(m: StateSpaceModel, h: float) -> AugmentedModel:
    """Exact Euler discretisation of the delayed model on the stacked state."""
    N, _ = delay_steps(m.T, h)
    n_x = 2 * (N + 1)
    dim = n_x + 2 * N
    I2 = np.eye(2)

    F = np.zeros((dim, dim))
    Gam = np.zeros((dim, 2))
    H = np.zeros((2, dim))
    J = np.zeros((2, 2))

    # top block: x_{k+1} from x_k, x_{k-N} and the increments
    F[0:2, 0:2] += I2 + h * m.A
    F[0:2, 2 * N : 2 * N + 2] += h * m.A_d
    if N >= 1:
        # dw_{k-N} sits in buffer slot N-1
        F[0:2, n_x + 2 * (N - 1) : n_x + 2 * N] += m.B_d
        Gam[0:2] = m.B
    else:
        Gam[0:2] = m.B + m.B_d

    # shift register x_{k-j} <- x_{k-j+1}
    for j in range(1, N + 1):
        F[2 * j : 2 * j + 2, 2 * (j - 1) : 2 * j] = I2
    # noise buffer shift; slot 0 receives the fresh increment
    for i in range(1, N):
        F[n_x + 2 * i : n_x + 2 * i + 2, n_x + 2 * (i - 1) : n_x + 2 * i] = I2
    if N >= 1:
        Gam[n_x : n_x + 2] = I2

    H[:, 0:2] += h * m.C
    H[:, 2 * N : 2 * N + 2] += h * m.C_d
    if N >= 1:
        H[:, n_x + 2 * (N - 1) : n_x + 2 * N] = m.D_d
    else:
        J = m.D_d.copy()

    for arr in (F, Gam, H, J):
        arr.flags.writeable = False
    return AugmentedModel(N=N, h=h, n_x=n_x, dim=dim, F=F, Gam=Gam, H=H, J=J)


def simulate_augmented(
    am: AugmentedModel,
    x0,
    dw: np.ndarray,
    prehistory: str = "zero",
) -> tuple[np.ndarray, np.ndarray]:
    """Run the deterministic stacked recursion on a given increment array
    (layout as in Trajectory.dw: row i is the increment of step i - N).
    Returns (x top-blocks (K+1, 2), dy (K, 2)); used to cross-check the
    simulator step for step."""
    N = am.N
    dw = np.asarray(dw, dtype=float)
    K = len(dw) - N
    if K < 1:
        raise ConfigError("increment array shorter than one step")
    x0 = np.array(x0, dtype=float)

    z = np.zeros(am.dim)
    z[0:2] = x0
    if prehistory == "hold-initial":
        for j in range(1, N + 1):
            z[am.x_slot(j)] = x0
    elif prehistory != "zero":
        raise ConfigError(f"unknown prehistory {prehistory!r}")
    for i in range(N):
        z[am.buffer_slot(i)] = dw[N - 1 - i]  # dw_{-1-i}

    xs = np.empty((K + 1, 2))
    dys = np.empty((K, 2))
    xs[0] = z[0:2]
    for k in range(K):
        fresh = dw[k + N]
        dys[k] = am.H @ z + am.J @ fresh
        z = am.F @ z + am.Gam @ fresh
        xs[k + 1] = z[0:2]
    return xs, dys


@dataclass(frozen=True)
class AugmentedEstimate:
    """One-step-predictor output of the exact discrete filter.

    ``xhat[k]`` is the estimate of x_k given dy_0..dy_{k-1}, aligned with
    the explicit-Euler filter's indexing.  ``P_top`` is the matching error
    covariance of the top block and ``P_lag`` the cross block
    E[e_k e_{k-N}^T], the discrete counterpart of the delayed covariance at
    lag T.
    """

    h: float
    N: int
    times: np.ndarray
    xhat: np.ndarray  # (K+1, 2)
    P_top: np.ndarray  # (K+1, 2, 2)
    P_lag: np.ndarray  # (K+1, 2, 2)


def augmented_kalman(
    am: AugmentedModel,
    dy: np.ndarray,
    xhat0,
    P0_init,
    prehistory: str = "zero",
) -> AugmentedEstimate:
    """Discrete Kalman recursion (one-step predictor form) on the stacked
    model, with the process/measurement noise correlation handled through
    the joint covariance.  Exact for the Euler-discretised system."""
    dy = np.asarray(dy, dtype=float)
    if dy.ndim != 2 or dy.shape[1] != 2:
        raise ConfigError("dy must be a (K, 2) array")
    K = len(dy)
    h, N = am.h, am.N
    xhat0 = np.array(xhat0, dtype=float)
    P0_init = np.array(P0_init, dtype=float)

    z = np.zeros(am.dim)
    z[0:2] = xhat0
    P = np.zeros((am.dim, am.dim))
    P[0:2, 0:2] = P0_init
    if prehistory == "hold-initial":
        # pre-history pinned at the (unknown) initial state: every stacked
        # pair shares the initial error exactly
        for j in range(1, N + 1):
            z[am.x_slot(j)] = xhat0
        for j1 in range(N + 1):
            for j2 in range(N + 1):
                P[am.x_slot(j1), am.x_slot(j2)] = P0_init
    elif prehistory != "zero":
        raise ConfigError(f"unknown prehistory {prehistory!r}")
    for i in range(N):
        sl = am.buffer_slot(i)
        P[sl, sl] = h * np.eye(2)

    F, Gam, H, J = am.F, am.Gam, am.H, am.J
    Qd = h * (Gam @ Gam.T)
    Rd = h * (J @ J.T)
    Sc = h * (Gam @ J.T)  # process/measurement cross-covariance

    lagcol = slice(2 * N, 2 * N + 2)
    xh = np.empty((K + 1, 2))
    P_top = np.empty((K + 1, 2, 2))
    P_lag = np.empty((K + 1, 2, 2))
    xh[0] = z[0:2]
    P_top[0] = P[0:2, 0:2]
    P_lag[0] = P[0:2, lagcol]

    for k in range(K):
        PHt = P @ H.T
        S = H @ PHt + Rd
        eps = dy[k] - H @ z
        Kp = np.linalg.solve(S.T, (F @ PHt + Sc).T).T
        z = F @ z + Kp @ eps
        P = F @ P @ F.T + Qd - Kp @ S @ Kp.T
        P = 0.5 * (P + P.T)
        xh[k + 1] = z[0:2]
        P_top[k + 1] = P[0:2, 0:2]
        P_lag[k + 1] = P[0:2, lagcol]

    times = np.arange(K + 1) * h
    for arr in (times, xh, P_top, P_lag):
        arr.flags.writeable = False
    return AugmentedEstimate(h=h, N=N, times=times, xhat=xh, P_top=P_top, P_lag=P_lag)


def _require_markovian(m: StateSpaceModel, who: str) -> None:
    if m.T != 0.0 or m.has_delay_terms:
        raise ConfigError(f"{who} expects a zero-delay model (use markovian_limit)")


def discrete_kalman_markov(
    m: StateSpaceModel,
    dy: np.ndarray,
    xhat0,
    P0_init,
    h: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Standard discrete Kalman filter for the collapsed model, written in
    the textbook arrangement

        K_k = P_k C^T (D_d D_d^T)^{-1}
        xhat_{k+1} = xhat_k + A xhat_k h + K_k (dy_k - C xhat_k h)
        P_{k+1} = P_k + h (A P_k + P_k A^T + B B^T - K_k (D_d D_d^T) K_k^T)

    Returns (xhat (K+1, 2), P history (K+1, 2, 2)).
    """
    _require_markovian(m, "discrete_kalman_markov")
    dy = np.asarray(dy, dtype=float)
    K = len(dy)
    A, B, C = m.A, m.B, m.C
    S = m.measurement_noise_cov
    S_inv = np.linalg.inv(S)
    Q = B @ B.T

    xh = np.empty((K + 1, 2))
    Ph = np.empty((K + 1, 2, 2))
    xh[0] = np.array(xhat0, dtype=float)
    Ph[0] = np.array(P0_init, dtype=float)
    x = xh[0].copy()
    P = Ph[0].copy()
    for k in range(K):
        Kk = P @ C.T @ S_inv
        dn = dy[k] - (C @ x) * h
        x = x + (A @ x) * h + Kk @ dn
        P = P + h * (A @ P + P @ A.T + Q - Kk @ S @ Kk.T)
        P = 0.5 * (P + P.T)
        xh[k + 1] = x
        Ph[k + 1] = P
    return xh, Ph


def riccati_markov(
    m: StateSpaceModel,
    P0_init,
    horizon: float,
    h: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Kalman-Bucy covariance flow for the collapsed model,

        dP/dt = A P + P A^T + B B^T - P C^T (D_d D_d^T)^{-1} C P,

    integrated with classical RK4.  Returns (times, P history)."""
    _require_markovian(m, "riccati_markov")
    if not (math.isfinite(h) and h > 0):
        raise ConfigError(f"step h must be positive, got {h!r}")
    K = int(round(horizon / h))
    if K < 1:
        raise ConfigError("horizon shorter than one step")
    A, B, C = m.A, m.B, m.C
    S_inv = np.linalg.inv(m.measurement_noise_cov)
    Q = B @ B.T

    def rhs(P):
        return A @ P + P @ A.T + Q - P @ C.T @ S_inv @ C @ P

    Ph = np.empty((K + 1, 2, 2))
    Ph[0] = np.array(P0_init, dtype=float)
    P = Ph[0].copy()
    for k in range(K):
        r1 = rhs(P)
        r2 = rhs(P + 0.5 * h * r1)
        r3 = rhs(P + 0.5 * h * r2)
        r4 = rhs(P + h * r3)
        P = P + (h / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
        P = 0.5 * (P + P.T)
        Ph[k + 1] = P
    times = np.arange(K + 1) * h
    return times, Ph
