"""Euler-Maruyama simulation of the delayed model and evaluation of the
propagating waveguide field.

The state recursion gates the delayed drift/noise by the pre-history
convention: with ``prehistory="zero"`` the delayed state is zero before
t = 0 (matching the step-function gating in the derivation of the delayed
mode equation), with ``"hold-initial"`` it is pinned at x0.  Noise
increments on [-T, 0) are always genuine Gaussian increments: the input
field exists before the cavity starts evolving, and the early measurement
record would otherwise be noiseless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .model import PhysicalParams, StateSpaceModel

PREHISTORY_CHOICES = ("zero", "hold-initial")

# Relative tolerance for snapping the delay onto the step grid.
DELAY_SNAP_RTOL = 1e-6


def delay_steps(T: float, h: float, rtol: float = DELAY_SNAP_RTOL) -> tuple[int, float]:
    """Snap the delay to the grid: N = round(T/h), with the absolute snap
    error returned.  Raises if the error exceeds ``rtol * T`` or if a
    positive delay would round to zero steps."""
    if not (math.isfinite(h) and h > 0):
        raise ConfigError(f"step h must be positive and finite, got {h!r}")
    if not (math.isfinite(T) and T >= 0):
        raise ConfigError(f"delay T must be nonnegative and finite, got {T!r}")
    if T == 0.0:
        return 0, 0.0
    N = int(round(T / h))
    err = abs(N * h - T)
    if N < 1 or err > rtol * T:
        raise ConfigError(
            f"delay T={T!r} does not sit on the step grid h={h!r} "
            f"(snap error {err:.3e} exceeds {rtol:g} relative)"
        )
    return N, err


def steps_in(horizon: float, h: float) -> int:
    """Number of Euler steps covering ``horizon`` at step ``h``."""
    if not (math.isfinite(horizon) and horizon > 0):
        raise ConfigError(f"horizon must be positive and finite, got {horizon!r}")
    K = int(round(horizon / h))
    if K < 1:
        raise ConfigError(f"horizon {horizon!r} shorter than one step {h!r}")
    return K


@dataclass(frozen=True)
class SimConfig:
    """Run configuration for one simulated trajectory."""

    horizon: float
    h: float
    seed: int
    x0: np.ndarray
    prehistory: str = "zero"
    noise_variance_scale: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ConfigError(f"step h must be positive, got {self.h!r}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ConfigError(f"horizon must be positive, got {self.horizon!r}")
        if self.prehistory not in PREHISTORY_CHOICES:
            raise ConfigError(
                f"prehistory must be one of {PREHISTORY_CHOICES}, got {self.prehistory!r}"
            )
        if not (
            math.isfinite(self.noise_variance_scale) and self.noise_variance_scale >= 0
        ):
            raise ConfigError(
                f"noise_variance_scale must be nonnegative, got {self.noise_variance_scale!r}"
            )
        x0 = np.array(self.x0, dtype=float)
        if x0.shape != (2,) or not np.all(np.isfinite(x0)):
            raise ConfigError("x0 must be a finite 2-vector")
        x0.flags.writeable = False
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class Trajectory:
    """One simulated run: states on the grid t_k = k h, the driving noise
    increments (including the pre-history window k = -N..-1) and the
    measurement increments."""

    h: float
    N: int
    times: np.ndarray  # (K+1,)
    x: np.ndarray  # (K+1, 2)
    dw: np.ndarray  # (K+N, 2), row i holds the increment of step i - N
    dy: np.ndarray  # (K, 2)
    seed: int
    prehistory: str
    noise_variance_scale: float
    delay_snap_error: float

    @property
    def K(self) -> int:
        return len(self.x) - 1

    def dw_at(self, k: int) -> np.ndarray:
        """Noise increment of step k, valid for -N <= k <= K-1."""
        if k < -self.N or k >= self.K:
            raise IndexError(f"increment index {k} outside [-{self.N}, {self.K - 1}]")
        return self.dw[k + self.N]


def simulate(m: StateSpaceModel, cfg: SimConfig) -> Trajectory:
    """Euler-Maruyama recursion for the delayed model.

    x_{k+1} = x_k + (A x_k + A_d x~_{k-N}) h + B dw_k + B_d dw_{k-N}
    dy_k    = (C x_k + C_d x~_{k-N}) h + D_d dw_{k-N}

    where x~ follows the pre-history convention for negative indices and
    dw_j for j in [-N, -1] are genuine Gaussian increments.  Deterministic
    given (seed, h, horizon).
    """
    N, snap_err = delay_steps(m.T, cfg.h)
    K = steps_in(cfg.horizon, cfg.h)
    h = cfg.h

    rng = np.random.default_rng(cfg.seed)
    if cfg.noise_variance_scale > 0:
        std = math.sqrt(h * cfg.noise_variance_scale)
        dw = rng.normal(0.0, std, size=(K + N, 2))
    else:
        dw = np.zeros((K + N, 2))

    A, A_d = m.A, m.A_d
    B, B_d = m.B, m.B_d
    C, C_d, D_d = m.C, m.C_d, m.D_d

    hold = cfg.prehistory == "hold-initial"
    zero2 = np.zeros(2)
    x = np.empty((K + 1, 2))
    x[0] = cfg.x0
    pre = x[0].copy() if hold else zero2
    dy = np.empty((K, 2))

    for k in range(K):
        j = k - N
        xd = x[j] if j >= 0 else pre
        xk = x[k]
        dwd = dw[k]  # increment of step k - N
        dwk = dw[k + N]  # increment of step k
        x[k + 1] = xk + (A @ xk + A_d @ xd) * h + B @ dwk + B_d @ dwd
        dy[k] = (C @ xk + C_d @ xd) * h + D_d @ dwd

    times = np.arange(K + 1) * h
    for arr in (times, x, dw, dy):
        arr.flags.writeable = False
    return Trajectory(
        h=h,
        N=N,
        times=times,
        x=x,
        dw=dw,
        dy=dy,
        seed=cfg.seed,
        prehistory=cfg.prehistory,
        noise_variance_scale=cfg.noise_variance_scale,
        delay_snap_error=snap_err,
    )


@dataclass(frozen=True)
class FieldSeries:
    """Waveguide-field quadrature increments at a fixed position."""

    position: float
    k_start: int
    times: np.ndarray
    increments: np.ndarray


def _theta_cells(c: int) -> float:
    # Heaviside on the step grid; coincident arguments count half.
    if c > 0:
        return 1.0
    if c == 0:
        return 0.5
    return 0.0


def waveguide_field(
    traj: Trajectory,
    m: StateSpaceModel,
    x: float,
    p: PhysicalParams,
    t_start: float | None = None,
) -> FieldSeries:
    """Field increments at waveguide position ``x``: the freely propagating
    input plus the gated emission from each coupling point,

        db(x, t) = dw(t - x/v_g)
                   + sum_n theta(t - x/v_g + tau_n) theta(x/v_g - tau_n)
                     C x(t - x/v_g + tau_n) h

    with tau_1 = 0, tau_2 = T, theta(0) = 1/2, and delayed samples read from
    the trajectory grid by nearest index.  Valid for x in [-L, 2L]; times
    whose free-field increment precedes the stored noise history raise with
    the earliest admissible time.
    """
    if not (-p.L <= x <= 2 * p.L):
        raise ConfigError(f"position {x!r} outside the validity window [-L, 2L]")
    h, N, K = traj.h, traj.N, traj.K
    s = int(round(x / (p.v_g * h)))  # propagation offset in grid cells

    k_min = max(0, s - N)  # free-field increment must exist: k - s >= -N
    k_max = min(K - 1, K - 1 + s)
    if k_min > k_max:
        raise ConfigError("trajectory too short to evaluate the field here")
    if t_start is None:
        k0 = k_min
    else:
        k0 = int(round(t_start / h))
        if k0 < k_min:
            raise ConfigError(
                f"time {t_start!r} precedes the stored noise history at x={x!r}; "
                f"earliest valid time is {k_min * h!r}"
            )
        if k0 > k_max:
            raise ConfigError(f"time {t_start!r} beyond the end of the record")

    emit = m.C  # quadrature image of the emission coupling
    n_out = k_max - k0 + 1
    out = np.empty((n_out, 2))
    for i, k in enumerate(range(k0, k_max + 1)):
        val = traj.dw[k - s + N].copy()
        for n in (0, 1):
            off = n * N  # tau_n in grid cells
            gate_pos = _theta_cells(s - off)
            if gate_pos == 0.0:
                continue
            idx = k - s + off
            gate_time = _theta_cells(idx)
            if gate_time == 0.0 or idx > K:
                continue
            val += (gate_pos * gate_time * h) * (emit @ traj.x[idx])
        out[i] = val
    times = np.arange(k0, k_max + 1) * h
    for arr in (times, out):
        arr.flags.writeable = False
    return FieldSeries(position=x, k_start=k0, times=times, increments=out)
