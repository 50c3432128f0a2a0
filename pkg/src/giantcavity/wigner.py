"""Phase-space quasi-probability evaluation for coherent and cat states.

Coherent state centred at (q0, p0):

    W(q, p) = (2/pi) exp(-2 [(q - q0)^2 + (p - p0)^2])

Cat state: two Gaussian lobes split by +-beta along q plus an oscillatory
interference term, summed and then divided by the grid maximum of the
absolute value (a visualisation normalisation only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class GridSpec:
    q_min: float
    q_max: float
    p_min: float
    p_max: float
    n_q: int = 201
    n_p: int = 201

    def __post_init__(self):
        for name in ("q_min", "q_max", "p_min", "p_max"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if not (self.q_max > self.q_min and self.p_max > self.p_min):
            raise ConfigError("grid bounds must satisfy max > min")
        if self.n_q < 2 or self.n_p < 2:
            raise ConfigError("grid resolution must be at least 2 per axis")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.q_min, self.q_max, self.n_q),
            np.linspace(self.p_min, self.p_max, self.n_p),
        )

    @property
    def q_spacing(self) -> float:
        return (self.q_max - self.q_min) / (self.n_q - 1)


def centered_grid(center, half_width: float = 4.0, n: int = 201) -> GridSpec:
    """Square grid of ``n`` points per axis around ``center``."""
    q0, p0 = float(center[0]), float(center[1])
    return GridSpec(q0 - half_width, q0 + half_width, p0 - half_width, p0 + half_width, n, n)


@dataclass(frozen=True)
class WignerGrid:
    spec: GridSpec
    values: np.ndarray  # (n_q, n_p), q varies along axis 0


@dataclass(frozen=True)
class CatParams:
    q0: float
    p0: float
    beta: float
    sigma: float

    def __post_init__(self):
        for name in ("q0", "p0", "beta", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma!r}")
        if self.beta < 0:
            raise ConfigError(f"beta must be nonnegative, got {self.beta!r}")

    @property
    def fringe_spacing_limit(self) -> float:
        """Coarsest q spacing that still resolves the interference fringes."""
        if self.beta == 0:
            return math.inf
        return self.sigma**2 * math.pi / (4.0 * self.beta)


def coherent_wigner(center, spec: GridSpec) -> WignerGrid:
    """Pointwise evaluation of the coherent-state Wigner function."""
    q0, p0 = float(center[0]), float(center[1])
    if not (math.isfinite(q0) and math.isfinite(p0)):
        raise ConfigError("center must be finite")
    q, p = spec.axes()
    Q, P = np.meshgrid(q, p, indexing="ij")
    vals = (2.0 / math.pi) * np.exp(-2.0 * ((Q - q0) ** 2 + (P - p0) ** 2))
    vals.flags.writeable = False
    return WignerGrid(spec=spec, values=vals)


def cat_wigner(cp: CatParams, spec: GridSpec, normalize: bool = True) -> WignerGrid:
    """Cat-state Wigner function: lobes at q0 +- beta plus interference,

        W+-   = exp(-(q - q0 -+ beta)^2 / sigma^2 - sigma^2 (p - p0)^2)
        W_int = exp(-(q - q0)^2 / sigma^2 - sigma^2 (p - p0)^2)
                * cos((2 beta / sigma^2)(q - q0) - 2 beta sigma^2 (p - p0))
        W     = (W+ + W- + W_int) / 2

    optionally divided by max |W| over the grid.  Rejects grids whose q
    spacing cannot resolve the fringes."""
    limit = cp.fringe_spacing_limit
    if spec.q_spacing > limit:
        raise ConfigError(
            f"q spacing {spec.q_spacing:.4g} too coarse for the interference "
            f"fringes (needs <= {limit:.4g})"
        )
    q, p = spec.axes()
    Q, P = np.meshgrid(q, p, indexing="ij")
    dq = Q - cp.q0
    dp = P - cp.p0
    s2 = cp.sigma**2
    gauss_p = np.exp(-s2 * dp**2)
    w_plus = np.exp(-((dq - cp.beta) ** 2) / s2) * gauss_p
    w_minus = np.exp(-((dq + cp.beta) ** 2) / s2) * gauss_p
    w_int = np.exp(-(dq**2) / s2) * gauss_p * np.cos(
        (2.0 * cp.beta / s2) * dq - 2.0 * cp.beta * s2 * dp
    )
    vals = 0.5 * (w_plus + w_minus + w_int)
    if normalize:
        vals = vals / np.max(np.abs(vals))
    vals.flags.writeable = False
    return WignerGrid(spec=spec, values=vals)


def state_to_wigner_inputs(source, k: int) -> np.ndarray:
    """Phase-space centre (q_k, p_k) read off a trajectory or an estimate."""
    samples = getattr(source, "x", None)
    if samples is None:
        samples = getattr(source, "xhat", None)
    if samples is None:
        raise ConfigError("source must carry .x or .xhat samples")
    if not 0 <= k < len(samples):
        raise IndexError(f"grid index {k} outside 0..{len(samples) - 1}")
    return np.array(samples[k], dtype=float)


_trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy < 2.0


def grid_integral(grid: WignerGrid) -> float:
    """Trapezoidal integral of the grid values over its rectangle."""
    q, p = grid.spec.axes()
    return float(_trapezoid(_trapezoid(grid.values, p, axis=1), q))
