"""Quadrature state-space model of a cavity coupled to a waveguide at two
distant points.

The cavity mode a obeys

    da/dt = (-i w_c - g/2) a - (g/2) a(t-T) - i sqrt(g/2) [b_in(t) + b_in(t-T)]
    b_out(t) = b_in(t-T) - i sqrt(g/2) [a(t-T) + a(t)]

with decay rate g picked up at each coupling point and round-trip delay
T = L / v_g.  Expanding into the quadratures q = (a + a*)/sqrt(2),
p = -i (a - a*)/sqrt(2) turns every complex coefficient lam into the real
2x2 block [[Re lam, -Im lam], [Im lam, Re lam]] and yields the delayed
linear system

    dx = A x dt + A_d x(t-T) dt + B dw(t) + B_d dw(t-T)
    dy = C x dt + C_d x(t-T) dt + D_d dw(t-T)

where dw are vacuum quadrature increments with dw dw^T = I dt.  With this
convention D_d = I, so D_d D_d^T = I and the filter gain never needs a
nontrivial normalisation.  All state values are dimensionless; only time,
rates and lengths carry units (angular frequencies throughout, rad/s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError


def complex_to_quadrature(lam: complex) -> np.ndarray:
    """Real 2x2 action of multiplication by ``lam`` on the (q, p) pair."""
    lam = complex(lam)
    return np.array([[lam.real, -lam.imag], [lam.imag, lam.real]])


def gamma_from_coupling(V_q: float, v_g: float) -> float:
    """Decay rate contributed by a coupling point: 4*pi*V_q**2 / v_g."""
    if not (math.isfinite(v_g) and v_g > 0):
        raise ModelError(f"v_g must be positive and finite, got {v_g!r}")
    if not math.isfinite(V_q):
        raise ModelError(f"V_q must be finite, got {V_q!r}")
    return 4.0 * math.pi * V_q**2 / v_g


def coupling_from_gamma(gamma: float, v_g: float) -> float:
    """Nonnegative coupling strength reproducing ``gamma`` at group velocity ``v_g``."""
    if not (math.isfinite(v_g) and v_g > 0):
        raise ModelError(f"v_g must be positive and finite, got {v_g!r}")
    if not (math.isfinite(gamma) and gamma >= 0):
        raise ModelError(f"gamma must be nonnegative and finite, got {gamma!r}")
    return math.sqrt(gamma * v_g / (4.0 * math.pi))


@dataclass(frozen=True)
class PhysicalParams:
    """Physical description of the cavity/waveguide pair.

    omega_c is the angular working frequency (rad/s).  The coupling is given
    either directly as the decay rate ``gamma`` (1/s) or as the coupling
    strength ``V_q`` together with the group velocity; exactly one of the two
    must be supplied.  L is the separation of the coupling points (m) and
    v_g the group velocity (m/s), so the propagation delay is L / v_g.
    """

    omega_c: float
    L: float
    v_g: float
    gamma: float | None = None
    V_q: float | None = None

    def __post_init__(self):
        for name in ("omega_c", "L", "v_g"):
            v = getattr(self, name)
            if v is None or not math.isfinite(v):
                raise ModelError(f"{name} must be finite, got {v!r}")
        if self.omega_c < 0:
            raise ModelError(f"omega_c must be nonnegative, got {self.omega_c!r}")
        if self.v_g <= 0:
            raise ModelError(f"v_g must be positive, got {self.v_g!r}")
        if self.L < 0:
            raise ModelError(f"L must be nonnegative, got {self.L!r}")
        if (self.gamma is None) == (self.V_q is None):
            raise ModelError("specify exactly one of gamma or V_q")
        if self.gamma is not None and not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ModelError(f"gamma must be nonnegative and finite, got {self.gamma!r}")
        if self.V_q is not None and not math.isfinite(self.V_q):
            raise ModelError(f"V_q must be finite, got {self.V_q!r}")

    @property
    def decay_rate(self) -> float:
        if self.gamma is not None:
            return self.gamma
        return gamma_from_coupling(self.V_q, self.v_g)

    @property
    def delay(self) -> float:
        return self.L / self.v_g


def _as_matrix(value, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.shape != (2, 2):
        raise ModelError(f"{name} must be a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ModelError(f"{name} must contain only finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class StateSpaceModel:
    """Coefficient matrices of the delayed linear model.

        dx = A x dt + A_d x(t-T) dt + B dw(t) + B_d dw(t-T)
        dy = C x dt + C_d x(t-T) dt + D_d dw(t-T)

    Immutable after construction; D_d D_d^T must be nonsingular because the
    filter gain divides by it.
    """

    A: np.ndarray
    A_d: np.ndarray
    B: np.ndarray
    B_d: np.ndarray
    C: np.ndarray
    C_d: np.ndarray
    D_d: np.ndarray
    T: float

    def __post_init__(self):
        for name in ("A", "A_d", "B", "B_d", "C", "C_d", "D_d"):
            object.__setattr__(self, name, _as_matrix(getattr(self, name), name))
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ModelError(f"delay T must be nonnegative and finite, got {self.T!r}")
        S = self.measurement_noise_cov
        det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
        scale = max(1.0, float(np.abs(S).max()) ** 2)
        if not math.isfinite(det) or abs(det) <= 1e-24 * scale:
            raise ModelError("D_d D_d^T is singular; the filter gain is undefined")

    @property
    def measurement_noise_cov(self) -> np.ndarray:
        """D_d D_d^T, the innovation covariance density."""
        return self.D_d @ self.D_d.T

    @property
    def has_delay_terms(self) -> bool:
        return bool(np.any(self.A_d) or np.any(self.B_d) or np.any(self.C_d))


def build_model(p: PhysicalParams) -> StateSpaceModel:
    """Quadrature model for the two-point-coupled cavity.

    A = [[-g/2, w_c], [-w_c, -g/2]], A_d = -(g/2) I, and the noise/output
    couplings B = B_d = C = C_d all equal the quadrature image of
    -i sqrt(g/2); D_d = I.  The delay is L / v_g with no intermediate
    rounding.
    """
    g = p.decay_rate
    w = p.omega_c
    A = complex_to_quadrature(complex(-g / 2.0, -w))
    A_d = complex_to_quadrature(complex(-g / 2.0, 0.0))
    coupling = complex_to_quadrature(complex(0.0, -math.sqrt(g / 2.0)))
    return StateSpaceModel(
        A=A,
        A_d=A_d,
        B=coupling,
        B_d=coupling.copy(),
        C=coupling.copy(),
        C_d=coupling.copy(),
        D_d=np.eye(2),
        T=p.L / p.v_g,
    )


def markovian_limit(m: StateSpaceModel) -> StateSpaceModel:
    """Collapse the delay: drift A + A_d, one noise channel B + B_d, output
    C + C_d, with the measurement noise D_d acting on the same (undelayed)
    increment.  Intended for the zero-delay reduction tests."""
    zero = np.zeros((2, 2))
    return StateSpaceModel(
        A=m.A + m.A_d,
        A_d=zero,
        B=m.B + m.B_d,
        B_d=zero.copy(),
        C=m.C + m.C_d,
        C_d=zero.copy(),
        D_d=m.D_d.copy(),
        T=0.0,
    )
