"""Interval-wise propagation of the error covariance and the delayed
cross-covariances, and the filter gain they define.

P_0(t) is the conditional error covariance; P_j(t) = E[e(t) e(t - jT)^T]
for j >= 1, with P_j(t) = 0 before t = jT.  On the interval [mT, (m+1)T)
the active set {P_0, ..., P_m} obeys the coupled ODEs

  dP_0 = (A - K C) P_0 + P_0 (A - K C)^T
         + (A_d - K C_d) P_1^T + P_1 (A_d - K C_d)^T
         + B B^T + (B_d - K D_d)(B_d - K D_d)^T

  dP_j = (A - K(t) C) P_j + (A_d - K(t) C_d) P_{j-1}(t - T)
         + P_j (A - K(t - jT) C)^T + P_{j+1}(t) (A_d - K(t - jT) C_d)^T
         + (B_d - K(t) D_d) B^T          [the last term only for j = 1]

with K(t) = [P_0(t) C^T + P_1(t) C_d^T] (D_d D_d^T)^{-1}.  The equation for
the highest active index closes because P_{m+1}(t) = 0 until t = (m+1)T;
that closure is all that survives of the backward recursion, since K(t)
couples P_0 and P_1 at the current time and forces all active P_j to be
stepped jointly.  Each P_j starts from zero at t = jT; delayed values
P_{j-1}(t-T) and K(t-jT) are read from the already-computed grid.

Note on the gain factor: the gain K rather than its unnormalised core
G = P_0 C^T + P_1 C_d^T enters the (X - K Y) factors above.  The two
coincide whenever D_d D_d^T = I, which holds for every model built from
physical parameters; for rescaled measurement noise only the K form keeps
the zero-delay reduction consistent with the standard Riccati flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ModelError
from .model import StateSpaceModel
from .sde import delay_steps, steps_in


def gain_core(P0: np.ndarray, P1: np.ndarray, m: StateSpaceModel) -> np.ndarray:
    """Unnormalised gain G = P0 C^T + P1 C_d^T."""
    return P0 @ m.C.T + P1 @ m.C_d.T


def measurement_cov_inverse(m: StateSpaceModel) -> np.ndarray:
    """(D_d D_d^T)^{-1}, rejecting singular measurement noise."""
    S = m.measurement_noise_cov
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    scale = max(1.0, float(np.abs(S).max()) ** 2)
    if not math.isfinite(det) or abs(det) <= 1e-24 * scale:
        raise ModelError("D_d D_d^T is singular; cannot form the filter gain")
    return np.linalg.inv(S)


def gain(P0: np.ndarray, P1: np.ndarray, m: StateSpaceModel) -> np.ndarray:
    """Filter gain K = (P0 C^T + P1 C_d^T)(D_d D_d^T)^{-1}."""
    return gain_core(P0, P1, m) @ measurement_cov_inverse(m)


@dataclass(frozen=True)
class CovarianceLattice:
    """P_j(t_k) for j = 0..J_max on the step grid, plus the gain history.

    P has shape (J_max+1, K+1, 2, 2) with P[j, k] = 0 exactly for
    k h < j T.  P[0] is symmetrised after every step; the cross blocks
    j >= 1 are not symmetric objects and are stored as computed.
    ``gain`` holds K(t_k) evaluated from the left grid point, which is what
    the explicit-Euler filter consumes.
    """

    h: float
    N: int
    J_max: int
    times: np.ndarray  # (K+1,)
    P: np.ndarray  # (J_max+1, K+1, 2, 2)
    gain: np.ndarray  # (K+1, 2, 2)
    delay_snap_error: float
    max_asymmetry: float  # worst pre-symmetrisation asymmetry, relative

    @property
    def K(self) -> int:
        return len(self.times) - 1

    @property
    def P0(self) -> np.ndarray:
        return self.P[0]


def _check_initial_covariance(P0_init: np.ndarray) -> np.ndarray:
    P0 = np.array(P0_init, dtype=float)
    if P0.shape != (2, 2) or not np.all(np.isfinite(P0)):
        raise ConfigError("P0_init must be a finite 2x2 matrix")
    scale = max(1.0, float(np.abs(P0).max()))
    if abs(P0[0, 1] - P0[1, 0]) > 1e-10 * scale:
        raise ConfigError("P0_init must be symmetric")
    eigs = np.linalg.eigvalsh(0.5 * (P0 + P0.T))
    if eigs.min() < -1e-10 * scale:
        raise ConfigError("P0_init must be positive semidefinite")
    return P0


def propagate(
    m: StateSpaceModel,
    P0_init: np.ndarray,
    horizon: float,
    h: float,
    method: str = "euler",
) -> CovarianceLattice:
    """Integrate the coupled covariance ODEs over ``horizon`` with step ``h``.

    Forward Euler by default, matching the order of the filter and the
    simulator; ``method="rk4"`` is available for refinement studies, with
    delayed lattice values read by nearest grid index at the stage times.
    """
    if method not in ("euler", "rk4"):
        raise ConfigError(f"unknown integration method {method!r}")
    if m.T == 0.0 and m.has_delay_terms:
        raise ConfigError(
            "T = 0 with nonzero delay matrices: collapse with markovian_limit first"
        )
    N, snap_err = delay_steps(m.T, h)
    K = steps_in(horizon, h)
    J = (K // N) if N > 0 else 0
    P0_init = _check_initial_covariance(P0_init)

    S_inv = measurement_cov_inverse(m)
    A, A_d = m.A, m.A_d
    B, B_d = m.B, m.B_d
    C, C_d, D_d = m.C, m.C_d, m.D_d
    CT, CdT = C.T, C_d.T
    BBt = B @ B.T
    Z = np.zeros((2, 2))

    P = np.zeros((J + 1, K + 1, 2, 2))
    P[0, 0] = P0_init
    gains = np.zeros((K + 1, 2, 2))
    max_asym = 0.0

    def gain_at(k: int) -> np.ndarray:
        P1k = P[1, k] if J >= 1 else Z
        return (P[0, k] @ CT + P1k @ CdT) @ S_inv

    def rhs_all(stack: np.ndarray, active: int, Kk: np.ndarray, k_del: int) -> np.ndarray:
        """Time derivatives of [P_0 .. P_active] given current values
        ``stack`` and current gain ``Kk``; delayed quantities are read from
        the already-filled lattice at node ``k_del``."""
        AK = A - Kk @ C
        AdK = A_d - Kk @ C_d
        BdK = B_d - Kk @ D_d
        out = np.empty_like(stack)
        P0k = stack[0]
        P1k = stack[1] if active >= 1 else Z
        out[0] = (
            AK @ P0k
            + P0k @ AK.T
            + AdK @ P1k.T
            + P1k @ AdK.T
            + BBt
            + BdK @ BdK.T
        )
        for j in range(1, active + 1):
            Kdel = gains[k_del - j * N]
            AK_del = A - Kdel @ C
            AdK_del = A_d - Kdel @ C_d
            Pj = stack[j]
            Pjm1_del = P[j - 1, k_del - N]
            Pjp1 = stack[j + 1] if j + 1 <= active else Z
            r = AK @ Pj + AdK @ Pjm1_del + Pj @ AK_del.T + Pjp1 @ AdK_del.T
            if j == 1:
                r = r + BdK @ B.T
            out[j] = r
        return out

    def stack_gain(stack: np.ndarray, active: int) -> np.ndarray:
        P1s = stack[1] if active >= 1 else Z
        return (stack[0] @ CT + P1s @ CdT) @ S_inv

    for k in range(K):
        Kk = gain_at(k)
        gains[k] = Kk
        active = min(k // N, J) if N > 0 else 0
        stack = P[: active + 1, k].copy()

        if method == "euler":
            new = stack + h * rhs_all(stack, active, Kk, k)
        else:
            # Classical RK4.  The current-time couplings (the gain, P_{j+1})
            # are re-evaluated from the stage values; the genuinely delayed
            # terms use the nearest already-computed grid node: k for the
            # half-step stages, k+1 for the full step (k+1 - jN <= k, so the
            # history is always available).
            r1 = rhs_all(stack, active, Kk, k)
            s2 = stack + 0.5 * h * r1
            r2 = rhs_all(s2, active, stack_gain(s2, active), k)
            s3 = stack + 0.5 * h * r2
            r3 = rhs_all(s3, active, stack_gain(s3, active), k)
            s4 = stack + h * r3
            r4 = rhs_all(s4, active, stack_gain(s4, active), k + 1)
            new = stack + (h / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4)

        scale = max(float(np.abs(new[0]).max()), 1e-300)
        asym = abs(new[0][0, 1] - new[0][1, 0]) / scale
        if asym > max_asym:
            max_asym = asym
        P[0, k + 1] = 0.5 * (new[0] + new[0].T)
        for j in range(1, active + 1):
            P[j, k + 1] = new[j]
        # P_j with j = active+1 activates exactly at k+1 = jN and starts at 0,
        # which the zero-filled array already encodes.

    gains[K] = gain_at(K)
    times = np.arange(K + 1) * h
    for arr in (times, P, gains):
        arr.flags.writeable = False
    return CovarianceLattice(
        h=h,
        N=N,
        J_max=J,
        times=times,
        P=P,
        gain=gains,
        delay_snap_error=snap_err,
        max_asymmetry=max_asym,
    )
