#!/usr/bin/env python3
"""Run the filter against a simulated record, compare with the exact
augmented-state oracle, and look at the innovation statistics."""

import numpy as np

from giantcavity import (
    PhysicalParams,
    SimConfig,
    augmented_kalman,
    build_augmented,
    build_model,
    innovation_whiteness,
    propagate,
    run_filter,
    simulate,
)

params = PhysicalParams(omega_c=1e9, gamma=8e8, L=1.5e-5, v_g=1e3)
m = build_model(params)
h = m.T / 40
horizon = 1e-7

cfg = SimConfig(horizon=horizon, h=h, seed=2024, x0=[-4.0, 4.0])
traj = simulate(m, cfg)
lat = propagate(m, np.eye(2), horizon, h)
est = run_filter(m, lat, traj.dy, [4.0, -4.0])

err = np.linalg.norm(traj.x - est.xhat, axis=1)
print("filter error |x - xhat| at t = 0, T, 2T, horizon:")
for k in (0, lat.N, 2 * lat.N, lat.K):
    print(f"  t = {traj.times[k]:.3e}  err = {err[k]:.5f}")
print("(the error collapses within the first delay interval, then the")
print(" delayed feedback loop partially re-excites it)")

# exact discrete oracle on the same record
am = build_augmented(m, h)
oracle = augmented_kalman(am, traj.dy, [4.0, -4.0], np.eye(2))
rms = lambda a: float(np.sqrt((a**2).mean()))
print(f"\nrms(filter - oracle) = {rms(est.xhat - oracle.xhat):.4f}"
      f"  vs state rms {rms(traj.x):.4f}")
print(f"oracle cross block |E[e(T) e(0)^T]| = {np.linalg.norm(oracle.P_lag[am.N]):.3e}"
      f"  (the delayed-covariance zero initialisation discards this much)")

w = innovation_whiteness(est, max_lag=5)
print("\ninnovation autocorrelations (band +-%.4f):" % w.band)
for lag, row in enumerate(w.autocorr, start=1):
    print(f"  lag {lag}: q {row[0]: .4f}   p {row[1]: .4f}")
print("(T/40 is a coarse grid: the explicit-Euler discretisation leaves a")
print(" visible O(h) colouring here; shrink h to whiten the innovations)")
