#!/usr/bin/env python3
"""Build the quadrature state-space model of a two-point-coupled cavity
from physical parameters and inspect its structure."""

import numpy as np

from giantcavity import (
    PhysicalParams,
    build_model,
    coupling_from_gamma,
    gamma_from_coupling,
    markovian_limit,
)

np.set_printoptions(precision=4, suppress=False)

# cavity at 1e9 rad/s, decay 8e8 1/s, couplers 15 um apart on a 1 km/s guide
params = PhysicalParams(omega_c=1e9, gamma=8e8, L=1.5e-5, v_g=1e3)
m = build_model(params)

print("round-trip delay T = L / v_g =", m.T, "s")
print("drift A =\n", m.A)
print("delayed drift A_d =\n", m.A_d)
print("noise/output coupling B = B_d = C = C_d =\n", m.B)
print("measurement noise D_d =\n", m.D_d)
print("eigenvalues of A:", np.linalg.eigvals(m.A), " (expect -g/2 +- i w_c)")

# the same cavity via the coupling strength instead of the rate
v_q = coupling_from_gamma(8e8, 1e3)
print("\ncoupling strength for gamma = 8e8:", v_q)
print("round trip:", gamma_from_coupling(v_q, 1e3))

# zero-delay collapse used by the reduction tests
m0 = markovian_limit(m)
print("\ncollapsed drift A + A_d =\n", m0.A)
print("collapsed noise channel B + B_d =\n", m0.B)
