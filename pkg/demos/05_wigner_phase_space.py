#!/usr/bin/env python3
"""Evaluate coherent and cat Wigner functions and render a coarse ASCII
view of the cat-state interference fringes."""

import math

import numpy as np

from giantcavity import CatParams, GridSpec, cat_wigner, centered_grid, coherent_wigner, grid_integral

coh = coherent_wigner([-4.0, 4.0], centered_grid([-4.0, 4.0], 4.0, 201))
print("coherent peak:", coh.values.max(), " (2/pi =", 2 / math.pi, ")")
print("grid integral:", grid_integral(coh))

cat = cat_wigner(
    CatParams(q0=0.0, p0=0.0, beta=0.8, sigma=0.2),
    GridSpec(-2.0, 2.0, -2.0, 2.0, 321, 321),
)
print("\ncat state: min", cat.values.min(), " max", cat.values.max())

# slice along q at p = 0: lobes at +-beta with fringes in between
sub = cat.values[::16, 160]
print("\nW(q, 0) profile (negative values bracketed):")
for qv, val in zip(np.linspace(-2, 2, len(sub)), sub):
    bar = int(round(abs(val) * 30))
    mark = "#" * bar
    label = f"[{val: .2f}]" if val < 0 else f" {val: .2f} "
    print(f"  q={qv: 5.2f} {label} {mark}")
