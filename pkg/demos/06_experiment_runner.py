#!/usr/bin/env python3
"""Drive the config-based experiment runner end to end into a scratch
directory and peek at the outputs.  Equivalent to:

    giantcavity --config src/giantcavity/configs/paper_4_1.cfg \
                --output-dir /tmp/giantcavity_demo --trajectories 5
"""

import tempfile
from importlib import resources
from pathlib import Path

from giantcavity.cli import main, read_table, read_wigner_grid

config = Path(resources.files("giantcavity") / "configs" / "paper_4_1.cfg")

with tempfile.TemporaryDirectory(prefix="giantcavity_demo") as out:
    rc = main([
        "--config", str(config),
        "--output-dir", out,
        "--trajectories", "5",
    ])
    print("exit status:", rc)
    outputs = sorted(Path(out).iterdir())
    print("\nfiles written:")
    for p in outputs:
        print(f"  {p.name:32s} {p.stat().st_size:>9d} bytes")

    cols, mean = read_table(Path(out) / "trajectory_mean.tsv")
    print("\nensemble-mean table columns:", cols)
    print("first row:", mean[0])
    print("last row :", mean[-1])

    spec, values = read_wigner_grid(Path(out) / "wigner_filter_3.tsv")
    print(f"\nfinal-snapshot filter Wigner grid: {spec.n_q}x{spec.n_p} on "
          f"[{spec.q_min}, {spec.q_max}] x [{spec.p_min}, {spec.p_max}], "
          f"peak {values.max():.4f}")
