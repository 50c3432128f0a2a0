#!/usr/bin/env python3
"""Render the trajectory-convergence figure from a giantcavity run.

Usage: python plots/plot_trajectories.py --input-dir RUN_DIR --out FIG.png
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from gcplots.figures import main_trajectories

if __name__ == "__main__":
    sys.exit(main_trajectories())
