#!/usr/bin/env python3
"""Render a row of Wigner heatmaps from a giantcavity run.

Usage: python plots/plot_wigner_row.py --input-dir RUN_DIR --out FIG.png [--which true|filter]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from gcplots.figures import main_wigner_row

if __name__ == "__main__":
    sys.exit(main_wigner_row())
