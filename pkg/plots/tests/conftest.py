import subprocess
import sys
from pathlib import Path

import pytest

PLOTS_DIR = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PLOTS_DIR))

REPO = PLOTS_DIR.parent
CONFIG_COHERENT = REPO / "src" / "giantcavity" / "configs" / "paper_4_1.cfg"
CONFIG_CAT = REPO / "src" / "giantcavity" / "configs" / "paper_4_2_cat.cfg"


def _run_cli(config: Path, out_dir: Path, trajectories: int) -> None:
    # the plotting package talks to the primary only through its CLI
    cmd = [
        sys.executable, "-m", "giantcavity.cli",
        "--config", str(config),
        "--output-dir", str(out_dir),
        "--trajectories", str(trajectories),
        "--quiet",
    ]
    res = subprocess.run(cmd, capture_output=True, text=True)
    assert res.returncode == 0, res.stderr


@pytest.fixture(scope="session")
def coherent_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run_coherent")
    _run_cli(CONFIG_COHERENT, out, trajectories=5)
    return out


@pytest.fixture(scope="session")
def cat_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run_cat")
    _run_cli(CONFIG_CAT, out, trajectories=2)
    return out
