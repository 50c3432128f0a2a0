"""Parsers for the experiment runner's documented file formats.

Trajectory/covariance tables: a ``# col1<TAB>col2...`` header line followed
by tab-separated rows of 17-significant-digit floats.  Wigner grids: a
``# q_min=... q_max=... p_min=... p_max=... n_q=... n_p=...`` header line
followed by the dense value matrix, one row per q sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

TRAJ_COLUMNS = ["t", "q_true", "p_true", "q_hat", "p_hat", "dnu_q", "dnu_p"]


class SchemaError(ValueError):
    """An input file does not match the documented format."""


def read_table(path: str | Path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"missing input file: {path}")
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise SchemaError(f"{path}: expected a '# col...' header line")
    columns = lines[0][1:].strip().split("\t")
    try:
        data = np.array(
            [[float(v) for v in ln.split("\t")] for ln in lines[1:] if ln],
            dtype=float,
        )
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric table entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise SchemaError(
            f"{path}: {data.shape[1] if data.ndim == 2 else '?'} columns of data "
            f"vs {len(columns)} in the header"
        )
    return columns, data


def read_trajectory(path: str | Path) -> np.ndarray:
    columns, data = read_table(path)
    if columns != TRAJ_COLUMNS:
        raise SchemaError(f"{path}: unexpected trajectory columns {columns}")
    return data


@dataclass(frozen=True)
class GridHeader:
    q_min: float
    q_max: float
    p_min: float
    p_max: float
    n_q: int
    n_p: int

    @property
    def extent(self) -> tuple[float, float, float, float]:
        # imshow extent for values indexed [q, p] and transposed on display
        return (self.q_min, self.q_max, self.p_min, self.p_max)


def read_wigner_grid(path: str | Path) -> tuple[GridHeader, np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"missing input file: {path}")
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise SchemaError(f"{path}: expected a wigner header line")
    try:
        fields = dict(tok.split("=") for tok in lines[0][1:].strip().split())
        header = GridHeader(
            q_min=float(fields["q_min"]),
            q_max=float(fields["q_max"]),
            p_min=float(fields["p_min"]),
            p_max=float(fields["p_max"]),
            n_q=int(fields["n_q"]),
            n_p=int(fields["n_p"]),
        )
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed wigner header ({exc})") from None
    values = np.array(
        [[float(v) for v in ln.split("\t")] for ln in lines[1:] if ln],
        dtype=float,
    )
    if values.shape != (header.n_q, header.n_p):
        raise SchemaError(
            f"{path}: value block {values.shape} does not match header "
            f"({header.n_q}, {header.n_p})"
        )
    return header, values


def seed_files(input_dir: str | Path) -> list[Path]:
    return sorted(Path(input_dir).glob("trajectory_seed*.tsv"))


def wigner_files(input_dir: str | Path, which: str) -> list[Path]:
    files = Path(input_dir).glob(f"wigner_{which}_*.tsv")
    return sorted(files, key=lambda p: int(p.stem.rsplit("_", 1)[1]))
