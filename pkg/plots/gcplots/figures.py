"""Figure rendering: trajectory-convergence panels and Wigner heatmap rows."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io_formats import (  # noqa: E402
    SchemaError,
    read_trajectory,
    read_wigner_grid,
    seed_files,
    wigner_files,
)

_DPI = 120


@dataclass
class FigureSpec:
    inputs: list[Path]
    kind: str  # "trajectory" | "wigner-snapshot-row"
    out: Path
    title: str = ""
    mean_input: Path | None = None
    labels: list[str] = field(default_factory=list)


def plot_trajectories(spec: FigureSpec) -> Path:
    """Two stacked panels (q, p): faint per-seed true/estimated curves and
    bold ensemble means."""
    if spec.kind != "trajectory":
        raise SchemaError(f"figure kind {spec.kind!r} not 'trajectory'")
    if spec.mean_input is None or not Path(spec.mean_input).is_file():
        raise SchemaError(f"missing ensemble-mean file: {spec.mean_input}")
    if not spec.inputs:
        raise SchemaError("no per-seed trajectory files given")

    mean = read_trajectory(spec.mean_input)
    runs = [read_trajectory(p) for p in spec.inputs]

    fig, axes = plt.subplots(2, 1, figsize=(8.0, 6.0), sharex=True)
    comp_names = ("q", "p")
    for i, ax in enumerate(axes):
        for data in runs:
            ax.plot(data[:, 0], data[:, 1 + i], color="#9ecbe8", lw=0.6, alpha=0.7)
            ax.plot(data[:, 0], data[:, 3 + i], color="#f2b0ac", lw=0.6,
                    alpha=0.7, linestyle="--")
        ax.plot(mean[:, 0], mean[:, 1 + i], color="#0a4570", lw=2.0, label="system mean")
        ax.plot(mean[:, 0], mean[:, 3 + i], color="#af1a2e", lw=2.0,
                linestyle="--", label="filter mean")
        ax.set_ylabel(comp_names[i])
        ax.grid(alpha=0.3)
    axes[0].legend(loc="upper right", frameon=False)
    axes[1].set_xlabel("t (s)")
    if spec.title:
        axes[0].set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=_DPI, metadata={"Software": "gcplots"})
    plt.close(fig)
    return Path(spec.out)


def plot_wigner_row(spec: FigureSpec) -> Path:
    """Row of phase-space heatmaps on one shared, zero-centred colour scale
    (diverging palette so negativity stands out)."""
    if spec.kind != "wigner-snapshot-row":
        raise SchemaError(f"figure kind {spec.kind!r} not 'wigner-snapshot-row'")
    if not spec.inputs:
        raise SchemaError("no wigner grid files given")
    grids = [read_wigner_grid(p) for p in spec.inputs]
    headers = [h for h, _ in grids]
    if any((h.n_q, h.n_p) != (headers[0].n_q, headers[0].n_p) for h in headers):
        raise SchemaError("inconsistent grid resolutions across the row")

    vmax = max(float(np.abs(v).max()) for _, v in grids)
    n = len(grids)
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.4), squeeze=False)
    for i, (ax, (header, values)) in enumerate(zip(axes[0], grids)):
        im = ax.imshow(
            values.T,
            origin="lower",
            extent=header.extent,
            cmap="RdBu_r",
            vmin=-vmax,
            vmax=vmax,
            aspect="auto",
        )
        ax.set_xlabel("q")
        if i == 0:
            ax.set_ylabel("p")
        if spec.labels and i < len(spec.labels):
            ax.set_title(spec.labels[i])
    fig.colorbar(im, ax=axes[0].tolist(), shrink=0.85)
    if spec.title:
        fig.suptitle(spec.title)
    fig.savefig(spec.out, dpi=_DPI, metadata={"Software": "gcplots"})
    plt.close(fig)
    return Path(spec.out)


def main_trajectories(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Render the trajectory-convergence figure from a run directory."
    )
    parser.add_argument("--input-dir", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    in_dir = Path(args.input_dir)
    try:
        spec = FigureSpec(
            inputs=seed_files(in_dir),
            kind="trajectory",
            out=Path(args.out),
            mean_input=in_dir / "trajectory_mean.tsv",
            title=args.title,
        )
        plot_trajectories(spec)
    except SchemaError as exc:
        print(f"error: {exc}")
        return 2
    return 0


def main_wigner_row(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Render a row of Wigner heatmaps from a run directory."
    )
    parser.add_argument("--input-dir", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--which", choices=("true", "filter"), default="true")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    try:
        files = wigner_files(args.input_dir, args.which)
        spec = FigureSpec(
            inputs=files,
            kind="wigner-snapshot-row",
            out=Path(args.out),
            title=args.title,
            labels=[p.stem for p in files],
        )
        plot_wigner_row(spec)
    except SchemaError as exc:
        print(f"error: {exc}")
        return 2
    return 0
