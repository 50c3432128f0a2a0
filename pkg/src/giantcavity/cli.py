"""Configuration-driven experiment runner.

Reads a plain-text key=value config (dotted section names, ``#`` comments),
builds the model, propagates the covariance lattice once, fans simulate+
filter runs out over seeds, and writes delimiter-separated numeric tables:

* ``trajectory_seed<NNNNNN>.tsv``  one per seed, columns
  t, q_true, p_true, q_hat, p_hat, dnu_q, dnu_p  (the innovation columns
  are ``nan`` on the final row, which carries no increment)
* ``trajectory_mean.tsv``          same columns, averaged over seeds
* ``covariance.tsv``               t, row-major P_0..P_Jmax entries, then
  row-major gain entries (gain ``nan`` on the final row)
* ``wigner_true_<i>.tsv`` / ``wigner_filter_<i>.tsv``  dense value
  matrices, one row per q sample, preceded by a header line
  ``# q_min=... q_max=... p_min=... p_max=... n_q=... n_p=...``
* ``metadata.txt``                 every resolved config field plus derived
  quantities, one ``key = value`` per line

All floats are written with 17 significant digits so re-parsing reproduces
the in-memory arrays bit-exactly.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .covariance import propagate
from .errors import ConfigError, GiantCavityError
from .filtering import run_filter
from .model import PhysicalParams, build_model
from .sde import PREHISTORY_CHOICES, SimConfig, simulate
from .wigner import CatParams, GridSpec, cat_wigner, centered_grid, coherent_wigner

_FMT = "%.17g"


@dataclass
class WignerConfig:
    mode: str  # "coherent" | "cat"
    snapshots: list[float] = field(default_factory=list)  # absolute times (coherent)
    grid: GridSpec | None = None
    cat_true: list[CatParams] = field(default_factory=list)
    cat_filter: list[CatParams] = field(default_factory=list)


@dataclass
class ExperimentConfig:
    params: PhysicalParams
    horizon: float
    step_divisor: int
    seed: int
    trajectories: int
    prehistory: str
    noise_scale: float
    x0: np.ndarray
    xhat0: np.ndarray
    P0: np.ndarray
    wigner: WignerConfig | None
    out_dir: str
    formats: str
    raw: dict[str, str]  # resolved key/value view for the metadata record


def _parse_floats(field_name: str, text: str, n: int) -> list[float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != n:
        raise ConfigError(f"{field_name}: expected {n} numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"{field_name}: {exc}") from None


def _parse_float(field_name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{field_name}: not a number: {text!r}") from None


def _parse_int(field_name: str, text: str) -> int:
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"{field_name}: not a number: {text!r}") from None
    if v != int(v):
        raise ConfigError(f"{field_name}: must be an integer, got {text!r}")
    return int(v)


def read_config_lines(path: str | Path) -> dict[str, str]:
    """key = value lines; '#' starts a comment; later keys override."""
    out: dict[str, str] = {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    for ln, line in enumerate(p.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{p}:{ln}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _parse_cat_list(field_name: str, text: str) -> list[CatParams]:
    cats = []
    for i, chunk in enumerate(s for s in text.split(";") if s.strip()):
        q0, p0, beta, sigma = _parse_floats(f"{field_name}[{i}]", chunk, 4)
        try:
            cats.append(CatParams(q0=q0, p0=p0, beta=beta, sigma=sigma))
        except GiantCavityError as exc:
            raise ConfigError(f"{field_name}[{i}]: {exc}") from None
    if not cats:
        raise ConfigError(f"{field_name}: empty snapshot list")
    return cats


def parse_config(path: str | Path) -> ExperimentConfig:
    kv = read_config_lines(path)
    known = set()

    def take(key: str, default: str | None = None) -> str:
        known.add(key)
        if key in kv:
            return kv[key]
        if default is None:
            raise ConfigError(f"{key}: required field missing")
        return default

    omega_c = _parse_float("physical.omega_c", take("physical.omega_c"))
    L = _parse_float("physical.L", take("physical.L"))
    v_g = _parse_float("physical.v_g", take("physical.v_g"))
    gamma_s = take("physical.gamma", "")
    vq_s = take("physical.V_q", "")
    if bool(gamma_s) == bool(vq_s):
        raise ConfigError("physical.gamma / physical.V_q: specify exactly one")
    try:
        if gamma_s:
            params = PhysicalParams(
                omega_c=omega_c, L=L, v_g=v_g, gamma=_parse_float("physical.gamma", gamma_s)
            )
        else:
            params = PhysicalParams(
                omega_c=omega_c, L=L, v_g=v_g, V_q=_parse_float("physical.V_q", vq_s)
            )
    except GiantCavityError as exc:
        raise ConfigError(f"physical parameters: {exc}") from None
    if params.delay <= 0:
        raise ConfigError("physical.L: the experiment runner needs a positive delay")

    horizon = _parse_float("sim.horizon", take("sim.horizon"))
    step_divisor = _parse_int("sim.step_divisor", take("sim.step_divisor"))
    if step_divisor < 1:
        raise ConfigError(f"sim.step_divisor: must be a positive integer, got {step_divisor}")
    seed = _parse_int("sim.seed", take("sim.seed"))
    trajectories = _parse_int("sim.trajectories", take("sim.trajectories", "1"))
    if trajectories < 1:
        raise ConfigError(f"sim.trajectories: must be at least 1, got {trajectories}")
    prehistory = take("sim.prehistory", "zero")
    if prehistory not in PREHISTORY_CHOICES:
        raise ConfigError(f"sim.prehistory: must be one of {PREHISTORY_CHOICES}")
    noise_scale = _parse_float("sim.noise_scale", take("sim.noise_scale", "1.0"))
    if noise_scale < 0:
        raise ConfigError(f"sim.noise_scale: must be nonnegative, got {noise_scale}")
    x0 = np.array(_parse_floats("sim.x0", take("sim.x0"), 2))

    xhat0 = np.array(_parse_floats("filter.xhat0", take("filter.xhat0"), 2))
    P0 = np.array(_parse_floats("filter.P0", take("filter.P0", "1 0 0 1"), 4)).reshape(2, 2)

    wigner_cfg: WignerConfig | None = None
    mode = take("wigner.mode", "")
    if mode:
        if mode not in ("coherent", "cat"):
            raise ConfigError(f"wigner.mode: must be coherent or cat, got {mode!r}")
        grid = None
        grid_s = take("wigner.grid", "")
        if grid_s:
            g = _parse_floats("wigner.grid", grid_s, 6)
            try:
                grid = GridSpec(g[0], g[1], g[2], g[3], int(g[4]), int(g[5]))
            except GiantCavityError as exc:
                raise ConfigError(f"wigner.grid: {exc}") from None
        if mode == "coherent":
            snaps_s = take("wigner.snapshots")
            snaps = [
                _parse_float("wigner.snapshots", s)
                for s in snaps_s.replace(",", " ").split()
            ]
            if not snaps:
                raise ConfigError("wigner.snapshots: empty")
            for t in snaps:
                if not 0 <= t <= horizon:
                    raise ConfigError(
                        f"wigner.snapshots: time {t!r} outside [0, horizon]"
                    )
            wigner_cfg = WignerConfig(mode=mode, snapshots=snaps, grid=grid)
        else:
            wigner_cfg = WignerConfig(
                mode=mode,
                grid=grid,
                cat_true=_parse_cat_list("wigner.cat_true", take("wigner.cat_true")),
                cat_filter=_parse_cat_list(
                    "wigner.cat_filter", take("wigner.cat_filter")
                ),
            )

    out_dir = take("output.directory")
    formats = take("output.formats", "tsv")
    if formats != "tsv":
        raise ConfigError(f"output.formats: only 'tsv' is supported, got {formats!r}")

    unknown = sorted(set(kv) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    resolved = {
        "physical.omega_c": repr(params.omega_c),
        "physical.gamma": repr(params.decay_rate),
        "physical.V_q": vq_s or "(from gamma)",
        "physical.L": repr(params.L),
        "physical.v_g": repr(params.v_g),
        "sim.horizon": repr(horizon),
        "sim.step_divisor": repr(step_divisor),
        "sim.seed": repr(seed),
        "sim.trajectories": repr(trajectories),
        "sim.prehistory": prehistory,
        "sim.noise_scale": repr(noise_scale),
        "sim.x0": " ".join(_FMT % v for v in x0),
        "filter.xhat0": " ".join(_FMT % v for v in xhat0),
        "filter.P0": " ".join(_FMT % v for v in P0.ravel()),
        "wigner.mode": mode or "(none)",
        "output.directory": out_dir,
        "output.formats": formats,
    }
    if wigner_cfg is not None:
        if wigner_cfg.grid is not None:
            g = wigner_cfg.grid
            resolved["wigner.grid"] = (
                f"{g.q_min!r} {g.q_max!r} {g.p_min!r} {g.p_max!r} {g.n_q} {g.n_p}"
            )
        else:
            resolved["wigner.grid"] = "(auto)"
        if mode == "coherent":
            resolved["wigner.snapshots"] = " ".join(_FMT % t for t in wigner_cfg.snapshots)
        else:
            resolved["wigner.cat_true"] = kv["wigner.cat_true"]
            resolved["wigner.cat_filter"] = kv["wigner.cat_filter"]

    return ExperimentConfig(
        params=params,
        horizon=horizon,
        step_divisor=step_divisor,
        seed=seed,
        trajectories=trajectories,
        prehistory=prehistory,
        noise_scale=noise_scale,
        x0=x0,
        xhat0=xhat0,
        P0=P0,
        wigner=wigner_cfg,
        out_dir=out_dir,
        formats=formats,
        raw=resolved,
    )


def write_table(path: Path, columns: list[str], data: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("# " + "\t".join(columns) + "\n")
        for row in data:
            fh.write("\t".join(_FMT % v for v in row) + "\n")


def read_table(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Re-parse a table written by write_table."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ConfigError(f"{path}: missing header line")
    columns = lines[0][1:].strip().split("\t")
    data = np.array(
        [[float(v) for v in line.split("\t")] for line in lines[1:] if line],
        dtype=float,
    )
    return columns, data


def write_wigner_grid(path: Path, spec: GridSpec, values: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write(
            "# q_min=%s q_max=%s p_min=%s p_max=%s n_q=%d n_p=%d\n"
            % (
                _FMT % spec.q_min,
                _FMT % spec.q_max,
                _FMT % spec.p_min,
                _FMT % spec.p_max,
                spec.n_q,
                spec.n_p,
            )
        )
        for row in values:
            fh.write("\t".join(_FMT % v for v in row) + "\n")


def read_wigner_grid(path: str | Path) -> tuple[GridSpec, np.ndarray]:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ConfigError(f"{path}: missing wigner header line")
    fields = dict(tok.split("=") for tok in lines[0][1:].strip().split())
    spec = GridSpec(
        float(fields["q_min"]),
        float(fields["q_max"]),
        float(fields["p_min"]),
        float(fields["p_max"]),
        int(fields["n_q"]),
        int(fields["n_p"]),
    )
    values = np.array(
        [[float(v) for v in line.split("\t")] for line in lines[1:] if line],
        dtype=float,
    )
    if values.shape != (spec.n_q, spec.n_p):
        raise ConfigError(f"{path}: value block shape {values.shape} does not match header")
    return spec, values


TRAJ_COLUMNS = ["t", "q_true", "p_true", "q_hat", "p_hat", "dnu_q", "dnu_p"]


def _trajectory_rows(traj, est) -> np.ndarray:
    K = traj.K
    rows = np.empty((K + 1, 7))
    rows[:, 0] = traj.times
    rows[:, 1:3] = traj.x
    rows[:, 3:5] = est.xhat
    rows[:K, 5:7] = est.dnu
    rows[K, 5:7] = np.nan
    return rows


@dataclass
class RunResult:
    out_dir: Path
    files: list[Path]
    metadata: dict[str, str]


def run(config: ExperimentConfig, quiet: bool = False) -> RunResult:
    """Execute the experiment described by ``config``; returns the written
    file set and the resolved metadata record."""
    t_start = time.perf_counter()
    say = (lambda *a: None) if quiet else (lambda *a: print(*a, file=sys.stderr))

    m = build_model(config.params)
    h = m.T / config.step_divisor
    sim_cfg = SimConfig(
        horizon=config.horizon,
        h=h,
        seed=config.seed,
        x0=config.x0,
        prehistory=config.prehistory,
        noise_variance_scale=config.noise_scale,
    )
    try:
        lat = propagate(m, config.P0, config.horizon, h)
    except GiantCavityError as exc:
        raise ConfigError(f"filter.P0 / grid: {exc}") from None

    out_dir = Path(config.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output.directory: not writable: {exc}") from None

    files: list[Path] = []
    say(f"running {config.trajectories} trajectories, K={lat.K} steps, N={lat.N}")

    def one_seed(i: int):
        cfg_i = replace(sim_cfg, seed=sim_cfg.seed + i)
        traj = simulate(m, cfg_i)
        est = run_filter(m, lat, traj.dy, config.xhat0, prehistory=config.prehistory)
        path = out_dir / f"trajectory_seed{cfg_i.seed:06d}.tsv"
        write_table(path, TRAJ_COLUMNS, _trajectory_rows(traj, est))
        return path, traj, est

    sum_rows = None
    with ThreadPoolExecutor() as pool:
        for path, traj, est in pool.map(one_seed, range(config.trajectories)):
            files.append(path)
            rows = _trajectory_rows(traj, est)
            sum_rows = rows if sum_rows is None else sum_rows + rows
    mean_rows = sum_rows / config.trajectories
    mean_path = out_dir / "trajectory_mean.tsv"
    write_table(mean_path, TRAJ_COLUMNS, mean_rows)
    files.append(mean_path)

    # covariance table: t, P_0..P_J row-major, then the gain
    K = lat.K
    cov_cols = ["t"]
    for j in range(lat.J_max + 1):
        cov_cols += [f"P{j}_{a}{b}" for a in (0, 1) for b in (0, 1)]
    cov_cols += [f"K_{a}{b}" for a in (0, 1) for b in (0, 1)]
    cov_rows = np.empty((K + 1, 1 + 4 * (lat.J_max + 1) + 4))
    cov_rows[:, 0] = lat.times
    for j in range(lat.J_max + 1):
        cov_rows[:, 1 + 4 * j : 5 + 4 * j] = lat.P[j].reshape(K + 1, 4)
    cov_rows[:K, -4:] = np.asarray(lat.gain[:K]).reshape(K, 4)
    cov_rows[K, -4:] = np.nan
    cov_path = out_dir / "covariance.tsv"
    write_table(cov_path, cov_cols, cov_rows)
    files.append(cov_path)

    if config.wigner is not None:
        files += _write_wigner(config, lat, mean_rows, out_dir)

    metadata = dict(config.raw)
    metadata.update(
        {
            "derived.T": _FMT % m.T,
            "derived.h": _FMT % h,
            "derived.N_delay_steps": str(lat.N),
            "derived.K_steps": str(lat.K),
            "derived.J_max": str(lat.J_max),
            "derived.delay_snap_error": _FMT % lat.delay_snap_error,
            "derived.max_lattice_asymmetry": _FMT % lat.max_asymmetry,
            "derived.seeds": f"{config.seed}..{config.seed + config.trajectories - 1}",
            "derived.wall_time_s": "%.3f" % (time.perf_counter() - t_start),
            "derived.files_written": str(len(files) + 1),
        }
    )
    meta_path = out_dir / "metadata.txt"
    with open(meta_path, "w") as fh:
        for key in sorted(metadata):
            fh.write(f"{key} = {metadata[key]}\n")
    files.append(meta_path)
    say(f"wrote {len(files)} files to {out_dir}")
    return RunResult(out_dir=out_dir, files=files, metadata=metadata)


def _write_wigner(config, lat, mean_rows, out_dir: Path) -> list[Path]:
    wc = config.wigner
    files = []
    if wc.mode == "coherent":
        for i, t in enumerate(wc.snapshots):
            k = int(round(t / lat.h))
            k = min(max(k, 0), lat.K)
            for which, cols in (("true", (1, 2)), ("filter", (3, 4))):
                center = mean_rows[k, cols[0]], mean_rows[k, cols[1]]
                spec = wc.grid if wc.grid is not None else centered_grid(center)
                grid = coherent_wigner(center, spec)
                path = out_dir / f"wigner_{which}_{i}.tsv"
                write_wigner_grid(path, spec, grid.values)
                files.append(path)
    else:
        for which, cats in (("true", wc.cat_true), ("filter", wc.cat_filter)):
            for i, cp in enumerate(cats):
                if wc.grid is not None:
                    spec = wc.grid
                else:
                    half = max(cp.beta + 6.0 * cp.sigma, 10.0 * cp.sigma)
                    spec = centered_grid([cp.q0, cp.p0], half_width=half)
                grid = cat_wigner(cp, spec)
                path = out_dir / f"wigner_{which}_{i}.tsv"
                write_wigner_grid(path, spec, grid.values)
                files.append(path)
    return files


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="giantcavity",
        description="Run a two-point-coupled-cavity filtering experiment from a config file.",
    )
    parser.add_argument("--config", required=True, help="path to the experiment config")
    parser.add_argument("--output-dir", help="override output.directory")
    parser.add_argument("--seed", type=int, help="override sim.seed")
    parser.add_argument("--trajectories", type=int, help="override sim.trajectories")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    args = parser.parse_args(argv)

    try:
        config = parse_config(args.config)
        if args.output_dir is not None:
            config.out_dir = args.output_dir
            config.raw["output.directory"] = args.output_dir
        if args.seed is not None:
            config.seed = args.seed
            config.raw["sim.seed"] = repr(args.seed)
        if args.trajectories is not None:
            if args.trajectories < 1:
                raise ConfigError("--trajectories: must be at least 1")
            config.trajectories = args.trajectories
            config.raw["sim.trajectories"] = repr(args.trajectories)
        run(config, quiet=args.quiet)
    except GiantCavityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
