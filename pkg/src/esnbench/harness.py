"""Experiment runner: (activation x size x trial) sweeps and their outputs.

A run is described by an :class:`ExperimentConfig`; every trial derives its
reservoir/data/metric seeds deterministically from the base seed and the
(activation, size, trial) coordinates, so reruns of the same config produce
identical numbers.  Results are written as ``records.csv`` (one row per
trial, with full provenance), ``medians.csv`` and ``accuracy_vs_size.svg``;
free-running runs additionally emit the predicted/target trajectories, the
delay-coordinate attractor clouds, and the Wasserstein distances of the
predicted and shuffle-surrogate clouds to the target cloud.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .activations import REGISTRY_NAMES, get_activation, registry_index
from .metrics import (
    DIVERGED_LOGNMSE,
    LOGNMSE_BASE,
    embed_delay,
    log_nmse,
    shuffle_surrogate,
    wasserstein_distance,
)
from .readout import ReadoutWeights, fit_readout, predict
from .reservoir import DivergenceError, Reservoir, ReservoirConfig, build_reservoir
from .svg import write_line_chart
from .timeseries import Dataset, SeriesSpec, Split, make_dataset

__all__ = [
    "TASKS",
    "ConfigError",
    "ExperimentConfig",
    "TrialRecord",
    "FreeRunTrial",
    "MedianRow",
    "ExperimentResult",
    "load_config",
    "derive_trial_seeds",
    "free_run",
    "run_normal_task",
    "run_free_running_task",
    "run_experiment",
    "aggregate",
    "emit_outputs",
    "write_series_csv",
]

TASKS = ("logistic", "mge_normal", "mge_free_running", "narma10", "narma20")

SPECTRAL_RADIUS_TARGET = 0.95

# closed-loop outputs beyond this magnitude count as divergence; the
# Mackey-Glass attractor lives within a few units of the origin.
FREE_RUN_GUARD = 1e12

DEFAULT_SIZES = (25, 50, 100, 200, 400, 800)


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a sweep.

    ``sigma`` defaults per task when left unset: 0.01 for the normal
    prediction tasks, 0.1 for free running.  ``embed_tau`` defaults to 17
    for Mackey-Glass tasks and 1 otherwise.
    """

    task: str = "logistic"
    activations: list[str] = field(default_factory=lambda: list(REGISTRY_NAMES))
    sizes: list[int] = field(default_factory=lambda: list(DEFAULT_SIZES))
    sigma: float | None = None
    trials: int = 25
    lam: float = 1e-8
    washout: int = 100
    train_len: int = 2000
    test_len: int = 1000
    horizon: int = 500
    seed: int = 12345
    mge_variant: str = "standard"
    embed_dim: int = 2
    embed_tau: int | None = None
    wasserstein_m: int = 400
    workers: int = 1
    out_dir: str = "results"

    @property
    def resolved_sigma(self) -> float:
        if self.sigma is not None:
            return self.sigma
        return 0.1 if self.task == "mge_free_running" else 0.01

    @property
    def resolved_tau(self) -> int:
        if self.embed_tau is not None:
            return self.embed_tau
        return 17 if self.task.startswith("mge") else 1

    def validate(self) -> None:
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; valid: {', '.join(TASKS)}")
        if not self.activations:
            raise ConfigError("at least one activation is required")
        for name in self.activations:
            try:
                get_activation(name)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ConfigError(f"sizes must be a non-empty list of positive ints: {self.sizes}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.lam < 0:
            raise ConfigError(f"lambda must be >= 0, got {self.lam}")
        if self.sigma is not None and not self.sigma > 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")
        if self.washout < 0 or self.train_len < 1 or self.test_len < 1:
            raise ConfigError("washout must be >= 0; train_len and test_len >= 1")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.mge_variant not in ("paper_verbatim", "standard"):
            raise ConfigError(
                f"mge_variant must be 'paper_verbatim' or 'standard', got {self.mge_variant!r}"
            )
        if self.task == "mge_free_running":
            if not 2 <= self.horizon <= self.test_len:
                raise ConfigError(
                    f"horizon must lie in [2, test_len={self.test_len}], got {self.horizon}"
                )
            cloud_points = self.horizon - (self.embed_dim - 1) * self.resolved_tau
            if cloud_points < self.wasserstein_m:
                raise ConfigError(
                    f"horizon {self.horizon} yields {cloud_points} embedded points, "
                    f"fewer than wasserstein_m={self.wasserstein_m}"
                )


_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a JSON config file and apply overrides; unknown keys are rejected."""
    data: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(
                f"unknown config keys: {', '.join(sorted(unknown))}; "
                f"valid keys: {', '.join(sorted(_CONFIG_KEYS))}"
            )
    if data.get("mge_variant") == "paper":
        data["mge_variant"] = "paper_verbatim"
    cfg = ExperimentConfig(**data)
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg


@dataclass(frozen=True)
class TrialRecord:
    """One trial's outcome plus the provenance needed to rerun it."""

    task: str
    activation: str
    size: int
    trial: int
    reservoir_seed: int
    data_seed: int
    lognmse: float
    diverged: bool
    wall_time_s: float
    sigma: float
    lam: float
    spectral_radius_target: float
    washout: int
    train_len: int
    test_len: int
    horizon: int | None
    mge_variant: str | None
    lognmse_base: int = LOGNMSE_BASE


@dataclass(frozen=True)
class FreeRunTrial:
    """Closed-loop artifacts of one free-running trial."""

    trial: int
    predicted: np.ndarray
    target: np.ndarray
    surrogate: np.ndarray
    w_pred_target: float
    w_surr_target: float
    m: int
    wasserstein_seed: int


@dataclass(frozen=True)
class MedianRow:
    activation: str
    size: int
    trials: int
    median_lognmse: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    medians: list[MedianRow]
    free_runs: list[FreeRunTrial] = field(default_factory=list)


def derive_trial_seeds(base_seed: int, activation: str, size: int, trial: int) -> tuple[int, int, int]:
    """Derive (reservoir, data, metric) seeds for one trial.

    Uses a SeedSequence keyed on the activation's registry index, the
    reservoir size, and the trial number, so the mapping is stable across
    runs and collision-free across the sweep grid.
    """
    key = (registry_index(activation), size, trial)
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=key)
    return tuple(int(c.generate_state(1, np.uint64)[0]) for c in ss.spawn(3))


def _series_spec(cfg: ExperimentConfig, data_seed: int, split: Split) -> SeriesSpec:
    total = split.total
    if cfg.task == "logistic":
        return SeriesSpec(kind="logistic", length=total + 1, seed=data_seed)
    if cfg.task == "mge_normal":
        return SeriesSpec(
            kind="mackey_glass", length=total + 10, seed=data_seed, variant=cfg.mge_variant
        )
    if cfg.task == "mge_free_running":
        return SeriesSpec(
            kind="mackey_glass", length=total + 1, seed=data_seed, variant=cfg.mge_variant
        )
    order = 10 if cfg.task == "narma10" else 20
    return SeriesSpec(kind="narma", n=order, length=total + order + 1, seed=data_seed)


def _trial_dataset(cfg: ExperimentConfig, data_seed: int) -> Dataset:
    split = Split(cfg.washout, cfg.train_len, cfg.test_len)
    mode = "free_running" if cfg.task == "mge_free_running" else "normal"
    return make_dataset(_series_spec(cfg, data_seed, split), mode, split)


def _build(cfg: ExperimentConfig, activation: str, size: int, seed: int) -> Reservoir:
    return build_reservoir(
        ReservoirConfig(
            size=size,
            input_dim=1,
            sigma=cfg.resolved_sigma,
            seed=seed,
            activation=activation,
            spectral_radius_target=SPECTRAL_RADIUS_TARGET,
        )
    )


def _features(dataset: Dataset, states: np.ndarray, upto: int) -> np.ndarray:
    return np.hstack([np.ones((upto, 1)), dataset.inputs[:upto], states])


def run_trial_normal(cfg: ExperimentConfig, activation: str, size: int, trial: int) -> TrialRecord:
    """Teacher-forced trial: harvest states, fit readout, score the test window."""
    t0 = time.perf_counter()
    res_seed, data_seed, _ = derive_trial_seeds(cfg.seed, activation, size, trial)
    dataset = _trial_dataset(cfg, data_seed)
    diverged = False
    try:
        reservoir = _build(cfg, activation, size, res_seed)
        states = reservoir.harvest(dataset.inputs, 0)
        feats = _features(dataset, states, dataset.inputs.shape[0])
        weights = fit_readout(
            feats[dataset.train_slice], dataset.targets[dataset.train_slice], cfg.lam
        )
        preds = feats[dataset.test_slice] @ weights.w_out.T
        lognmse = log_nmse(dataset.targets[dataset.test_slice], preds)
    except DivergenceError:
        lognmse = DIVERGED_LOGNMSE
        diverged = True
    return TrialRecord(
        task=cfg.task,
        activation=activation,
        size=size,
        trial=trial,
        reservoir_seed=res_seed,
        data_seed=data_seed,
        lognmse=lognmse,
        diverged=diverged,
        wall_time_s=time.perf_counter() - t0,
        sigma=cfg.resolved_sigma,
        lam=cfg.lam,
        spectral_radius_target=SPECTRAL_RADIUS_TARGET,
        washout=cfg.washout,
        train_len=cfg.train_len,
        test_len=cfg.test_len,
        horizon=None,
        mge_variant=cfg.mge_variant if cfg.task.startswith("mge") else None,
    )


def free_run(
    reservoir: Reservoir,
    weights: ReadoutWeights,
    u0: float,
    horizon: int,
    guard: float = FREE_RUN_GUARD,
) -> tuple[np.ndarray, int | None]:
    """Run the closed loop: feed each prediction back as the next input.

    Starts from the reservoir's current state with ``u0`` as the first
    input (the last true value).  Returns the predictions and the step at
    which the loop diverged (non-finite state or |output| > guard), or
    None if it stayed bounded; steps after a divergence are NaN.
    """
    preds = np.full(horizon, np.nan)
    u = np.atleast_1d(np.asarray(u0, dtype=np.float64))
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(horizon):
            try:
                x = reservoir.step(u)
            except DivergenceError:
                return preds, k
            out = predict(weights, u, x)
            val = float(out[0])
            if not np.isfinite(val) or abs(val) > guard:
                return preds, k
            preds[k] = val
            u = out
    return preds, None


def run_trial_free_running(
    cfg: ExperimentConfig, activation: str, size: int, trial: int
) -> tuple[TrialRecord, FreeRunTrial]:
    """Free-running trial: train teacher-forced, then evaluate the closed loop."""
    t0 = time.perf_counter()
    res_seed, data_seed, metric_seed = derive_trial_seeds(cfg.seed, activation, size, trial)
    dataset = _trial_dataset(cfg, data_seed)
    n_tf = cfg.washout + cfg.train_len
    horizon = cfg.horizon
    target_h = dataset.targets[n_tf : n_tf + horizon, 0].copy()

    mss = np.random.SeedSequence(metric_seed)
    shuffle_seed, wseed = (int(c.generate_state(1, np.uint64)[0]) for c in mss.spawn(2))

    diverged = False
    predicted = np.full(horizon, np.nan)
    try:
        reservoir = _build(cfg, activation, size, res_seed)
        states = reservoir.harvest(dataset.inputs[:n_tf], 0)
        feats = _features(dataset, states, n_tf)
        weights = fit_readout(
            feats[dataset.train_slice], dataset.targets[dataset.train_slice], cfg.lam
        )
        u0 = float(dataset.inputs[n_tf, 0])  # last true value, by lag-1 alignment
        predicted, diverged_at = free_run(reservoir, weights, u0, horizon)
        diverged = diverged_at is not None
    except DivergenceError:
        diverged = True
    lognmse = DIVERGED_LOGNMSE if diverged else log_nmse(target_h, predicted)

    tau, dim, m = cfg.resolved_tau, cfg.embed_dim, cfg.wasserstein_m
    target_cloud = embed_delay(target_h, tau, dim, source="target")
    surrogate = shuffle_surrogate(target_h, shuffle_seed)
    surr_cloud = embed_delay(surrogate, tau, dim, source="surrogate")
    w_surr = wasserstein_distance(surr_cloud, target_cloud, m, wseed)
    if diverged:
        w_pred = float("inf")
    else:
        pred_cloud = embed_delay(predicted, tau, dim, source="predicted")
        w_pred = wasserstein_distance(pred_cloud, target_cloud, m, wseed)

    record = TrialRecord(
        task=cfg.task,
        activation=activation,
        size=size,
        trial=trial,
        reservoir_seed=res_seed,
        data_seed=data_seed,
        lognmse=lognmse,
        diverged=diverged,
        wall_time_s=time.perf_counter() - t0,
        sigma=cfg.resolved_sigma,
        lam=cfg.lam,
        spectral_radius_target=SPECTRAL_RADIUS_TARGET,
        washout=cfg.washout,
        train_len=cfg.train_len,
        test_len=cfg.test_len,
        horizon=horizon,
        mge_variant=cfg.mge_variant,
    )
    artifacts = FreeRunTrial(
        trial=trial,
        predicted=predicted,
        target=target_h,
        surrogate=surrogate,
        w_pred_target=w_pred,
        w_surr_target=w_surr,
        m=m,
        wasserstein_seed=wseed,
    )
    return record, artifacts


def aggregate(records: list[TrialRecord]) -> list[MedianRow]:
    """Median logNMSE per (activation, size); +inf sentinels sort as largest."""
    if not records:
        raise ValueError("no records to aggregate")
    groups: dict[tuple[str, int], list[float]] = {}
    for rec in records:
        groups.setdefault((rec.activation, rec.size), []).append(rec.lognmse)
    rows = [
        MedianRow(
            activation=act,
            size=size,
            trials=len(vals),
            median_lognmse=float(np.median(vals)),
        )
        for (act, size), vals in groups.items()
    ]
    rows.sort(key=lambda r: (registry_index(r.activation), r.size))
    return rows


def _job_grid(cfg: ExperimentConfig) -> list[tuple[str, int, int]]:
    return [
        (act, size, trial)
        for act in cfg.activations
        for size in cfg.sizes
        for trial in range(cfg.trials)
    ]


def _run_jobs(cfg: ExperimentConfig, worker) -> list:
    jobs = _job_grid(cfg)
    if cfg.workers == 1:
        return [worker(cfg, *job) for job in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(worker, cfg, *job) for job in jobs]
        return [f.result() for f in futures]


def _sort_key(rec: TrialRecord):
    return (registry_index(rec.activation), rec.size, rec.trial)


def run_normal_task(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute a teacher-forced sweep over the configured grid."""
    cfg.validate()
    if cfg.task == "mge_free_running":
        raise ConfigError("use run_free_running_task for the free-running task")
    records = _run_jobs(cfg, run_trial_normal)
    records.sort(key=_sort_key)
    return ExperimentResult(config=cfg, records=records, medians=aggregate(records))


def run_free_running_task(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute a free-running sweep; collects per-trial attractor artifacts."""
    cfg.validate()
    if cfg.task != "mge_free_running":
        raise ConfigError(f"free-running runner requires task 'mge_free_running', got {cfg.task!r}")
    pairs = _run_jobs(cfg, run_trial_free_running)
    pairs.sort(key=lambda pr: _sort_key(pr[0]))
    records = [rec for rec, _ in pairs]
    free_runs = [art for _, art in pairs]
    return ExperimentResult(
        config=cfg, records=records, medians=aggregate(records), free_runs=free_runs
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Dispatch to the normal or free-running runner by task."""
    cfg.validate()
    if cfg.task == "mge_free_running":
        return run_free_running_task(cfg)
    return run_normal_task(cfg)


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

RECORDS_HEADER = [
    "task", "activation", "size", "trial", "reservoir_seed", "data_seed",
    "lognmse", "diverged", "wall_time_s", "sigma", "lambda",
    "spectral_radius_target", "washout", "train_len", "test_len", "horizon",
    "mge_variant", "lognmse_base",
]
WALL_TIME_COLUMN = RECORDS_HEADER.index("wall_time_s")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_series_csv(path, columns: dict[str, np.ndarray]) -> Path:
    """Export named series as CSV, one column per variable."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[n]).ravel() for n in names]
    length = {a.shape[0] for a in arrays}
    if len(length) != 1:
        raise ValueError("all columns must have the same length")
    _write_csv(path, names, ([float(a[i]) for a in arrays] for i in range(length.pop())))
    return path


def emit_outputs(result: ExperimentResult, cfg: ExperimentConfig) -> dict[str, Path]:
    """Write all output files for a completed run; returns their paths."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    rec_rows = [
        [
            r.task, r.activation, r.size, r.trial, r.reservoir_seed, r.data_seed,
            r.lognmse, r.diverged, r.wall_time_s, r.sigma, r.lam,
            r.spectral_radius_target, r.washout, r.train_len, r.test_len,
            r.horizon, r.mge_variant, r.lognmse_base,
        ]
        for r in result.records
    ]
    paths["records"] = out / "records.csv"
    _write_csv(paths["records"], RECORDS_HEADER, rec_rows)

    paths["medians"] = out / "medians.csv"
    _write_csv(
        paths["medians"],
        ["task", "activation", "size", "trials", "median_lognmse"],
        ([cfg.task, m.activation, m.size, m.trials, m.median_lognmse] for m in result.medians),
    )

    by_act: dict[str, list[MedianRow]] = {}
    for row in result.medians:
        by_act.setdefault(row.activation, []).append(row)
    curves = [
        (act, [r.size for r in rows], [r.median_lognmse for r in rows])
        for act, rows in by_act.items()
    ]
    paths["plot"] = write_line_chart(
        out / "accuracy_vs_size.svg",
        curves,
        title=f"{cfg.task}: median logNMSE vs reservoir size",
        xlabel="reservoir size",
        ylabel="median logNMSE",
        log_x=len({s for _, xs, _ in curves for s in xs}) > 1,
    )

    if result.free_runs:
        paths["trajectory"] = out / "trajectory.csv"
        _write_csv(
            paths["trajectory"],
            ["trial", "step", "target", "predicted"],
            (
                [fr.trial, k, float(fr.target[k]), float(fr.predicted[k])]
                for fr in result.free_runs
                for k in range(fr.target.shape[0])
            ),
        )

        tau, dim = cfg.resolved_tau, cfg.embed_dim
        coord_names = [f"x{i}" for i in range(dim)]

        def cloud_rows():
            for fr in result.free_runs:
                for source, series in (
                    ("target", fr.target),
                    ("predicted", fr.predicted),
                    ("surrogate", fr.surrogate),
                ):
                    if not np.all(np.isfinite(series)):
                        continue
                    cloud = embed_delay(series, tau, dim, source=source)
                    for pt in cloud.points:
                        yield [fr.trial, source, *(float(c) for c in pt)]

        paths["attractors"] = out / "attractors.csv"
        _write_csv(paths["attractors"], ["trial", "source", *coord_names], cloud_rows())

        paths["wasserstein"] = out / "wasserstein.csv"
        _write_csv(
            paths["wasserstein"],
            ["trial", "pair", "distance", "m", "seed"],
            (
                row
                for fr in result.free_runs
                for row in (
                    [fr.trial, "predicted_vs_target", fr.w_pred_target, fr.m, fr.wasserstein_seed],
                    [fr.trial, "surrogate_vs_target", fr.w_surr_target, fr.m, fr.wasserstein_seed],
                )
            ),
        )
    return paths
