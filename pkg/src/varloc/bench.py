"""Synthetic-scenario generation and the Monte Carlo comparison harness.

Anchors and targets are drawn uniformly from the unit square (km);
measurements get zero-mean Gaussian noise with the inlier deviation, and
the first L indices of a per-trial outlier list get the outlier
deviation instead.  Randomness comes from counter-based (Philox)
substreams keyed by (seed, purpose, indices), so every cell is
reproducible in isolation and adding methods never perturbs the data.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import baselines, solver
from .core import Estimate, Point2, Scenario

_PLACEMENT, _LISTS, _NOISE = 1, 2, 3

METHODS: dict[str, Callable[[Scenario, int], Estimate]] = {
    "rpte": lambda sc, grid: solver.rpte(sc, grid),
    "srls": lambda sc, grid: baselines.srls(sc),
    "gd": lambda sc, grid: baselines.gd_rls(sc),
}

TRIALS_HEADER = "placement,list,L,sigma_o_km,method,x_km,y_km,error_m,time_s"
SUMMARY_HEADER = "L,sigma_o_km,method,mean_error_m,n_trials,n_failed"


class ConfigError(ValueError):
    """Invalid benchmark configuration."""


@dataclass(frozen=True)
class BenchConfig:
    """One sweep: placements x outlier lists x L values x outlier sigmas."""

    M: int = 10
    L_values: tuple[int, ...] = (0, 1, 2, 3, 4, 5)
    sigma_inlier: float = 0.05
    sigma_outlier_grid: tuple[float, ...] = (0.5, 0.75, 1.0, 1.5, 2.0, 2.5)
    n_placements: int = 20
    n_outlier_lists: int = 10
    grid_G: int = 20
    seed: int = 0
    methods: tuple[str, ...] = ("rpte", "srls", "gd")

    def __post_init__(self):
        object.__setattr__(self, "L_values", tuple(int(v) for v in self.L_values))
        object.__setattr__(
            self, "sigma_outlier_grid", tuple(float(v) for v in self.sigma_outlier_grid)
        )
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.M < 2:
            raise ConfigError(f"M must be >= 2, got {self.M}")
        for lv in self.L_values:
            if not 0 <= lv <= self.M - 1:
                raise ConfigError(f"L={lv} outside [0, {self.M - 1}]")
        if self.sigma_inlier <= 0:
            raise ConfigError("sigma_inlier must be > 0")
        for s in self.sigma_outlier_grid:
            if s <= 0:
                raise ConfigError("sigma_outlier values must be > 0")
        if self.n_placements < 1 or self.n_outlier_lists < 1:
            raise ConfigError("n_placements and n_outlier_lists must be >= 1")
        if self.grid_G < 2:
            raise ConfigError("grid_G must be >= 2")
        if not self.L_values:
            raise ConfigError("L_values must be nonempty")
        if not self.sigma_outlier_grid:
            raise ConfigError("sigma_outlier_grid must be nonempty")
        if not self.methods:
            raise ConfigError("methods must be nonempty")
        for name in self.methods:
            if name not in METHODS:
                raise ConfigError(
                    f"unknown method {name!r}; known: {sorted(METHODS)}"
                )

    @classmethod
    def from_dict(cls, data: dict) -> "BenchConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path) -> "BenchConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class TrialRecord:
    placement: int
    list_index: int
    outlier_count: int
    sigma_outlier: float
    method: str
    estimate: Optional[Point2]
    error_m: float
    time_s: float


def _stream(seed: int, purpose: int, *indices: int) -> np.random.Generator:
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, purpose, *map(int, indices)]
    return np.random.Generator(np.random.Philox(seed=np.random.SeedSequence(entropy)))


def _placement(cfg: BenchConfig, placement_idx: int):
    pts = _stream(cfg.seed, _PLACEMENT, placement_idx).random((cfg.M + 1, 2))
    return pts[: cfg.M], pts[cfg.M]


def _outlier_list(cfg: BenchConfig, placement_idx: int, list_idx: int) -> np.ndarray:
    rng = _stream(cfg.seed, _LISTS, placement_idx, list_idx)
    return rng.permutation(cfg.M)[: cfg.M // 2]


def generate_scenario(
    cfg: BenchConfig,
    placement_idx: int,
    list_idx: int,
    outlier_count: int,
    sigma_outlier: float,
) -> tuple[Scenario, Point2]:
    """Scenario and ground truth for one Monte Carlo cell entry.

    The outlier set is the first ``outlier_count`` indices of the
    per-(placement, list) outlier list, so it grows by inclusion as L
    grows, and an L=0 scenario is independent of sigma_outlier.
    """
    if not 0 <= placement_idx < cfg.n_placements:
        raise ConfigError(f"placement_idx {placement_idx} out of range")
    if not 0 <= list_idx < cfg.n_outlier_lists:
        raise ConfigError(f"list_idx {list_idx} out of range")
    if outlier_count > cfg.M // 2:
        raise ConfigError(
            f"L={outlier_count} exceeds outlier-list length {cfg.M // 2}"
        )

    anchors, truth = _placement(cfg, placement_idx)
    outliers = _outlier_list(cfg, placement_idx, list_idx)
    noise = _stream(cfg.seed, _NOISE, placement_idx, list_idx).standard_normal(cfg.M)

    sigma = np.full(cfg.M, cfg.sigma_inlier)
    sigma[outliers[:outlier_count]] = sigma_outlier
    dists = np.sqrt(((truth[None, :] - anchors) ** 2).sum(axis=1))
    y = np.abs(dists + noise * sigma)

    scenario = Scenario(
        anchors=tuple(Point2(ax, ay) for ax, ay in anchors),
        measurements=tuple(float(v) for v in y),
        outlier_count=outlier_count,
    )
    return scenario, Point2(float(truth[0]), float(truth[1]))


def run_monte_carlo(cfg: BenchConfig) -> list[TrialRecord]:
    """All trials of the sweep, in (placement, list, L, sigma, method) order.

    Per-trial method failures become records with NaN error rather than
    aborting the sweep.
    """
    records: list[TrialRecord] = []
    for p in range(cfg.n_placements):
        for l in range(cfg.n_outlier_lists):
            for lv in cfg.L_values:
                for sigma_o in cfg.sigma_outlier_grid:
                    scenario, truth = generate_scenario(cfg, p, l, lv, sigma_o)
                    for name in cfg.methods:
                        run = METHODS[name]
                        t0 = time.perf_counter()
                        try:
                            est = run(scenario, cfg.grid_G)
                            elapsed = time.perf_counter() - t0
                            err = 1000.0 * est.point.distance_to(truth)
                            records.append(
                                TrialRecord(p, l, lv, sigma_o, name, est.point, err, elapsed)
                            )
                        except Exception:
                            elapsed = time.perf_counter() - t0
                            records.append(
                                TrialRecord(
                                    p, l, lv, sigma_o, name, None, math.nan, elapsed
                                )
                            )
    return records


def summarize(records: Sequence[TrialRecord]):
    """Mean error (m) per (L, sigma_outlier, method); failures excluded."""
    cells: dict[tuple[int, float, str], list[float]] = {}
    failed: dict[tuple[int, float, str], int] = {}
    for rec in records:
        key = (rec.outlier_count, rec.sigma_outlier, rec.method)
        cells.setdefault(key, [])
        failed.setdefault(key, 0)
        if math.isnan(rec.error_m):
            failed[key] += 1
        else:
            cells[key].append(rec.error_m)
    rows = []
    for key in sorted(cells):
        vals = cells[key]
        mean = sum(vals) / len(vals) if vals else math.nan
        rows.append((*key, mean, len(vals) + failed[key], failed[key]))
    return rows


def emit_report(records: Sequence[TrialRecord], out_dir) -> tuple[Path, Path]:
    """Write trials.csv and summary.csv; returns their paths."""
    if not records:
        raise ValueError("no records to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trials_path = out / "trials.csv"
    summary_path = out / "summary.csv"

    with open(trials_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TRIALS_HEADER + "\n")
        for r in records:
            x = repr(r.estimate.x) if r.estimate is not None else "nan"
            y = repr(r.estimate.y) if r.estimate is not None else "nan"
            fh.write(
                f"{r.placement},{r.list_index},{r.outlier_count},"
                f"{r.sigma_outlier!r},{r.method},{x},{y},{r.error_m!r},{r.time_s!r}\n"
            )

    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for lv, sigma_o, method, mean, n, n_failed in summarize(records):
            fh.write(f"{lv},{sigma_o!r},{method},{mean!r},{n},{n_failed}\n")

    return trials_path, summary_path
