"""Batch experiment harness: seeded trial grids, CSV summaries, and the
bypass-predictor benchmark."""

from __future__ import annotations

import csv
import multiprocessing as mp
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bypass as byp
from .simulator import (ScenarioConfig, TrialRecord, generate_timing_dataset,
                        get_policy, run_episode)


@dataclass
class ExperimentSpec:
    scenario_paths: list[str]
    policies: list[str]
    repetitions: int = 5
    seed_base: int = 0
    output_dir: str = "results"

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


RAW_COLUMNS = ["scenario_id", "policy", "rep", "seed", "outcome", "elapsed"]
SUMMARY_COLUMNS = ["scenario_id", "policy", "n", "mean", "std", "median",
                   "q1", "q3", "iqr", "success_rate"]


def _one_trial(args) -> TrialRecord:
    config_path, policy_name, seed = args
    config = ScenarioConfig.from_yaml(config_path)
    return run_episode(config, policy_name, seed=seed)


def run_benchmark(spec: ExperimentSpec, workers: int = 1,
                  progress=None) -> tuple[list[dict], list[dict]]:
    """Run the scenario x policy x repetition grid.

    Trial seeds are seed_base + repetition index, shared across cells so
    policies face paired worlds. Results are merged in deterministic
    scenario/policy/repetition order regardless of worker completion order.
    """
    jobs = []
    for scenario in spec.scenario_paths:
        for policy in spec.policies:
            get_policy(policy)  # fail fast on unknown names
            for rep in range(spec.repetitions):
                jobs.append((scenario, policy, spec.seed_base + rep))

    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    raw_path = out_dir / "trials.csv"
    jsonl_path = out_dir / "trials.jsonl"

    rows: list[dict] = []
    try:
        if workers > 1:
            with mp.Pool(workers) as pool:
                records = pool.map(_one_trial, jobs)
        else:
            records = []
            for job in jobs:
                records.append(_one_trial(job))
                if progress:
                    progress(len(records), len(jobs))
        for (scenario, policy, seed), record in zip(jobs, records):
            rows.append({
                "scenario_id": record.scenario_id,
                "policy": policy,
                "rep": seed - spec.seed_base,
                "seed": seed,
                "outcome": record.outcome,
                "elapsed": record.elapsed,
                "record": record,
            })
    finally:
        # Flush whatever completed, even on a mid-batch failure.
        _write_raw(raw_path, rows)
        with open(jsonl_path, "w") as fh:
            for row in rows:
                fh.write(row["record"].to_json_line() + "\n")

    summary = summarize(rows)
    _write_summary(out_dir / "summary.csv", summary)
    return rows, summary


def summarize(rows: list[dict]) -> list[dict]:
    """Per (scenario, policy) statistics: mean/std and median/IQR."""
    cells: dict[tuple[str, str], list[dict]] = {}
    order: list[tuple[str, str]] = []
    for row in rows:
        key = (row["scenario_id"], row["policy"])
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(row)
    summary = []
    for key in order:
        elapsed = np.array([r["elapsed"] for r in cells[key]])
        q1, med, q3 = np.percentile(elapsed, [25, 50, 75])
        summary.append({
            "scenario_id": key[0],
            "policy": key[1],
            "n": len(elapsed),
            "mean": float(elapsed.mean()),
            "std": float(elapsed.std(ddof=1)) if len(elapsed) > 1 else 0.0,
            "median": float(med),
            "q1": float(q1),
            "q3": float(q3),
            "iqr": float(q3 - q1),
            "success_rate": float(np.mean(
                [r["outcome"] == "success" for r in cells[key]])),
        })
    return summary


def _write_raw(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RAW_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)


def _write_summary(path: Path, summary: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        writer.writerows(summary)


# ----------------------------------------------------------------------
# bypass predictor benchmark


@dataclass
class BypassReport:
    median_ae: dict[str, float] = field(default_factory=dict)
    iqr_ae: dict[str, float] = field(default_factory=dict)
    n_train: int = 0
    n_test: int = 0

    def format(self) -> str:
        lines = [f"bypass predictor benchmark ({self.n_train} train / "
                 f"{self.n_test} test)"]
        for name in self.median_ae:
            lines.append(f"  {name:14s} median AE {self.median_ae[name]:6.2f} s"
                         f"   IQR {self.iqr_ae[name]:6.2f} s")
        return "\n".join(lines)


def evaluate_bypass_predictors(train: byp.TimingDataset, test: byp.TimingDataset,
                               v_max: float = 0.5,
                               accel: float = 0.5) -> tuple[byp.GlrModel, BypassReport]:
    """Fit the regressor and both baselines on train, score absolute error
    on test."""
    model = byp.fit(train)
    avg = byp.baseline_average_speed(train)
    trap = byp.baseline_trapezoid(v_max, accel)

    report = BypassReport(n_train=len(train), n_test=len(test))
    preds = {
        "glr": np.array([model.predict(_feat(row))[0] for row in test.features]),
        "average-speed": np.array([avg.predict(_feat(row)) for row in test.features]),
        "trapezoid": np.array([trap.predict(_feat(row)) for row in test.features]),
    }
    for name, pred in preds.items():
        ae = np.abs(pred - test.durations)
        q1, med, q3 = np.percentile(ae, [25, 50, 75])
        report.median_ae[name] = float(med)
        report.iqr_ae[name] = float(q3 - q1)
    return model, report


def _feat(row: np.ndarray) -> byp.TrajectoryFeatures:
    return byp.TrajectoryFeatures(float(row[0]), float(row[1]), float(row[2]))


def generate_bypass_benchmark(config: ScenarioConfig, seed: int = 0,
                              n_train: int = 1500,
                              n_test: int = 600) -> tuple[byp.TimingDataset,
                                                          byp.TimingDataset]:
    """Train/test timing datasets from the scenario map (default 1500/600)."""
    grid = config.load_grid()
    robot = config.robot
    train = generate_timing_dataset(grid, robot.radius, robot.v_lin, robot.v_rot,
                                    n_train, seed,
                                    config.bypass_model.noise_sigma)
    test = generate_timing_dataset(grid, robot.radius, robot.v_lin, robot.v_rot,
                                   n_test, seed + 1,
                                   config.bypass_model.noise_sigma)
    return train, test
