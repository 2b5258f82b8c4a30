"""Monte Carlo benchmark harness.

Scenarios are drawn uniformly over a square region that is split into four
equal quadrants; each quadrant is one block of a partition constraint with a
shared per-block capacity z. Scenario seeds are mixed stably out of
(base seed, trial) only: every algorithm in a (z, trial) cell consumes the
identical scenario, and the whole z sweep reuses the same scenarios per
trial index, so both cross-algorithm and cross-z comparisons are paired
(common random numbers) instead of drowning small effects in fresh
sampling noise. Results land in CSV files; plotting is left to whatever
consumes them.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .matroid import PartitionMatroid
from .scenario import Point2, Scenario
from .solvers import Solution, SolverParams, ratio_greedy_baseline, saturate_robust, simple_greedy

ALGORITHMS = ("fast", "ratio", "greedy")

WORKERS_ENV_VAR = "ROBUST_SELECT_THREADS"


@dataclass(frozen=True)
class BenchConfig:
    """Benchmark settings. Defaults reproduce the headline comparison:
    5 agents and 50 actions in a 100 x 100 region, capacities 1..10,
    100 trials per capacity."""

    n_agents: int = 5
    n_actions: int = 50
    region: float = 100.0
    z_min: int = 1
    z_max: int = 10
    trials: int = 100
    base_seed: int = 0
    delta: float = 1e-3
    epsilon: float | None = None
    curvature: float = 1.0
    measure_wall_time: bool = True

    def __post_init__(self) -> None:
        if self.n_agents < 1:
            raise ValueError("bench config: n_agents must be >= 1")
        if self.n_actions < 0:
            raise ValueError("bench config: n_actions must be >= 0")
        if not (math.isfinite(self.region) and self.region > 0):
            raise ValueError("bench config: region must be finite and > 0")
        if self.z_min < 0 or self.z_max < self.z_min:
            raise ValueError("bench config: need 0 <= z_min <= z_max")
        if self.trials < 1:
            raise ValueError("bench config: trials must be >= 1")
        # Delegate solver-parameter validation.
        self.solver_params()

    def solver_params(self) -> SolverParams:
        return SolverParams(delta=self.delta, epsilon=self.epsilon, curvature=self.curvature)

    @classmethod
    def from_dict(cls, data: dict) -> "BenchConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"bench config: unknown field '{sorted(unknown)[0]}'")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path: str) -> "BenchConfig":
        with open(path, "r", encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ValueError(f"bench config {path}: invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ValueError(f"bench config {path}: top level must be an object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class TrialResult:
    """One (capacity, trial, algorithm) benchmark record."""

    z: int
    trial: int
    algorithm: str
    objective: float
    evaluations: float
    wall_time_ms: float
    seed: int


@dataclass(frozen=True)
class SummaryRow:
    z: int
    algorithm: str
    mean_objective: float
    sd_objective: float
    mean_evaluations: float
    sd_evaluations: float
    mean_wall_time_ms: float


def trial_seed(base_seed: int, trial: int) -> int:
    """Stable 63-bit seed for one trial index. Hash-based so that the
    mapping never changes across runs, platforms, or interpreter versions;
    adding algorithms or capacity settings never perturbs scenarios."""
    digest = hashlib.sha256(f"{base_seed}:{trial}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def generate_scenario(config: BenchConfig, z: int, seed: int) -> Scenario:
    """Draw agent and action positions i.i.d. uniform over the region and
    build the quadrant partition constraint with capacity z per block.
    Points on the mid lines belong to the right/upper half. Block sizes are
    whatever the draw produces."""
    rng = np.random.default_rng(seed)
    agents = rng.uniform(0.0, config.region, size=(config.n_agents, 2))
    actions = rng.uniform(0.0, config.region, size=(config.n_actions, 2))
    half = config.region / 2.0
    blocks: list[list[int]] = [[], [], [], []]
    for j in range(config.n_actions):
        x, y = actions[j]
        blocks[(1 if x >= half else 0) + (2 if y >= half else 0)].append(j)
    matroid = PartitionMatroid(tuple(tuple(b) for b in blocks), (z,) * 4)
    return Scenario(
        agents=tuple(Point2(float(x), float(y)) for x, y in agents),
        actions=tuple(Point2(float(x), float(y)) for x, y in actions),
        matroid=matroid,
    )


def solve_with(algorithm: str, scenario: Scenario, config: BenchConfig) -> Solution:
    if algorithm == "fast":
        return saturate_robust(scenario, config.solver_params())
    if algorithm == "ratio":
        return ratio_greedy_baseline(scenario)
    if algorithm == "greedy":
        return simple_greedy(scenario)
    raise ValueError(f"unknown algorithm '{algorithm}': expected one of {', '.join(ALGORITHMS)}")


def _run_cell(task: tuple[BenchConfig, int, int, tuple[str, ...]]) -> list[TrialResult]:
    config, z, trial, algorithms = task
    seed = trial_seed(config.base_seed, trial)
    scenario = generate_scenario(config, z, seed)
    results = []
    for name in algorithms:
        solution = solve_with(name, scenario, config)
        results.append(
            TrialResult(
                z=z,
                trial=trial,
                algorithm=name,
                objective=solution.min_value,
                evaluations=solution.f_evaluations,
                wall_time_ms=solution.wall_time_s * 1000.0 if config.measure_wall_time else 0.0,
                seed=seed,
            )
        )
    return results


def resolve_workers(requested: int | None = None) -> int:
    """Worker count for trial-level parallelism. The environment variable
    ROBUST_SELECT_THREADS caps any request (0 means one worker per CPU);
    without it, an unspecified request runs single-threaded."""
    env = os.environ.get(WORKERS_ENV_VAR)
    cap = None
    if env is not None and env != "":
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {env!r}") from None
        if cap < 0:
            raise ValueError(f"{WORKERS_ENV_VAR} must be >= 0, got {cap}")
        if cap == 0:
            cap = os.cpu_count() or 1
    if requested is None:
        return cap if cap is not None else 1
    if requested < 1:
        raise ValueError(f"worker count must be >= 1, got {requested}")
    return min(requested, cap) if cap is not None else requested


def run_benchmark(
    config: BenchConfig,
    algorithms: Sequence[str] = ("fast", "ratio"),
    workers: int | None = None,
) -> list[TrialResult]:
    """Run every algorithm on every (z, trial) cell. Output order is fixed
    (by z, trial, algorithm name) regardless of worker count, and identical
    configs produce identical results."""
    names = tuple(algorithms)
    if not names:
        raise ValueError("no algorithms requested")
    for name in names:
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm '{name}': expected one of {', '.join(ALGORITHMS)}")
    if len(set(names)) != len(names):
        raise ValueError("duplicate algorithm names requested")
    tasks = [
        (config, z, trial, names)
        for z in range(config.z_min, config.z_max + 1)
        for trial in range(config.trials)
    ]
    n_workers = resolve_workers(workers)
    if n_workers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (n_workers * 8))
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            nested = list(pool.map(_run_cell, tasks, chunksize=chunk))
    else:
        nested = [_run_cell(task) for task in tasks]
    results = [r for cell in nested for r in cell]
    results.sort(key=lambda r: (r.z, r.trial, r.algorithm))
    return results


def aggregate(results: Iterable[TrialResult]) -> list[SummaryRow]:
    """Per-(z, algorithm) means and sample standard deviations, ordered by
    (z, algorithm). Single-trial groups report a standard deviation of 0."""
    groups: dict[tuple[int, str], list[TrialResult]] = {}
    for r in results:
        groups.setdefault((r.z, r.algorithm), []).append(r)
    if not groups:
        raise ValueError("cannot aggregate an empty result set")
    rows = []
    for (z, algorithm), members in sorted(groups.items()):
        objectives = [m.objective for m in members]
        evaluations = [m.evaluations for m in members]
        times = [m.wall_time_ms for m in members]
        rows.append(
            SummaryRow(
                z=z,
                algorithm=algorithm,
                mean_objective=_mean(objectives),
                sd_objective=_sample_sd(objectives),
                mean_evaluations=_mean(evaluations),
                sd_evaluations=_sample_sd(evaluations),
                mean_wall_time_ms=_mean(times),
            )
        )
    return rows


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def _sample_sd(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    m = _mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / (len(values) - 1))


RESULTS_HEADER = ["z", "trial", "algorithm", "objective", "evaluations", "wall_time_ms", "seed"]
SUMMARY_HEADER = [
    "z",
    "algorithm",
    "mean_objective",
    "sd_objective",
    "mean_evaluations",
    "sd_evaluations",
    "mean_wall_time_ms",
]


def write_results_csv(results: Iterable[TrialResult], path: str) -> None:
    """Raw per-trial CSV. Floats use repr (shortest round-trip form), so
    reading the file back recovers them exactly."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(RESULTS_HEADER)
            for r in results:
                writer.writerow(
                    [r.z, r.trial, r.algorithm, repr(r.objective), repr(r.evaluations), repr(r.wall_time_ms), r.seed]
                )
    except OSError as exc:
        raise OSError(f"cannot write results CSV {path}: {exc}") from exc


def read_results_csv(path: str) -> list[TrialResult]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != RESULTS_HEADER:
                raise ValueError(f"results CSV {path}: unexpected header {header}")
            return [
                TrialResult(
                    z=int(row[0]),
                    trial=int(row[1]),
                    algorithm=row[2],
                    objective=float(row[3]),
                    evaluations=float(row[4]),
                    wall_time_ms=float(row[5]),
                    seed=int(row[6]),
                )
                for row in reader
            ]
    except OSError as exc:
        raise OSError(f"cannot read results CSV {path}: {exc}") from exc


def write_summary_csv(rows: Iterable[SummaryRow], path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(SUMMARY_HEADER)
            for s in rows:
                writer.writerow(
                    [
                        s.z,
                        s.algorithm,
                        repr(s.mean_objective),
                        repr(s.sd_objective),
                        repr(s.mean_evaluations),
                        repr(s.sd_evaluations),
                        repr(s.mean_wall_time_ms),
                    ]
                )
    except OSError as exc:
        raise OSError(f"cannot write summary CSV {path}: {exc}") from exc
