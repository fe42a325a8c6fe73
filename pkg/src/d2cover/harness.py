"""Scenario configuration and batch experiments comparing initial placements."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from pathlib import Path

import numpy as np

from .density import DensityField, normalize, reference_density
from .discretization import CellPartition, build_cells
from .geometry import ConvexPolygon
from .lloyd import DescentSettings, DescentTrace, run_descent
from .sampling import RngStream, uniform_sample, weighted_d2_sample

WEIGHTED_D2 = "weighted_d2"
UNIFORM = "uniform"
METHODS = (WEIGHTED_D2, UNIFORM)

TRIAL_COLUMNS = (
    "run_id",
    "method",
    "k",
    "epsilon",
    "seed",
    "initial_H",
    "final_H",
    "iterations",
    "converged",
    "mean_distance",
)

# (k, epsilon) of the three published scenarios
REFERENCE_SCENARIOS = {1: (10, 0.1), 2: (10, 0.05), 3: (20, 0.05)}


@dataclass(frozen=True)
class Scenario:
    domain: ConvexPolygon
    density: DensityField
    k: int
    epsilon: float
    methods: tuple = METHODS
    runs: int = 50
    master_seed: int = 0
    descent: DescentSettings = field(default_factory=DescentSettings)
    name: str = "custom"

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "methods", tuple(self.methods))
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise ValueError(f"unknown method(s) {sorted(bad)}; choose from {METHODS}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    def to_dict(self):
        return {
            "name": self.name,
            "domain": self.domain.vertices.tolist(),
            "density": self.density.to_dicts(),
            "k": self.k,
            "epsilon": self.epsilon,
            "methods": list(self.methods),
            "runs": self.runs,
            "master_seed": int(self.master_seed),
            "gain": self.descent.gain,
            "dt": self.descent.dt,
            "convergence_threshold": self.descent.convergence_threshold,
            "max_iterations": self.descent.max_iterations,
        }

    @classmethod
    def from_dict(cls, d):
        descent = DescentSettings(
            gain=float(d.get("gain", 10.0)),
            dt=float(d.get("dt", 0.01)),
            convergence_threshold=float(d.get("convergence_threshold", 1e-4)),
            max_iterations=int(d.get("max_iterations", 10000)),
        )
        methods = d.get("methods", d.get("method", METHODS))
        if isinstance(methods, str):
            methods = (methods,)
        return cls(
            domain=ConvexPolygon(d["domain"]),
            density=DensityField.from_dicts(d["density"]),
            k=int(d["k"]),
            epsilon=float(d["epsilon"]),
            methods=tuple(methods),
            runs=int(d.get("runs", 50)),
            master_seed=int(d.get("master_seed", 0)),
            descent=descent,
            name=str(d.get("name", "custom")),
        )


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return Scenario.from_dict(json.load(fh))


def save_scenario(scenario: Scenario, path):
    with open(path, "w") as fh:
        json.dump(scenario.to_dict(), fh, indent=2)


def reference_scenario(index: int = 1, **overrides) -> Scenario:
    """One of the three published set-ups on the unit square (50 runs each)."""
    k, eps = REFERENCE_SCENARIOS[index]
    sc = Scenario(
        domain=ConvexPolygon.unit_square(),
        density=reference_density(),
        k=k,
        epsilon=eps,
        name=f"paper-{index}",
    )
    return replace(sc, **overrides) if overrides else sc


def preset(name: str, **overrides) -> Scenario:
    """``paper`` (same as ``paper-1``), ``paper-2`` or ``paper-3``."""
    if name == "paper":
        name = "paper-1"
    if not name.startswith("paper-") or name[6:] not in ("1", "2", "3"):
        raise ValueError(f"unknown preset {name!r}")
    return reference_scenario(int(name[6:]), **overrides)


@dataclass(frozen=True)
class Prepared:
    """Normalised density and grid cells shared by all trials of a scenario."""

    field: DensityField
    cells: CellPartition


def prepare(scenario: Scenario) -> Prepared:
    f = normalize(scenario.density, scenario.domain)
    return Prepared(f, build_cells(scenario.domain, scenario.epsilon, f))


@dataclass
class TrialRecord:
    run_id: int
    method: str
    k: int
    epsilon: float
    seed: int
    initial_H: float
    final_H: float
    iterations: int
    converged: bool
    mean_distance: float
    trace: DescentTrace | None = field(default=None, repr=False, compare=False)

    def row(self):
        return [getattr(self, c) for c in TRIAL_COLUMNS]


def initial_configuration(scenario: Scenario, method: str, rng, prepared: Prepared):
    if method == WEIGHTED_D2:
        return weighted_d2_sample(prepared.cells, scenario.k, rng)
    if method == UNIFORM:
        return uniform_sample(scenario.domain, scenario.k, rng)
    raise ValueError(f"unknown method {method!r}")


def run_trial(scenario: Scenario, run_id: int, method: str | None = None, prepared: Prepared | None = None) -> TrialRecord:
    """Seed, place, descend and record one run.

    The generator is keyed by ``(master_seed, run_id)``, so a run can be
    reproduced in isolation from its ``run_id`` alone.
    """
    method = method or scenario.methods[0]
    prepared = prepared or prepare(scenario)
    stream = RngStream(int(scenario.master_seed), int(run_id))
    P0 = initial_configuration(scenario, method, stream.generator(), prepared)
    trace = run_descent(P0, prepared.field, scenario.domain, scenario.descent)
    return TrialRecord(
        run_id=int(run_id),
        method=method,
        k=scenario.k,
        epsilon=scenario.epsilon,
        seed=stream.trial_seed(),
        initial_H=trace.coverage_history[0],
        final_H=trace.coverage_history[-1],
        iterations=trace.iterations,
        converged=trace.converged,
        mean_distance=trace.mean_distance,
        trace=trace,
    )


def _trial_job(scenario, prepared, job):
    method, run_id = job
    return run_trial(scenario, run_id, method, prepared)


def run_trials(scenario: Scenario, workers: int = 1, prepared: Prepared | None = None, keep_traces=True):
    """All ``runs`` trials for every method, ordered by method then run id."""
    prepared = prepared or prepare(scenario)
    jobs = [(m, r) for m in scenario.methods for r in range(scenario.runs)]
    fn = partial(_trial_job, scenario, prepared)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        records = [fn(j) for j in jobs]
    records.sort(key=lambda r: (scenario.methods.index(r.method), r.run_id))
    if not keep_traces:
        for r in records:
            r.trace = None
    return records


def _mean_sd(values):
    v = np.asarray(values, dtype=float)
    sd = float(v.std(ddof=1)) if len(v) > 1 else 0.0
    return float(v.mean()), sd


def improvement_pct(uniform_value, d2_value):
    return (uniform_value - d2_value) / uniform_value * 100.0


@dataclass(frozen=True)
class MethodStats:
    runs: int
    initial_H: tuple
    final_H: tuple
    mean_distance: tuple
    converged: int


@dataclass(frozen=True)
class ScenarioSummary:
    k: int
    epsilon: float
    stats: dict
    improvement_initial_pct: float
    improvement_distance_pct: float

    def row(self):
        out = {"k": self.k, "epsilon": self.epsilon}
        for m in METHODS:
            s = self.stats.get(m)
            for key in ("initial_H", "final_H", "mean_distance"):
                mean, sd = getattr(s, key) if s else (math.nan, math.nan)
                out[f"{m}_{key}_mean"] = mean
                out[f"{m}_{key}_sd"] = sd
            out[f"{m}_converged"] = s.converged if s else 0
            out[f"{m}_runs"] = s.runs if s else 0
        out["improvement_initial_pct"] = self.improvement_initial_pct
        out["improvement_distance_pct"] = self.improvement_distance_pct
        return out


def summarize(records, k=None, epsilon=None) -> ScenarioSummary:
    stats = {}
    for m in METHODS:
        rs = [r for r in records if r.method == m]
        if not rs:
            continue
        stats[m] = MethodStats(
            runs=len(rs),
            initial_H=_mean_sd([r.initial_H for r in rs]),
            final_H=_mean_sd([r.final_H for r in rs]),
            mean_distance=_mean_sd([r.mean_distance for r in rs]),
            converged=sum(bool(r.converged) for r in rs),
        )
    if WEIGHTED_D2 in stats and UNIFORM in stats:
        d2, u = stats[WEIGHTED_D2], stats[UNIFORM]
        imp_init = improvement_pct(u.initial_H[0], d2.initial_H[0])
        imp_dist = improvement_pct(u.mean_distance[0], d2.mean_distance[0])
    else:
        imp_init = imp_dist = math.nan
    k = k if k is not None else records[0].k
    epsilon = epsilon if epsilon is not None else records[0].epsilon
    return ScenarioSummary(k, epsilon, stats, imp_init, imp_dist)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def write_trials_csv(records, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRIAL_COLUMNS)
        for r in records:
            w.writerow([_fmt(v) for v in r.row()])


def read_trials_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        out.append(
            TrialRecord(
                run_id=int(row["run_id"]),
                method=row["method"],
                k=int(row["k"]),
                epsilon=float(row["epsilon"]),
                seed=int(row["seed"]),
                initial_H=float(row["initial_H"]),
                final_H=float(row["final_H"]),
                iterations=int(row["iterations"]),
                converged=row["converged"] == "true",
                mean_distance=float(row["mean_distance"]),
            )
        )
    return out


def write_summary_csv(summaries, path):
    rows = [s.row() for s in summaries]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(v) for k, v in row.items()})


def write_coverage_csv(records, path):
    """Long-format coverage history of every traced trial."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run_id", "method", "iteration", "H"])
        for r in records:
            if r.trace is None:
                continue
            for it, h in enumerate(r.trace.coverage_history):
                w.writerow([r.run_id, r.method, it, repr(h)])


def run_scenario(scenario: Scenario, out_dir=None, workers: int = 1):
    """Run every trial, summarise, and optionally write ``trials.csv``,
    ``summary.csv`` and ``coverage.csv`` under ``out_dir``.

    Returns ``(summary, records)``.
    """
    records = run_trials(scenario, workers=workers)
    summary = summarize(records, scenario.k, scenario.epsilon)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_trials_csv(records, out / "trials.csv")
        write_summary_csv([summary], out / "summary.csv")
        write_coverage_csv(records, out / "coverage.csv")
    return summary, records
