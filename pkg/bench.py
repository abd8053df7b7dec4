#!/usr/bin/env python3
"""
Experiment harness: hypercube and nuclear-ball L1 experiments plus the NUM3
penalty demo, with CSV traces, a per-cell summary and an SVG convergence plot.

    python bench.py run configs/hypercube_l1.json [--output-dir out/]
    python bench.py plot out/points.csv out/plot.svg
    python bench.py --list-experiments
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import matplotlib
import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from matplotlib.figure import Figure

from algorithms import pfw_run, pfw_run_stochastic, pgd_run, sgd_run
from core import (
    Array,
    ArgumentError,
    DimensionError,
    FeasibleSet,
    NumericError,
    Objective,
    OptimizationError,
    SolverError,
    StochasticSchedule,
    UnsupportedSetError,
    make_rng,
    params_deterministic,
    params_stochastic,
    pfw_bound,
    pfw_stochastic_bound,
    pgd_bound,
    pgd_step_size,
    sgd_bound,
    sgd_step_size,
)
from linalg import nuclear_norm
from objectives import (
    GaussianNoiseOracle,
    GaussianNoiseSpec,
    L1DistanceObjective,
    LinearUtilityObjective,
    MinRateObjective,
    PenalizedObjective,
    PenaltySpec,
    hypercube_l1_optimum,
)
from sets import HypercubeSet, NuclearBallSet, VertexPolytopeSet

logger = logging.getLogger(__name__)

EXPERIMENTS = {
    "hypercube_l1": "||x - omega||_1 over [-1, 1]^n (exact optimum known)",
    "nuclear_l1": "entrywise L1 distance to W over the nuclear-norm ball ||X||_* <= tau",
    "num3_demo": "max-min rate over a capped simplex with penalized link constraints",
}
ALGORITHMS = ("pfw", "pgd")
OMEGA_MODES = ("inside", "outside")
UTILITIES = ("min_rate", "weighted_sum")

CSV_COLUMNS = ["experiment", "algorithm", "n", "m", "sigma", "T", "seed",
               "f_xbar", "error", "bound", "wallclock_ms"]
SORT_KEYS = ["experiment", "algorithm", "sigma", "T", "seed"]
FLOAT_FORMAT = "%.12g"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


class ConfigError(OptimizationError, ValueError):
    pass


class CellError(SolverError):
    """A solver failure tagged with the (algorithm, sigma, T, seed) cell it came from."""

    def __init__(self, message: str, k: int, cell: "Cell"):
        super().__init__(f"{cell.describe()}: {message}", k)
        self.cell = cell


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num3Config:
    capacity: float = 1.0
    gamma: float = 1.0
    utility: str = "min_rate"
    weights: Optional[tuple[float, ...]] = None
    constraints: tuple[tuple[tuple[float, ...], float], ...] = ()

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "Num3Config":
        unknown = set(raw) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown num3 keys: {sorted(unknown)}")
        try:
            constraints = tuple((tuple(float(v) for v in c["a"]), float(c["b"]))
                                for c in raw.get("constraints", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"num3 constraints must be a list of {{'a': [...], 'b': number}}: {exc}") from exc
        weights = raw.get("weights")
        return cls(capacity=float(raw.get("capacity", 1.0)),
                   gamma=float(raw.get("gamma", 1.0)),
                   utility=str(raw.get("utility", "min_rate")),
                   weights=None if weights is None else tuple(float(w) for w in weights),
                   constraints=constraints)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: int
    m: int = 1
    tau: float = 1.0
    omega_mode: str = "outside"
    sigma_list: tuple[float, ...] = (0.0,)
    T_list: tuple[int, ...] = (100, 1000, 10000)
    seeds: tuple[int, ...] = (0,)
    algorithms: tuple[str, ...] = ALGORITHMS
    output_dir: str = "results"
    instance_seed: int = 0
    outside_factor: float = 2.0
    stochastic_schedule: str = StochasticSchedule.WITH_G.value
    record_wallclock: bool = False
    n_jobs: int = 1
    plot: bool = True
    num3: Optional[Num3Config] = None

    def __post_init__(self):
        for key in ("sigma_list", "T_list", "seeds", "algorithms"):
            object.__setattr__(self, key, tuple(getattr(self, key)))
        self.validate()

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {sorted(EXPERIMENTS)}")
        if self.n < 1 or self.m < 1:
            raise ConfigError(f"dimensions must be positive, got n={self.n}, m={self.m}")
        if self.experiment == "nuclear_l1" and not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.omega_mode not in OMEGA_MODES:
            raise ConfigError(f"omega_mode must be one of {OMEGA_MODES}, got {self.omega_mode!r}")
        if not self.sigma_list:
            raise ConfigError("sigma_list is empty")
        if any(not (s >= 0 and math.isfinite(s)) for s in self.sigma_list):
            raise ConfigError(f"sigma values must be nonnegative, got {list(self.sigma_list)}")
        if not self.T_list:
            raise ConfigError("T_list is empty")
        if any(T < 1 for T in self.T_list):
            raise ConfigError(f"T values must be positive, got {list(self.T_list)}")
        if any(b <= a for a, b in zip(self.T_list, self.T_list[1:])):
            raise ConfigError(f"T_list must be strictly increasing, got {list(self.T_list)}")
        if not self.seeds:
            raise ConfigError("seeds is empty")
        if any(not 0 <= s < 2**64 for s in self.seeds + (self.instance_seed,)):
            raise ConfigError("seeds must be 64-bit unsigned integers")
        if not self.algorithms or any(a not in ALGORITHMS for a in self.algorithms):
            raise ConfigError(f"algorithms must be a nonempty subset of {ALGORITHMS}, got {list(self.algorithms)}")
        if not self.outside_factor > 1:
            raise ConfigError(f"outside_factor must exceed 1, got {self.outside_factor}")
        if self.stochastic_schedule not in {s.value for s in StochasticSchedule}:
            raise ConfigError(f"unknown stochastic_schedule {self.stochastic_schedule!r}")
        if self.n_jobs == 0:
            raise ConfigError("n_jobs must be nonzero")
        for key in ("plot", "record_wallclock"):
            if not isinstance(getattr(self, key), bool):
                raise ConfigError(f"{key} must be true or false, got {getattr(self, key)!r}")
        if self.experiment == "num3_demo":
            self._validate_num3()
        elif self.num3 is not None:
            raise ConfigError("the num3 block only applies to num3_demo")

    def _validate_num3(self) -> None:
        if self.num3 is None:
            raise ConfigError("num3_demo needs a num3 block")
        if "pgd" in self.algorithms:
            raise ConfigError("pgd needs a projection and the NUM3 vertex polytope has none")
        if self.num3.utility not in UTILITIES:
            raise ConfigError(f"utility must be one of {UTILITIES}, got {self.num3.utility!r}")
        if not self.num3.capacity > 0 or not self.num3.gamma >= 0:
            raise ConfigError("num3 needs capacity > 0 and gamma >= 0")
        if self.num3.weights is not None and len(self.num3.weights) != self.n:
            raise ConfigError(f"num3 weights need {self.n} entries, got {len(self.num3.weights)}")
        if any(len(a) != self.n for a, _ in self.num3.constraints):
            raise ConfigError(f"every num3 constraint row needs {self.n} entries")

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in raw or "n" not in raw:
            raise ConfigError("config needs at least 'experiment' and 'n'")
        values = dict(raw)
        try:
            for key in ("n", "m", "instance_seed", "n_jobs"):
                if key in values:
                    values[key] = _as_int(values[key], key)
            for key in ("tau", "outside_factor"):
                if key in values:
                    values[key] = float(values[key])
            if "sigma_list" in values:
                values["sigma_list"] = tuple(float(s) for s in values["sigma_list"])
            if "T_list" in values:
                values["T_list"] = tuple(_as_int(T, "T_list") for T in values["T_list"])
            if "seeds" in values:
                values["seeds"] = tuple(_as_int(s, "seeds") for s in values["seeds"])
            if "algorithms" in values:
                values["algorithms"] = tuple(str(a) for a in values["algorithms"])
            if "output_dir" in values:
                values["output_dir"] = str(values["output_dir"])
            if "num3" in values and values["num3"] is not None:
                values["num3"] = Num3Config.from_dict(values["num3"])
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed config value: {exc}") from exc
        return cls(**values)

    def with_output_dir(self, output_dir: str) -> "ExperimentConfig":
        return dataclasses.replace(self, output_dir=str(output_dir))

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def _as_int(value: Any, key: str) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise ConfigError(f"{key} must hold integers, got {value!r}")
    return int(value)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        with open(path, "r") as f:
            raw = json.load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return ExperimentConfig.from_dict(raw)


# ---------------------------------------------------------------------------
# Problem instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Problem:
    feasible_set: FeasibleSet
    objective: Objective
    f_star: Optional[float]
    dim: int
    anchor: Optional[Array] = None
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def G(self) -> float:
        return self.objective.lipschitz

    @property
    def R(self) -> float:
        return self.feasible_set.radius

    def B(self, sigma: float) -> float:
        return math.sqrt(self.G ** 2 + self.dim * sigma ** 2)


ANCHOR_RULES = {
    ("hypercube_l1", "inside"): "omega ~ U[-1, 1]^n",
    ("hypercube_l1", "outside"): "omega = z * outside_factor / max|z_i|, z ~ U[-1, 1]^n",
    ("nuclear_l1", "inside"): "W = Z * r * tau / ||Z||_*, Z standard normal, r ~ U(0, 1)",
    ("nuclear_l1", "outside"): "W = Z * outside_factor * tau / ||Z||_*, Z standard normal",
}


def generate_anchor(config: ExperimentConfig) -> Array:
    """omega (hypercube) or W (nuclear ball) from the instance_seed stream; see ANCHOR_RULES."""
    rng = make_rng(config.instance_seed, stream=1)
    if config.experiment == "hypercube_l1":
        z = rng.uniform(-1.0, 1.0, size=config.n)
        if config.omega_mode == "inside":
            return z
        return z * (config.outside_factor / np.max(np.abs(z)))
    if config.experiment == "nuclear_l1":
        z = rng.standard_normal((config.m, config.n))
        scale = config.tau / nuclear_norm(z)
        if config.omega_mode == "inside":
            return z * scale * rng.uniform(0.0, 1.0)
        return z * scale * config.outside_factor
    raise ConfigError(f"{config.experiment} has no anchor")


def build_problem(config: ExperimentConfig) -> Problem:
    if config.experiment == "hypercube_l1":
        omega = generate_anchor(config)
        _, f_star = hypercube_l1_optimum(omega)
        return Problem(HypercubeSet(config.n), L1DistanceObjective(omega), f_star, config.n, omega,
                       {"anchor": "omega", "f_star_source": "closed form clamp"})
    if config.experiment == "nuclear_l1":
        W = generate_anchor(config)
        f_star = 0.0 if config.omega_mode == "inside" else None
        return Problem(NuclearBallSet(config.m, config.n, config.tau), L1DistanceObjective(W), f_star,
                       config.m * config.n, W,
                       {"anchor": "W", "f_star_source": "W is optimal" if f_star is not None else "not computable"})

    num3 = config.num3
    if num3.utility == "min_rate":
        utility: Objective = MinRateObjective()
    else:
        weights = np.ones(config.n) if num3.weights is None else np.array(num3.weights)
        utility = LinearUtilityObjective(weights)
    spec = PenaltySpec.from_pairs([(np.array(a), b) for a, b in num3.constraints], num3.gamma)
    return Problem(VertexPolytopeSet.capped_simplex(config.n, num3.capacity), PenalizedObjective(utility, spec),
                   None, config.n, None, {"utility": num3.utility, "penalized_constraints": len(num3.constraints)})


# ---------------------------------------------------------------------------
# Running cells
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    experiment: str
    algorithm: str
    n: int
    m: int
    sigma: float
    T: int
    seed: int
    f_xbar: float
    error: Optional[float]
    bound: float
    wallclock_ms: float


@dataclass(frozen=True)
class Cell:
    algorithm: str
    sigma: float
    T: int
    seed: int

    def describe(self) -> str:
        return f"cell(algorithm={self.algorithm}, sigma={self.sigma:g}, T={self.T}, seed={self.seed})"


def cell_bound(problem: Problem, algorithm: str, sigma: float, T: int, schedule: str) -> float:
    G, R = problem.G, problem.R
    if sigma == 0.0:
        return pfw_bound(G, R, T) if algorithm == "pfw" else pgd_bound(G, R, T)
    B = problem.B(sigma)
    return pfw_stochastic_bound(G, B, R, T, schedule) if algorithm == "pfw" else sgd_bound(B, R, T)


def run_cell(config: ExperimentConfig, problem: Problem, cell: Cell) -> CurvePoint:
    G, R = problem.G, problem.R
    x1 = problem.feasible_set.center
    start = time.perf_counter()
    try:
        if cell.sigma == 0.0:
            if cell.algorithm == "pfw":
                trace = pfw_run(problem.objective, problem.feasible_set, params_deterministic(G, R, cell.T), x1)
            else:
                trace = pgd_run(problem.objective, problem.feasible_set, pgd_step_size(G, R, cell.T), cell.T, x1)
        else:
            oracle = GaussianNoiseOracle(problem.objective, GaussianNoiseSpec(cell.sigma, cell.seed), problem.dim)
            B = oracle.second_moment
            if cell.algorithm == "pfw":
                params = params_stochastic(G, B, R, cell.T, config.stochastic_schedule)
                trace = pfw_run_stochastic(oracle, problem.feasible_set, params, x1)
            else:
                trace = sgd_run(oracle, problem.feasible_set, sgd_step_size(B, R, cell.T), cell.T, x1)
    except SolverError as exc:
        raise CellError(str(exc), exc.k, cell) from exc
    except (NumericError, UnsupportedSetError) as exc:
        raise CellError(str(exc), -1, cell) from exc
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    error = None if problem.f_star is None else trace.f_xbar - problem.f_star
    logger.info("%s done: f_xbar=%.6g", cell.describe(), trace.f_xbar)
    return CurvePoint(experiment=config.experiment, algorithm=cell.algorithm, n=config.n,
                      m=config.m if config.experiment == "nuclear_l1" else 1,
                      sigma=cell.sigma, T=cell.T, seed=cell.seed, f_xbar=trace.f_xbar, error=error,
                      bound=cell_bound(problem, cell.algorithm, cell.sigma, cell.T, config.stochastic_schedule),
                      wallclock_ms=elapsed_ms if config.record_wallclock else 0.0)


def experiment_cells(config: ExperimentConfig) -> list[Cell]:
    return [Cell(algorithm, sigma, T, seed)
            for algorithm in config.algorithms
            for sigma in config.sigma_list
            for T in config.T_list
            for seed in config.seeds]


def run_experiment(config: ExperimentConfig, problem: Optional[Problem] = None) -> list[CurvePoint]:
    """Run every (algorithm, sigma, T, seed) cell; independent cells may run in parallel."""
    problem = build_problem(config) if problem is None else problem
    cells = experiment_cells(config)
    logger.info("running %s with %d cells on %d job(s)", config.experiment, len(cells), config.n_jobs)
    if config.n_jobs == 1:
        points = [run_cell(config, problem, cell) for cell in cells]
    else:
        points = Parallel(n_jobs=config.n_jobs)(delayed(run_cell)(config, problem, cell) for cell in cells)
    return sort_points(points)


def sort_points(points: Sequence[CurvePoint]) -> list[CurvePoint]:
    return sorted(points, key=lambda p: (p.experiment, p.algorithm, p.sigma, p.T, p.seed))


# ---------------------------------------------------------------------------
# CSV, summary, checks
# ---------------------------------------------------------------------------

def points_frame(points: Sequence[CurvePoint]) -> pd.DataFrame:
    rows = [dataclasses.astuple(p) for p in sort_points(points)]
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    if frame.empty:
        return frame
    frame = frame.astype({"n": "int64", "m": "int64", "T": "int64", "seed": "uint64",
                          "sigma": "float64", "f_xbar": "float64", "error": "float64",
                          "bound": "float64", "wallclock_ms": "float64"})
    return frame


def write_csv(points: Sequence[CurvePoint], path: str | Path) -> None:
    """Header plus one row per point, floats at 12 significant digits, absent error as empty."""
    points_frame(points).to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")


def read_csv(path: str | Path) -> list[CurvePoint]:
    frame = pd.read_csv(path, dtype={"experiment": str, "algorithm": str, "seed": "uint64"},
                        float_precision="round_trip", keep_default_na=False, na_values={"error": [""]})
    points = []
    for row in frame.itertuples(index=False):
        error = None if pd.isna(row.error) else float(row.error)
        points.append(CurvePoint(experiment=row.experiment, algorithm=row.algorithm, n=int(row.n), m=int(row.m),
                                 sigma=float(row.sigma), T=int(row.T), seed=int(row.seed), f_xbar=float(row.f_xbar),
                                 error=error, bound=float(row.bound), wallclock_ms=float(row.wallclock_ms)))
    return points


def summarize(points: Sequence[CurvePoint]) -> pd.DataFrame:
    """Seed means per (experiment, algorithm, n, m, sigma, T) with the 3-stderr bound check."""
    frame = points_frame(points)
    keys = ["experiment", "algorithm", "n", "m", "sigma", "T"]
    if frame.empty:
        return pd.DataFrame(columns=keys + ["seeds", "mean_f_xbar", "mean_error", "stderr_error",
                                            "bound", "within_bound"])
    grouped = frame.groupby(keys, sort=True)
    summary = grouped.agg(seeds=("seed", "size"), mean_f_xbar=("f_xbar", "mean"),
                          mean_error=("error", "mean"), std_error=("error", "std"),
                          bound=("bound", "first")).reset_index()
    stderr = summary["std_error"].fillna(0.0) / np.sqrt(summary["seeds"])
    summary["stderr_error"] = stderr.where(summary["mean_error"].notna())
    summary["within_bound"] = (summary["mean_error"] <= summary["bound"] + 3.0 * summary["stderr_error"]) \
        .where(summary["mean_error"].notna())
    summary = summary.drop(columns="std_error")
    for row in summary.itertuples(index=False):
        if pd.notna(row.within_bound) and not bool(row.within_bound):
            logger.warning("%s/%s sigma=%g T=%d: mean error %.6g above bound %.6g + 3 stderr",
                           row.experiment, row.algorithm, row.sigma, row.T, row.mean_error, row.bound)
    return summary


def write_summary(points: Sequence[CurvePoint], path: str | Path) -> None:
    summarize(points).to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")


def series_table(points: Sequence[CurvePoint]) -> pd.DataFrame:
    """Per (experiment, algorithm, sigma, T) mean of the plotted value and of the bound.

    The plotted value is the error when every point of the series has one,
    otherwise f_xbar.
    """
    frame = points_frame(points)
    if frame.empty:
        raise ArgumentError("no points to tabulate")
    keys = ["experiment", "algorithm", "sigma"]
    parts = []
    for _, series in frame.groupby(keys, sort=True):
        use_error = bool(series["error"].notna().all())
        series = series.assign(value=series["error"] if use_error else series["f_xbar"],
                               quantity="error" if use_error else "f_xbar")
        parts.append(series.groupby(keys + ["T", "quantity"], sort=True)
                     .agg(value=("value", "mean"), bound=("bound", "mean")).reset_index())
    return pd.concat(parts, ignore_index=True)


def check_monotone(points: Sequence[CurvePoint]) -> list[str]:
    """Flag T-order inversions of the mean value in noiseless series; warnings, not failures."""
    messages = []
    table = series_table(points)
    for (experiment, algorithm, sigma), series in table.groupby(["experiment", "algorithm", "sigma"], sort=True):
        if sigma != 0.0:
            continue
        values = series.sort_values("T")[["T", "value"]].to_numpy()
        for (T_a, v_a), (T_b, v_b) in zip(values, values[1:]):
            if v_b > v_a:
                message = (f"{experiment}/{algorithm}: mean {series['quantity'].iloc[0]} rose from "
                           f"{v_a:.6g} at T={int(T_a)} to {v_b:.6g} at T={int(T_b)}")
                logger.warning(message)
                messages.append(message)
    return messages


# ---------------------------------------------------------------------------
# Plot
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlotSeries:
    label: str
    quantity: str
    T: Array
    value: Array
    bound: Optional[Array]


def plot_series(points: Sequence[CurvePoint]) -> list[PlotSeries]:
    """One curve per (experiment, algorithm, sigma); bounds only accompany error curves."""
    table = series_table(points)
    curves = []
    for (_, algorithm, sigma), series in table.groupby(["experiment", "algorithm", "sigma"], sort=True):
        series = series.sort_values("T")
        quantity = series["quantity"].iloc[0]
        curves.append(PlotSeries(
            label=f"{algorithm} sigma={sigma:g}",
            quantity=quantity,
            T=series["T"].to_numpy(dtype=np.float64),
            value=series["value"].to_numpy(dtype=np.float64),
            bound=series["bound"].to_numpy(dtype=np.float64) if quantity == "error" else None,
        ))
    return curves


def plot_figure(points: Sequence[CurvePoint]) -> Figure:
    """Mean error (or f_xbar) against T; log-log when every plotted value is positive, else log T only."""
    if len(points) == 0:
        raise ArgumentError("cannot plot an empty point list")
    curves = plot_series(points)
    plotted = np.concatenate([c.value for c in curves] + [c.bound for c in curves if c.bound is not None])
    log_y = bool(np.all(plotted > 0))
    if not log_y:
        logger.info("plotted values are not all positive, using a linear y axis")

    fig = Figure(figsize=(7.0, 5.0))
    ax = fig.add_subplot(1, 1, 1)
    colors = matplotlib.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, curve in enumerate(curves):
        color = colors[i % len(colors)]
        ax.plot(curve.T, curve.value, marker="o", color=color, label=curve.label)
        if curve.bound is not None:
            ax.plot(curve.T, curve.bound, linestyle="--", color=color, label=f"{curve.label} bound")
    ax.set_xscale("log")
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("mean " + " / ".join(sorted({c.quantity for c in curves})))
    ax.set_title(", ".join(sorted({p.experiment for p in points})))
    ax.grid(True, which="both", linewidth=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def render_plot(points: Sequence[CurvePoint], path: str | Path) -> None:
    """Write plot_figure as a deterministic SVG."""
    fig = plot_figure(points)
    with matplotlib.rc_context({"svg.hashsalt": "pfw-bench", "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None})


# ---------------------------------------------------------------------------
# Outputs
# ---------------------------------------------------------------------------

def write_metadata(config: ExperimentConfig, problem: Problem, path: str | Path) -> None:
    metadata = {
        "config": config.as_dict(),
        "anchor_generator": {
            "mode": config.omega_mode,
            "instance_seed": config.instance_seed,
            "outside_factor": config.outside_factor,
            "rule": ANCHOR_RULES.get((config.experiment, config.omega_mode)),
        },
        "anchor": None if problem.anchor is None else problem.anchor.tolist(),
        "constants": {
            "G": problem.G,
            "R": problem.R,
            "D": problem.feasible_set.diameter,
            "B": {f"{s:g}": problem.B(s) for s in config.sigma_list},
            "f_star": problem.f_star,
        },
        "schedule": {
            "deterministic": "alpha = G sqrt(T)/R, eta = G/(2R sqrt(T)), beta = R/(G sqrt(T))",
            "stochastic": config.stochastic_schedule,
        },
        "problem": problem.metadata,
    }
    with open(path, "w") as f:
        json.dump(metadata, f, indent=2, sort_keys=True)
        f.write("\n")


def run_to_directory(config: ExperimentConfig) -> list[CurvePoint]:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem = build_problem(config)
    points = run_experiment(config, problem)
    write_csv(points, out / "points.csv")
    write_summary(points, out / "summary.csv")
    write_metadata(config, problem, out / "metadata.json")
    check_monotone(points)
    if config.plot:
        render_plot(points, out / "plot.svg")
    return points


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description="Projection-free optimization benchmarks")
    parser.add_argument("--list-experiments", action="store_true", help="list the shipped experiments and exit")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command")
    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config", help="path to a JSON experiment config")
    run.add_argument("--output-dir", help="override output_dir from the config")
    plot = sub.add_parser("plot", help="render an SVG from a points CSV")
    plot.add_argument("csv")
    plot.add_argument("svg")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.list_experiments:
        for name, description in EXPERIMENTS.items():
            print(f"{name:14s} {description}")
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_VALIDATION

    try:
        if args.command == "run":
            config = load_config(args.config)
            if args.output_dir:
                config = config.with_output_dir(args.output_dir)
            print(f"🚀 Running {config.experiment} ({len(experiment_cells(config))} cells)")
            points = run_to_directory(config)
            print(f"✅ {len(points)} points written to {config.output_dir}/points.csv")
        else:
            points = read_csv(args.csv)
            render_plot(points, args.svg)
            print(f"✅ Plot saved to {args.svg}")
    except (ConfigError, ArgumentError, DimensionError, UnsupportedSetError) as exc:
        print(f"❌ Invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SolverError, NumericError) as exc:
        print(f"❌ Solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"❌ I/O error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
