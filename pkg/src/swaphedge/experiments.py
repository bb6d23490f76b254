"""Named, seeded experiments writing delimited results.

Each experiment sweeps a small grid (truncation degrees, step schedules,
friction levels, ...), runs the optimizer and/or the evaluator per grid
point, and returns rows for a CSV file with a ``# key=value`` metadata
header.  Grid points draw their random streams from per-task children of
the master seed and results reduce in task order, so outputs are
byte-identical for any worker count.  A JSON manifest with everything
needed to replay the run is written next to the CSV.

Divergent optimizer runs (a non-finite gradient, possible under very large
steps) are recorded with ``aborted=1`` and infinite value columns rather
than killing the whole sweep.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import __version__ as _version
from .engine import HedgingProblem, make_problem
from .evaluator import estimate_v, optimal_truncated_strategy
from .liquidity import CostModel
from .optimizer import ConstantStep, PowerLawStep, run
from .rates import VasicekParams

log = logging.getLogger("swaphedge")

FULL_MEMORY = "full"


class ConfigError(ValueError):
    """A configuration key failed validation; the message names the key."""


@dataclass(frozen=True)
class Option:
    default: object
    parse: Callable
    help: str


def _int_min(lo):
    def parse(raw):
        value = int(raw)
        if value != raw or value < lo:
            raise ValueError(f"expected an integer >= {lo}")
        return value
    return parse


def _float_min(lo, *, strict=False):
    def parse(raw):
        value = float(raw)
        if not np.isfinite(value) or value < lo or (strict and value == lo):
            cmp = ">" if strict else ">="
            raise ValueError(f"expected a finite number {cmp} {lo}")
        return value
    return parse


def _float_interval(lo, hi):
    def parse(raw):
        value = float(raw)
        if not lo <= value < hi:
            raise ValueError(f"expected a number in [{lo}, {hi})")
        return value
    return parse


def _list_of(item_parse):
    def parse(raw):
        if not isinstance(raw, (list, tuple)) or not raw:
            raise ValueError("expected a non-empty list")
        out = []
        for pos, item in enumerate(raw):
            try:
                out.append(item_parse(item))
            except (TypeError, ValueError) as err:
                raise ValueError(f"[{pos}]: {err}") from None
        return tuple(out)
    return parse


def _memory_entry(raw):
    if raw == FULL_MEMORY:
        return FULL_MEMORY
    value = int(raw)
    if value != raw or value < 0:
        raise ValueError('expected an integer >= 0 or "full"')
    return value


MODEL_OPTIONS = {
    "mean_reversion": Option(0.10, _float_min(0.0, strict=True),
                             "speed of mean reversion"),
    "long_run_level": Option(0.05, float, "long-run rate level"),
    "volatility": Option(0.05, _float_min(0.0), "rate volatility"),
    "initial_rate": Option(0.05, float, "rate at the agreement date"),
    "first_date": Option(1.0, _float_min(0.0, strict=True),
                         "first tenor date"),
    "seed": Option(0, _int_min(0), "master seed"),
    "samples": Option(10 ** 6, _int_min(10 ** 3),
                      "Monte Carlo samples per value estimate"),
}


def _options(**extra):
    merged = dict(MODEL_OPTIONS)
    merged.update(extra)
    return merged


def _model(options) -> VasicekParams:
    return VasicekParams(options["mean_reversion"],
                         options["long_run_level"],
                         options["volatility"],
                         options["initial_rate"])


def _make(options, num_payments, degree, cost=None, memory=None):
    return make_problem(num_payments, degree, cost=cost, memory=memory,
                        params=_model(options),
                        first_date=options["first_date"])


def resolve_options(name: str, overrides: dict) -> dict:
    """Fill an experiment's options from defaults, validating every key."""
    spec = EXPERIMENTS[name].options
    resolved = {key: opt.default for key, opt in spec.items()}
    for key, raw in overrides.items():
        if key not in spec:
            raise ConfigError(f"{name}.{key}: unknown option")
        try:
            resolved[key] = spec[key].parse(raw)
        except (TypeError, ValueError) as err:
            raise ConfigError(f"{name}.{key}: {err}") from None
    return resolved


@dataclass(frozen=True)
class ExperimentResult:
    name: str
    columns: tuple
    rows: list
    header: dict
    manifest: dict


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def render_csv(result: ExperimentResult) -> str:
    lines = [f"# {key}={_format_cell(value)}"
             for key, value in result.header.items()]
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _map_in_order(count, job, workers):
    if workers > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, range(count)))
    return [job(index) for index in range(count)]


def _header(name, options, **extra):
    head = {"experiment": name, "version": _version}
    head.update({key: options[key] for key in sorted(options)
                 if not isinstance(options[key], (list, tuple))})
    for key, value in options.items():
        if isinstance(value, (list, tuple)):
            head[key] = " ".join(_format_cell(v) for v in value)
    head.update(extra)
    return head


def _manifest(name, options):
    clean = {}
    for key, value in options.items():
        if isinstance(value, tuple):
            clean[key] = list(value)
        else:
            clean[key] = value
    return {"experiment": name, "version": _version, "options": clean}


def _optimize_and_value(problem_opt: HedgingProblem, schedule, steps,
                        initial, seed, samples,
                        problem_eval: HedgingProblem | None = None):
    """One grid cell: optimize, then estimate v of the final iterate.

    Returns (value mean, value std error, reinit count, aborted flag).
    A non-finite gradient aborts that cell only; its value columns are
    set to inf.
    """
    run_seed, eval_seed = seed.spawn(2)
    if problem_eval is None:
        problem_eval = problem_opt
    try:
        result = run(problem_opt, schedule, steps, run_seed, initial=initial)
    except RuntimeError:
        return float("inf"), float("inf"), -1, 1
    report = estimate_v(problem_eval, result.state.alpha, samples, eval_seed)
    return report.mean, report.std_error, result.state.reinit_count, 0


# -- table1 -------------------------------------------------------------

def run_table1(options, workers):
    """v of the degree-d projection strategy across tenors and degrees."""
    tasks = [(n, d) for n in options["tenors"] for d in options["degrees"]]
    children = np.random.SeedSequence(options["seed"]).spawn(len(tasks))

    def job(index):
        n, d = tasks[index]
        problem = _make(options, n, d)
        alpha = optimal_truncated_strategy(problem)
        report = estimate_v(problem, alpha, options["samples"],
                            children[index])
        log.info("table1 [%d/%d] N=%d d=%d v=%.3e",
                 index + 1, len(tasks), n, d, report.mean)
        return (n, d, report.mean, report.std_error, report.half_width99,
                report.num_samples)

    rows = _map_in_order(len(tasks), job, workers)
    return ExperimentResult(
        "table1",
        ("num_payments", "degree", "v_mean", "v_std_error",
         "v_half_width99", "num_samples"),
        rows, _header("table1", options), _manifest("table1", options))


TABLE1_OPTIONS = _options(
    tenors=Option((2, 3), _list_of(_int_min(1)), "payment counts to sweep"),
    degrees=Option((0, 1, 2, 3, 4), _list_of(_int_min(0)),
                   "truncation degrees to sweep"),
)


# -- step-sweep ---------------------------------------------------------

def run_step_sweep(options, workers):
    """Final value after optimization across step schedules and lengths.

    Frictionless problem; every schedule starts from the zero strategy.
    """
    schedules = []
    for beta in options["betas"]:
        for v1 in options["power_v1"]:
            schedules.append(PowerLawStep(v1, options["v2"], beta))
    for v1 in options["constant_v1"]:
        schedules.append(ConstantStep(v1))
    tasks = [(schedule, steps) for schedule in schedules
             for steps in options["steps_grid"]]
    children = np.random.SeedSequence(options["seed"]).spawn(len(tasks))
    problem = _make(options, options["num_payments"], options["degree"])

    def job(index):
        schedule, steps = tasks[index]
        mean, stderr, resets, aborted = _optimize_and_value(
            problem, schedule, steps, None, children[index],
            options["samples"])
        if isinstance(schedule, PowerLawStep):
            kind, v1, v2, beta = "power", schedule.v1, schedule.v2, \
                schedule.beta
        else:
            kind, v1, v2, beta = "constant", schedule.v1, "", ""
        log.info("step-sweep [%d/%d] %s v1=%g steps=%d v=%.3e",
                 index + 1, len(tasks), kind, v1, steps, mean)
        return (kind, v1, v2, beta, steps, mean, stderr, resets, aborted)

    rows = _map_in_order(len(tasks), job, workers)
    return ExperimentResult(
        "step-sweep",
        ("schedule", "v1", "v2", "beta", "steps", "v_mean", "v_std_error",
         "reinit_count", "aborted"),
        rows, _header("step-sweep", options),
        _manifest("step-sweep", options))


STEP_SWEEP_OPTIONS = _options(
    num_payments=Option(2, _int_min(1), "swap payment count"),
    degree=Option(1, _int_min(0), "truncation degree"),
    steps_grid=Option((10 ** 4, 10 ** 5, 10 ** 6), _list_of(_int_min(1)),
                      "iteration counts"),
    power_v1=Option((1.0, 10.0, 100.0, 1000.0, 1e4, 2e4, 1e5, 1e6),
                    _list_of(_float_min(0.0, strict=True)),
                    "v1 grid for the power-law schedule"),
    v2=Option(1000.0, _float_min(0.0), "v2 of the power-law schedule"),
    betas=Option((0.6, 0.9), _list_of(_float_interval(0.5 + 1e-12, 1.0 + 1e-12)),
                 "decay exponents"),
    constant_v1=Option((1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 20.0),
                       _list_of(_float_min(0.0, strict=True)),
                       "constant step sizes"),
)


# -- trajectory ---------------------------------------------------------

def run_trajectory(options, workers):
    """Decimated optimizer trajectories for two reference schedules."""
    runs = [
        ("fast-decay", PowerLawStep(options["fast_v1"], options["fast_v2"],
                                    options["fast_beta"])),
        ("slow-decay", PowerLawStep(options["slow_v1"], options["slow_v2"],
                                    options["slow_beta"])),
    ]
    steps = options["steps"]
    stride = max(1, steps // options["points"])
    children = np.random.SeedSequence(options["seed"]).spawn(len(runs))
    problem = _make(options, options["num_payments"], options["degree"])

    def job(index):
        label, schedule = runs[index]
        result = run(problem, schedule, steps, children[index],
                     trace_stride=stride)
        log.info("trajectory [%d/%d] %s done (%d resets)",
                 index + 1, len(runs), label, result.state.reinit_count)
        out = []
        for k in range(len(result.trace_steps)):
            out.append((label, int(result.trace_steps[k]),
                        result.trace_value[k],
                        float(np.max(np.abs(result.trace_alpha[k]))),
                        *(result.trace_alpha[k][:4])))
        return out

    blocks = _map_in_order(len(runs), job, workers)
    rows = [row for block in blocks for row in block]
    coeff_names = tuple(f"alpha_{k}" for k in range(4))
    return ExperimentResult(
        "trajectory",
        ("run", "step", "window_mean_sq", "alpha_max_abs") + coeff_names,
        rows, _header("trajectory", options, trace_stride=stride),
        _manifest("trajectory", options))


TRAJECTORY_OPTIONS = _options(
    num_payments=Option(2, _int_min(1), "swap payment count"),
    degree=Option(1, _int_min(0), "truncation degree"),
    steps=Option(10 ** 4, _int_min(1), "iterations per run"),
    points=Option(1000, _int_min(1), "target number of logged points"),
    fast_v1=Option(1e7, _float_min(0.0, strict=True), "first run v1"),
    fast_v2=Option(1.0, _float_min(0.0), "first run v2"),
    fast_beta=Option(1.0, _float_interval(0.5 + 1e-12, 1.0 + 1e-12),
                     "first run beta"),
    slow_v1=Option(10.0, _float_min(0.0, strict=True), "second run v1"),
    slow_v2=Option(1.0, _float_min(0.0), "second run v2"),
    slow_beta=Option(0.6, _float_interval(0.5 + 1e-12, 1.0 + 1e-12),
                     "second run beta"),
)


# -- lambda-compare -----------------------------------------------------

def run_lambda_compare(options, workers):
    """Projection strategy vs the zero strategy vs optimized, across
    proportional friction levels."""
    lam_grid = options["frictions"]
    children = np.random.SeedSequence(options["seed"]).spawn(len(lam_grid))
    schedule = PowerLawStep(options["v1"], options["v2"], options["beta"])

    def job(index):
        lam = lam_grid[index]
        cost = (CostModel.perfect() if lam == 0.0
                else CostModel.proportional(lam))
        problem = _make(options, options["num_payments"], options["degree"],
                        cost=cost)
        star = optimal_truncated_strategy(problem)
        null = np.zeros_like(star)
        seeds = children[index].spawn(3)
        report_star = estimate_v(problem, star, options["samples"], seeds[0])
        report_null = estimate_v(problem, null, options["samples"], seeds[1])
        mean_opt, se_opt, resets, aborted = _optimize_and_value(
            problem, schedule, options["steps"], star, seeds[2],
            options["samples"])
        log.info("lambda-compare [%d/%d] lam=%.3f star=%.3e null=%.3e "
                 "opt=%.3e", index + 1, len(lam_grid), lam,
                 report_star.mean, report_null.mean, mean_opt)
        return (lam, report_star.mean, report_star.std_error,
                report_null.mean, report_null.std_error,
                mean_opt, se_opt, resets, aborted)

    rows = _map_in_order(len(lam_grid), job, workers)
    return ExperimentResult(
        "lambda-compare",
        ("friction", "v_projection", "se_projection", "v_null", "se_null",
         "v_optimized", "se_optimized", "reinit_count", "aborted"),
        rows, _header("lambda-compare", options),
        _manifest("lambda-compare", options))


LAMBDA_COMPARE_OPTIONS = _options(
    num_payments=Option(3, _int_min(1), "swap payment count"),
    degree=Option(3, _int_min(0), "truncation degree"),
    frictions=Option(tuple(round(0.01 * k, 2) for k in range(10)),
                     _list_of(_float_interval(0.0, 1.0)),
                     "proportional friction grid"),
    steps=Option(10 ** 6, _int_min(1), "optimizer iterations"),
    v1=Option(0.1, _float_min(0.0, strict=True), "schedule v1"),
    v2=Option(100.0, _float_min(0.0), "schedule v2"),
    beta=Option(0.6, _float_interval(0.5 + 1e-12, 1.0 + 1e-12),
                "schedule beta"),
)


# -- error-distribution -------------------------------------------------

def run_error_distribution(options, workers):
    """Replicated optimizations: the spread of v(alpha_final) across seeds.

    The tabulated spread includes the Monte Carlo error of each value
    estimate, reported separately per row.
    """
    lam_grid = options["frictions"]
    replicas = options["replicas"]
    tasks = [(lam, rep) for lam in lam_grid for rep in range(replicas)]
    children = np.random.SeedSequence(options["seed"]).spawn(len(tasks))
    schedule = PowerLawStep(options["v1"], options["v2"], options["beta"])

    def job(index):
        lam, rep = tasks[index]
        problem = _make(options, options["num_payments"], options["degree"],
                        cost=CostModel.proportional(lam))
        star = optimal_truncated_strategy(problem)
        mean, stderr, resets, aborted = _optimize_and_value(
            problem, schedule, options["steps"], star, children[index],
            options["samples"])
        if rep == replicas - 1:
            log.info("error-distribution lam=%.3f replicas done", lam)
        return (lam, rep, mean, stderr, resets, aborted)

    rows = _map_in_order(len(tasks), job, workers)
    summary = {}
    for lam in lam_grid:
        values = np.array([row[2] for row in rows
                           if row[0] == lam and row[5] == 0])
        key = f"friction_{lam:g}"
        summary[f"{key}_mean"] = float(np.mean(values))
        summary[f"{key}_std"] = float(np.std(values, ddof=1))
    return ExperimentResult(
        "error-distribution",
        ("friction", "replica", "v_mean", "v_std_error", "reinit_count",
         "aborted"),
        rows, _header("error-distribution", options, **summary),
        _manifest("error-distribution", options))


ERROR_DISTRIBUTION_OPTIONS = _options(
    num_payments=Option(3, _int_min(1), "swap payment count"),
    degree=Option(3, _int_min(0), "truncation degree"),
    frictions=Option((0.01, 0.04), _list_of(_float_interval(0.0, 1.0)),
                     "proportional friction grid"),
    replicas=Option(200, _int_min(2), "independent optimizer replicas"),
    steps=Option(10 ** 4, _int_min(1), "optimizer iterations"),
    v1=Option(1.0, _float_min(0.0, strict=True), "schedule v1"),
    v2=Option(1.0, _float_min(0.0), "schedule v2"),
    beta=Option(1.0, _float_interval(0.5 + 1e-12, 1.0 + 1e-12),
                "schedule beta"),
)


# -- threshold-surface --------------------------------------------------

def run_threshold_surface(options, workers):
    """Optimized value over a (friction, free volume) grid.

    Optimization runs on the smoothed cost (the kinked threshold transfer
    has flat spots that stall the gradient); values are then estimated on
    the raw kinked model for both the start and the final iterate.
    """
    grid = [(lam, c) for lam in options["frictions"]
            for c in options["free_volumes"]]
    children = np.random.SeedSequence(options["seed"]).spawn(len(grid))
    schedule = PowerLawStep(options["v1"], options["v2"], options["beta"])

    def job(index):
        lam, c = grid[index]
        raw_cost = (CostModel.perfect() if lam == 0.0
                    else CostModel.threshold(lam, c))
        problem_eval = _make(options, options["num_payments"],
                             options["degree"], cost=raw_cost)
        problem_opt = problem_eval.with_cost(
            raw_cost.smooth(options["smoothing"]))
        star = optimal_truncated_strategy(problem_eval)
        seeds = children[index].spawn(2)
        report_start = estimate_v(problem_eval, star, options["samples"],
                                  seeds[0])
        mean_opt, se_opt, resets, aborted = _optimize_and_value(
            problem_opt, schedule, options["steps"], star, seeds[1],
            options["samples"], problem_eval=problem_eval)
        log.info("threshold-surface [%d/%d] lam=%.3f C=%.2f start=%.3e "
                 "opt=%.3e", index + 1, len(grid), lam, c,
                 report_start.mean, mean_opt)
        return (lam, c, report_start.mean, report_start.std_error,
                mean_opt, se_opt, resets, aborted)

    rows = _map_in_order(len(grid), job, workers)
    return ExperimentResult(
        "threshold-surface",
        ("friction", "free_volume", "v_start", "se_start", "v_optimized",
         "se_optimized", "reinit_count", "aborted"),
        rows, _header("threshold-surface", options),
        _manifest("threshold-surface", options))


THRESHOLD_SURFACE_OPTIONS = _options(
    num_payments=Option(3, _int_min(1), "swap payment count"),
    degree=Option(3, _int_min(0), "truncation degree"),
    frictions=Option((0.01, 0.02, 0.03, 0.04, 0.05),
                     _list_of(_float_interval(0.0, 1.0)), "friction grid"),
    free_volumes=Option((0.0, 0.25, 0.5, 0.75, 1.0),
                        _list_of(_float_min(0.0)), "free volume grid"),
    smoothing=Option(1e-6, _float_min(0.0, strict=True),
                     "smoothing variance used during optimization"),
    steps=Option(10 ** 6, _int_min(1), "optimizer iterations"),
    v1=Option(100.0, _float_min(0.0, strict=True), "schedule v1"),
    v2=Option(100.0, _float_min(0.0), "schedule v2"),
    beta=Option(0.6, _float_interval(0.5 + 1e-12, 1.0 + 1e-12),
                "schedule beta"),
)


# -- init-compare -------------------------------------------------------

def run_init_compare(options, workers):
    """Sensitivity of the optimized value to the starting point."""
    lam_grid = options["frictions"]
    starts = ("projection", "null")
    tasks = [(lam, start) for lam in lam_grid for start in starts]
    children = np.random.SeedSequence(options["seed"]).spawn(len(tasks))
    schedule = PowerLawStep(options["v1"], options["v2"], options["beta"])

    def job(index):
        lam, start = tasks[index]
        problem = _make(options, options["num_payments"], options["degree"],
                        cost=CostModel.proportional(lam))
        star = optimal_truncated_strategy(problem)
        initial = star if start == "projection" else np.zeros_like(star)
        mean, stderr, resets, aborted = _optimize_and_value(
            problem, schedule, options["steps"], initial, children[index],
            options["samples"])
        log.info("init-compare [%d/%d] lam=%.3f start=%s v=%.3e",
                 index + 1, len(tasks), lam, start, mean)
        return (lam, start, mean, stderr, resets, aborted)

    rows = _map_in_order(len(tasks), job, workers)
    return ExperimentResult(
        "init-compare",
        ("friction", "start", "v_mean", "v_std_error", "reinit_count",
         "aborted"),
        rows, _header("init-compare", options),
        _manifest("init-compare", options))


INIT_COMPARE_OPTIONS = _options(
    num_payments=Option(3, _int_min(1), "swap payment count"),
    degree=Option(3, _int_min(0), "truncation degree"),
    frictions=Option((0.01, 0.02, 0.03, 0.04, 0.05),
                     _list_of(_float_interval(0.0, 1.0)), "friction grid"),
    steps=Option(10 ** 6, _int_min(1), "optimizer iterations"),
    v1=Option(0.1, _float_min(0.0, strict=True), "schedule v1"),
    v2=Option(100.0, _float_min(0.0), "schedule v2"),
    beta=Option(0.6, _float_interval(0.5 + 1e-12, 1.0 + 1e-12),
                "schedule beta"),
)


# -- memory-sweep -------------------------------------------------------

def run_memory_sweep(options, workers):
    """Value of restricted-memory strategies across friction levels.

    Each date's trades may depend on only the q+1 most recent rates; the
    projection start and the optimization both respect the restriction.
    """
    tasks = [(memory, lam) for memory in options["memories"]
             for lam in options["frictions"]]
    children = np.random.SeedSequence(options["seed"]).spawn(len(tasks))
    schedule = PowerLawStep(options["v1"], options["v2"], options["beta"])

    def job(index):
        memory, lam = tasks[index]
        q = None if memory == FULL_MEMORY else memory
        cost = (CostModel.perfect() if lam == 0.0
                else CostModel.proportional(lam))
        problem = _make(options, options["num_payments"], options["degree"],
                        cost=cost, memory=q)
        star = optimal_truncated_strategy(problem)
        seeds = children[index].spawn(2)
        report_star = estimate_v(problem, star, options["samples"], seeds[0])
        mean_opt, se_opt, resets, aborted = _optimize_and_value(
            problem, schedule, options["steps"], star, seeds[1],
            options["samples"])
        log.info("memory-sweep [%d/%d] q=%s lam=%.3f proj=%.3e opt=%.3e",
                 index + 1, len(tasks), memory, lam, report_star.mean,
                 mean_opt)
        return (str(memory), lam, report_star.mean, report_star.std_error,
                mean_opt, se_opt, resets, aborted)

    rows = _map_in_order(len(tasks), job, workers)
    return ExperimentResult(
        "memory-sweep",
        ("memory", "friction", "v_projection", "se_projection",
         "v_optimized", "se_optimized", "reinit_count", "aborted"),
        rows, _header("memory-sweep", options),
        _manifest("memory-sweep", options))


MEMORY_SWEEP_OPTIONS = _options(
    num_payments=Option(3, _int_min(1), "swap payment count"),
    degree=Option(3, _int_min(0), "truncation degree"),
    memories=Option((0, 1, FULL_MEMORY), _list_of(_memory_entry),
                    'memory depths; "full" lifts the restriction'),
    frictions=Option((0.01, 0.02, 0.03, 0.04, 0.05),
                     _list_of(_float_interval(0.0, 1.0)), "friction grid"),
    steps=Option(10 ** 6, _int_min(1), "optimizer iterations"),
    v1=Option(0.1, _float_min(0.0, strict=True), "schedule v1"),
    v2=Option(100.0, _float_min(0.0), "schedule v2"),
    beta=Option(0.6, _float_interval(0.5 + 1e-12, 1.0 + 1e-12),
                "schedule beta"),
)


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    options: dict
    runner: Callable

    def run(self, options: dict, workers: int = 1) -> ExperimentResult:
        return self.runner(options, workers)


EXPERIMENTS = {
    "table1": Experiment(
        "table1", "value of projection strategies vs truncation degree",
        TABLE1_OPTIONS, run_table1),
    "step-sweep": Experiment(
        "step-sweep", "optimizer value across step schedules and lengths",
        STEP_SWEEP_OPTIONS, run_step_sweep),
    "trajectory": Experiment(
        "trajectory", "decimated optimizer trajectories for two schedules",
        TRAJECTORY_OPTIONS, run_trajectory),
    "lambda-compare": Experiment(
        "lambda-compare",
        "projection vs zero vs optimized strategy across frictions",
        LAMBDA_COMPARE_OPTIONS, run_lambda_compare),
    "error-distribution": Experiment(
        "error-distribution",
        "spread of the optimized value across replicas",
        ERROR_DISTRIBUTION_OPTIONS, run_error_distribution),
    "threshold-surface": Experiment(
        "threshold-surface",
        "optimized value over a friction/free-volume grid",
        THRESHOLD_SURFACE_OPTIONS, run_threshold_surface),
    "init-compare": Experiment(
        "init-compare", "optimized value from two starting points",
        INIT_COMPARE_OPTIONS, run_init_compare),
    "memory-sweep": Experiment(
        "memory-sweep", "restricted-memory strategies across frictions",
        MEMORY_SWEEP_OPTIONS, run_memory_sweep),
}
