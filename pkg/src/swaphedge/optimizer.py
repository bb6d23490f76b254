"""Robbins-Monro minimization of E[W^2] over strategy coefficients.

The iteration draws one fresh path per step and moves against the pathwise
objective gradient,

    alpha_{g+1} = alpha_g - rho_{g+1} * 2 W dW/dalpha,

with step sizes rho_g = v1 / (v2 + g)^beta (or a constant).  beta in
(1/2, 1] gives the classical conditions sum rho = inf, sum rho^2 < inf.

Divergence is contained by restarting on an expanding family of compacts:
whenever the iterate leaves the inf-norm ball of radius r0 * c^l it is put
back at the initial point and the ball index l is incremented.  The ball
grows without bound, so the restarts cannot trap the iteration; under the
usual conditions only finitely many occur.

The hot loop is compiled (see kernels); rm_step here is the plain
reference used by the kernel's cross-check tests and for custom drivers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import kernels
from .engine import HedgingProblem

TRACE_STRIDE_DEFAULT = 1000
CHUNK_ROWS = 1 << 16


@dataclass(frozen=True)
class PowerLawStep:
    """rho_g = v1 / (v2 + g)^beta; beta in (1/2, 1] for the standard theory."""

    v1: float
    v2: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        if self.v1 <= 0.0:
            raise ValueError(f"v1 must be > 0, got {self.v1}")
        if self.v2 < 0.0:
            raise ValueError(f"v2 must be >= 0, got {self.v2}")
        if not 0.5 < self.beta <= 1.0:
            raise ValueError(f"beta must be in (1/2, 1], got {self.beta}")

    def rho(self, gamma: int) -> float:
        if gamma < 1:
            raise ValueError(f"step index must be >= 1, got {gamma}")
        return self.v1 / (self.v2 + gamma) ** self.beta

    @property
    def standard_decay(self) -> bool:
        """Whether sum rho diverges while sum rho^2 converges."""
        return True  # enforced by the beta bound above


@dataclass(frozen=True)
class ConstantStep:
    """rho_g = v1; used for fixed-step experiments, no decay conditions."""

    v1: float

    def __post_init__(self):
        if self.v1 <= 0.0:
            raise ValueError(f"v1 must be > 0, got {self.v1}")

    def rho(self, gamma: int) -> float:
        if gamma < 1:
            raise ValueError(f"step index must be >= 1, got {gamma}")
        return self.v1

    @property
    def standard_decay(self) -> bool:
        return False


StepSchedule = Union[PowerLawStep, ConstantStep]


def _schedule_args(schedule: StepSchedule):
    if isinstance(schedule, PowerLawStep):
        return 0, schedule.v1, schedule.v2, schedule.beta
    if isinstance(schedule, ConstantStep):
        return 1, schedule.v1, 0.0, 1.0
    raise TypeError(f"unknown schedule type {type(schedule).__name__}")


@dataclass(frozen=True)
class CompactFamily:
    """Inf-norm balls K_l of radius base_radius * growth^l."""

    base_radius: float = 10.0
    growth: float = 2.0

    def __post_init__(self):
        if self.base_radius <= 0.0:
            raise ValueError(
                f"base_radius must be > 0, got {self.base_radius}")
        if self.growth <= 1.0:
            raise ValueError(f"growth must be > 1, got {self.growth}")

    def radius(self, level: int) -> float:
        return self.base_radius * self.growth ** level

    def contains(self, alpha: np.ndarray, level: int) -> bool:
        scale = float(np.max(np.abs(alpha))) if np.size(alpha) else 0.0
        return scale <= self.radius(level)


@dataclass(frozen=True)
class OptimizerState:
    """One point of the iteration: coefficients plus restart bookkeeping."""

    alpha: np.ndarray
    step_count: int = 0
    compact_level: int = 0
    reinit_count: int = 0


def rm_step(state: OptimizerState, objective_gradient: np.ndarray,
            schedule: StepSchedule, compacts: CompactFamily,
            alpha_init: np.ndarray) -> OptimizerState:
    """One Robbins-Monro step with the compact-restart rule.

    objective_gradient is the pathwise gradient of S(W) (for S(x) = x^2,
    that is 2 W dW/dalpha).  Non-finite gradients abort: they signal a bug
    upstream, not a numerical event of the method.
    """
    gradient = np.asarray(objective_gradient, dtype=float)
    if not np.all(np.isfinite(gradient)):
        raise ValueError("non-finite objective gradient")
    gamma = state.step_count + 1
    candidate = state.alpha - schedule.rho(gamma) * gradient
    if compacts.contains(candidate, state.compact_level):
        return OptimizerState(candidate, gamma, state.compact_level,
                              state.reinit_count)
    return OptimizerState(np.array(alpha_init, dtype=float), gamma,
                          state.compact_level + 1, state.reinit_count + 1)


@dataclass(frozen=True)
class RunResult:
    """Final state plus the decimated trajectory of a run.

    trace_value[k] is the running mean of W^2 over the steps since the
    previous snapshot -- a coarse value estimate along the trajectory.
    """

    state: OptimizerState
    trace_steps: np.ndarray
    trace_alpha: np.ndarray
    trace_value: np.ndarray
    manifest: dict = field(repr=False)


def problem_digest(problem: HedgingProblem) -> str:
    """Stable short hash of everything that defines the problem."""
    parts = (
        problem.params, problem.swap.tenor.agreement_date,
        problem.swap.tenor.dates, problem.swap.fixed_rate,
        problem.swap.notional, problem.cost, problem.scheme,
    )
    return hashlib.sha256(repr(parts).encode()).hexdigest()[:16]


def _as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def run(problem: HedgingProblem, schedule: StepSchedule, num_steps: int,
        seed, compacts: CompactFamily = CompactFamily(),
        initial: np.ndarray | None = None,
        trace_stride: int = TRACE_STRIDE_DEFAULT) -> RunResult:
    """Run the iteration for num_steps fresh paths.

    Fully reproducible: the seed determines every draw, and a repeat call
    with the same arguments returns bit-identical results.  The trajectory
    is logged every trace_stride steps (0 disables logging).

    Raises
    ------
    RuntimeError
        If a non-finite objective gradient is met.
    """
    if num_steps < 1:
        raise ValueError(f"num_steps must be >= 1, got {num_steps}")
    if trace_stride < 0:
        raise ValueError(f"trace_stride must be >= 0, got {trace_stride}")
    layout_size = problem.layout.size
    if initial is None:
        alpha_init = np.zeros(layout_size)
    else:
        alpha_init = np.array(initial, dtype=float)
        if alpha_init.shape != (layout_size,):
            raise ValueError(f"initial must have shape ({layout_size},), "
                             f"got {alpha_init.shape}")
    level = 0
    while not compacts.contains(alpha_init, level):
        level += 1

    tables = kernels.build_tables(problem)
    scratch = kernels.make_scratch(tables)
    kind, v1, v2, beta = _schedule_args(schedule)
    alpha = alpha_init.copy()
    counters = np.array([0, level, 0, 0], dtype=np.int64)
    accum = np.array([0.0, 0.0, compacts.radius(level)])
    max_rows = num_steps // trace_stride + 1 if trace_stride else 1
    trace_gamma = np.zeros(max_rows, dtype=np.int64)
    trace_alpha = np.zeros((max_rows, layout_size))
    trace_value = np.zeros(max_rows)

    seed_seq = _as_seed_sequence(seed)
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    cols = problem.num_payments + 1
    remaining = num_steps
    while remaining > 0:
        rows = min(remaining, CHUNK_ROWS)
        normals = rng.standard_normal((rows, cols))
        status = kernels.rm_chunk(
            normals, alpha, alpha_init, counters, accum,
            kind, v1, v2, beta, compacts.growth,
            trace_stride, trace_gamma, trace_alpha, trace_value,
            tables, scratch)
        if status == kernels.ABORT_NONFINITE:
            raise RuntimeError(
                f"non-finite objective gradient at step {counters[0] + 1}")
        remaining -= rows

    rows_used = int(counters[3])
    state = OptimizerState(alpha, int(counters[0]), int(counters[1]),
                           int(counters[2]))
    manifest = {
        "seed": seed_seq.entropy,
        "spawn_key": list(seed_seq.spawn_key),
        "num_steps": num_steps,
        "schedule": {"kind": type(schedule).__name__, "v1": v1,
                     "v2": v2, "beta": beta},
        "compacts": {"base_radius": compacts.base_radius,
                     "growth": compacts.growth},
        "initial": alpha_init.tolist(),
        "trace_stride": trace_stride,
        "problem": problem_digest(problem),
    }
    return RunResult(state, trace_gamma[:rows_used].copy(),
                     trace_alpha[:rows_used].copy(),
                     trace_value[:rows_used].copy(), manifest)


def distance_slope(result: RunResult, target: np.ndarray,
                   step_lo: int, step_hi: int) -> float:
    """Regression slope of log ||alpha_g - target|| against log g.

    For a power-law schedule the theory scales the error by sqrt(rho_g),
    so the slope should sit near -beta/2 once the iteration is in its
    asymptotic regime.  A diagnostic, not an estimator.
    """
    mask = (result.trace_steps >= step_lo) & (result.trace_steps <= step_hi)
    if mask.sum() < 2:
        raise ValueError("fewer than two trajectory snapshots in the window")
    steps = result.trace_steps[mask].astype(float)
    gaps = np.linalg.norm(result.trace_alpha[mask]
                          - np.asarray(target, dtype=float), axis=1)
    if np.any(gaps == 0.0):
        raise ValueError("trajectory hit the target exactly")
    slope, _ = np.polyfit(np.log(steps), np.log(gaps), 1)
    return float(slope)
