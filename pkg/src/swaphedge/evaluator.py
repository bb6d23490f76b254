"""Value estimation and the closed-form chaos geometry of lognormals.

The value of a strategy is v(alpha) = E[(W^alpha)^2], estimated by Monte
Carlo over independent path batches.  Batches have a fixed size and their
random streams are spawned per batch index from the master seed, with the
reduction done in batch order, so the estimate is identical no matter how
many workers execute the batches.

Bond reciprocals are lognormal in the driving normals, X = exp(mu + sum
lambda_m G^(m)), and their chaos expansion is closed-form:

    coeff(n) = exp(mu + |lambda|^2/2) * prod lambda_m^{n_m} / sqrt(n_m!),

with squared truncation tail

    ||X - X^d||^2 = exp(2 mu + s) * sum_{K>d} s^K / K!,   s = |lambda|^2,

bounded by (exp(mu + s) * s^{(d+1)/2} / sqrt((d+1)!))^2.  These give the
best degree-d strategy under perfect liquidity without any optimization:
statics map to constant coefficients and each rollover leg 1/B(T_j,T_{j+1})
projects by the formula above.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .chaos import multi_indices
from .engine import HedgingProblem, terminal_wealth
from .rates import bond_a, bond_b, rate_loadings

BATCH_ROWS = 1 << 17
Z99 = float(ndtri(0.995))
TAIL_RELATIVE_CUTOFF = 1e-30


@dataclass(frozen=True)
class EvalReport:
    """Monte Carlo estimate of v(alpha) with its sampling error."""

    mean: float
    std_error: float
    num_samples: int
    half_width99: float

    def __str__(self):
        return (f"{self.mean:.6e} +- {self.half_width99:.1e} "
                f"(99%, n={self.num_samples})")


def _batch_moments(problem, alpha, rows, child):
    rng = np.random.Generator(np.random.PCG64(child))
    draws = rng.standard_normal((rows, problem.num_payments + 1))
    wealth = terminal_wealth(problem, alpha, draws)
    squared = wealth * wealth
    return float(np.sum(squared)), float(np.dot(squared, squared))


def estimate_v(problem: HedgingProblem, alpha: np.ndarray,
               num_samples: int = 10 ** 6, seed=0,
               workers: int = 1) -> EvalReport:
    """Monte Carlo estimate of E[(W^alpha)^2].

    Reproducible given the seed, and independent of the worker count: the
    sample is partitioned into fixed batches whose streams derive from the
    batch index alone, and partial sums reduce in batch order.
    """
    if num_samples < 10 ** 3:
        raise ValueError(f"num_samples must be >= 1e3, got {num_samples}")
    seed_seq = (seed if isinstance(seed, np.random.SeedSequence)
                else np.random.SeedSequence(seed))
    num_batches = (num_samples + BATCH_ROWS - 1) // BATCH_ROWS
    children = seed_seq.spawn(num_batches)
    sizes = [min(BATCH_ROWS, num_samples - b * BATCH_ROWS)
             for b in range(num_batches)]

    def job(b):
        return _batch_moments(problem, alpha, sizes[b], children[b])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(num_batches)))
    else:
        results = [job(b) for b in range(num_batches)]

    sum_sq = 0.0
    sum_fourth = 0.0
    for s1, s2 in results:
        sum_sq += s1
        sum_fourth += s2
    mean = sum_sq / num_samples
    variance = max(sum_fourth / num_samples - mean * mean, 0.0)
    std_error = math.sqrt(variance / num_samples)
    return EvalReport(mean, std_error, num_samples, Z99 * std_error)


@dataclass(frozen=True)
class LogNormalSpec:
    """X = exp(mu + sum_m loadings[m] * G^(m)) for independent normals G."""

    mu: float
    loadings: tuple

    def __post_init__(self):
        object.__setattr__(self, "loadings",
                           tuple(float(v) for v in self.loadings))
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not all(math.isfinite(v) for v in self.loadings):
            raise ValueError("loadings must be finite")

    @property
    def total_variance(self) -> float:
        return float(sum(v * v for v in self.loadings))


def project_lognormal(spec: LogNormalSpec, degree: int) -> np.ndarray:
    """Chaos coefficients of X up to total degree, in graded-lex order.

    The coefficient at multi-index n is
    exp(mu + |lambda|^2/2) * prod_m lambda_m^{n_m} / sqrt(n_m!).
    """
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    lam = np.asarray(spec.loadings, dtype=float)
    indices = multi_indices(len(lam), degree)
    const = math.exp(spec.mu + 0.5 * spec.total_variance)
    out = np.full(len(indices), const)
    for k, index in enumerate(indices):
        for m, order in enumerate(index):
            if order:
                out[k] *= lam[m] ** order / math.sqrt(
                    math.factorial(int(order)))
    return out


def tail_norm_exact(spec: LogNormalSpec, degree: int) -> float:
    """Squared norm of X minus its degree-d projection, exact series.

    Summed forward from K = d+1 (no cancellation); terms below 1e-30 of
    the partial sum are dropped.
    """
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    s = spec.total_variance
    if s == 0.0:
        return 0.0
    term = s ** (degree + 1) / math.factorial(degree + 1)
    total = term
    k = degree + 1
    while term > TAIL_RELATIVE_CUTOFF * total:
        k += 1
        term *= s / k
        total += term
    return math.exp(2.0 * spec.mu + s) * total


def truncation_bound(spec: LogNormalSpec, degree: int) -> float:
    """Closed-form upper bound on ||X - X^d||_2 (not squared)."""
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    s = spec.total_variance
    return (math.exp(spec.mu + s) * s ** (0.5 * (degree + 1))
            / math.sqrt(math.factorial(degree + 1)))


def dynamic_leg_lognormal(problem: HedgingProblem, j: int) -> LogNormalSpec:
    """1/B(T_j, T_{j+1}) as a lognormal in the date-j basis variables.

    The reciprocal bond is exp(a + b R_{T_j}) with the affine coefficients
    of the accrual period, and R_{T_j} is Gaussian in the first j+1 draws.
    When the date's memory is restricted, the conditional expectation on
    the visible variables is returned: still lognormal, with the invisible
    variance folded into the constant (which leaves the product
    exp(mu + |lambda|^2/2) of the projection formula unchanged).
    """
    if not 0 <= j <= problem.num_payments - 2:
        raise ValueError(f"leg index must be in [0, {problem.num_payments - 2}],"
                         f" got {j}")
    params = problem.params
    tenor = problem.swap.tenor
    mean, loadings = rate_loadings(params, tenor)
    tau = tenor.accruals[j]
    slope = bond_b(params, tau)
    mu = bond_a(params, tau) + slope * mean[j]
    lam = slope * loadings[j, : j + 1]
    if problem.scheme.num_variables(j) == j + 1:
        return LogNormalSpec(mu, tuple(lam))
    visible = problem.variable_maps[j] @ lam
    mu_adj = mu + 0.5 * (float(lam @ lam) - float(visible @ visible))
    return LogNormalSpec(mu_adj, tuple(visible))


def optimal_truncated_strategy(problem: HedgingProblem) -> np.ndarray:
    """Projection of the perfect-liquidity optimum onto the truncation.

    Static replication legs are constants, so they enter the n = 0
    coefficients directly; each rollover leg is the lognormal projection
    of 1/B(T_j, T_{j+1}) to the scheme's degree.  As the degree grows,
    v of this strategy falls to zero factorially (perfect liquidity).
    """
    layout = problem.layout
    swap = problem.swap
    alpha = np.zeros(layout.size)
    alpha[layout.slice_of(-1, 0)] = swap.notional
    accruals = swap.tenor.accruals
    for i in range(1, problem.num_payments):
        alpha[layout.slice_of(-1, i)] = (-swap.notional * swap.fixed_rate
                                         * accruals[i - 1])
    for j in range(problem.num_payments - 1):
        spec = dynamic_leg_lognormal(problem, j)
        coeffs = project_lognormal(spec, problem.scheme.degree)
        alpha[layout.slice_of(j, j + 1)] = swap.notional * coeffs
    return alpha
