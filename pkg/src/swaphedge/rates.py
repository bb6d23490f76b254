"""One-factor Vasicek short-rate model, bond pricing and swap conventions.

The short rate follows the mean-reverting Ornstein-Uhlenbeck dynamics

    dR = A (r_inf - R) dtheta + sigma dB

under the pricing measure.  Everything downstream relies on two exact
consequences of this model:

* the transition over a horizon eta is Gaussian,

      R' = r_inf + exp(-A eta) (R - r_inf) + G sigma sqrt((1 - e^{-2 A eta}) / (2A)),

  with G a standard normal draw, so rate paths over a tenor grid are driven
  by one i.i.d. normal per date;

* zero-coupon bond prices are affine in the current rate,

      B(tau; r) = exp(-a(tau) - b(tau) r),
      b(tau) = (1 - e^{-A tau}) / A,
      a(tau) = (r_inf - sigma^2 / (2 A^2)) (tau - b(tau)) + sigma^2 b(tau)^2 / (4 A).

Swap conventions: a receiver swap exchanges, at each payment date T_i, the
fixed coupon r (T_i - T_{i-1}) against the floating coupon set at T_{i-1},
which nets to the cash amount

    P(i) = r (T_i - T_{i-1}) - 1 / B(T_{i-1}, T_i) + 1.

Functions accept scalars or numpy arrays for rates and draws; time arguments
are year fractions (no day-count conventions).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class VasicekParams:
    """Parameters of the Vasicek short-rate dynamics.

    Attributes
    ----------
    mean_reversion : float
        Speed A of reversion towards the long-run level, in 1/year. Must be
        positive.
    long_run_level : float
        Level r_inf the rate reverts to, in rate/year.
    volatility : float
        Diffusion coefficient sigma, in rate/sqrt(year). Must be
        non-negative; zero gives the deterministic curve.
    initial_rate : float
        Rate observed at the agreement date.
    """

    mean_reversion: float
    long_run_level: float
    volatility: float
    initial_rate: float

    def __post_init__(self):
        if self.mean_reversion <= 0:
            raise ValueError(
                f"mean_reversion must be positive, got {self.mean_reversion}"
            )
        if self.volatility < 0:
            raise ValueError(f"volatility must be >= 0, got {self.volatility}")


#: Parameter set used by all reproduction experiments.
DEFAULT_PARAMS = VasicekParams(
    mean_reversion=0.10,
    long_run_level=0.05,
    volatility=0.05,
    initial_rate=0.05,
)


@dataclass(frozen=True)
class TenorStructure:
    """Payment grid t <= T_0 < T_1 < ... < T_N.

    The swap is agreed at ``agreement_date`` (written t throughout); the
    floating rate for the period [T_{i-1}, T_i] is fixed at T_{i-1} and both
    legs settle at T_i.

    Attributes
    ----------
    agreement_date : float
        Contract date t, in years.
    dates : tuple of float
        Reset/payment dates T_0 .. T_N, strictly increasing, with
        T_0 >= agreement_date.  N = len(dates) - 1 is the number of
        payments.
    """

    agreement_date: float
    dates: tuple

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(float(x) for x in self.dates))
        if len(self.dates) < 2:
            raise ValueError("need at least two dates T_0, T_1")
        diffs = np.diff(self.dates)
        if np.any(diffs <= 0):
            raise ValueError(f"dates must be strictly increasing, got {self.dates}")
        if self.dates[0] < self.agreement_date:
            raise ValueError(
                f"T_0={self.dates[0]} precedes agreement date {self.agreement_date}"
            )

    @property
    def num_payments(self) -> int:
        """Number of payment periods N."""
        return len(self.dates) - 1

    @property
    def accruals(self) -> np.ndarray:
        """Accrual periods delta_i = T_i - T_{i-1}, i = 1..N."""
        return np.diff(np.asarray(self.dates))

    def date(self, j: int) -> float:
        """Date T_j, with j = -1 meaning the agreement date t."""
        if j == -1:
            return self.agreement_date
        return self.dates[j]


def annual_tenor(num_payments: int, first_date: float = 1.0,
                 agreement_date: float = 0.0) -> TenorStructure:
    """Annual grid T_i = first_date + i, the default experiment layout."""
    dates = tuple(first_date + i for i in range(num_payments + 1))
    return TenorStructure(agreement_date=agreement_date, dates=dates)


@dataclass(frozen=True)
class SwapSpec:
    """A receiver swap: fixed rate paid in, floating rate received.

    Attributes
    ----------
    tenor : TenorStructure
        Payment grid.
    fixed_rate : float
        Fixed coupon rate r.  Use :func:`at_the_money_rate` to make the
        inception value zero.
    notional : float
        Contract notional; all experiments use 1.
    """

    tenor: TenorStructure
    fixed_rate: float
    notional: float = 1.0

    def __post_init__(self):
        if self.notional <= 0:
            raise ValueError(f"notional must be positive, got {self.notional}")


def bond_b(params: VasicekParams, tau):
    """Affine exposure coefficient b(tau) = (1 - e^{-A tau}) / A."""
    a = params.mean_reversion
    return -np.expm1(-a * np.asarray(tau, dtype=float)) / a


def bond_a(params: VasicekParams, tau):
    """Affine drift coefficient a(tau) of the log bond price."""
    a = params.mean_reversion
    sig = params.volatility
    tau = np.asarray(tau, dtype=float)
    b = bond_b(params, tau)
    return (params.long_run_level - sig * sig / (2 * a * a)) * (tau - b) \
        + sig * sig * b * b / (4 * a)


def bond_price(params: VasicekParams, r, tau):
    """Zero-coupon bond price B = exp(-a(tau) - b(tau) r).

    Parameters
    ----------
    params : VasicekParams
    r : float or ndarray
        Short rate at the pricing date.
    tau : float or ndarray
        Time to maturity in years, >= 0.

    Returns
    -------
    float or ndarray
        Bond price; equals 1 at tau = 0.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("maturity must be >= 0")
    out = np.exp(-bond_a(params, tau) - bond_b(params, tau) * np.asarray(r))
    return out if out.ndim else float(out)


def ou_step_scale(params: VasicekParams, eta):
    """Conditional standard deviation of the rate over a horizon eta.

    Equals sigma sqrt((1 - e^{-2 A eta}) / (2 A)), the exact OU transition
    scale (not the Euler approximation sigma sqrt(eta)).
    """
    a = params.mean_reversion
    eta = np.asarray(eta, dtype=float)
    return params.volatility * np.sqrt(-np.expm1(-2 * a * eta) / (2 * a))


def advance_rate(params: VasicekParams, r_prev, eta: float, g):
    """Exact one-step transition of the short rate.

    Parameters
    ----------
    r_prev : float or ndarray
        Rate at the start of the step.
    eta : float
        Step length in years, > 0.
    g : float or ndarray
        Standard normal draw(s).

    Returns
    -------
    float or ndarray
        r_inf + e^{-A eta} (r_prev - r_inf) + g * conditional std.
    """
    if eta <= 0:
        raise ValueError(f"step length must be positive, got {eta}")
    decay = np.exp(-params.mean_reversion * eta)
    mean = params.long_run_level + decay * (np.asarray(r_prev) - params.long_run_level)
    return mean + np.asarray(g) * ou_step_scale(params, eta)


def rate_paths(params: VasicekParams, tenor: TenorStructure, draws: np.ndarray
               ) -> np.ndarray:
    """Rates at T_0..T_N from i.i.d. standard normal draws.

    Parameters
    ----------
    draws : ndarray, shape (n_paths, N+1)
        One standard normal per tenor date per path.

    Returns
    -------
    ndarray, shape (n_paths, N+1)
        R_{T_0} .. R_{T_N} along each path, stepped with the exact
        transition law from the initial rate at the agreement date.
    """
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    n_dates = tenor.num_payments + 1
    if draws.shape[1] != n_dates:
        raise ValueError(f"expected {n_dates} draws per path, got {draws.shape[1]}")
    rates = np.empty_like(draws)
    prev = np.full(draws.shape[0], params.initial_rate)
    prev_date = tenor.agreement_date
    for k in range(n_dates):
        prev = advance_rate(params, prev, tenor.dates[k] - prev_date, draws[:, k])
        rates[:, k] = prev
        prev_date = tenor.dates[k]
    return rates


def rate_loadings(params: VasicekParams, tenor: TenorStructure):
    """Mean vector and normal loadings of the rates at the tenor dates.

    Writes each R_{T_k} as mean[k] + sum_m L[k, m] G^(m) with G i.i.d.
    standard normal; L is lower triangular.  This is the exact Gaussian
    structure implied by iterating the one-step transition, used for
    log-normal chaos projections and for whitening recent-rate windows.

    Returns
    -------
    mean : ndarray, shape (N+1,)
    loadings : ndarray, shape (N+1, N+1)
    """
    a = params.mean_reversion
    dates = np.asarray(tenor.dates)
    n_dates = dates.size
    etas = np.diff(np.concatenate([[tenor.agreement_date], dates]))
    scales = ou_step_scale(params, etas)
    mean = params.long_run_level + np.exp(-a * (dates - tenor.agreement_date)) * (
        params.initial_rate - params.long_run_level
    )
    loadings = np.zeros((n_dates, n_dates))
    for k in range(n_dates):
        # shock at date m decays over T_k - T_m by the OU factor
        loadings[k, : k + 1] = np.exp(-a * (dates[k] - dates[: k + 1])) * scales[: k + 1]
    return mean, loadings


def forward_rate(b_near, b_far, span_start: float, span_end: float):
    """Simple forward rate locked by two discount factors.

    Parameters
    ----------
    b_near : float or ndarray
        Bond price maturing at the accrual start.
    b_far : float or ndarray
        Bond price maturing at the accrual end; must be positive.
    span_start, span_end : float
        Accrual period [T_B, T_E], with span_end > span_start.

    Returns
    -------
    float or ndarray
        (b_near / b_far - 1) / (span_end - span_start).
    """
    if span_end <= span_start:
        raise ValueError("accrual end must exceed accrual start")
    b_far = np.asarray(b_far, dtype=float)
    if np.any(b_far <= 0):
        raise ValueError("far bond price must be positive")
    return (np.asarray(b_near) / b_far - 1.0) / (span_end - span_start)


def swap_payoff(fixed_rate: float, accrual: float, b_prev):
    """Net cash P(i) = r delta_i - 1/B(T_{i-1}, T_i) + 1 exchanged at T_i.

    ``b_prev`` is the one-period bond price observed at the reset date
    T_{i-1}; the floating leg pays the simple rate it implies.
    """
    b_prev = np.asarray(b_prev, dtype=float)
    if np.any(b_prev <= 0):
        raise ValueError("reset-date bond price must be positive")
    out = fixed_rate * accrual - 1.0 / b_prev + 1.0
    return out if out.ndim else float(out)


def at_the_money_rate(params: VasicekParams, tenor: TenorStructure) -> float:
    """Fixed rate giving the swap zero value at the agreement date.

    Standard zero-value condition priced off the model curve:

        r = (B(t, T_0) - B(t, T_N)) / sum_i delta_i B(t, T_i).
    """
    r0 = params.initial_rate
    taus = np.asarray(tenor.dates) - tenor.agreement_date
    prices = bond_price(params, r0, taus)
    annuity = float(np.sum(tenor.accruals * prices[1:]))
    return float((prices[0] - prices[-1]) / annuity)


def atm_swap(params: VasicekParams, num_payments: int) -> SwapSpec:
    """At-the-money swap on the default annual grid."""
    tenor = annual_tenor(num_payments)
    return SwapSpec(tenor=tenor, fixed_rate=at_the_money_rate(params, tenor))
