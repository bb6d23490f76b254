"""Self-financing hedge cascade and terminal wealth.

A payer swap is hedged with zero-coupon bonds bought at dates t (index
j = -1) and T_0 .. T_{N-1}.  At date index j the trader picks quantities
pi(j, i) of bonds maturing at T_i for j < i <= N-1; the T_N-maturity
quantity is not free but pinned by self-financing: every trade is funded
by cash arriving at that date, namely maturing earlier bonds plus the swap
payment,

    y_j = sum_{k < j} pi(k, j) + P(j),
    pi(j, N) = PsiInv_{j,N}( y_j - sum_{i=j+1}^{N-1} Psi_{j,i}(pi(j, i)) ),

where Psi_{j,i} is the liquidity cost of buying at date j a bond maturing
at T_i.  Terminal wealth is what is left at T_N:

    W = sum_{j=-1}^{N-1} pi(j, N) + P(N).

The free quantities come from a truncated Hermite chaos: pi(j, i) is a
linear combination of basis polynomials in the date-j variables with
coefficients alpha^n(j, i), stored flat (see chaos.ParamLayout).  W is then
a function of the coefficient vector and of the driving normals, and its
gradient is available in closed form: a unit increase of pi(j, i) delivers
one bond at T_i (worth 1 / Psi'_{i,N} extra units of the pinned T_i trade)
and costs Psi'_{j,i} at date j (worth Psi'_{j,i} / Psi'_{j,N} units of the
pinned date-j trade), so

    dW / dalpha^n(j, i)
        = Phi_n(Z_j) * (1 / Psi'_{i,N}(pi(i,N))
                        - Psi'_{j,i}(pi(j,i)) / Psi'_{j,N}(pi(j,N))).

Under perfect liquidity the factor in parentheses is coefficient-free and W
is affine in alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .chaos import ParamLayout, TruncationScheme, basis_matrix, whitening_maps
from .liquidity import CostModel
from .rates import (
    DEFAULT_PARAMS,
    SwapSpec,
    VasicekParams,
    annual_tenor,
    at_the_money_rate,
    bond_price,
    rate_paths,
    swap_payoff,
)


@dataclass(frozen=True)
class HedgingProblem:
    """A swap, a liquidity cost model, and a strategy truncation."""

    params: VasicekParams
    swap: SwapSpec
    cost: CostModel
    scheme: TruncationScheme

    def __post_init__(self):
        if self.scheme.num_payments != self.swap.tenor.num_payments:
            raise ValueError(
                f"truncation is for {self.scheme.num_payments} payments, "
                f"swap has {self.swap.tenor.num_payments}"
            )

    @cached_property
    def layout(self) -> ParamLayout:
        return ParamLayout(self.scheme)

    @cached_property
    def variable_maps(self) -> list:
        """Normals-to-basis-variables matrix per trade date 0 .. N-2."""
        return whitening_maps(self.params, self.swap.tenor, self.scheme)

    @property
    def num_payments(self) -> int:
        return self.swap.tenor.num_payments

    def with_cost(self, cost: CostModel) -> "HedgingProblem":
        return HedgingProblem(self.params, self.swap, cost, self.scheme)


def make_problem(num_payments: int, degree: int,
                 cost: CostModel | None = None,
                 memory: int | None = None,
                 params: VasicekParams = DEFAULT_PARAMS,
                 fixed_rate: float | None = None,
                 first_date: float = 1.0,
                 agreement_date: float = 0.0) -> HedgingProblem:
    """An annual-tenor hedging problem, at the money unless a rate is given."""
    tenor = annual_tenor(num_payments, first_date, agreement_date)
    if fixed_rate is None:
        fixed_rate = at_the_money_rate(params, tenor)
    swap = SwapSpec(tenor, fixed_rate)
    scheme = TruncationScheme(degree, num_payments, memory)
    if cost is None:
        cost = CostModel.perfect()
    return HedgingProblem(params, swap, cost, scheme)


def sample_rates(problem: HedgingProblem, draws: np.ndarray) -> np.ndarray:
    """Short rate at T_0 .. T_N along each path; draws shape (n, N+1)."""
    return rate_paths(problem.params, problem.swap.tenor, draws)


def bond_between(problem: HedgingProblem, rates: np.ndarray,
                 j: int, i: int) -> np.ndarray:
    """Mid price at date index j (-1 for the agreement date) of the T_i bond."""
    tenor = problem.swap.tenor
    tau = tenor.date(i) - tenor.date(j)
    r = problem.params.initial_rate if j == -1 else rates[:, j]
    return bond_price(problem.params, r, tau)


def swap_payments(problem: HedgingProblem, rates: np.ndarray) -> np.ndarray:
    """P(0) .. P(N) per path, shape (n, N+1); P(0) = 0."""
    n_paths, cols = rates.shape
    tenor = problem.swap.tenor
    accruals = tenor.accruals
    out = np.zeros((n_paths, cols))
    for i in range(1, cols):
        b_prev = bond_price(problem.params, rates[:, i - 1], accruals[i - 1])
        out[:, i] = swap_payoff(problem.swap.fixed_rate, accruals[i - 1],
                                b_prev)
    return out * problem.swap.notional


def basis_per_date(problem: HedgingProblem, draws: np.ndarray) -> dict:
    """Basis value matrix for each trade date index j = -1 .. N-2."""
    scheme = problem.scheme
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    out = {-1: np.ones((draws.shape[0], 1))}
    for j in range(scheme.num_payments - 1):
        visible = draws[:, : j + 1]
        if scheme.num_variables(j) != j + 1:
            visible = visible @ problem.variable_maps[j].T
        out[j] = basis_matrix(scheme.indices_at(j), visible)
    return out


def chaos_trades(problem: HedgingProblem, alpha: np.ndarray,
                 basis: dict) -> dict:
    """Explicit quantities pi(j, i) = sum_n alpha^n(j, i) Phi_n(Z_j)."""
    alpha = np.asarray(alpha, dtype=float)
    layout = problem.layout
    if alpha.shape != (layout.size,):
        raise ValueError(f"alpha must have shape ({layout.size},), "
                         f"got {alpha.shape}")
    return {(j, i): basis[j] @ alpha[layout.slice_of(j, i)]
            for j, i in layout.pairs}


def replication_trades(problem: HedgingProblem, rates: np.ndarray) -> dict:
    """The explicit quantities of the exact static-plus-rollover hedge.

    Under perfect liquidity this strategy replicates the swap: one T_0
    bond and -K delta_i T_i bonds bought at the agreement date, plus at
    each T_j a rollover of 1 / B(T_j, T_{j+1}) bonds into the next date.
    The pinned cascade then yields W = 0 on every path.  The rollover
    quantities depend on the realized rate, so this strategy lies outside
    every finite chaos truncation.
    """
    n_paths = rates.shape[0]
    swap = problem.swap
    accruals = swap.tenor.accruals
    n = problem.num_payments
    trades = {}
    trades[(-1, 0)] = np.full(n_paths, swap.notional)
    for i in range(1, n):
        trades[(-1, i)] = np.full(
            n_paths, -swap.notional * swap.fixed_rate * accruals[i - 1])
    for j in range(n - 1):
        trades[(j, j + 1)] = (swap.notional
                              / bond_between(problem, rates, j, j + 1))
        for i in range(j + 2, n):
            trades[(j, i)] = np.zeros(n_paths)
    return trades


@dataclass(frozen=True)
class CascadeResult:
    """Per-path record of one cascade sweep.

    Attributes
    ----------
    wealth : ndarray (n,)
    pinned : dict
        j -> pi(j, N) for j = -1 .. N-1.
    inflows : dict
        j -> cash arriving at date j (maturing bonds plus swap payment).
    pinned_slope : dict
        j -> Psi'_{j,N} at the solved pinned quantity.
    trade_slope : dict
        (j, i) -> Psi'_{j,i} at the explicit quantity.
    """

    wealth: np.ndarray
    pinned: dict
    inflows: dict
    pinned_slope: dict
    trade_slope: dict


def cascade(problem: HedgingProblem, rates: np.ndarray, trades: dict,
            want_slopes: bool = False) -> CascadeResult:
    """Run the self-financing cascade for given explicit quantities."""
    n_paths = rates.shape[0]
    n = problem.num_payments
    cost = problem.cost
    payments = swap_payments(problem, rates)
    maturing = {j: np.zeros(n_paths) for j in range(n)}
    wealth = np.zeros(n_paths)
    pinned, inflows, pinned_slope, trade_slope = {}, {}, {}, {}
    for j in range(-1, n):
        inflow = payments[:, j] if j >= 0 else np.zeros(n_paths)
        if j >= 0:
            inflow = inflow + maturing[j]
        inflows[j] = inflow
        budget = inflow.copy()
        for i in range(j + 1, n):
            quantity = trades[(j, i)]
            mid = bond_between(problem, rates, j, i)
            budget -= cost.cost(mid, quantity)
            maturing[i] = maturing[i] + quantity
            if want_slopes:
                trade_slope[(j, i)] = cost.cost_derivative(mid, quantity)
        mid_final = bond_between(problem, rates, j, n)
        final = cost.cost_inverse(mid_final, budget)
        pinned[j] = final
        if want_slopes:
            pinned_slope[j] = cost.cost_derivative(mid_final, final)
        wealth += final
    wealth = wealth + payments[:, n]
    return CascadeResult(wealth, pinned, inflows, pinned_slope, trade_slope)


def terminal_wealth(problem: HedgingProblem, alpha: np.ndarray,
                    draws: np.ndarray, want_gradient: bool = False):
    """Terminal wealth per path, optionally with dW/dalpha.

    Parameters
    ----------
    alpha : ndarray (p,)
        Flat strategy coefficients.
    draws : ndarray (n, N+1)
        Standard normal driving variables.

    Returns
    -------
    wealth : ndarray (n,)
    gradient : ndarray (n, p), only if want_gradient
    """
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    rates = sample_rates(problem, draws)
    basis = basis_per_date(problem, draws)
    trades = chaos_trades(problem, alpha, basis)
    result = cascade(problem, rates, trades, want_slopes=want_gradient)
    if not want_gradient:
        return result.wealth
    layout = problem.layout
    gradient = np.empty((draws.shape[0], layout.size))
    for j, i in layout.pairs:
        factor = (1.0 / result.pinned_slope[i]
                  - result.trade_slope[(j, i)] / result.pinned_slope[j])
        gradient[:, layout.slice_of(j, i)] = basis[j] * factor[:, None]
    return result.wealth, gradient


def objective_gradient(problem: HedgingProblem, alpha: np.ndarray,
                       draws: np.ndarray) -> np.ndarray:
    """Pathwise gradient of W^2: rows 2 W dW/dalpha, shape (n, p)."""
    wealth, gradient = terminal_wealth(problem, alpha, draws,
                                       want_gradient=True)
    return 2.0 * wealth[:, None] * gradient


def null_strategy(problem: HedgingProblem) -> np.ndarray:
    """The zero coefficient vector: hold nothing but the pinned legs."""
    return np.zeros(problem.layout.size)


@dataclass(frozen=True)
class WealthBreakdown:
    """Full cash accounting of a strategy on a batch of paths."""

    wealth: np.ndarray
    payments: np.ndarray
    trades: dict
    pinned: dict
    inflows: dict
    residuals: np.ndarray  # (n, N+1): date-by-date self-financing error


def cash_ledger(problem: HedgingProblem, alpha: np.ndarray,
                draws: np.ndarray) -> WealthBreakdown:
    """Audit the cascade: every date's spend must equal its inflow.

    The residual at date j is inflow minus total cash spent on all trades
    placed there, pinned leg included; it is zero up to the cost-inversion
    tolerance.
    """
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    rates = sample_rates(problem, draws)
    basis = basis_per_date(problem, draws)
    trades = chaos_trades(problem, alpha, basis)
    result = cascade(problem, rates, trades)
    n = problem.num_payments
    cost = problem.cost
    residuals = np.empty((draws.shape[0], n + 1))
    for j in range(-1, n):
        spent = cost.cost(bond_between(problem, rates, j, n),
                          result.pinned[j])
        for i in range(j + 1, n):
            spent = spent + cost.cost(bond_between(problem, rates, j, i),
                                      trades[(j, i)])
        residuals[:, j + 1] = result.inflows[j] - spent
    return WealthBreakdown(result.wealth, swap_payments(problem, rates),
                           trades, result.pinned, result.inflows, residuals)
