"""Approximately optimal hedging of interest rate swaps under bid-ask
liquidity costs.

Hedging strategies are parametrized by truncated Hermite chaos expansions
of the traded bond volumes and optimized by a stochastic gradient method
with expanding-compact reinitialization.  The package exposes

* a short-rate model and swap cash flows (`rates`),
* the chaos basis and coefficient layout (`chaos`),
* bid-ask transfer functions (`liquidity`),
* the self-financing wealth cascade and its gradient (`engine`),
* the stochastic optimizer (`optimizer`),
* value estimation and closed-form projections (`evaluator`),
* named reproducible experiments and their CLI (`experiments`, `cli`).
"""

__version__ = "0.1.0"

from .chaos import ParamLayout, TruncationScheme
from .engine import HedgingProblem, make_problem, terminal_wealth
from .evaluator import (EvalReport, LogNormalSpec, estimate_v,
                        optimal_truncated_strategy, project_lognormal,
                        tail_norm_exact, truncation_bound)
from .liquidity import CostModel
from .optimizer import (CompactFamily, ConstantStep, OptimizerState,
                        PowerLawStep, RunResult, rm_step, run)
from .rates import (DEFAULT_PARAMS, SwapSpec, TenorStructure, VasicekParams,
                    annual_tenor, at_the_money_rate, bond_price)

__all__ = [
    "__version__",
    "ParamLayout", "TruncationScheme",
    "HedgingProblem", "make_problem", "terminal_wealth",
    "EvalReport", "LogNormalSpec", "estimate_v",
    "optimal_truncated_strategy", "project_lognormal", "tail_norm_exact",
    "truncation_bound",
    "CostModel",
    "CompactFamily", "ConstantStep", "OptimizerState", "PowerLawStep",
    "RunResult", "rm_step", "run",
    "DEFAULT_PARAMS", "SwapSpec", "TenorStructure", "VasicekParams",
    "annual_tenor", "at_the_money_rate", "bond_price",
]
