"""Compiled single-path kernels for the stochastic optimizer.

The Robbins-Monro loop evaluates one path per iteration: simulating the
rates, running the trade cascade, and forming the pathwise gradient cost a
few microseconds each here versus milliseconds through the vectorized
engine, which matters at 10^6 iterations.  The kernels mirror
engine.terminal_wealth operation for operation (same recurrences, same
bisection bracket policy) so the two implementations agree to floating
precision; a cross-check test enforces this.

All problem constants are packed into a KernelTables named tuple of plain
arrays; per-path scratch lives in a Scratch tuple allocated once per run.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numba import njit

from .engine import HedgingProblem
from .rates import bond_a, bond_b, ou_step_scale

KIND_PERFECT = 0
KIND_KINKED = 1
KIND_SMOOTHED = 2

INVERSE_TOL = 1e-12
INVERSE_MAX_ITER = 200

ABORT_NONFINITE = 1


class KernelTables(NamedTuple):
    num_payments: int
    degree: int
    size: int
    r0: float
    rinf: float
    decay: np.ndarray        # (N+1,) exp(-A eta_k) per tenor step
    scale: np.ndarray        # (N+1,) one-step noise scale
    bond_coef_a: np.ndarray  # (N+1, N+1), [j+1, i] -> a(T_i - date(j))
    bond_coef_b: np.ndarray
    accruals: np.ndarray     # (N,)
    fixed_rate: float
    notional: float
    kind: int
    friction: float
    free_volume: float
    smoothing: float
    pair_i: np.ndarray       # (n_pairs,) maturity index per explicit pair
    pair_lo: np.ndarray      # (n_pairs,) flat offset of the pair's block
    date_pair_lo: np.ndarray  # (N,) pair-range start per date jj = j+1
    date_pair_hi: np.ndarray
    mi_pad: np.ndarray       # (N-1, max_count, max_nv) multi-indices, padded
    mi_norm: np.ndarray      # (N-1, max_count) 1/sqrt(prod n_m!)
    mi_count: np.ndarray     # (N-1,)
    mi_nv: np.ndarray        # (N-1,)
    wmap: np.ndarray         # (N-1, max_nv, N-1) normals -> basis variables


class Scratch(NamedTuple):
    rates: np.ndarray        # (N+1,)
    pays: np.ndarray         # (N+1,)
    basis: np.ndarray        # (N-1, max_count)
    hbuf: np.ndarray         # (degree+1, max_nv)
    maturing: np.ndarray     # (N,)
    pinned_slope: np.ndarray  # (N+1,)
    trade_slope: np.ndarray  # (n_pairs,)
    gradient: np.ndarray     # (p,)


def build_tables(problem: HedgingProblem) -> KernelTables:
    """Pack a hedging problem into plain arrays for the kernels."""
    params = problem.params
    tenor = problem.swap.tenor
    scheme = problem.scheme
    layout = problem.layout
    n = tenor.num_payments
    dates = [tenor.date(j) for j in range(-1, n + 1)]
    etas = np.diff(np.asarray(dates))
    decay = np.exp(-params.mean_reversion * etas)
    scale = np.array([ou_step_scale(params, eta) for eta in etas])

    coef_a = np.zeros((n + 1, n + 1))
    coef_b = np.zeros((n + 1, n + 1))
    for j in range(-1, n):
        for i in range(j + 1, n + 1):
            tau = tenor.date(i) - tenor.date(j)
            coef_a[j + 1, i] = bond_a(params, tau)
            coef_b[j + 1, i] = bond_b(params, tau)

    cost = problem.cost
    if cost.is_smoothed:
        kind = KIND_SMOOTHED
    elif cost.is_perfect:
        kind = KIND_PERFECT
    else:
        kind = KIND_KINKED

    n_pairs = len(layout.pairs)
    pair_i = np.array([i for _, i in layout.pairs], dtype=np.int64)
    pair_lo = np.array([layout.offsets[p][0] for p in layout.pairs],
                       dtype=np.int64)
    # one slot per cascade date jj = j+1 in 0..N; the last date trades the
    # pinned leg only, so its pair range is empty
    date_pair_lo = np.full(n + 1, n_pairs, dtype=np.int64)
    date_pair_hi = np.full(n + 1, n_pairs, dtype=np.int64)
    for jj in range(n):
        j = jj - 1
        members = [k for k, (pj, _) in enumerate(layout.pairs) if pj == j]
        if members:
            date_pair_lo[jj] = members[0]
            date_pair_hi[jj] = members[-1] + 1

    index_sets = [scheme.indices_at(j) for j in range(n - 1)]
    max_count = max((len(s) for s in index_sets), default=1)
    max_nv = max((s.shape[1] for s in index_sets), default=1)
    max_count = max(max_count, 1)
    max_nv = max(max_nv, 1)
    mi_pad = np.zeros((n - 1, max_count, max_nv), dtype=np.int64)
    mi_norm = np.zeros((n - 1, max_count))
    mi_count = np.zeros(n - 1, dtype=np.int64)
    mi_nv = np.zeros(n - 1, dtype=np.int64)
    wmap = np.zeros((n - 1, max_nv, max(n - 1, 1)))
    for j in range(n - 1):
        indices = index_sets[j]
        count, nv = indices.shape
        mi_count[j] = count
        mi_nv[j] = nv
        mi_pad[j, :count, :nv] = indices
        for k, index in enumerate(indices):
            mi_norm[j, k] = 1.0 / math.sqrt(
                math.prod(math.factorial(int(v)) for v in index))
        vmap = problem.variable_maps[j]
        wmap[j, : vmap.shape[0], : vmap.shape[1]] = vmap

    return KernelTables(
        num_payments=n,
        degree=scheme.degree,
        size=layout.size,
        r0=params.initial_rate,
        rinf=params.long_run_level,
        decay=decay,
        scale=scale,
        bond_coef_a=coef_a,
        bond_coef_b=coef_b,
        accruals=np.asarray(tenor.accruals, dtype=float),
        fixed_rate=problem.swap.fixed_rate,
        notional=problem.swap.notional,
        kind=kind,
        friction=cost.friction,
        free_volume=cost.free_volume,
        smoothing=cost.smoothing,
        pair_i=pair_i,
        pair_lo=pair_lo,
        date_pair_lo=date_pair_lo,
        date_pair_hi=date_pair_hi,
        mi_pad=mi_pad,
        mi_norm=mi_norm,
        mi_count=mi_count,
        mi_nv=mi_nv,
        wmap=wmap,
    )


def make_scratch(tables: KernelTables) -> Scratch:
    n = tables.num_payments
    return Scratch(
        rates=np.zeros(n + 1),
        pays=np.zeros(n + 1),
        basis=np.zeros(tables.mi_norm.shape),
        hbuf=np.zeros((tables.degree + 1, tables.mi_pad.shape[2])),
        maturing=np.zeros(n),
        pinned_slope=np.zeros(n + 1),
        trade_slope=np.zeros(tables.pair_i.shape[0]),
        gradient=np.zeros(tables.size),
    )


@njit(cache=True, nogil=True)
def _ndtr(z):
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


@njit(cache=True, nogil=True)
def _hinge(x, eps):
    z = x / math.sqrt(eps)
    pdf = math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    return x * _ndtr(z) + math.sqrt(eps) * pdf


@njit(cache=True, nogil=True)
def _transfer(kind, lam, c, eps, x):
    if kind == KIND_PERFECT:
        return x
    if kind == KIND_KINKED:
        return x + lam * max(abs(x) - c, 0.0)
    return x + lam * (_hinge(x - c, eps) + _hinge(-x - c, eps))


@njit(cache=True, nogil=True)
def _transfer_prime(kind, lam, c, eps, x):
    if kind == KIND_PERFECT:
        return 1.0
    if kind == KIND_KINKED:
        if c == 0.0:
            if x > 0.0:
                return 1.0 + lam
            if x < 0.0:
                return 1.0 - lam
            return 1.0
        if x >= c:
            return 1.0 + lam
        if x < -c:
            return 1.0 - lam
        return 1.0
    rt = math.sqrt(eps)
    return 1.0 + lam * (_ndtr((x - c) / rt) - _ndtr((-x - c) / rt))


@njit(cache=True, nogil=True)
def _transfer_inverse(kind, lam, c, eps, u):
    if kind == KIND_PERFECT:
        return u
    if kind == KIND_KINKED:
        if u > c:
            return (u + lam * c) / (1.0 + lam)
        if u < -c:
            return (u + lam * c) / (1.0 - lam)
        return u
    # Bisection; the bracket policy matches the vectorized implementation
    # so both solve to the same midpoint sequence.
    half = abs(u) + c + math.sqrt(eps) + 1.0
    lo = u - half
    hi = u + half
    step = half
    for _ in range(INVERSE_MAX_ITER):
        if _transfer(kind, lam, c, eps, lo) <= u:
            break
        lo -= step
        step *= 2.0
    step = half
    for _ in range(INVERSE_MAX_ITER):
        if _transfer(kind, lam, c, eps, hi) >= u:
            break
        hi += step
        step *= 2.0
    for _ in range(INVERSE_MAX_ITER):
        if hi - lo <= INVERSE_TOL:
            break
        mid = 0.5 * (lo + hi)
        if _transfer(kind, lam, c, eps, mid) > u:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@njit(cache=True, nogil=True)
def path_wealth(g, alpha, t, s, want_gradient):
    """Terminal wealth of one path; fills s.gradient if asked.

    Parameters
    ----------
    g : (N+1,) standard normal draws
    alpha : (p,) flat strategy coefficients
    t : KernelTables
    s : Scratch
    """
    n = t.num_payments
    # rates along the tenor
    prev = t.r0
    for k in range(n + 1):
        prev = t.rinf + t.decay[k] * (prev - t.rinf) + t.scale[k] * g[k]
        s.rates[k] = prev
    # swap payments
    s.pays[0] = 0.0
    for i in range(1, n + 1):
        b_prev = math.exp(-t.bond_coef_a[i, i] - t.bond_coef_b[i, i]
                          * s.rates[i - 1])
        s.pays[i] = t.notional * (t.fixed_rate * t.accruals[i - 1]
                                  - 1.0 / b_prev + 1.0)
    # basis values per trade date
    for j in range(n - 1):
        nv = t.mi_nv[j]
        for m in range(nv):
            z = 0.0
            for k in range(j + 1):
                z += t.wmap[j, m, k] * g[k]
            s.hbuf[0, m] = 1.0
            if t.degree >= 1:
                s.hbuf[1, m] = z
            for dd in range(1, t.degree):
                s.hbuf[dd + 1, m] = z * s.hbuf[dd, m] - dd * s.hbuf[dd - 1, m]
        for idx in range(t.mi_count[j]):
            value = t.mi_norm[j, idx]
            for m in range(nv):
                order = t.mi_pad[j, idx, m]
                if order > 0:
                    value *= s.hbuf[order, m]
            s.basis[j, idx] = value
    # cascade
    for i in range(n):
        s.maturing[i] = 0.0
    wealth = 0.0
    for jj in range(n + 1):
        j = jj - 1
        if j >= 0:
            budget = s.maturing[j] + s.pays[j]
        else:
            budget = 0.0
        r_here = t.r0 if j < 0 else s.rates[j]
        for pp in range(t.date_pair_lo[jj], t.date_pair_hi[jj]):
            i = t.pair_i[pp]
            lo = t.pair_lo[pp]
            if j < 0:
                quantity = alpha[lo]
            else:
                quantity = 0.0
                for idx in range(t.mi_count[j]):
                    quantity += s.basis[j, idx] * alpha[lo + idx]
            mid = math.exp(-t.bond_coef_a[jj, i] - t.bond_coef_b[jj, i]
                           * r_here)
            budget -= mid * _transfer(t.kind, t.friction, t.free_volume,
                                      t.smoothing, quantity)
            s.maturing[i] += quantity
            if want_gradient:
                s.trade_slope[pp] = mid * _transfer_prime(
                    t.kind, t.friction, t.free_volume, t.smoothing, quantity)
        mid_final = math.exp(-t.bond_coef_a[jj, n] - t.bond_coef_b[jj, n]
                             * r_here)
        pinned = _transfer_inverse(t.kind, t.friction, t.free_volume,
                                   t.smoothing, budget / mid_final)
        if want_gradient:
            s.pinned_slope[jj] = mid_final * _transfer_prime(
                t.kind, t.friction, t.free_volume, t.smoothing, pinned)
        wealth += pinned
    wealth += s.pays[n]
    if want_gradient:
        for jj in range(n):
            j = jj - 1
            for pp in range(t.date_pair_lo[jj], t.date_pair_hi[jj]):
                i = t.pair_i[pp]
                lo = t.pair_lo[pp]
                factor = (1.0 / s.pinned_slope[i + 1]
                          - s.trade_slope[pp] / s.pinned_slope[jj])
                if j < 0:
                    s.gradient[lo] = factor
                else:
                    for idx in range(t.mi_count[j]):
                        s.gradient[lo + idx] = s.basis[j, idx] * factor
    return wealth


@njit(cache=True, nogil=True)
def wealth_batch(draws, alpha, t, s, out):
    """Vectorized front: terminal wealth for each row of draws."""
    for row in range(draws.shape[0]):
        out[row] = path_wealth(draws[row], alpha, t, s, False)


@njit(cache=True, nogil=True)
def rm_chunk(normals, alpha, alpha_init, counters, accum,
             schedule_kind, v1, v2, beta, growth,
             trace_stride, trace_gamma, trace_alpha, trace_value,
             t, s):
    """Advance the Robbins-Monro iteration by one chunk of paths.

    counters : int64 (4,) -- gamma, compact level, reinit count, trace rows
    accum    : float64 (3,) -- window sum of W^2, window count, radius

    Returns 0, or ABORT_NONFINITE at a non-finite gradient (the caller
    raises; it signals an upstream bug, not a numerical event of the
    method).
    """
    gamma = counters[0]
    level = counters[1]
    resets = counters[2]
    trace_rows = counters[3]
    radius = accum[2]
    p = alpha.shape[0]
    for row in range(normals.shape[0]):
        wealth = path_wealth(normals[row], alpha, t, s, True)
        finite = math.isfinite(wealth)
        if finite:
            for k in range(p):
                if not math.isfinite(s.gradient[k]):
                    finite = False
                    break
        if not finite:
            counters[0] = gamma
            counters[1] = level
            counters[2] = resets
            counters[3] = trace_rows
            accum[2] = radius
            return ABORT_NONFINITE
        gamma += 1
        if schedule_kind == 0:
            rho = v1 / (v2 + gamma) ** beta
        else:
            rho = v1
        scale = 2.0 * rho * wealth
        for k in range(p):
            alpha[k] -= scale * s.gradient[k]
        accum[0] += wealth * wealth
        accum[1] += 1.0
        largest = 0.0
        for k in range(p):
            a = abs(alpha[k])
            if a > largest:
                largest = a
        if not largest <= radius:
            for k in range(p):
                alpha[k] = alpha_init[k]
            level += 1
            resets += 1
            radius *= growth
        if trace_stride > 0 and gamma % trace_stride == 0 \
                and trace_rows < trace_gamma.shape[0]:
            trace_gamma[trace_rows] = gamma
            for k in range(p):
                trace_alpha[trace_rows, k] = alpha[k]
            trace_value[trace_rows] = accum[0] / accum[1]
            accum[0] = 0.0
            accum[1] = 0.0
            trace_rows += 1
    counters[0] = gamma
    counters[1] = level
    counters[2] = resets
    counters[3] = trace_rows
    accum[2] = radius
    return 0
