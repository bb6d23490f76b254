"""Hermite polynomial chaos basis and the strategy coefficient layout.

Square-integrable functionals of the i.i.d. driving normals G^(0..N) expand
in products of normalized probabilists' Hermite polynomials

    Phi_n(G) = prod_m H_{n_m}(G^(m)) / sqrt(n_m!),

an orthonormal family indexed by multi-indices n.  A hedging strategy keeps,
for each trade date index j and each maturity index i <= N-1, the
coefficients of such products over the variables visible at date j, truncated
to total degree d:

    Lambda_d = { n : n_0 + ... + n_l <= d }.

The date-t trade (j = -1) sees no randomness, so its index set is the single
constant {0}.  Coefficients are stored flat, ordered by j ascending, then
maturity i ascending, then multi-index in graded lexicographic order; this
layout is part of the serialization format.

Strategies may be restricted to a memory of q past rates (the trade at T_j
then depends on R_{T_{j-q}} .. R_{T_j} only).  The basis variables for such a
date are obtained by whitening that window of rates with the model's exact
covariance, oldest first, which for q >= j reduces to the driving normals
themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rates import TenorStructure, VasicekParams, rate_loadings


def hermite(n: int, x):
    """Probabilists' Hermite polynomial H_n(x).

    Uses the three-term recurrence H_{k+1} = x H_k - k H_{k-1}; stable for
    the small degrees used here.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = x.copy()
    for k in range(1, n):
        h, h_prev = x * h - k * h_prev, h
    return h if h.ndim else float(h)


def hermite_table(x: np.ndarray, max_degree: int) -> np.ndarray:
    """All H_0..H_max_degree at once, shape (max_degree+1,) + x.shape."""
    x = np.asarray(x, dtype=float)
    table = np.empty((max_degree + 1,) + x.shape)
    table[0] = 1.0
    if max_degree >= 1:
        table[1] = x
    for k in range(1, max_degree):
        table[k + 1] = x * table[k] - k * table[k - 1]
    return table


def multi_indices(num_vars: int, degree: int) -> np.ndarray:
    """Multi-indices of total degree <= degree, graded lexicographic.

    Within each total degree, indices are ordered lexicographically with the
    first variable most significant, e.g. for two variables and degree 2:
    (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).

    Returns
    -------
    ndarray of int, shape (C(num_vars + degree, degree), num_vars)
    """
    if num_vars < 1:
        raise ValueError(f"num_vars must be >= 1, got {num_vars}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    rows = []
    for total in range(degree + 1):
        level = []

        def build(prefix, remaining, slots):
            if slots == 1:
                level.append(prefix + (remaining,))
                return
            for k in range(remaining, -1, -1):
                build(prefix + (k,), remaining - k, slots - 1)

        build((), total, num_vars)
        rows.extend(level)
    return np.array(rows, dtype=np.int64)


def basis_eval(index, draws):
    """Normalized Hermite product prod_m H_{n_m}(g_m) / sqrt(n_m!).

    Parameters
    ----------
    index : sequence of int
        Multi-index n.
    draws : sequence of float, same length
        Standard normal values g.
    """
    index = np.asarray(index, dtype=np.int64)
    draws = np.asarray(draws, dtype=float)
    if index.shape[-1] != draws.shape[-1]:
        raise ValueError(
            f"index length {index.shape[-1]} != draws length {draws.shape[-1]}"
        )
    out = 1.0
    for m, n in enumerate(index):
        out = out * hermite(int(n), draws[..., m]) / math.sqrt(math.factorial(int(n)))
    return out


def basis_matrix(indices: np.ndarray, draws: np.ndarray) -> np.ndarray:
    """Evaluate a family of normalized Hermite products on a batch of draws.

    Parameters
    ----------
    indices : ndarray of int, shape (num_indices, num_vars)
    draws : ndarray, shape (num_paths, num_vars)

    Returns
    -------
    ndarray, shape (num_paths, num_indices)
    """
    indices = np.asarray(indices, dtype=np.int64)
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    num_indices, num_vars = indices.shape
    if num_vars == 0:
        return np.ones((draws.shape[0], num_indices))
    if draws.shape[1] != num_vars:
        raise ValueError(
            f"draws have {draws.shape[1]} variables, indices need {num_vars}"
        )
    table = hermite_table(draws, int(indices.max()))  # (deg+1, paths, vars)
    out = np.ones((draws.shape[0], num_indices))
    for col, index in enumerate(indices):
        for m, n in enumerate(index):
            if n:
                out[:, col] *= table[n, :, m] / math.sqrt(math.factorial(int(n)))
    return out


@dataclass(frozen=True)
class TruncationScheme:
    """Degree/memory truncation of the strategy space.

    Attributes
    ----------
    degree : int
        Maximum total degree d of the Hermite products, >= 0.
    num_payments : int
        Number of swap payments N; trade dates are t and T_0..T_{N-2}.
    memory : int or None
        If set, the trade at T_j may depend only on the q+1 most recent
        rates R_{T_{j-q}} .. R_{T_j}; None means full history.
    """

    degree: int
    num_payments: int
    memory: int | None = None

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        if self.num_payments < 1:
            raise ValueError(f"num_payments must be >= 1, got {self.num_payments}")
        if self.memory is not None and self.memory < 0:
            raise ValueError(f"memory must be >= 0, got {self.memory}")

    def num_variables(self, j: int) -> int:
        """Number of basis variables visible to the trade at date index j."""
        if j == -1:
            return 0
        if self.memory is None:
            return j + 1
        return min(j + 1, self.memory + 1)

    def indices_at(self, j: int) -> np.ndarray:
        """Multi-index set for the trade date with index j (-1 for date t).

        Date t sees no randomness: its set is the single empty index, whose
        basis value is the constant 1.
        """
        if j == -1:
            return np.zeros((1, 0), dtype=np.int64)
        return multi_indices(self.num_variables(j), self.degree)


@dataclass(frozen=True)
class ParamLayout:
    """Flat layout of strategy coefficients alpha^n(j, i).

    Pairs (j, i) with -1 <= j < i <= N-1 are laid out with j ascending and i
    ascending, each holding one coefficient per multi-index of the date-j
    basis in graded lexicographic order.  The T_N-maturity trades carry no
    coefficients; they are pinned by self-financing.
    """

    scheme: TruncationScheme
    pairs: tuple = field(init=False)
    offsets: dict = field(init=False)
    size: int = field(init=False)

    def __post_init__(self):
        n = self.scheme.num_payments
        pairs = []
        offsets = {}
        pos = 0
        for j in range(-1, n - 1):
            count = len(self.scheme.indices_at(j))
            for i in range(j + 1, n):
                pairs.append((j, i))
                offsets[(j, i)] = (pos, pos + count)
                pos += count
        object.__setattr__(self, "pairs", tuple(pairs))
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "size", pos)

    def slice_of(self, j: int, i: int) -> slice:
        """Slice of the flat vector holding the (j, i) coefficients."""
        lo, hi = self.offsets[(j, i)]
        return slice(lo, hi)

    def unflatten(self, alpha: np.ndarray) -> dict:
        """Map {(j, i): coefficient array} view of a flat vector."""
        alpha = np.asarray(alpha)
        if alpha.shape[-1] != self.size:
            raise ValueError(f"expected {self.size} coefficients, got {alpha.shape}")
        return {pair: alpha[..., self.slice_of(*pair)] for pair in self.pairs}

    def flatten(self, blocks: dict) -> np.ndarray:
        """Inverse of unflatten; missing pairs are zero-filled."""
        alpha = np.zeros(self.size)
        for pair, values in blocks.items():
            block = np.asarray(values, dtype=float)
            lo, hi = self.offsets[pair]
            if block.shape != (hi - lo,):
                raise ValueError(
                    f"block {pair} has shape {block.shape}, expected {(hi - lo,)}"
                )
            alpha[lo:hi] = block
        return alpha

    def coefficient_names(self) -> list:
        """Stable textual labels, one per flat coefficient."""
        names = []
        for j, i in self.pairs:
            for index in self.scheme.indices_at(j):
                tag = ",".join(str(int(v)) for v in index)
                names.append(f"a[{j},{i}]({tag})")
        return names


def whitening_maps(params: VasicekParams, tenor: TenorStructure,
                   scheme: TruncationScheme) -> list:
    """Per-date maps from driving normals to the date's basis variables.

    For date index j the returned matrix M_j has shape (num_vars, j+1) and
    the basis variables are Z = M_j @ (G^(0), ..., G^(j)).  With full memory
    M_j is the identity.  With memory q < j, the window of rates
    (R_{T_{j-q}}, ..., R_{T_j}) is whitened oldest-first: Z follows from the
    Cholesky factor of the window covariance, so Z is standard normal with
    independent entries and spans the same Gaussian space as the window.
    """
    n = scheme.num_payments
    _, loadings = rate_loadings(params, tenor)
    maps = []
    for j in range(n - 1):
        nv = scheme.num_variables(j)
        if nv == j + 1:
            maps.append(np.eye(j + 1))
            continue
        window = loadings[j - nv + 1 : j + 1, : j + 1]  # rows oldest first
        cov = window @ window.T
        chol = np.linalg.cholesky(cov)
        # Z = chol^{-1} (R_window - mean) = (chol^{-1} window) G
        maps.append(np.linalg.solve(chol, window))
    return maps
