"""Bid-ask liquidity costs for bond trades.

Buying pi units of a bond quoted at mid price b costs

    Psi(pi) = b * h(pi),

where h encodes the shape of the friction:

    perfect:       h(pi) = pi
    proportional:  h(pi) = pi + lam * |pi|
    threshold:     h(pi) = pi + lam * max(|pi| - C, 0)

with friction lam in [0, 1) and free volume C >= 0.  Selling (pi < 0) nets
b * h(pi) < b * pi, so round trips lose money; lam < 1 keeps sale proceeds
positive.

The kinked transfer h admits an exact Gaussian smoothing: replacing each
hinge (x)+ by its convolution with a centered normal of variance eps,

    (x)+  ->  x * Phi(x / sqrt(eps)) + sqrt(eps) * phi(x / sqrt(eps)),

gives a C^inf transfer h_eps with derivative

    h_eps'(pi) = 1 + lam * (Phi((pi - C)/sqrt(eps)) - Phi((-pi - C)/sqrt(eps)))

strictly inside (1 - lam, 1 + lam).  As eps -> 0 the kinked transfer is
recovered uniformly.  Note h_eps(0) > 0: the smoothed model charges a
vanishing fee even for a zero trade.

All transfers are strictly increasing, hence invertible; the kinked ones
invert in closed form and the smoothed one by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

INVERSE_TOL = 1e-12
INVERSE_MAX_ITER = 200


def _phi(x):
    return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _smoothed_hinge(x, eps: float):
    """Gaussian smoothing of max(x, 0) with variance eps."""
    z = x / math.sqrt(eps)
    return x * ndtr(z) + math.sqrt(eps) * _phi(z)


@dataclass(frozen=True)
class CostModel:
    """Liquidity cost Psi(pi) = b * h(pi) for a trade of pi bonds at mid b.

    Attributes
    ----------
    friction : float
        Proportional bid-ask loss lam, in [0, 1).
    free_volume : float
        Threshold C below which trades are frictionless, >= 0.
    smoothing : float
        Gaussian smoothing variance eps; 0 keeps the kinks.
    """

    friction: float = 0.0
    free_volume: float = 0.0
    smoothing: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.friction < 1.0:
            raise ValueError(f"friction must be in [0, 1), got {self.friction}")
        if self.free_volume < 0.0:
            raise ValueError(f"free_volume must be >= 0, got {self.free_volume}")
        if self.smoothing < 0.0:
            raise ValueError(f"smoothing must be >= 0, got {self.smoothing}")

    # -- constructors --------------------------------------------------

    @classmethod
    def perfect(cls) -> "CostModel":
        """Frictionless trading: Psi(pi) = b * pi."""
        return cls()

    @classmethod
    def proportional(cls, friction: float) -> "CostModel":
        """Proportional bid-ask cost on the full trade size."""
        return cls(friction=friction)

    @classmethod
    def threshold(cls, friction: float, free_volume: float) -> "CostModel":
        """Proportional cost on the part of the trade beyond free_volume."""
        return cls(friction=friction, free_volume=free_volume)

    def smooth(self, smoothing: float) -> "CostModel":
        """The Gaussian-smoothed counterpart with variance smoothing."""
        if smoothing <= 0.0:
            raise ValueError(f"smoothing must be > 0, got {smoothing}")
        return CostModel(self.friction, self.free_volume, smoothing)

    @property
    def is_perfect(self) -> bool:
        return self.friction == 0.0

    @property
    def is_smoothed(self) -> bool:
        return self.smoothing > 0.0

    # -- transfer h and derivatives ------------------------------------

    def transfer(self, pi):
        """h(pi): cash per unit mid price paid to buy pi bonds."""
        pi = np.asarray(pi, dtype=float)
        lam, c = self.friction, self.free_volume
        if lam == 0.0:
            out = pi.copy()
        elif self.smoothing > 0.0:
            eps = self.smoothing
            out = pi + lam * (_smoothed_hinge(pi - c, eps)
                              + _smoothed_hinge(-pi - c, eps))
        else:
            out = pi + lam * np.maximum(np.abs(pi) - c, 0.0)
        return out if out.ndim else float(out)

    def transfer_derivative(self, pi):
        """h'(pi); at kinks the right derivative, except h'(0) = 1 when C = 0."""
        pi = np.asarray(pi, dtype=float)
        lam, c = self.friction, self.free_volume
        if lam == 0.0:
            out = np.ones_like(pi)
        elif self.smoothing > 0.0:
            rt = math.sqrt(self.smoothing)
            out = 1.0 + lam * (ndtr((pi - c) / rt) - ndtr((-pi - c) / rt))
        elif c == 0.0:
            out = 1.0 + lam * np.sign(pi)
        else:
            out = np.where(pi >= c, 1.0 + lam, np.where(pi < -c, 1.0 - lam, 1.0))
        return out if out.ndim else float(out)

    def transfer_inverse(self, u):
        """The trade size pi with h(pi) = u.

        Closed form for the kinked transfers; bisection to within
        INVERSE_TOL for the smoothed one.
        """
        u = np.asarray(u, dtype=float)
        lam, c = self.friction, self.free_volume
        if lam == 0.0:
            out = u.copy()
        elif self.smoothing > 0.0:
            out = self._bisect_inverse(np.atleast_1d(u)).reshape(u.shape)
        else:
            out = np.where(
                u > c, (u + lam * c) / (1.0 + lam),
                np.where(u < -c, (u + lam * c) / (1.0 - lam), u),
            )
        return out if out.ndim else float(out)

    def _bisect_inverse(self, u: np.ndarray) -> np.ndarray:
        # h(pi) - pi is bounded by lam * (|pi| + small), so pi = u is within
        # lam * |u| + O(sqrt(eps)) of the root; grow the bracket until it
        # straddles, then bisect.
        half = (np.abs(u) + self.free_volume + math.sqrt(self.smoothing)
                + 1.0)
        lo, hi = u - half, u + half
        step = half.copy()
        for _ in range(INVERSE_MAX_ITER):
            bad = self.transfer(lo) > u
            if not bad.any():
                break
            lo = np.where(bad, lo - step, lo)
            step = step * 2.0
        step = half.copy()
        for _ in range(INVERSE_MAX_ITER):
            bad = self.transfer(hi) < u
            if not bad.any():
                break
            hi = np.where(bad, hi + step, hi)
            step = step * 2.0
        # Converged entries freeze so every entry sees the same midpoint
        # sequence it would see alone; batch composition cannot change the
        # result.
        for _ in range(INVERSE_MAX_ITER):
            live = hi - lo > INVERSE_TOL
            if not live.any():
                break
            mid = 0.5 * (lo + hi)
            above = self.transfer(mid) > u
            lo = np.where(live & ~above, mid, lo)
            hi = np.where(live & above, mid, hi)
        return 0.5 * (lo + hi)

    # -- dimensional forms ---------------------------------------------

    def cost(self, mid, pi):
        """Cash paid to buy pi bonds quoted at mid: Psi(pi) = mid * h(pi)."""
        mid = np.asarray(mid, dtype=float)
        if np.any(mid <= 0.0):
            raise ValueError("mid price must be > 0")
        return mid * self.transfer(pi)

    def cost_inverse(self, mid, cash):
        """Trade size whose cost is cash: Psi(pi) = cash solved for pi."""
        mid = np.asarray(mid, dtype=float)
        if np.any(mid <= 0.0):
            raise ValueError("mid price must be > 0")
        return self.transfer_inverse(np.asarray(cash, dtype=float) / mid)

    def cost_derivative(self, mid, pi):
        """d Psi / d pi = mid * h'(pi)."""
        return np.asarray(mid, dtype=float) * self.transfer_derivative(pi)
