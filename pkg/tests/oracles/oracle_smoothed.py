"""Numerical convolution oracle for the smoothed bid-ask transfer.

The smoothed transfer is the kinked transfer convolved with a centered
Gaussian of variance eps.  This script computes the convolution integral
by adaptive quadrature, with the kinked transfer written out directly,
and prints values to freeze into tests/test_liquidity.py.

Run:  python3 tests/oracles/oracle_smoothed.py
"""

import math

from scipy.integrate import quad


def kinked(x, lam, c):
    return x + lam * max(abs(x) - c, 0.0)


def smoothed_by_quadrature(x, lam, c, eps):
    width = math.sqrt(eps)

    def integrand(y):
        density = math.exp(-0.5 * (y / width) ** 2) / (width *
                                                       math.sqrt(2 * math.pi))
        return kinked(x - y, lam, c) * density

    value, err = quad(integrand, -12 * width, 12 * width, limit=200,
                      epsabs=1e-14, epsrel=1e-12)
    return value, err


if __name__ == "__main__":
    cases = [
        (0.05, 0.5, 0.04, (-1.2, -0.5, -0.1, 0.0, 0.3, 0.5, 2.0)),
        (0.04, 0.0, 1e-4, (-0.3, -0.01, 0.0, 0.02, 0.7)),
    ]
    for lam, c, eps, points in cases:
        print(f"lam={lam} c={c} eps={eps}")
        for x in points:
            value, err = smoothed_by_quadrature(x, lam, c, eps)
            print(f"  x={x:+.2f}  quad={value!r}  quad_err={err:.1e}")
