"""Independent reference values used to check the solvers.

Nothing here calls the shooting solver or the discrete Laplacians.
"""

from __future__ import annotations

import math


def bessel_j0(x: float, terms: int = 80) -> float:
    """``J_0(x)`` from its power series; accurate to round-off for ``|x| <= 10``."""
    q = -(x * x) / 4.0
    term, total = 1.0, 1.0
    for k in range(1, terms):
        term *= q / (k * k)
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def first_bessel_zero(lo: float = 2.0, hi: float = 3.0) -> float:
    """``j_{0,1}`` by bisection on the series (``J_0(2) > 0 > J_0(3)``)."""
    flo = bessel_j0(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = bessel_j0(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


#: Dirichlet eigenvalue of the flat unit disk: the *square* of the first zero.
DISK_LAMBDA1 = first_bessel_zero() ** 2


def hemisphere_lambda1(n: int) -> float:
    """``v = cos t`` solves the radial equation on the unit hemisphere with ``lambda = n``."""
    return float(n)


def interval_lambda1(length: float = 1.0) -> float:
    return (math.pi / length) ** 2
