"""Bessel functions of the first kind via Miller's downward recurrence.

Only integer orders n >= 0 and |x| <= 50 are needed (the ac-drive
renormalization arguments stay well inside this range), which keeps the
implementation at the textbook level: recurse J_{k-1} = (2k/x) J_k - J_{k+1}
downward from a safely large starting order and normalize with the identity
J_0(x) + 2 sum_{k>=1} J_{2k}(x) = 1.
"""

from __future__ import annotations

import math

__all__ = ["bessel_j"]

_X_MAX = 50.0


def _bessel_j_series(n: int, x: float) -> float:
    """Ascending power series; accurate for small |x|."""
    term = (0.5 * x) ** n / math.factorial(n)
    total = term
    q = -0.25 * x * x
    for k in range(1, 40):
        term *= q / (k * (k + n))
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-30):
            break
    return total


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer n >= 0, |x| <= 50, absolute accuracy ~1e-12."""
    if n < 0 or n != int(n):
        raise ValueError("order must be a nonnegative integer")
    n = int(n)
    if abs(x) > _X_MAX:
        raise ValueError(f"|x| = {abs(x)} exceeds supported range {_X_MAX}")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    sign = 1.0
    if x < 0.0:
        x = -x
        sign = -1.0 if n % 2 else 1.0
    if x < 0.1:
        return sign * _bessel_j_series(n, x)
    # starting order: comfortably above both n and x so the downward
    # recursion has decayed into the dominant solution by the time it
    # reaches the orders we report
    m = 2 * ((max(n, int(x)) + int(25 + math.sqrt(40.0 * max(n, x)))) // 2 + 1)
    jp = 0.0  # J_{k+1}
    jc = 1e-30  # J_k, arbitrary seed
    norm = 0.0
    jn = 0.0
    for k in range(m, 0, -1):
        jm = (2.0 * k / x) * jc - jp  # J_{k-1}
        jp = jc
        jc = jm
        if k - 1 == n:
            jn = jc
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * jc
        # rescale to keep the dominant solution from overflowing
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            jn *= 1e-250
            norm *= 1e-250
    # after the loop jc = J_0; normalization is J_0 + 2 sum_{even k>=2} J_k = 1
    norm += jc
    if n == 0:
        jn = jc
    return sign * jn / norm
