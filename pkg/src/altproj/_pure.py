"""Pure-Python kernels for the spiral step solve.

`altproj._speedups` (Cython) implements the same entry points with the same
floating-point operation order.  `altproj.spiral` picks one at import time.
Any change here must be mirrored there bit for bit: the test suite asserts
exact agreement between the two backends.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


class BracketInvalid(RuntimeError):
    """The next-angle solve lost its sign change over the quarter-turn bracket."""


def rho(t: float) -> float:
    return 1.0 + math.exp(-t)


def eps(t: float) -> float:
    return (rho(t) - rho(t + TWO_PI)) / 2.0


def curve_xy(alpha: float) -> tuple[float, float]:
    r = rho(alpha)
    return r * math.cos(alpha), r * math.sin(alpha)


def chord_sq(alpha: float, t: float) -> float:
    # half-angle rearrangement of the law of cosines,
    # r^2 + s^2 - 2 r s cos(t) = (r - s)^2 + 4 r s sin^2(t/2):
    # the raw form cancels catastrophically once the chord drops below
    # ~sqrt(ulp(2)) ~ 2e-8, this one stays fully accurate
    r = rho(alpha)
    s = rho(alpha + t)
    d = r - s
    h = math.sin(0.5 * t)
    return d * d + 4.0 * r * s * h * h


def advance(alpha: float, tol: float) -> float:
    """Smallest angle beyond `alpha` whose curve point is eps(alpha) away.

    Bisection on the squared chord over (0, pi/2]; the chord is strictly
    increasing there, so the root is unique and bracketed.
    """
    e = eps(alpha)
    gl = chord_sq(alpha, 0.0) - e * e
    gh = chord_sq(alpha, HALF_PI) - e * e
    if not (gl < 0.0 < gh):
        raise BracketInvalid(
            f"no sign change over the quarter-turn bracket at alpha={alpha!r}"
        )
    lo = 0.0
    hi = HALF_PI
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if chord_sq(alpha, mid) - e * e < 0.0:
            lo = mid
        else:
            hi = mid
    return alpha + 0.5 * (lo + hi)


def chain(alpha0: float, count: int, tol: float, max_alpha: float):
    """Iterate `advance` from alpha0, returning (angles, stopped_early)."""
    out = np.empty(count, dtype=np.float64)
    a = float(alpha0)
    out[0] = a
    for i in range(1, count):
        if a > max_alpha:
            return out[:i].copy(), True
        a = advance(a, tol)
        out[i] = a
    return out, False
