"""The inward logarithmic spiral and its forward step solver.

The curve is ``alpha -> (1 + exp(-alpha)) * (cos(alpha), sin(alpha))`` for
nonnegative angles in radians; it winds counter-clockwise and tightens onto
the unit circle.  ``eps`` gives the step size at an angle (half the radial
drop over one full turn), and ``next_alpha`` solves for the unique forward
angle whose curve point lies exactly one step size away.

The step solve dispatches to the compiled kernel (`altproj._speedups`) when
available; set the environment variable ``ALTPROJ_PURE=1`` before import to
force the pure-Python fallback.  Both backends produce bitwise-identical
results.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _pure
from ._pure import HALF_PI, TWO_PI, BracketInvalid

if os.environ.get("ALTPROJ_PURE"):
    _backend = _pure
else:
    try:
        from . import _speedups as _backend  # type: ignore[no-redef]
    except ImportError:
        _backend = _pure

#: Name of the step-solver backend in use: "compiled" or "python".
BACKEND: str = _backend.BACKEND_NAME

#: Default bisection tolerance on the angle.
ANGLE_TOL = 1e-13

#: Hard ceiling on generated angles.  The solver actually dies earlier, near
#: t ~ 36.7, where 1 + exp(-t) rounds to exactly 1 and the step size to 0
#: (`BracketInvalid`); both limits are unreachable by generation, whose angle
#: grows only logarithmically in the iterate count.
MAX_ALPHA = 700.0

#: Every forward step is at most 40 degrees.
STEP_UPPER_BOUND = math.radians(40.0)

__all__ = [
    "ANGLE_TOL",
    "BACKEND",
    "BracketInvalid",
    "HALF_PI",
    "MAX_ALPHA",
    "STEP_UPPER_BOUND",
    "StepBracket",
    "TWO_PI",
    "alpha_chain",
    "chord_sq",
    "curve",
    "eps",
    "next_alpha",
    "rho",
    "step_bracket",
]


def _angle(name: str, value) -> float:
    v = float(value)
    if not math.isfinite(v) or v < 0.0:
        raise ValueError(f"{name} must be a finite nonnegative angle in radians, got {value!r}")
    return v


def rho(t) -> float:
    """Distance from the origin to the curve at angle t: 1 + exp(-t)."""
    return _pure.rho(_angle("t", t))


def eps(t) -> float:
    """Step size at angle t: half the radial drop over one full turn."""
    return _pure.eps(_angle("t", t))


def curve(alpha) -> np.ndarray:
    """Curve point at `alpha` as a 2-vector."""
    x, y = _pure.curve_xy(_angle("alpha", alpha))
    return np.array((x, y))


def chord_sq(alpha, t) -> float:
    """Squared distance between the curve points at `alpha` and `alpha + t`."""
    return _pure.chord_sq(_angle("alpha", alpha), _angle("t", t))


@dataclass(frozen=True)
class StepBracket:
    """Angle interval searched by the forward step solve."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError("bracket must satisfy lo < hi")
        if self.hi - self.lo > HALF_PI * (1 + 1e-15):
            raise ValueError("bracket must not exceed a quarter turn")


def step_bracket(alpha) -> StepBracket:
    """The quarter-turn interval that provably contains the next angle."""
    a = _angle("alpha", alpha)
    return StepBracket(a, a + HALF_PI)


def next_alpha(alpha, tol: float = ANGLE_TOL) -> float:
    """The unique angle beta > alpha with ||curve(beta) - curve(alpha)|| = eps(alpha).

    Solved by bisection of the squared chord over the quarter-turn bracket,
    where the chord is strictly increasing.  Raises `BracketInvalid` if the
    bracket carries no sign change (step size underflow or a bug).
    """
    a = _angle("alpha", alpha)
    t = float(tol)
    if not (t > 0.0):
        raise ValueError(f"tol must be positive, got {tol!r}")
    return float(_backend.advance(a, t))


def alpha_chain(alpha0, count: int, tol: float = ANGLE_TOL,
                max_alpha: float = MAX_ALPHA) -> tuple[np.ndarray, bool]:
    """Iterate `next_alpha` from `alpha0` for `count` angles.

    Returns (angles, stopped_early); the array is shorter than `count` only
    when an angle exceeded `max_alpha`, in which case stopped_early is True.
    """
    a0 = _angle("alpha0", alpha0)
    n = int(count)
    if n < 1:
        raise ValueError(f"count must be >= 1, got {count!r}")
    t = float(tol)
    if not (t > 0.0):
        raise ValueError(f"tol must be positive, got {tol!r}")
    angles, stopped = _backend.chain(a0, n, t, float(max_alpha))
    return angles, bool(stopped)
