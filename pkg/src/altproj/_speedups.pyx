# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the spiral step solve.

Mirrors `altproj._pure` bit for bit (same libm calls, same operation order).
Keep the two in sync; the test suite asserts bitwise-identical output.
"""

from libc.math cimport exp, sin

import numpy as np

from altproj._pure import BracketInvalid

BACKEND_NAME = "compiled"

cdef double TWO_PI = 6.283185307179586
cdef double HALF_PI = 1.5707963267948966


cdef inline double _rho(double t) noexcept:
    return 1.0 + exp(-t)


cdef inline double _chord_sq(double alpha, double t) noexcept:
    # cancellation-free half-angle form; keep identical to _pure.chord_sq
    cdef double r = _rho(alpha)
    cdef double s = _rho(alpha + t)
    cdef double d = r - s
    cdef double h = sin(0.5 * t)
    return d * d + 4.0 * r * s * h * h


cdef double _advance(double alpha, double tol) except? -1.0:
    cdef double e = (_rho(alpha) - _rho(alpha + TWO_PI)) / 2.0
    cdef double gl = _chord_sq(alpha, 0.0) - e * e
    cdef double gh = _chord_sq(alpha, HALF_PI) - e * e
    cdef double lo, hi, mid
    if not (gl < 0.0 < gh):
        raise BracketInvalid(
            f"no sign change over the quarter-turn bracket at alpha={alpha!r}"
        )
    lo = 0.0
    hi = HALF_PI
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _chord_sq(alpha, mid) - e * e < 0.0:
            lo = mid
        else:
            hi = mid
    return alpha + 0.5 * (lo + hi)


def advance(double alpha, double tol):
    return _advance(alpha, tol)


def chain(double alpha0, count, double tol, double max_alpha):
    cdef Py_ssize_t n = count
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double a = alpha0
    cdef Py_ssize_t i
    out[0] = a
    for i in range(1, n):
        if a > max_alpha:
            return out_arr[:i].copy(), True
        a = _advance(a, tol)
        out[i] = a
    return out_arr, False
