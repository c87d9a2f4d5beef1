"""Exponential convention and precision selection.

Everything in this package uses the single convention

    e(t) = exp(2*pi*t),

so a theta term is e(-n^T B n / 2 + i n^T x) = exp(-pi n^T B n) * exp(2*pi*i n^T x).
Keeping the 2*pi in exactly one place prevents factor drift between the
kernel, the degenerate sums and the tests.

The environment variable THETASURF_PRECISION in {"double", "extended"}
selects the numeric kernel; "extended" runs the theta sums in mpmath at
>= 113 bits and is what the deep-degeneration checks use.
"""

import os

import mpmath
import numpy as np

TWO_PI = 2.0 * np.pi

EXTENDED_PREC_BITS = 130  # > 113-bit quad precision

VALID_MODES = ("double", "extended")


def e_exponent(t):
    """exp(2*pi*t) for numpy scalars/arrays (t may be complex)."""
    return np.exp(TWO_PI * t)


def precision_mode(override=None):
    """Resolve the active kernel precision ("double" or "extended")."""
    mode = override or os.environ.get("THETASURF_PRECISION", "double")
    if mode not in VALID_MODES:
        raise ValueError(f"THETASURF_PRECISION must be one of {VALID_MODES}, got {mode!r}")
    return mode


class extended_workprec:
    """Context manager pinning mpmath to the extended-kernel precision."""

    def __enter__(self):
        self._ctx = mpmath.mp
        self._old = self._ctx.prec
        self._ctx.prec = EXTENDED_PREC_BITS
        return self._ctx

    def __exit__(self, *exc):
        self._ctx.prec = self._old
        return False
