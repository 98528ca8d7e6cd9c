"""Shared high-precision plumbing on top of mpmath."""

from __future__ import annotations

import threading
from contextlib import contextmanager
from fractions import Fraction

import mpmath

DEFAULT_PRECISION = 30
# extra digits carried internally so results are good to the requested digits
GUARD_DIGITS = 15

# mpmath keeps its working precision in a process-global context, so
# precision changes are serialized
_LOCK = threading.RLock()


@contextmanager
def working_precision(digits: int = DEFAULT_PRECISION, guard: int = GUARD_DIGITS):
    with _LOCK:
        with mpmath.workdps(int(digits) + guard):
            yield


def mpf_of(x) -> mpmath.mpf:
    """Convert ints, Fractions, strings and floats to mpf at the current precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def tolerance(digits: int) -> mpmath.mpf:
    return mpmath.mpf(10) ** (-int(digits))


def to_decimal_string(x, digits: int = DEFAULT_PRECISION) -> str:
    """Full-precision decimal string for JSON output."""
    return mpmath.nstr(x, int(digits), strip_zeros=False)
