#
# (c) 2026, pyCMono contributors
#
# Created: 06.10.2026
# Updated: 13.10.2026
#
# License: Apache 2.0
#
"""
Runtime support for compiled analytic maps.  The generated evaluators run inside a namespace built from this
module, and call the branch-checked functions below.
"""
import mpmath

from .config import settings
from .errors import BranchCutHit


TWO_PI = 2 * mpmath.pi

BRANCH_MARGIN = settings.branch_margin


def _num(p: int, q: int):
    return mpmath.mpf(p) / q


def _distance_to_negative_axis(x):
    # distance of x to (-oo, 0]
    return abs(x.imag) if x.real <= 0 else abs(x)


def _distance_to_positive_axis(x):
    # distance of x to [0, oo)
    return abs(x.imag) if x.real >= 0 else abs(x)


def _log1(x):
    """The principal logarithm, arg in `(-pi, pi)`, cut along `(-oo, 0]`."""
    x = mpmath.mpc(x)
    if _distance_to_negative_axis(x) <= BRANCH_MARGIN:
        raise BranchCutHit(f"log_[1] evaluated at {mpmath.nstr(x, 8)}, on its cut (-oo, 0]")
    return mpmath.log(x)


def _log2(x):
    """The logarithm with arg in `(0, 2 pi)`, cut along `[0, oo)`."""
    x = mpmath.mpc(x)
    if _distance_to_positive_axis(x) <= BRANCH_MARGIN:
        raise BranchCutHit(f"log_[2] evaluated at {mpmath.nstr(x, 8)}, on its cut [0, oo)")
    arg = mpmath.arg(x)
    if arg <= 0:
        arg += TWO_PI
    return mpmath.mpc(mpmath.log(abs(x)), arg)


def _sqrt(x):
    """`exp(1/2 log_[2](x))`, analytic off `[0, oo)`; for instance `sqrt(z**2 - c) ~ z` on the upper half-plane."""
    return mpmath.exp(_log2(x) / 2)


I = mpmath.mpc(0, 1)
