"""Outward-rounded interval helpers shared by the numerical audits.

Each enclosure is computed in its own mpmath interval context, so concurrent
tasks never see each other's working precision.
"""

from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction

from mpmath import mp
from mpmath.ctx_iv import MPIntervalContext

# Interval enclosures are computed at no fewer digits than this
MIN_DIGITS = 40


@contextmanager
def interval_precision(dps: int) -> Iterator[MPIntervalContext]:
    """
    Yield a private interval context working at ``dps`` significant digits.

    The module-level ``mpmath.iv`` context is left alone.
    """
    ctx = MPIntervalContext()
    ctx.dps = dps
    yield ctx


def rational_interval(ctx: MPIntervalContext, q: Fraction):
    """Rigorous interval around an exact rational at the context's precision."""
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


def interval_endpoints(x):
    """(lower, upper) of an interval as plain mpf numbers."""
    lower, upper = x._mpi_
    return mp.make_mpf(lower), mp.make_mpf(upper)


def interval_strings(x, digits: int = 30) -> list[str]:
    """[lower, upper] endpoints of an interval as decimal strings."""
    return [mp.nstr(e, digits) for e in interval_endpoints(x)]


def interval_below(x, y) -> bool:
    """True iff every point of x is strictly below every point of y."""
    return interval_endpoints(x)[1] < interval_endpoints(y)[0]
