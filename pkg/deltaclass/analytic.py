"""Audits of the analytic estimates on closed-form test functions.

The G-polynomial checks are exact. The error chain and decay audits run
diffcalc's table on mpmath samples at a precision raised per cell to absorb
cancellation, and compare against eigenfunction closed forms.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from fractions import Fraction

import numpy as np
from mpmath import mp

from deltaclass.concordance import growth_threshold, harmonic
from deltaclass.config import DEFAULT_PRECISION
from deltaclass.diffcalc import leading_differences, mixed_diff_row
from deltaclass.exact import RationalLike, as_rational, binomial, rational_str
from deltaclass.exceptions import DomainError
from deltaclass.intervals import (
    MIN_DIGITS,
    interval_below,
    interval_endpoints,
    interval_precision,
    interval_strings,
    rational_interval,
)
from deltaclass.logger import get_logger
from deltaclass.models import (
    DecayBody,
    DecayCell,
    ErrorChainBody,
    ErrorChainRow,
    GPolyBody,
    GPolyCell,
    PolyDecayBody,
)
from deltaclass.parallel import GridExecutor, serial_executor

# Relative agreement required between closed forms and difference tables
TABLE_AGREEMENT = mp.mpf("1e-20")


class BivariatePoly:
    """Sparse polynomial in x, y over Q; key (mu, nu) multiplies x^mu y^nu."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], RationalLike] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {
            key: as_rational(c) for key, c in (terms or {}).items() if c != 0
        }

    @classmethod
    def one(cls) -> BivariatePoly:
        return cls({(0, 0): 1})

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __iter__(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: BivariatePoly) -> BivariatePoly:
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BivariatePoly(out)

    def __mul__(self, other: BivariatePoly | int | Fraction) -> BivariatePoly:
        if not isinstance(other, BivariatePoly):
            return BivariatePoly({key: c * other for key, c in self.terms.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (m1, n1), c1 in self.terms.items():
            for (m2, n2), c2 in other.terms.items():
                key = (m1 + m2, n1 + n2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        return f"BivariatePoly({dict(self)})"


def _linear(const: int, x: int, y: int) -> BivariatePoly:
    return BivariatePoly({(0, 0): const, (1, 0): x, (0, 1): y})


def build_G(a: int, k: int) -> BivariatePoly:
    """prod_{q<k} (1 + x + q y) * prod_{k<=q<a} (1 - q y), expanded."""
    if not 0 <= k <= a:
        raise DomainError("build_G needs 0 <= k <= a", a=a, k=k)
    result = BivariatePoly.one()
    for q in range(k):
        result = result * _linear(1, 1, q)
    for q in range(k, a):
        result = result * _linear(1, 0, -q)
    return result


def delta_a_G(a: int) -> BivariatePoly:
    """sum_k (-1)^(a-k) C(a, k) G(k, x, y)."""
    if a < 0:
        raise DomainError("delta_a_G needs a >= 0", a=a)
    total = BivariatePoly()
    for k in range(a + 1):
        total = total + build_G(a, k) * ((-1) ** (a - k) * binomial(a, k))
    return total


def verify_A_bounds(a: int) -> GPolyCell:
    """
    A_{mu,nu} = 0 when mu + 2 nu < a, and |A_{mu,nu}| <= 6^a a^nu otherwise.
    """
    if a < 1:
        raise DomainError("coefficient bounds need a >= 1", a=a)
    poly = delta_a_G(a)
    vanishing, bound, ratios = [], [], []
    scale = 6**a
    for (mu, nu), c in poly:
        if mu + 2 * nu < a:
            vanishing.append([mu, nu])
        limit = scale * a**nu
        if abs(c) > limit:
            bound.append([mu, nu])
        ratios.append(abs(c) / limit)
    return GPolyCell(
        a=a,
        nonzero_terms=len(poly),
        vanishing_violations=vanishing,
        bound_violations=bound,
        max_ratio=rational_str(max(ratios, default=Fraction(0))),
        passed=not vanishing and not bound,
    )


def verify_gpoly_grid(
    a_max: int,
    executor: GridExecutor | None = None,
    logger: logging.Logger | None = None,
) -> GPolyBody:
    if a_max < 1:
        raise DomainError("coefficient bounds need a_max >= 1", a_max=a_max)
    logger = logger or get_logger()
    executor = executor or serial_executor(logger)
    cells = executor.map(verify_A_bounds, list(range(1, a_max + 1)), "coefficient bounds")
    for cell in cells:
        if not cell.passed:
            logger.warning(f"coefficient bounds fail at a={cell.a}")
    logger.info(f"coefficient bounds: {sum(c.passed for c in cells)}/{len(cells)} pass")
    return GPolyBody(cells=cells)


def table_digits(base_dps: int, a: int, n: int, log10_max: float) -> int:
    """Working digits for a mixed-difference table with cancellation headroom."""
    cancellation = a * math.log10(3) + n * math.log10(2) + max(log10_max, 0.0)
    return base_dps + math.ceil(cancellation) + 10


def exponential_row(c, a: int, n_lo: int, n_hi: int) -> list:
    """Delta^(n-a) (Delta-1)^a c^x at x = a for n in [n_lo, n_hi], in the current mp context."""
    samples = [mp.power(c, x) for x in range(a, a + n_hi + 1)]
    return mixed_diff_row(samples, a, n_lo, n_hi)


def exponential_closed_form(c, a: int, n: int):
    """(c-1)^(n-a) (c-2)^a c^a, the eigenvalue of the mixed operator on c^x at a."""
    return (c - 1) ** (n - a) * (c - 2) ** a * c**a


def _relative_error(table, exact):
    if exact == 0:
        return abs(table)
    return abs(table - exact) / abs(exact)


def error_chain_check(
    K: int,
    a_max: int,
    precision: int = DEFAULT_PRECISION,
    logger: logging.Logger | None = None,
) -> ErrorChainBody:
    """
    Audit the error chain for H(x) = e^(-Kx).

    (3/2)(2/e)^K < 1 is checked in interval arithmetic; the mixed
    differences of H are computed from the table for a <= a_max and
    a <= n <= K(a+1), and the smallest a from which every row maximum stays
    below 1/2 is reported.
    """
    if K < 2:
        raise DomainError("error chain needs K >= 2", K=K)
    logger = logger or get_logger()

    with interval_precision(max(precision, MIN_DIGITS)) as ctx:
        factor = ctx.mpf(3) / 2 * (ctx.mpf(2) / ctx.exp(1)) ** K
        chain_valid = interval_below(factor, ctx.one)

    rows = []
    for a in range(a_max + 1):
        n_hi = K * (a + 1)
        with mp.workdps(table_digits(precision, a, a + n_hi, 0.0)):
            q = mp.exp(-K)
            row = exponential_row(q, a, a, n_hi)
            peak = max(abs(v) for v in row)
            rows.append(
                ErrorChainRow(a=a, max_value=mp.nstr(peak, 15), below_half=bool(peak < mp.mpf(1) / 2))
            )

    cutoff = None
    for row in reversed(rows):
        if not row.below_half:
            break
        cutoff = row.a
    logger.info(f"error chain K={K}: factor valid={chain_valid}, cutoff={cutoff}")
    return ErrorChainBody(
        K=K,
        chain_factor=interval_strings(factor),
        chain_valid=chain_valid,
        cutoff=cutoff,
        rows=rows,
    )


def _decay_cell(cell: tuple[int, int, int]) -> tuple[DecayCell, bool, float]:
    K, a, precision = cell
    n_lo, n_hi = K * a, K * (a + 1)
    with mp.workdps(precision):
        c = mp.power(2, 1 + mp.mpf(2) / K)
        log10_max = float((a + n_hi) * mp.log10(c))
    with mp.workdps(table_digits(precision, a, n_hi, log10_max)):
        c = mp.power(2, 1 + mp.mpf(2) / K)
        row = exponential_row(c, a, n_lo, n_hi)
        exact = [exponential_closed_form(c, a, n) for n in range(n_lo, n_hi + 1)]
        errors = [_relative_error(t, e) for t, e in zip(row, exact)]
        all_match = all(err < TABLE_AGREEMENT for err in errors)
        peak = max(range(len(exact)), key=lambda i: abs(exact[i]))
        log_peak = float(mp.log(abs(exact[peak])))
        decay_cell = DecayCell(
            a=a,
            n=n_lo + peak,
            closed_form=mp.nstr(exact[peak], 25),
            table=mp.nstr(row[peak], 25),
            relative_error=mp.nstr(errors[peak], 5),
            matches=bool(errors[peak] < TABLE_AGREEMENT),
        )
    return decay_cell, all_match, log_peak


def decay_exppoly(
    K: int,
    a_max: int,
    a_min: int = 1,
    precision: int = DEFAULT_PRECISION,
    executor: GridExecutor | None = None,
    logger: logging.Logger | None = None,
) -> DecayBody:
    """
    Decay audit for g(x) = c^x with c = 2^(1+2/K).

    Per a, the mixed differences over Ka <= n <= K(a+1) come from the table
    and must agree with the closed form to 1e-20 relative. C* is exp of the
    least-squares slope of log max_n |value| against a.
    """
    if K < 4:
        raise DomainError("the exponential decay audit needs K >= 4", K=K)
    if a_min < 0 or a_max < a_min:
        raise DomainError("decay audit needs 0 <= a_min <= a_max", a_min=a_min, a_max=a_max)
    logger = logger or get_logger()
    executor = executor or serial_executor(logger)

    results = executor.map(
        _decay_cell, [(K, a, precision) for a in range(a_min, a_max + 1)], f"decay K={K}"
    )
    cells = [r[0] for r in results]
    matches = all(r[1] for r in results)

    c_star = None
    decays = False
    if len(results) >= 2:
        slope = np.polyfit([c.a for c in cells], [r[2] for r in results], 1)[0]
        c_star = math.exp(slope)
        decays = c_star < 1
    with mp.workdps(precision):
        base = mp.nstr(mp.power(2, 1 + mp.mpf(2) / K), 20)

    logger.info(f"decay K={K}: C*={c_star}, table agreement={matches}")
    return DecayBody(
        K=K,
        base=base,
        cells=cells,
        c_star=f"{c_star:.6f}" if c_star is not None else None,
        decays=decays,
        matches=matches,
    )


def polynomial_decay_table(C: Fraction, n_max: int) -> bool:
    """Delta^n C^x at 0 equals (C-1)^n exactly for n <= n_max."""
    samples = [C**x for x in range(n_max + 1)]
    return all(d == (C - 1) ** n for n, d in enumerate(leading_differences(samples)))


def decay_poly(
    C: RationalLike,
    k: int,
    n_max: int = 20,
    precision: int = DEFAULT_PRECISION,
    logger: logging.Logger | None = None,
) -> PolyDecayBody:
    """
    Decay audit for g(x) = C^x: Delta^n g(0) = (C-1)^n, and C - 1 < e^(gamma_k)
    is confirmed with intervals whenever C < e^(gamma_k) + 1.
    """
    C = as_rational(C)
    if C <= 1:
        raise DomainError("polynomial decay audit needs C > 1", C=rational_str(C))
    logger = logger or get_logger()

    dps = max(precision, MIN_DIGITS)
    threshold = growth_threshold(k, dps)
    with interval_precision(dps) as ctx:
        shifted = rational_interval(ctx, C - 1)
        exp_gamma = ctx.exp(rational_interval(ctx, harmonic(k)))
        below = interval_below(rational_interval(ctx, C), threshold)
        holds = interval_below(shifted, exp_gamma)
        margin = exp_gamma - shifted
        lower_margin = interval_endpoints(margin)[0]
        c_star_iv = shifted + margin / 2

    table_ok = polynomial_decay_table(C, n_max)
    logger.info(f"polynomial decay C={rational_str(C)}, k={k}: holds={holds}")
    return PolyDecayBody(
        C=rational_str(C),
        k=k,
        threshold=interval_strings(threshold),
        below_threshold=below,
        holds=holds,
        margin=mp.nstr(lower_margin, 15) if holds else None,
        c_star=mp.nstr(interval_endpoints(c_star_iv)[1], 15) if holds else None,
        table_ok=table_ok,
    )
