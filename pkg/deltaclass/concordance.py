"""k-concordance: integer interpolability, scans, congruences and divisibility.

A sequence is k-concordant on a window when every (k+1)-tuple of indices
can be interpolated by one polynomial with integer coefficients. On distinct
nodes m_0..m_j this is decided by the unique interpolant of degree <= j: the
value vector of any P in Z[X] is also hit by P mod prod(X - m_i), a monic
integer reduction of degree <= j, so integer solvability in any degree is
integrality of that one interpolant. Its Newton coefficients are the divided
differences, and the Newton basis is monic and integral, so checking the
divided differences is enough.

Tuples with repeated nodes collapse to a smaller distinct set, and a subset
of an interpolable node set is interpolable by restriction, so scans only
enumerate distinct (k+1)-subsets.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections.abc import Iterator, Sequence as SequenceABC
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from mpmath import mp
from sympy import isprime, primerange

from deltaclass.config import ConcordanceConfig
from deltaclass.diffcalc import leading_differences, nth_difference_at
from deltaclass.exact import (
    RationalLike,
    RationalPoly,
    Sequence,
    as_rational,
    binomial,
    divided_differences,
    poly_interpolate,
)
from deltaclass.exceptions import DomainError, InsufficientDataError
from deltaclass.intervals import MIN_DIGITS, interval_precision, rational_interval
from deltaclass.logger import get_logger
from deltaclass.models import (
    CmainBody,
    CmainViolation,
    ConcordanceBody,
    CounterexampleRecord,
    GapBoundRow,
    ViolationRecord,
)
from deltaclass.parallel import GridExecutor, serial_executor


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise DomainError("p must be prime", p=p)


def int_interpolable(
    nodes: SequenceABC[int], values: SequenceABC[RationalLike]
) -> tuple[bool, RationalPoly | None]:
    """
    Decide whether some P in Z[X] takes the given values at the nodes.

    Repeated nodes must carry equal values; otherwise the answer is
    (False, None) without an interpolant.

    :return: (decision, unique interpolant of minimal degree on the distinct nodes)
    """
    if len(nodes) != len(values):
        raise DomainError("nodes and values differ in length", nodes=len(nodes), values=len(values))
    table: dict[int, Fraction] = {}
    for m, v in zip(nodes, values):
        v = as_rational(v)
        if m in table and table[m] != v:
            return False, None
        table[m] = v
    distinct = sorted(table)
    poly = poly_interpolate(distinct, [table[m] for m in distinct])
    return poly.is_integral(), poly


def _integral_newton(nodes: SequenceABC[int], values: SequenceABC[Fraction]) -> bool:
    return all(c.denominator == 1 for c in divided_differences(nodes, values))


class Counterexample(NamedTuple):
    nodes: tuple[int, ...]
    values: tuple[int, ...]
    interpolant: RationalPoly | None


@dataclass
class ConcordanceVerdict:
    k: int
    window: tuple[int, int]
    holds: bool
    mode: str
    tested: int
    counterexample: Counterexample | None = None

    def to_body(self) -> ConcordanceBody:
        record = None
        if self.counterexample is not None:
            ce = self.counterexample
            record = CounterexampleRecord(
                nodes=list(ce.nodes),
                values=[str(v) for v in ce.values],
                coefficients=ce.interpolant.to_strings() if ce.interpolant is not None else None,
            )
        return ConcordanceBody(
            k=self.k,
            window=list(self.window),
            holds=self.holds,
            mode=self.mode,
            tested=self.tested,
            counterexample=record,
        )


def _subsets(
    lo: int, hi: int, size: int, config: ConcordanceConfig
) -> tuple[str, Iterator[tuple[int, ...]]]:
    width = hi - lo + 1
    if width <= config.sample_threshold or config.exhaustive:
        return "exhaustive", itertools.combinations(range(lo, hi + 1), size)
    rng = random.Random(config.seed)
    population = range(lo, hi + 1)
    draws = (tuple(sorted(rng.sample(population, size))) for _ in range(config.samples))
    return "sampled", draws


def concordance_scan(
    s: Sequence,
    k: int,
    lo: int,
    hi: int,
    config: ConcordanceConfig | None = None,
    logger: logging.Logger | None = None,
) -> ConcordanceVerdict:
    """
    Test k-concordance of s on [lo, hi].

    Distinct (k+1)-subsets are enumerated in lexicographic order and the
    first failure is reported. Windows wider than the sampling threshold are
    tested on seeded uniform random subsets instead, unless exhaustive mode
    is forced.

    :raises DomainError: If k < 0 or hi - lo < k
    :raises NonIntegralError: If a sample in [lo, hi] is not an integer
    :raises InsufficientDataError: If [lo, hi] is not in the window
    """
    config = config or ConcordanceConfig()
    logger = logger or get_logger()
    if k < 0 or hi - lo < k:
        raise DomainError("concordance needs k >= 0 and hi - lo >= k", k=k, lo=lo, hi=hi)
    ints = s.integer_values(lo, hi)
    at = {lo + i: v for i, v in enumerate(ints)}

    mode, subsets = _subsets(lo, hi, k + 1, config)
    logger.debug(f"concordance: k={k} on [{lo}, {hi}], {mode}")
    tested = 0
    for nodes in subsets:
        tested += 1
        vals = [Fraction(at[m]) for m in nodes]
        if not _integral_newton(nodes, vals):
            interpolant = poly_interpolate(nodes, vals)
            logger.info(f"concordance: k={k} fails at nodes {nodes}")
            return ConcordanceVerdict(
                k, (lo, hi), False, mode, tested,
                Counterexample(tuple(nodes), tuple(at[m] for m in nodes), interpolant),
            )
    logger.info(f"concordance: k={k} holds on [{lo}, {hi}] ({tested} subsets, {mode})")
    return ConcordanceVerdict(k, (lo, hi), True, mode, tested)


def pairwise_divisibility(s: Sequence, lo: int, hi: int) -> tuple[int, int] | None:
    """First pair m1 < m2 in lexicographic order with (m2 - m1) not dividing f(m2) - f(m1)."""
    ints = s.integer_values(lo, hi)
    for i, j in itertools.combinations(range(len(ints)), 2):
        if (ints[j] - ints[i]) % (j - i):
            return lo + i, lo + j
    return None


def is_zero_concordant(s: Sequence, lo: int, hi: int) -> bool:
    """0-concordance is integrality of every sample."""
    return all(v.denominator == 1 for v in s.slice(lo, hi))


def cmain_first(p: int, k: int, ell: int) -> int:
    """sum_{j=0}^{k} (-1)^(jp) C(kp, jp) (jp)^ell, divisible by p^k."""
    _require_prime(p)
    if k < 1 or ell < 0:
        raise DomainError("cmain_first needs k >= 1 and ell >= 0", k=k, ell=ell)
    return sum((-1) ** (j * p) * binomial(k * p, j * p) * (j * p) ** ell for j in range(k + 1))


def cmain_second(p: int, k: int, i: int, ell: int) -> int:
    """sum_{j=0}^{k-1} (-1)^(jp) C(kp, jp+i) (jp+i)^ell, divisible by p^k."""
    _require_prime(p)
    if k < 1 or ell < 0:
        raise DomainError("cmain_second needs k >= 1 and ell >= 0", k=k, ell=ell)
    if not 1 <= i <= p - 1:
        raise DomainError("cmain_second needs 1 <= i <= p-1", p=p, i=i)
    return sum(
        (-1) ** (j * p) * binomial(k * p, j * p + i) * (j * p + i) ** ell for j in range(k)
    )


def cmain_falling(p: int, k: int, ell: int) -> tuple[int, int]:
    """
    Both sides of the falling-factorial step behind the first congruence family.

    sum_j (-1)^(jp) C(kp, jp) (jp)_ell
        = (kp)_ell * sum_{j >= ceil(ell/p)} (-1)^(jp) C(kp - ell, jp - ell)
    """
    _require_prime(p)
    if k < 1 or ell < 0:
        raise DomainError("cmain_falling needs k >= 1 and ell >= 0", k=k, ell=ell)
    kp = k * p
    lhs = sum(
        (-1) ** (j * p) * binomial(kp, j * p) * math.perm(j * p, ell) for j in range(k + 1)
    )
    if ell > kp:
        return lhs, 0
    j_lo = -(-ell // p)
    rhs = math.perm(kp, ell) * sum(
        (-1) ** (j * p) * binomial(kp - ell, j * p - ell) for j in range(j_lo, k + 1)
    )
    return lhs, rhs


def _cmain_cell(cell: tuple[int, int, int]) -> list[CmainViolation]:
    p, k, ell = cell
    modulus = p**k
    violations = []
    value = cmain_first(p, k, ell)
    if value % modulus:
        violations.append(CmainViolation(p=p, k=k, ell=ell, value=str(value)))
    for i in range(1, p):
        value = cmain_second(p, k, i, ell)
        if value % modulus:
            violations.append(CmainViolation(p=p, k=k, i=i, ell=ell, value=str(value)))
    lhs, rhs = cmain_falling(p, k, ell)
    if lhs != rhs:
        violations.append(CmainViolation(p=p, k=k, ell=ell, value=f"falling {lhs} != {rhs}"))
    return violations


def verify_cmain_grid(
    p_max: int,
    k_max: int,
    ell_max: int,
    executor: GridExecutor | None = None,
    logger: logging.Logger | None = None,
) -> CmainBody:
    """Both congruence families mod p^k on every prime p <= p_max, k <= k_max, ell <= ell_max."""
    if p_max < 2 or k_max < 1 or ell_max < 0:
        raise DomainError(
            "congruence grid needs p_max >= 2, k_max >= 1, ell_max >= 0",
            p_max=p_max, k_max=k_max, ell_max=ell_max,
        )
    logger = logger or get_logger()
    executor = executor or serial_executor(logger)
    primes = list(primerange(2, p_max + 1))
    cells = [(p, k, ell) for p in primes for k in range(1, k_max + 1) for ell in range(ell_max + 1)]
    results = executor.map(_cmain_cell, cells, "congruence grid")
    violations = [v for chunk in results for v in chunk]
    # one first-family sum plus p-1 second-family sums per cell
    checked = sum(p for p, _, _ in cells)
    for v in violations:
        logger.warning(f"congruence fails: {v.model_dump()}")
    logger.info(f"congruence grid: {checked} sums, {len(violations)} violations")
    return CmainBody(
        primes=primes,
        k_max=k_max,
        ell_max=ell_max,
        cells=checked,
        falling_checked=len(cells),
        violations=violations,
    )


class Violation(NamedTuple):
    check: str
    a: int
    n: int
    p: int | None
    value: int
    divisor: int

    def to_record(self) -> ViolationRecord:
        return ViolationRecord(
            check=self.check, a=self.a, n=self.n, p=self.p,
            value=str(self.value), divisor=str(self.divisor),
        )


def delta_congruence_check(
    s: Sequence, k: int, p: int, a_range: range
) -> list[Violation]:
    """
    p^k must divide Delta^(kp) f(a) for every a in a_range.

    :raises InsufficientDataError: If some [a, a+kp] leaves the window
    :raises NonIntegralError: On a non-integer sample
    """
    _require_prime(p)
    if k < 1:
        raise DomainError("delta congruence needs k >= 1", k=k)
    n = k * p
    modulus = p**k
    violations = []
    for a in a_range:
        window = s.integer_values(a, a + n)
        value = nth_difference_at(window, n)
        if value % modulus:
            violations.append(Violation("delta", a, n, p, value, modulus))
    return violations


def primorial_divisor(n: int, k: int) -> int:
    """prod_{l <= k} prod_{p <= n/l} p; the empty product is 1."""
    if n < 0 or k < 1:
        raise DomainError("primorial divisor needs n >= 0 and k >= 1", n=n, k=k)
    return math.prod(math.prod(primerange(2, n // ell + 1)) for ell in range(1, k + 1))


def chebyshev_theta_sum(n: int, k: int, dps: int = 30):
    """sum_{l <= k} theta(n/l) = log primorial_divisor(n, k), as an mpf."""
    with mp.workdps(dps):
        return +mp.log(primorial_divisor(n, k))


def gap_bounds(k: int, n_max: int, digits: int = 20) -> list[GapBoundRow]:
    """sum_{l <= k} theta(n/l) beside gamma_k n for every n <= n_max."""
    gamma = harmonic(k)
    rows = []
    for n in range(n_max + 1):
        with mp.workdps(digits + 10):
            bound = mp.mpf(gamma.numerator * n) / gamma.denominator
            rows.append(
                GapBoundRow(
                    n=n,
                    theta_sum=mp.nstr(chebyshev_theta_sum(n, k, digits + 10), digits),
                    gamma_n=mp.nstr(bound, digits),
                )
            )
    return rows


def gap_check(
    s: Sequence, k: int, n_range: range, a_range: range
) -> list[Violation]:
    """
    Delta^n f(a) must be zero or divisible by primorial_divisor(n, k).

    :raises InsufficientDataError: If a + max(n_range) leaves the window
    :raises NonIntegralError: On a non-integer sample
    """
    if not n_range or not a_range:
        return []
    n_max = max(n_range)
    if min(n_range) < 0:
        raise DomainError("difference orders must be nonnegative")
    divisors = {n: primorial_divisor(n, k) for n in n_range}
    violations = []
    for a in a_range:
        if not s.covers(a, a + n_max):
            raise InsufficientDataError(
                f"gap check needs samples {a}..{a + n_max}",
                needed=(a, a + n_max),
                available=(s.start, s.end),
            )
        diagonal = leading_differences(s.integer_values(a, a + n_max))
        for n in n_range:
            value = int(diagonal[n])
            if value and value % divisors[n]:
                violations.append(Violation("gap", a, n, None, value, divisors[n]))
    return violations


def harmonic(k: int) -> Fraction:
    """gamma_k = 1 + 1/2 + ... + 1/k, with gamma_0 = 0."""
    return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))


def growth_threshold(k: int, dps: int = MIN_DIGITS):
    """
    Enclosure of e^(gamma_k) + 1 with outward rounding.

    :return: An interval from a private mpmath interval context
    """
    if k < 0:
        raise DomainError("growth threshold needs k >= 0", k=k)
    with interval_precision(max(dps, MIN_DIGITS)) as ctx:
        return ctx.exp(rational_interval(ctx, harmonic(k))) + 1
