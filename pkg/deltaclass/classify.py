"""Classification of sequence windows as polynomials or P1 + P2 * 2^x.

Two reconstructions are available: Newton/Polya from a vanishing tail of
forward differences, and an exact fit in the basis {x^i} U {x^j 2^x} on the
nodes B..KB+B-1. The vanishing scan decides where the second one may start.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from deltaclass.config import ClassifyConfig
from deltaclass.diffcalc import leading_differences, mixed_diff_row, mixed_operator_coefficients
from deltaclass.exact import (
    RationalLike,
    RationalPoly,
    Sequence,
    as_rational,
    newton_to_monomial,
    pow2,
    rational_str,
    solve_exact,
)
from deltaclass.exceptions import (
    DomainError,
    InsufficientDataError,
    ReconstructionError,
    SingularSystemError,
)
from deltaclass.logger import get_logger
from deltaclass.models import ClassificationBody, FailureRecord
from deltaclass.parallel import GridExecutor, serial_executor


@dataclass(frozen=True)
class ExpPolyForm:
    """x -> p1(x) + p2(x) * 2^x with rational polynomial parts."""

    p1: RationalPoly = field(default_factory=RationalPoly)
    p2: RationalPoly = field(default_factory=RationalPoly)

    def __call__(self, a: int) -> Fraction:
        return eval_expoly(self, a)

    @property
    def is_polynomial(self) -> bool:
        return self.p2.is_zero()

    def annihilator_orders(self) -> tuple[int, int]:
        """Smallest (n, k) with Delta^n (Delta-1)^k killing the form."""
        return (self.p1.degree + 1, self.p2.degree + 1)

    def synthesize(self, start: int, length: int) -> Sequence:
        """Exact samples at start..start+length-1."""
        return Sequence.from_function(self, start, length)

    def __str__(self) -> str:
        return f"({self.p1}) + ({self.p2})*2^X"


def eval_expoly(form: ExpPolyForm, a: int) -> Fraction:
    """
    Exact p1(a) + p2(a) * 2^a.

    :raises DomainError: For a < 0
    """
    if a < 0:
        raise DomainError("exp-polynomial forms are evaluated at a >= 0", a=a)
    return form.p1(a) + form.p2(a) * pow2(a)


class Verdict(str, Enum):
    POLYNOMIAL = "polynomial"
    EXPOLY = "expoly"
    INCONCLUSIVE = "inconclusive"


class Failure(NamedTuple):
    """A failing scan cell (n set) or a pointwise mismatch (n is None)."""

    a: int
    n: int | None
    residual: Fraction


class ScanEntry(NamedTuple):
    a: int
    satisfied: bool
    witnesses: list[tuple[int, Fraction]]


@dataclass
class ClassificationReport:
    verdict: Verdict
    K_used: int
    polynomial: RationalPoly | None = None
    form: ExpPolyForm | None = None
    verified_from: int | None = None
    verified_to: int | None = None
    cut: int | None = None
    failures: list[Failure] = field(default_factory=list)
    reason: str | None = None

    @property
    def conclusive(self) -> bool:
        return self.verdict is not Verdict.INCONCLUSIVE

    @property
    def integral_coefficients(self) -> bool | None:
        """Whether the closed form lies in Z[X] (reported, never enforced)."""
        if self.polynomial is not None:
            return self.polynomial.is_integral()
        if self.form is not None:
            return self.form.p1.is_integral() and self.form.p2.is_integral()
        return None

    def closed_form(self, a: int) -> Fraction:
        if self.polynomial is not None:
            return self.polynomial(a)
        if self.form is not None:
            return self.form(a)
        raise DomainError("an inconclusive report has no closed form")

    def to_body(self) -> ClassificationBody:
        return ClassificationBody(
            verdict=self.verdict.value,
            polynomial=self.polynomial.to_strings() if self.polynomial is not None else None,
            p1=self.form.p1.to_strings() if self.form is not None else None,
            p2=self.form.p2.to_strings() if self.form is not None else None,
            verified_from=self.verified_from,
            verified_to=self.verified_to,
            K_used=self.K_used,
            cut=self.cut,
            integral_coefficients=self.integral_coefficients,
            reason=self.reason,
            failures=[
                FailureRecord(a=f.a, n=f.n, residual=rational_str(f.residual))
                for f in self.failures
            ],
        )


def polya_reconstruct(s: Sequence, B: int, min_tail: int = 2) -> RationalPoly:
    """
    Newton reconstruction from the difference diagonal at B.

    Finds the smallest d with Delta^(d+1) f(B), ..., Delta^N f(B) all zero,
    where N is the last order the window reaches, and returns
    sum_{j<=d} Delta^j f(B) * C(X-B, j) in monomial form.

    :param s: Sequence window
    :param B: Base point
    :param min_tail: Vanishing higher differences required as evidence
    :return: The reconstructed polynomial
    :raises InsufficientDataError: If the window does not reach B+2
    :raises ReconstructionError: Without a vanishing tail, or on a mismatch
    """
    s.require(B, B + 2, f"Polya reconstruction at B={B}")
    values = s.slice(B, s.end)
    diagonal = leading_differences(values)

    d = max((j for j, v in enumerate(diagonal) if v != 0), default=-1)
    tail = len(diagonal) - 1 - d
    if tail < min_tail:
        raise ReconstructionError(
            f"no vanishing tail of {min_tail} differences at B={B}", witness=d
        )

    # binomial(X-B, j) = prod_{i<j}(X-B-i) / j!
    coeffs = []
    factorial = 1
    for j in range(d + 1):
        if j:
            factorial *= j
        coeffs.append(diagonal[j] / factorial)
    poly = newton_to_monomial([B + i for i in range(d + 1)], coeffs)

    for a, value in s.window(B, s.end):
        if poly(a) != value:
            raise ReconstructionError(f"reconstruction mismatch at a={a}", witness=a)
    return poly


def expoly_fit(s: Sequence, B: int, K: int) -> ExpPolyForm:
    """
    Fit p1 + p2 * 2^x exactly on the nodes B..KB+B-1.

    deg p1 <= (K-1)B - 1 and deg p2 <= B - 1, so the system is KB x KB.

    :raises InsufficientDataError: If the nodes are not all in the window
    :raises SingularSystemError: If the mixed system is singular on the nodes
    """
    if B < 1:
        raise DomainError("expoly_fit needs B >= 1", B=B)
    if K < 2:
        raise DomainError("expoly_fit needs K >= 2", K=K)
    hi = K * B + B - 1
    s.require(B, hi, f"exp-polynomial fit (B={B}, K={K})")

    d1 = (K - 1) * B
    nodes = list(range(B, hi + 1))
    matrix = [
        [m**i for i in range(d1)] + [m**j * pow2(m) for j in range(B)] for m in nodes
    ]
    solution = solve_exact(matrix, s.slice(B, hi), nodes=nodes)
    return ExpPolyForm(RationalPoly(solution[:d1]), RationalPoly(solution[d1:]))


def _scan_cell(cell: tuple[int, int, tuple[Fraction, ...]]) -> ScanEntry:
    a, K, values = cell
    row = mixed_diff_row(values, a, K * a, K * (a + 1))
    witnesses = [(K * a + i, v) for i, v in enumerate(row) if v != 0]
    return ScanEntry(a, not witnesses, witnesses)


def vanishing_scan(
    s: Sequence,
    K: int,
    executor: GridExecutor | None = None,
    a_min: int = 0,
) -> list[ScanEntry]:
    """
    Check Delta^(n-a) (Delta-1)^a f(a) = 0 for Ka <= n <= K(a+1).

    Every a >= max(a_min, start) whose window [a, a+K(a+1)] is covered gets
    an entry; uncovered a are skipped, so a short window yields [].
    """
    if K < 2:
        raise DomainError("vanishing scan needs K >= 2", K=K)
    cells = []
    a = max(a_min, s.start)
    while a + K * (a + 1) <= s.end:
        cells.append((a, K, tuple(s.slice(a, a + K * (a + 1)))))
        a += 1
    executor = executor or serial_executor()
    return executor.map(_scan_cell, cells, "vanishing scan")


def extend_by_vanishing(seed: Sequence, K: int, B: int, upto: int) -> Sequence:
    """
    Propagate a seed forward assuming the vanishing relations hold for a >= B.

    f(m) is solved from Delta^(n-a) (Delta-1)^a f(a) = 0 with a = m // (K+1)
    and n = m - a; the leading coefficient of the operator is 1. This is
    valid for every m >= (K+1)B.

    :raises InsufficientDataError: If the seed stops before (K+1)B - 1
    """
    if K < 2 or B < 0:
        raise DomainError("extension needs K >= 2 and B >= 0", K=K, B=B)
    first = (K + 1) * B
    if seed.end + 1 < first or seed.start > B:
        raise InsufficientDataError(
            "seed must cover B..(K+1)B-1",
            needed=(B, first - 1),
            available=(seed.start, seed.end),
        )
    values = list(seed.values)
    for m in range(seed.end + 1, upto + 1):
        a = m // (K + 1)
        n = m - a
        coeffs = mixed_operator_coefficients(a, n)
        base = a - seed.start
        values.append(-sum(coeffs[i] * values[base + i] for i in range(n)))
    return Sequence(seed.start, values)


def _first_mismatches(
    s: Sequence, lo: int, closed_form, limit: int = 10
) -> list[Failure]:
    failures = []
    for a, value in s.window(lo, s.end):
        residual = value - closed_form(a)
        if residual:
            failures.append(Failure(a, None, residual))
            if len(failures) >= limit:
                break
    return failures


def classify(
    s: Sequence,
    config: ClassifyConfig | None = None,
    executor: GridExecutor | None = None,
    logger: logging.Logger | None = None,
) -> ClassificationReport:
    """
    Classify a window as Polynomial, ExpPoly or Inconclusive.

    Polya reconstruction is tried at the cut first. Otherwise the vanishing
    scan picks the smallest B from which every covered a is satisfied, the
    form is fitted at B and every sample in [B, end] must match. Failure
    modes land in the report; nothing is raised for data reasons.

    :param s: Sequence window
    :param config: Classification parameters
    :param executor: Executor for the vanishing scan
    :param logger: Logger instance (optional, will use default if not provided)
    :return: Classification report
    """
    config = config or ClassifyConfig()
    logger = logger or get_logger()
    K = config.K
    cut = config.cut

    def inconclusive(reason: str, failures: list[Failure] | None = None) -> ClassificationReport:
        logger.info(f"classify: inconclusive ({reason})")
        return ClassificationReport(
            Verdict.INCONCLUSIVE, K, cut=cut, failures=failures or [], reason=reason
        )

    if config.require_integer and not s.all_integer:
        bad = next((a, v) for a, v in s if v.denominator != 1)
        return inconclusive("non-integer sample", [Failure(bad[0], None, bad[1])])

    base = s.start if cut is None else cut
    if base < s.start or base > s.end:
        return inconclusive(f"cut {base} outside window {s.start}..{s.end}")

    logger.debug(f"classify: Polya reconstruction at B={base}")
    try:
        poly = polya_reconstruct(s, base, config.polya_min_tail)
    except (ReconstructionError, InsufficientDataError) as e:
        logger.debug(f"classify: Polya failed: {e}")
    else:
        logger.info(f"classify: polynomial {poly} on {base}..{s.end}")
        return ClassificationReport(
            Verdict.POLYNOMIAL, K, polynomial=poly,
            verified_from=base, verified_to=s.end, cut=cut,
        )

    a_min = max(1, s.start, cut or 0)
    entries = vanishing_scan(s, K, executor, a_min=a_min)
    logger.debug(f"classify: vanishing scan covered {len(entries)} points from a={a_min}")
    if not entries:
        return inconclusive(f"window too short for the vanishing scan at K={K}")

    last_bad = max((i for i, e in enumerate(entries) if not e.satisfied), default=-1)
    scan_failures = [
        Failure(e.a, n, value)
        for e in entries
        if not e.satisfied
        for n, value in e.witnesses[:1]
    ]
    if last_bad == len(entries) - 1:
        return inconclusive("vanishing condition fails at the end of the window", scan_failures)

    B = entries[last_bad + 1].a
    try:
        form = expoly_fit(s, B, K)
    except SingularSystemError as e:
        return inconclusive(f"singular interpolation system on nodes {e.nodes}")

    mismatches = _first_mismatches(s, B, form)
    if mismatches:
        return inconclusive("fitted form mismatches the window", mismatches)

    if form.is_polynomial:
        logger.info(f"classify: polynomial {form.p1} on {B}..{s.end}")
        return ClassificationReport(
            Verdict.POLYNOMIAL, K, polynomial=form.p1,
            verified_from=B, verified_to=s.end, cut=cut,
        )
    logger.info(f"classify: exp-polynomial {form} on {B}..{s.end}")
    return ClassificationReport(
        Verdict.EXPOLY, K, form=form, verified_from=B, verified_to=s.end, cut=cut,
    )


def form_from_strings(p1: list[RationalLike], p2: list[RationalLike]) -> ExpPolyForm:
    """Build a form from coefficient lists (lowest degree first)."""
    return ExpPolyForm(
        RationalPoly(as_rational(c) for c in p1), RationalPoly(as_rational(c) for c in p2)
    )
