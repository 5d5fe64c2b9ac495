"""Forward-difference calculus: Delta, (Delta - 1) and the mixed operator.

The list-level kernels (``*_values`` and friends) accept any scalar type that
supports ``+``, ``-`` and ``*`` with ints, so the analytic audits can run the
same code on mpmath numbers. The Sequence-level operations are exact and use
absolute indices throughout.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence as SequenceABC
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from deltaclass.exact import Sequence, binomial, pow2
from deltaclass.exceptions import DomainError, InsufficientDataError

Scalar = Any


@dataclass(frozen=True)
class MixedDiffQuery:
    """Evaluate Delta^(n-a) (Delta-1)^a f at the point a; needs f(a), ..., f(a+n)."""

    a: int
    n: int

    def __post_init__(self):
        if self.a < 0 or self.n < self.a:
            raise DomainError("mixed difference needs 0 <= a <= n", a=self.a, n=self.n)

    @property
    def window(self) -> tuple[int, int]:
        return (self.a, self.a + self.n)


def signed_binomial_rows(n_max: int, n_min: int = 0) -> Iterator[tuple[int, list[int]]]:
    """
    Yield (n, row) with row[k] = (-1)^(n-k) * C(n, k) for n_min <= n <= n_max.

    Rows are produced by Pascal updates from row n_min, not recomputed.
    """
    row = [(-1) ** (n_min - k) * binomial(n_min, k) for k in range(n_min + 1)]
    n = n_min
    while n <= n_max:
        yield n, row
        # (E - 1) * row: new[k] = row[k-1] - row[k]
        row = [(row[k - 1] if k > 0 else 0) - (row[k] if k < len(row) else 0)
               for k in range(len(row) + 1)]
        n += 1


def delta_values(values: SequenceABC[Scalar]) -> list[Scalar]:
    """One forward difference of a list."""
    return [values[i + 1] - values[i] for i in range(len(values) - 1)]


def shifted_values(values: SequenceABC[Scalar]) -> list[Scalar]:
    """One application of (Delta - 1): f(x+1) - 2 f(x)."""
    return [values[i + 1] - 2 * values[i] for i in range(len(values) - 1)]


def nth_difference_at(values: SequenceABC[Scalar], n: int, row: list[int] | None = None) -> Scalar:
    """Delta^n at the first point of values by the explicit binomial sum."""
    if len(values) < n + 1:
        raise InsufficientDataError(f"Delta^{n} needs {n + 1} samples, have {len(values)}")
    if row is None:
        row = [(-1) ** (n - k) * binomial(n, k) for k in range(n + 1)]
    acc = row[0] * values[0]
    for k in range(1, n + 1):
        acc = acc + row[k] * values[k]
    return acc


def leading_differences(values: SequenceABC[Scalar], order: int | None = None) -> list[Scalar]:
    """
    Newton diagonal [Delta^0 f(a0), Delta^1 f(a0), ..., Delta^order f(a0)].

    One in-place sweep of the difference table; O(N * order) operations.
    """
    order = len(values) - 1 if order is None else order
    if order > len(values) - 1:
        raise InsufficientDataError(
            f"order {order} needs {order + 1} samples, have {len(values)}"
        )
    column = list(values[: order + 1])
    out = [column[0]]
    for j in range(1, order + 1):
        for i in range(order + 1 - j):
            column[i] = column[i + 1] - column[i]
        out.append(column[0])
    return out


def mixed_diff_values(values: SequenceABC[Scalar], a: int, n: int) -> Scalar:
    """Delta^(n-a) (Delta-1)^a at the first point of values (composition path)."""
    if len(values) < n + 1:
        raise InsufficientDataError(f"mixed difference needs {n + 1} samples, have {len(values)}")
    work = list(values[: n + 1])
    for _ in range(a):
        work = shifted_values(work)
    return leading_differences(work, n - a)[-1]


def mixed_diff_row(
    values: SequenceABC[Scalar], a: int, n_lo: int, n_hi: int
) -> list[Scalar]:
    """
    Delta^(n-a) (Delta-1)^a at the first point of values for every n in [n_lo, n_hi].

    A single (Delta-1)^a pass followed by one table sweep serves the whole row.
    """
    if n_lo < a or n_hi < n_lo:
        raise DomainError("row needs a <= n_lo <= n_hi", a=a, n_lo=n_lo, n_hi=n_hi)
    if len(values) < n_hi + 1:
        raise InsufficientDataError(
            f"mixed row needs {n_hi + 1} samples, have {len(values)}"
        )
    work = list(values[: n_hi + 1])
    for _ in range(a):
        work = shifted_values(work)
    diagonal = leading_differences(work, n_hi - a)
    return diagonal[n_lo - a :]


def mixed_diff_expanded_values(values: SequenceABC[Scalar], a: int, n: int) -> Scalar:
    """
    Same quantity by expanding (Delta-1)^a = sum_j C(a,j) (-1)^(a-j) Delta^j.

    Consecutive Delta^m rows come from incremental Pascal updates.
    """
    if len(values) < n + 1:
        raise InsufficientDataError(f"mixed difference needs {n + 1} samples, have {len(values)}")
    acc: Scalar = 0
    for m, row in signed_binomial_rows(n, n - a):
        j = m - (n - a)
        weight = binomial(a, j) * (-1) ** (a - j)
        acc = acc + weight * nth_difference_at(values, m, row)
    return acc


def mixed_operator_coefficients(a: int, n: int) -> list[int]:
    """Coefficients c_0..c_n of (E-1)^(n-a) (E-2)^a in the shift E; c_n = 1."""
    if a < 0 or n < a:
        raise DomainError("mixed operator needs 0 <= a <= n", a=a, n=n)
    coeffs = [1]
    for root in [1] * (n - a) + [2] * a:
        coeffs = [
            (coeffs[k - 1] if k > 0 else 0) - root * (coeffs[k] if k < len(coeffs) else 0)
            for k in range(len(coeffs) + 1)
        ]
    return coeffs


# Sequence-level operations


def forward_diff(s: Sequence) -> Sequence:
    """
    Delta f(a) = f(a+1) - f(a) on the window.

    :raises InsufficientDataError: If fewer than two samples
    """
    if len(s) < 2:
        raise InsufficientDataError(
            "forward difference needs two samples", available=(s.start, s.end)
        )
    return Sequence(s.start, delta_values(s.values))


def iterated_diff(s: Sequence, n: int) -> Sequence:
    """
    Delta^n f(a) = sum_k (-1)^(n-k) C(n,k) f(a+k) for every admissible a.

    :raises InsufficientDataError: Unless the window holds n+1 samples
    """
    if n < 0:
        raise DomainError("difference order must be nonnegative", n=n)
    if len(s) < n + 1:
        raise InsufficientDataError(
            f"Delta^{n} needs {n + 1} samples",
            needed=(s.start, s.start + n),
            available=(s.start, s.end),
        )
    if n == 0:
        return s
    row = [(-1) ** (n - k) * binomial(n, k) for k in range(n + 1)]
    vals = s.values
    return Sequence(
        s.start,
        (nth_difference_at(vals[i : i + n + 1], n, row) for i in range(len(s) - n)),
    )


def shifted_diff(s: Sequence) -> Sequence:
    """
    (Delta - 1) f(a) = f(a+1) - 2 f(a).

    :raises InsufficientDataError: If fewer than two samples
    """
    if len(s) < 2:
        raise InsufficientDataError(
            "(Delta - 1) needs two samples", available=(s.start, s.end)
        )
    return Sequence(s.start, shifted_values(s.values))


def mixed_diff(s: Sequence, q: MixedDiffQuery) -> Fraction:
    """
    Delta^(n-a) (Delta-1)^a f evaluated at a: (Delta-1)^a first, then Delta^(n-a).

    :raises InsufficientDataError: If [a, a+n] is not in the window
    """
    lo, hi = q.window
    s.require(lo, hi, f"mixed difference (a={q.a}, n={q.n})")
    return mixed_diff_values(s.slice(lo, hi), q.a, q.n)


def mixed_diff_expanded(s: Sequence, q: MixedDiffQuery) -> Fraction:
    """Cross-check path for :func:`mixed_diff` via the binomial expansion of (Delta-1)^a."""
    lo, hi = q.window
    s.require(lo, hi, f"mixed difference (a={q.a}, n={q.n})")
    return mixed_diff_expanded_values(s.slice(lo, hi), q.a, q.n)


def conjugation_check(h: Sequence, n: int) -> bool:
    """
    Check (Delta-1)^n f(a) = 2^(a+n) Delta^n h(a) for f(a) = 2^a h(a).

    Every a with a+n inside h's window is tested.

    :raises InsufficientDataError: Unless h holds n+1 samples
    """
    if len(h) < n + 1:
        raise InsufficientDataError(
            f"conjugation check needs {n + 1} samples",
            needed=(h.start, h.start + n),
            available=(h.start, h.end),
        )
    f = [pow2(a) * v for a, v in h]
    lhs = f
    for _ in range(n):
        lhs = shifted_values(lhs)
    rhs = iterated_diff(h, n)
    return all(
        lhs[i] == pow2(a + n) * value for i, (a, value) in enumerate(rhs)
    )


def annihilates(values: SequenceABC[Scalar], n: int, k: int) -> bool:
    """
    True iff Delta^n (Delta-1)^k vanishes at every point the window reaches.

    For f = P1 + P2 * 2^x this holds once n > deg P1 and k > deg P2.

    :raises InsufficientDataError: Unless the window holds n+k+1 samples
    """
    if n < 0 or k < 0:
        raise DomainError("annihilator orders must be nonnegative", n=n, k=k)
    if len(values) < n + k + 1:
        raise InsufficientDataError(
            f"annihilator check needs {n + k + 1} samples, have {len(values)}"
        )
    work = list(values)
    for _ in range(k):
        work = shifted_values(work)
    for _ in range(n):
        work = delta_values(work)
    return all(v == 0 for v in work)
