"""Exact arithmetic core: rationals, rational polynomials, binomials and sequences.

Everything here is exact. Rationals are :class:`fractions.Fraction`, which keeps
``gcd(|num|, den) = 1`` with a positive denominator and represents zero as 0/1.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Iterator, Sequence as SequenceABC
from fractions import Fraction

from deltaclass.exceptions import (
    DomainError,
    DuplicateNodeError,
    InsufficientDataError,
    NonIntegralError,
    SingularSystemError,
)

ExactRational = Fraction
RationalLike = Fraction | int | str


def as_rational(value: RationalLike) -> Fraction:
    """
    Coerce an int, Fraction or "num/den" string into a Fraction.

    :param value: Value to coerce
    :return: Exact rational
    :raises DomainError: If the value is a float or cannot be parsed
    """
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"not an exact rational: {value!r}") from e
    raise DomainError(f"not an exact rational: {value!r}")


def rational_str(value: Fraction) -> str:
    """Exact decimal string: plain integer or "num/den"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def binomial(n: int, k: int) -> int:
    """n!/(k!(n-k)!) exactly; 0 when k > n or k < 0."""
    if n < 0:
        raise DomainError("binomial needs n >= 0", n=n)
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def pow2(m: int) -> int:
    """Exact 2**m for m >= 0."""
    if m < 0:
        raise DomainError("pow2 needs m >= 0", m=m)
    return 1 << m


class RationalPoly:
    """Univariate polynomial over Q; coefficient i multiplies X**i.

    The coefficient tuple never ends in a zero, so the zero polynomial is ``()``.
    Instances are immutable and hashable.
    """

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Iterable[RationalLike] = ()):
        coeffs = [as_rational(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coefficients: tuple[Fraction, ...] = tuple(coeffs)

    @classmethod
    def constant(cls, c: RationalLike) -> RationalPoly:
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: RationalLike = 1) -> RationalPoly:
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike]) -> RationalPoly:
        """Monic polynomial prod(X - r)."""
        result = cls([1])
        for r in roots:
            result = result * cls([-as_rational(r), 1])
        return result

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._coefficients

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._coefficients) - 1

    def is_zero(self) -> bool:
        return not self._coefficients

    def is_integral(self) -> bool:
        """True iff every coefficient is an integer."""
        return all(c.denominator == 1 for c in self._coefficients)

    def coefficient(self, i: int) -> Fraction:
        if 0 <= i < len(self._coefficients):
            return self._coefficients[i]
        return Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, as_rational(x))

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._coefficients)

    def __len__(self) -> int:
        return len(self._coefficients)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalPoly):
            return self._coefficients == other._coefficients
        if isinstance(other, (int, Fraction)):
            return self._coefficients == RationalPoly([other])._coefficients
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coefficients)

    def __neg__(self) -> RationalPoly:
        return RationalPoly(-c for c in self._coefficients)

    def __add__(self, other: RationalPoly | RationalLike) -> RationalPoly:
        other = _as_poly(other)
        n = max(len(self), len(other))
        return RationalPoly(self.coefficient(i) + other.coefficient(i) for i in range(n))

    __radd__ = __add__

    def __sub__(self, other: RationalPoly | RationalLike) -> RationalPoly:
        return self + (-_as_poly(other))

    def __rsub__(self, other: RationalLike) -> RationalPoly:
        return _as_poly(other) - self

    def __mul__(self, other: RationalPoly | RationalLike) -> RationalPoly:
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self._coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other._coefficients):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def shift(self, h: RationalLike) -> RationalPoly:
        """The polynomial X -> self(X + h), by Horner composition."""
        step = RationalPoly([as_rational(h), 1])
        result = RationalPoly()
        for c in reversed(self._coefficients):
            result = result * step + c
        return result

    def to_strings(self) -> list[str]:
        return [rational_str(c) for c in self._coefficients]

    def __repr__(self) -> str:
        return f"RationalPoly({self.to_strings()})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self._coefficients[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = rational_str(mag)
            else:
                power = "X" if i == 1 else f"X^{i}"
                body = power if mag == 1 else f"{rational_str(mag)}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _as_poly(value: RationalPoly | RationalLike) -> RationalPoly:
    if isinstance(value, RationalPoly):
        return value
    return RationalPoly([value])


def poly_eval(p: RationalPoly, x: RationalLike) -> Fraction:
    """Exact Horner evaluation of p at x."""
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coefficients):
        acc = acc * x + c
    return acc


def divided_differences(
    nodes: SequenceABC[int], values: SequenceABC[RationalLike]
) -> list[Fraction]:
    """
    Newton divided differences f[m0], f[m0,m1], ..., f[m0..mj].

    :param nodes: Pairwise distinct integer nodes
    :param values: Values at the nodes
    :return: Newton-form coefficients
    :raises DomainError: If lengths differ
    :raises DuplicateNodeError: If two nodes coincide
    """
    if len(nodes) != len(values):
        raise DomainError(
            "nodes and values differ in length", nodes=len(nodes), values=len(values)
        )
    seen: set[int] = set()
    for m in nodes:
        if m in seen:
            raise DuplicateNodeError(node=m)
        seen.add(m)

    column = [as_rational(v) for v in values]
    coeffs = [column[0]] if column else []
    for step in range(1, len(nodes)):
        column = [
            (column[i + 1] - column[i]) / (nodes[i + step] - nodes[i])
            for i in range(len(column) - 1)
        ]
        coeffs.append(column[0])
    return coeffs


def newton_to_monomial(nodes: SequenceABC[int], coeffs: SequenceABC[Fraction]) -> RationalPoly:
    """Expand sum_j c_j prod_{i<j}(X - m_i) into monomial form, nested from the top."""
    result = RationalPoly()
    for j in range(len(coeffs) - 1, -1, -1):
        result = result * RationalPoly([-Fraction(nodes[j]), 1]) + coeffs[j]
    return result


def poly_interpolate(
    nodes: SequenceABC[int], values: SequenceABC[RationalLike]
) -> RationalPoly:
    """
    Unique polynomial of degree <= len(nodes)-1 through (nodes[i], values[i]).

    :param nodes: Pairwise distinct integers
    :param values: Exact values
    :return: Interpolant in monomial form
    :raises DuplicateNodeError: On repeated nodes
    """
    if not nodes:
        return RationalPoly()
    return newton_to_monomial(nodes, divided_differences(nodes, values))


def solve_exact(
    matrix: SequenceABC[SequenceABC[RationalLike]],
    rhs: SequenceABC[RationalLike],
    nodes: list[int] | None = None,
) -> list[Fraction]:
    """
    Solve a square system exactly by fraction-free (Bareiss) elimination.

    Each row is scaled to integers first, so every intermediate entry is an
    integer and every Bareiss division is exact.

    :param matrix: Square coefficient matrix
    :param rhs: Right-hand side
    :param nodes: Node labels reported if the system is singular
    :return: The unique solution
    :raises SingularSystemError: If the matrix is singular
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise DomainError("solve_exact needs a square system", rows=n)

    work: list[list[int]] = []
    for row, b in zip(matrix, rhs):
        entries = [as_rational(v) for v in row] + [as_rational(b)]
        scale = math.lcm(*(e.denominator for e in entries))
        work.append([int(e * scale) for e in entries])

    prev = 1
    for k in range(n):
        pivot = next((i for i in range(k, n) if work[i][k] != 0), None)
        if pivot is None:
            raise SingularSystemError(nodes=nodes)
        if pivot != k:
            work[k], work[pivot] = work[pivot], work[k]
        pk = work[k][k]
        for i in range(k + 1, n):
            ik = work[i][k]
            row_i, row_k = work[i], work[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pk - ik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk

    solution = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(work[i][n])
        for j in range(i + 1, n):
            acc -= work[i][j] * solution[j]
        solution[i] = acc / work[i][i]
    return solution


class Sequence:
    """A finite window f(a0), ..., f(a0+N-1) of exact values at absolute indices."""

    __slots__ = ("_start", "_values", "_all_integer")

    def __init__(self, start: int, values: Iterable[RationalLike]):
        """
        :param start: Absolute index a0 of the first value (>= 0)
        :param values: At least one exact value
        :raises DomainError: On a negative start or an empty window
        """
        if start < 0:
            raise DomainError("sequence start must be nonnegative", start=start)
        vals = tuple(as_rational(v) for v in values)
        if not vals:
            raise DomainError("sequence needs at least one value")
        self._start = start
        self._values = vals
        self._all_integer = all(v.denominator == 1 for v in vals)

    @classmethod
    def from_function(
        cls, func: Callable[[int], RationalLike], start: int, length: int
    ) -> Sequence:
        return cls(start, (func(a) for a in range(start, start + length)))

    @property
    def start(self) -> int:
        return self._start

    @property
    def end(self) -> int:
        """Last index in the window (inclusive)."""
        return self._start + len(self._values) - 1

    @property
    def values(self) -> tuple[Fraction, ...]:
        return self._values

    @property
    def all_integer(self) -> bool:
        return self._all_integer

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, a: int) -> Fraction:
        if not self._start <= a <= self.end:
            raise InsufficientDataError(
                f"index {a} outside window", needed=(a, a), available=(self._start, self.end)
            )
        return self._values[a - self._start]

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return zip(range(self._start, self.end + 1), self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return self._start == other._start and self._values == other._values

    def __hash__(self) -> int:
        return hash((self._start, self._values))

    def __repr__(self) -> str:
        return f"Sequence(start={self._start}, length={len(self)})"

    def covers(self, lo: int, hi: int) -> bool:
        return self._start <= lo and hi <= self.end

    def require(self, lo: int, hi: int, what: str = "operation") -> None:
        """Raise InsufficientDataError unless [lo, hi] lies in the window."""
        if not self.covers(lo, hi):
            raise InsufficientDataError(
                f"{what} needs samples {lo}..{hi}",
                needed=(lo, hi),
                available=(self._start, self.end),
            )

    def slice(self, lo: int, hi: int) -> list[Fraction]:
        """Values at lo..hi inclusive (absolute indices)."""
        self.require(lo, hi, "slice")
        return list(self._values[lo - self._start : hi - self._start + 1])

    def window(self, lo: int, hi: int) -> Sequence:
        return Sequence(lo, self.slice(lo, hi))

    def integer_values(self, lo: int | None = None, hi: int | None = None) -> list[int]:
        """
        Values at lo..hi as Python ints.

        :raises NonIntegralError: At the first proper fraction
        """
        lo = self._start if lo is None else lo
        hi = self.end if hi is None else hi
        out = []
        for offset, v in enumerate(self.slice(lo, hi)):
            if v.denominator != 1:
                raise NonIntegralError(index=lo + offset)
            out.append(v.numerator)
        return out

    def perturbed(self, index: int, delta: RationalLike) -> Sequence:
        """Copy with one sample shifted by delta."""
        self.require(index, index, "perturbation")
        vals = list(self._values)
        vals[index - self._start] += as_rational(delta)
        return Sequence(self._start, vals)
