"""Arithmetic in Z[zeta_p] on the power basis 1, zeta, ..., zeta^(p-2)."""

from __future__ import annotations

import logging
from collections.abc import Iterable

from sympy import isprime

from deltaclass.exact import binomial
from deltaclass.exceptions import CycloDivisionError, DomainError
from deltaclass.logger import get_logger
from deltaclass.models import TraceBody, TraceMismatch
from deltaclass.parallel import GridExecutor, serial_executor


def _require_odd_prime(p: int) -> None:
    if p < 3 or not isprime(p):
        raise DomainError("cyclotomic arithmetic needs an odd prime", p=p)


class CycloElement:
    """
    An element of Z[zeta_p], coefficient i multiplying zeta^i (0 <= i <= p-2).

    Products are taken modulo X^p - 1 and then reduced with
    zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)), which is canonical.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int]):
        _require_odd_prime(p)
        values = [int(c) for c in coeffs]
        if len(values) > p - 1:
            raise DomainError("too many coefficients for the power basis", p=p, given=len(values))
        self.p = p
        self.coeffs: tuple[int, ...] = tuple(values + [0] * (p - 1 - len(values)))

    @classmethod
    def from_int(cls, p: int, c: int) -> CycloElement:
        return cls(p, [c])

    @classmethod
    def one(cls, p: int) -> CycloElement:
        return cls(p, [1])

    @classmethod
    def zeta(cls, p: int, power: int = 1) -> CycloElement:
        """zeta^power for any integer power."""
        return cls._from_cyclic(p, [1 if i == power % p else 0 for i in range(p)])

    @classmethod
    def _from_cyclic(cls, p: int, values: list[int]) -> CycloElement:
        # values has length p (coefficients mod X^p - 1)
        top = values[p - 1]
        return cls(p, [values[i] - top for i in range(p - 1)])

    def _coerce(self, other: CycloElement | int) -> CycloElement:
        if isinstance(other, CycloElement):
            if other.p != self.p:
                raise DomainError("mixing different cyclotomic fields", p=self.p, other=other.p)
            return other
        return CycloElement.from_int(self.p, other)

    def __add__(self, other: CycloElement | int) -> CycloElement:
        other = self._coerce(other)
        return CycloElement(self.p, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycloElement:
        return CycloElement(self.p, (-c for c in self.coeffs))

    def __sub__(self, other: CycloElement | int) -> CycloElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> CycloElement:
        return self._coerce(other) - self

    def __mul__(self, other: CycloElement | int) -> CycloElement:
        if isinstance(other, int):
            return CycloElement(self.p, (c * other for c in self.coeffs))
        other = self._coerce(other)
        p = self.p
        cyclic = [0] * p
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    cyclic[(i + j) % p] += a * b
        return CycloElement._from_cyclic(p, cyclic)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> CycloElement:
        if exponent < 0:
            raise DomainError("only nonnegative powers are integral", exponent=exponent)
        result = CycloElement.one(self.p)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def divide_exact(self, n: int) -> CycloElement:
        """
        Divide by a rational integer.

        :raises CycloDivisionError: If the quotient leaves Z[zeta_p]
        """
        if n == 0:
            raise CycloDivisionError("division by zero")
        if any(c % n for c in self.coeffs):
            raise CycloDivisionError(f"{self} is not divisible by {n}", {"p": self.p})
        return CycloElement(self.p, (c // n for c in self.coeffs))

    def trace(self) -> int:
        """Tr(1) = p-1 and Tr(zeta^i) = -1 for 1 <= i <= p-2."""
        return (self.p - 1) * self.coeffs[0] - sum(self.coeffs[1:])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CycloElement.from_int(self.p, other)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"CycloElement(p={self.p}, coeffs={list(self.coeffs)})"


def cyclo_trace(e: CycloElement) -> int:
    """Field trace of e over Q."""
    return e.trace()


def pp_witness(p: int) -> CycloElement:
    """
    y with (1 - zeta)^(p-1) = p * y.

    :raises CycloDivisionError: If the quotient is not integral
    """
    _require_odd_prime(p)
    one = CycloElement.one(p)
    return ((one - CycloElement.zeta(p)) ** (p - 1)).divide_exact(p)


def trace_identity_sides(p: int, M: int, t: int, convention: str = "full") -> tuple[int, int]:
    """
    Both sides of sum_i zeta^(it) (1 - zeta^i)^M = p * sum_j (-1)^(jp-t) C(M, jp-t).

    With convention "full" the left side runs over i = 0..p-1, i.e. it is
    Tr(zeta^t (1-zeta)^M) + [M = 0]. With "trace" it is the bare field
    trace, which differs from the right side exactly at M = 0.
    """
    _require_odd_prime(p)
    if M < 0:
        raise DomainError("trace identity needs M >= 0", M=M)
    if t <= -p:
        raise DomainError("trace identity needs t > -p", p=p, t=t)
    if convention not in ("full", "trace"):
        raise DomainError(f"unknown trace convention {convention!r}")

    one = CycloElement.one(p)
    lhs = (CycloElement.zeta(p, t) * (one - CycloElement.zeta(p)) ** M).trace()
    if convention == "full" and M == 0:
        lhs += 1

    j_lo = max(0, -(-t // p))
    j_hi = (M + t) // p
    rhs = p * sum((-1) ** (j * p - t) * binomial(M, j * p - t) for j in range(j_lo, j_hi + 1))
    return lhs, rhs


def trace_identity_check(p: int, M: int, t: int, convention: str = "full") -> bool:
    lhs, rhs = trace_identity_sides(p, M, t, convention)
    return lhs == rhs


def trace_divisibility_check(p: int, M: int, y: CycloElement) -> bool:
    """p divides Tr((1 - zeta)^M y) for M >= 1 and y in Z[zeta_p]."""
    if M < 1:
        raise DomainError("divisibility of traces needs M >= 1", M=M)
    one = CycloElement.one(p)
    return ((one - CycloElement.zeta(p)) ** M * y).trace() % p == 0


def _trace_cell(cell: tuple[int, int, str]) -> list[TraceMismatch]:
    p, M, convention = cell
    mismatches = []
    for t in range(-p + 1, M + 1):
        lhs, rhs = trace_identity_sides(p, M, t, convention)
        if lhs != rhs:
            mismatches.append(TraceMismatch(p=p, M=M, t=t, lhs=str(lhs), rhs=str(rhs)))
    return mismatches


def _pp_cell(p: int) -> bool:
    try:
        y = pp_witness(p)
    except CycloDivisionError:
        return False
    one = CycloElement.one(p)
    return y * p == (one - CycloElement.zeta(p)) ** (p - 1)


def verify_trace_grid(
    primes: list[int],
    m_max: int,
    pp_primes: list[int],
    convention: str = "full",
    executor: GridExecutor | None = None,
    logger: logging.Logger | None = None,
) -> TraceBody:
    """
    Check the trace identity on every (p, M, t) with 0 <= M <= m_max and
    -p < t <= M, and the (1 - zeta)^(p-1) = p y witness for each prime in pp_primes.
    """
    logger = logger or get_logger()
    executor = executor or serial_executor(logger)
    for p in list(primes) + list(pp_primes):
        _require_odd_prime(p)

    cells = [(p, M, convention) for p in primes for M in range(m_max + 1)]
    mismatches = [m for chunk in executor.map(_trace_cell, cells, "trace grid") for m in chunk]
    checked = sum(M + p for p, M, _ in cells)
    pp_ok = executor.map(_pp_cell, list(pp_primes), "pp witnesses")
    pp_failures = [p for p, ok in zip(pp_primes, pp_ok) if not ok]

    for m in mismatches:
        logger.warning(f"trace identity fails at p={m.p}, M={m.M}, t={m.t}: {m.lhs} != {m.rhs}")
    logger.info(
        f"trace grid: {checked} cells, {len(mismatches)} mismatches, "
        f"{len(pp_failures)} non-integral witnesses"
    )
    return TraceBody(
        primes=list(primes),
        m_max=m_max,
        convention=convention,
        cells=checked,
        mismatches=mismatches,
        pp_primes=list(pp_primes),
        pp_failures=pp_failures,
    )
