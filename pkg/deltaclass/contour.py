"""Arclength integrals over the major arc |z| = 2n and the segment Re z = -s.

I(n, s, mu) integrates n! 2^|z| / prod_{k<=n} |z-k| * |(z-2n)/n|^mu over the
arc z = 2n e^(i theta), |theta| <= arccos(-s/(2n)). J(n, s, mu) integrates
n! / prod_{k<=n} |z-k| * |(z-2n)/n|^mu over z = -s + iy, |y| <= sqrt(4n^2 - s^2).
Both integrands are symmetric under conjugation, so the upper half is
integrated and doubled. The mu-independent factor is evaluated in log space
and cached per node, since the same nodes recur for every mu.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from deltaclass.config import QuadratureConfig
from deltaclass.exceptions import DomainError
from deltaclass.logger import get_logger
from deltaclass.models import IntegralBody, IntegralCell
from deltaclass.parallel import GridExecutor, serial_executor

# Panels the adaptive rule integrates separately
QUAD_PANELS = 8


@dataclass
class HighPrecisionValue:
    """Midpoint with an error radius; comparisons use the outward end."""

    mid: mp.mpf
    rad: mp.mpf

    @property
    def upper(self) -> mp.mpf:
        return self.mid + self.rad

    @property
    def lower(self) -> mp.mpf:
        return self.mid - self.rad

    def __str__(self) -> str:
        return f"{mp.nstr(self.mid, 15)} +/- {mp.nstr(self.rad, 3)}"


def _check_domain(n: int, s: int, mu: int) -> None:
    if n < 4 or s < 2 or 2 * s > n or mu < 0 or mu > s:
        raise DomainError("contour integrals need n >= 4, 2 <= s <= n/2, 0 <= mu <= s", n=n, s=s, mu=mu)


def arc_limit(n: int, s: int):
    """Half-angle of the major arc: arccos(-s / (2n))."""
    return mp.acos(mp.mpf(-s) / (2 * n))


def segment_limit(n: int, s: int):
    """Half-height of the segment: sqrt(4n^2 - s^2)."""
    return mp.sqrt(4 * n * n - s * s)


class _Integrand:
    """mu-dependent integrand built on a cached log-space base factor."""

    def __init__(self, n: int, point: Callable, log_prefactor, speed):
        self.n = n
        self.point = point
        self.log_prefactor = log_prefactor
        self.speed = speed
        self._base: dict = {}

    def base(self, t):
        cached = self._base.get(t)
        if cached is None:
            z = self.point(t)
            log_prod = mp.fsum(mp.log(abs(z - k)) for k in range(self.n + 1))
            cached = (z, mp.exp(self.log_prefactor - log_prod) * self.speed)
            self._base[t] = cached
        return cached

    def __call__(self, t, mu: int):
        z, value = self.base(t)
        if mu:
            value = value * (abs(z - 2 * self.n) / self.n) ** mu
        return value


def _arc_integrand(n: int) -> _Integrand:
    radius = 2 * n
    return _Integrand(
        n,
        lambda theta: radius * mp.expj(theta),
        mp.log(mp.factorial(n)) + radius * mp.log(2),
        radius,
    )


def _segment_integrand(n: int, s: int) -> _Integrand:
    return _Integrand(n, lambda y: mp.mpc(-s, y), mp.log(mp.factorial(n)), 1)


def _adaptive(integrand: _Integrand, limit, mu: int, tolerance: float) -> HighPrecisionValue:
    panels = [limit * i / QUAD_PANELS for i in range(QUAD_PANELS + 1)]
    value, error = mp.quad(lambda t: integrand(t, mu), panels, error=True)
    value, error = 2 * value, 2 * abs(error)
    # never claim more than the requested tolerance
    return HighPrecisionValue(value, max(error, abs(value) * mp.mpf(tolerance) / 100))


def quad_I(n: int, s: int, mu: int, precision: int = 60, tolerance: float = 1e-6) -> HighPrecisionValue:
    """Adaptive quadrature of I over the major arc."""
    _check_domain(n, s, mu)
    with mp.workdps(precision):
        return _adaptive(_arc_integrand(n), arc_limit(n, s), mu, tolerance)


def quad_J(n: int, s: int, mu: int, precision: int = 60, tolerance: float = 1e-6) -> HighPrecisionValue:
    """Adaptive quadrature of J over the vertical segment."""
    _check_domain(n, s, mu)
    with mp.workdps(precision):
        return _adaptive(_segment_integrand(n, s), segment_limit(n, s), mu, tolerance)


def _simpson(values: np.ndarray, h: float) -> float:
    weights = np.ones(len(values))
    weights[1:-1:2] = 4
    weights[2:-1:2] = 2
    return float(h / 3 * np.dot(weights, values))


def _log_product(z: np.ndarray, n: int) -> np.ndarray:
    return sum(np.log(np.abs(z - k)) for k in range(n + 1))


def simpson_I(n: int, s: int, mu: int, nodes: int = 100_000) -> float:
    """Fixed-step Simpson cross-check of I in float64; nodes must be even."""
    _check_domain(n, s, mu)
    limit = math.acos(-s / (2 * n))
    theta = np.linspace(0.0, limit, nodes + 1)
    z = 2 * n * np.exp(1j * theta)
    log_f = math.lgamma(n + 1) + 2 * n * math.log(2) - _log_product(z, n)
    f = np.exp(log_f) * (np.abs(z - 2 * n) / n) ** mu * (2 * n)
    return 2 * _simpson(f, limit / nodes)


def simpson_J(n: int, s: int, mu: int, nodes: int = 100_000) -> float:
    """Fixed-step Simpson cross-check of J in float64; nodes must be even."""
    _check_domain(n, s, mu)
    limit = math.sqrt(4 * n * n - s * s)
    y = np.linspace(0.0, limit, nodes + 1)
    z = -s + 1j * y
    log_f = math.lgamma(n + 1) - _log_product(z, n)
    f = np.exp(log_f) * (np.abs(z - 2 * n) / n) ** mu
    return 2 * _simpson(f, limit / nodes)


def bound_exponent(kind: str, s: int, mu: int):
    """I is bounded by d(bs/n)^(mu/2), J by d(bs/n)^(s-1)."""
    return mp.mpf(mu) / 2 if kind == "I" else mp.mpf(s - 1)


def _integral_cell(cell: tuple[int, int, str, list[int], QuadratureConfig]) -> list[IntegralCell]:
    n, s, kind, mus, config = cell
    out = []
    with mp.workdps(config.precision):
        if kind == "I":
            integrand, limit = _arc_integrand(n), arc_limit(n, s)
        else:
            integrand, limit = _segment_integrand(n, s), segment_limit(n, s)
        for mu in mus:
            value = _adaptive(integrand, limit, mu, config.tolerance)
            exponent = bound_exponent(kind, s, mu)
            scale = mp.mpf(config.b) * s / n
            bound = config.d * scale**exponent
            ratio = value.upper / bound
            if kind == "I":
                simpson = simpson_I(n, s, mu, config.simpson_nodes)
            else:
                simpson = simpson_J(n, s, mu, config.simpson_nodes)
            agreement = abs(value.mid - simpson) <= config.agreement * abs(value.mid)
            min_d = value.upper / scale**exponent
            min_b = None
            if exponent > 0:
                min_b = mp.nstr((value.upper / config.d) ** (1 / exponent) * n / s, 8)
            out.append(
                IntegralCell(
                    n=n,
                    s=s,
                    mu=mu,
                    kind=kind,
                    value=mp.nstr(value.mid, 15),
                    radius=mp.nstr(value.rad, 3),
                    bound=mp.nstr(bound, 15),
                    ratio=mp.nstr(ratio, 8),
                    passed=bool(value.upper * (1 + mp.mpf(config.margin)) < bound),
                    simpson=f"{simpson:.12e}",
                    agreement=bool(agreement),
                    min_b=min_b,
                    min_d=mp.nstr(min_d, 8),
                )
            )
    return out


def verify_integral_bounds(
    n_values: list[int],
    config: QuadratureConfig | None = None,
    executor: GridExecutor | None = None,
    logger: logging.Logger | None = None,
) -> IntegralBody:
    """
    Check both integral bounds on every admissible (n, s, mu).

    s runs over 2..n/2 and mu over 0..min(s, mu_max). A cell passes when
    value * (1 + margin) < bound; the smallest working b (d fixed) and d
    (b fixed) are reported alongside.

    :raises DomainError: If some n < 4
    """
    config = config or QuadratureConfig()
    logger = logger or get_logger()
    executor = executor or serial_executor(logger)
    for n in n_values:
        if n < 4:
            raise DomainError("contour integrals need n >= 4", n=n)

    cells = []
    for n in n_values:
        for s in range(2, n // 2 + 1):
            mu_top = s if config.mu_max is None else min(s, config.mu_max)
            mus = list(range(mu_top + 1))
            cells.append((n, s, "I", mus, config))
            cells.append((n, s, "J", mus, config))
    results = [c for chunk in executor.map(_integral_cell, cells, "integral bounds") for c in chunk]

    for c in results:
        if not c.passed or not c.agreement:
            logger.warning(
                f"integral {c.kind}(n={c.n}, s={c.s}, mu={c.mu}): value {c.value}, "
                f"bound {c.bound}, quadratures agree={c.agreement}"
            )
    logger.info(f"integral bounds: {sum(c.passed for c in results)}/{len(results)} cells pass")
    return IntegralBody(
        b=config.b, d=config.d, tolerance=config.tolerance, margin=config.margin, cells=results
    )
