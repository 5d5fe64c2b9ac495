"""Configuration dataclasses for deltaclass runs."""

import os
from dataclasses import dataclass, field

from deltaclass.exceptions import ConfigError

# K at which the vanishing argument closes unconditionally; far too large for short windows
LARGE_K = 100_000

DEFAULT_PRECISION = 60


def env_precision() -> int:
    """Working precision in significant digits, from DELTACLASS_PRECISION."""
    raw = os.getenv("DELTACLASS_PRECISION")
    if not raw:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"DELTACLASS_PRECISION must be an integer, got {raw!r}") from e
    if value < 15:
        raise ConfigError("DELTACLASS_PRECISION must be at least 15 digits")
    return value


def env_workers() -> int | None:
    """Worker count from DELTACLASS_WORKERS; None means all cores."""
    raw = os.getenv("DELTACLASS_WORKERS")
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"DELTACLASS_WORKERS must be an integer, got {raw!r}") from e
    if value < 1:
        raise ConfigError("DELTACLASS_WORKERS must be positive")
    return value


@dataclass
class ClassifyConfig:
    """Classification pipeline parameters."""

    K: int = 2  # Window ratio of the vanishing condition Ka <= n <= K(a+1)
    cut: int | None = None  # Explicit cut B; None auto-selects
    require_integer: bool = False  # Non-integer samples force Inconclusive
    polya_min_tail: int = 2  # Vanishing higher differences Polya needs to see

    def __post_init__(self):
        if self.K < 2:
            raise ConfigError("K must be at least 2", {"K": self.K})
        if self.cut is not None and self.cut < 0:
            raise ConfigError("cut must be nonnegative", {"cut": self.cut})
        if self.polya_min_tail < 1:
            raise ConfigError("polya_min_tail must be positive")


@dataclass
class ConcordanceConfig:
    """Concordance scan parameters."""

    sample_threshold: int = 40  # Windows wider than this are sampled
    samples: int = 2000  # Subsets drawn in sampling mode
    seed: int = 0  # Seed for sampling mode
    exhaustive: bool = False  # Force exhaustive enumeration on wide windows

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError("samples must be positive")


@dataclass
class QuadratureConfig:
    """Contour-integral audit parameters."""

    precision: int = field(default_factory=env_precision)  # Significant digits
    tolerance: float = 1e-6  # Relative tolerance of the adaptive rule
    margin: float = 1e-3  # value * (1 + margin) must stay below the bound
    b: int = 100  # Bound constant b
    d: int = 100  # Bound constant d
    simpson_nodes: int = 100_000  # Fixed-step cross-check resolution
    agreement: float = 1e-4  # Required relative agreement of the two rules
    mu_max: int | None = 8  # Cap on mu; None sweeps mu <= s

    def __post_init__(self):
        if self.precision < 15:
            raise ConfigError("precision must be at least 15 digits")
        if self.simpson_nodes < 2:
            raise ConfigError("simpson_nodes must be at least 2")
        # Simpson needs an even panel count
        if self.simpson_nodes % 2:
            self.simpson_nodes += 1


@dataclass
class ParallelConfig:
    """Worker-pool configuration for verification grids."""

    workers: int | None = field(default_factory=env_workers)  # None: all cores
    chunksize: int = 1  # Cells handed to a worker at a time

    def resolved_workers(self) -> int:
        """Worker count with the all-cores default applied."""
        if self.workers is not None:
            return self.workers
        return os.cpu_count() or 1
