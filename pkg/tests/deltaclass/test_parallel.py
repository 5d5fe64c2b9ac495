"""Tests for grid execution."""

import logging
import math

import pytest

from deltaclass.config import ParallelConfig
from deltaclass.exceptions import ConfigError
from deltaclass.parallel import GridExecutor, serial_executor


@pytest.fixture
def logger():
    """Create test logger."""
    return logging.getLogger("test")


class TestGridExecutor:
    """Test ordered evaluation of cells."""

    def test_serial(self, logger):
        """Test a single-worker map."""
        executor = serial_executor(logger)
        assert executor.workers == 1
        assert executor.map(math.factorial, [3, 0, 5]) == [6, 1, 120]

    def test_empty(self, logger):
        """Test that no cells means no work."""
        assert serial_executor(logger).map(math.factorial, []) == []

    def test_pool_preserves_order(self, logger):
        """Test that a process pool returns results in input order."""
        cells = list(range(30, 0, -1))
        with GridExecutor(ParallelConfig(workers=2, chunksize=4), logger) as executor:
            assert executor.map(math.factorial, cells) == [math.factorial(c) for c in cells]
        assert executor._pool is None

    def test_close_without_pool(self, logger):
        """Test close before any parallel map."""
        executor = GridExecutor(ParallelConfig(workers=4), logger)
        executor.map(math.factorial, [7])
        executor.close()
        assert executor._pool is None


class TestParallelConfig:
    """Test worker-count resolution."""

    def test_explicit(self):
        """Test a fixed worker count."""
        assert ParallelConfig(workers=3).resolved_workers() == 3

    def test_all_cores(self):
        """Test the None default."""
        assert ParallelConfig(workers=None).resolved_workers() >= 1

    def test_env(self, monkeypatch):
        """Test DELTACLASS_WORKERS."""
        monkeypatch.setenv("DELTACLASS_WORKERS", "5")
        assert ParallelConfig().workers == 5
        monkeypatch.setenv("DELTACLASS_WORKERS", "0")
        with pytest.raises(ConfigError):
            ParallelConfig()
        monkeypatch.setenv("DELTACLASS_WORKERS", "many")
        with pytest.raises(ConfigError):
            ParallelConfig()
