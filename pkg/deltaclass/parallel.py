"""Worker-pool execution of independent verification cells."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import Any, TypeVar

from deltaclass.config import ParallelConfig
from deltaclass.logger import get_logger

Cell = TypeVar("Cell")
Result = TypeVar("Result")


class GridExecutor:
    """Map a picklable cell function over a grid; results come back in input order."""

    def __init__(
        self,
        config: ParallelConfig | None = None,
        logger: logging.Logger | None = None,
    ):
        """
        Initialize grid executor.

        :param config: Parallelism configuration
        :param logger: Logger instance (optional, will use default if not provided)
        """
        self.config = config or ParallelConfig()
        self.logger = logger or get_logger()
        self._pool: Executor | None = None

    @property
    def workers(self) -> int:
        return self.config.resolved_workers()

    def _get_pool(self) -> Executor:
        if self._pool is None:
            self.logger.debug(f"Starting worker pool with {self.workers} processes")
            self._pool = ProcessPoolExecutor(max_workers=self.workers)
        return self._pool

    def map(
        self,
        func: Callable[[Cell], Result],
        cells: Sequence[Cell],
        operation_name: str = "grid",
    ) -> list[Result]:
        """
        Evaluate func on every cell.

        Runs serially for one worker or a single cell; otherwise fans out to
        the process pool. Either way the output order matches ``cells``.

        :param func: Module-level (picklable) cell function
        :param cells: Cells to evaluate
        :param operation_name: Name of the operation (for logging)
        :return: One result per cell, in order
        """
        if not cells:
            return []
        if self.workers <= 1 or len(cells) == 1:
            self.logger.debug(f"{operation_name}: {len(cells)} cells, serial")
            return [func(cell) for cell in cells]

        self.logger.debug(
            f"{operation_name}: {len(cells)} cells on {self.workers} workers"
        )
        pool = self._get_pool()
        return list(pool.map(func, cells, chunksize=self.config.chunksize))

    def close(self) -> None:
        """Shut the worker pool down."""
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        """Context manager entry."""
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any):
        """Context manager exit."""
        self.close()


def serial_executor(logger: logging.Logger | None = None) -> GridExecutor:
    """A GridExecutor that never spawns processes."""
    return GridExecutor(ParallelConfig(workers=1), logger)
