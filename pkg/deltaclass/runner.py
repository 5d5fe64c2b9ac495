"""Pipeline drivers: every command turns a RunConfig into a Report."""

from __future__ import annotations

import importlib
import json
import logging
from pathlib import Path

from pydantic import ValidationError
from sympy import primerange

from deltaclass import analytic, concordance, contour, cyclotomic
from deltaclass.classify import ExpPolyForm, form_from_strings
from deltaclass.config import ClassifyConfig, ConcordanceConfig, ParallelConfig, QuadratureConfig
from deltaclass.exact import RationalLike, RationalPoly, Sequence, as_rational
from deltaclass.exceptions import ConfigError, DeltaclassError, ReportIOError
from deltaclass.formats import emit, ingest, write_atomic
from deltaclass.logger import get_logger
from deltaclass.models import CongruenceBody, DecayAuditBody, ErrorAuditBody, Report, RunConfig
from deltaclass.parallel import GridExecutor

# The package re-exports the classify() function under the submodule name
classify_mod = importlib.import_module("deltaclass.classify")

# Grids used when a verify command is given no explicit ranges
DEFAULT_TRACE_PRIMES = [3, 5, 7, 11, 13]
DEFAULT_INTEGRAL_N = [4, 8, 16, 32, 64]
DEFAULT_ERROR_K = [2, 3, 4]
DEFAULT_DECAY_K = [20, 100]
DEFAULT_POLY_DECAY = [("2", 1), ("3", 2), ("5", 2)]


def _default(value: int | None, fallback: int) -> int:
    return fallback if value is None else value


def generate(
    form: ExpPolyForm | RationalPoly,
    start: int,
    length: int,
    perturbation: tuple[int, RationalLike] | None = None,
) -> Sequence:
    """
    Synthesize a form on start..start+length-1, optionally shifting one sample.

    :param form: Exp-polynomial, or a plain polynomial
    :param perturbation: (index, delta) applied to a single sample
    """
    if length < 1:
        raise ConfigError("generated sequences need length >= 1", {"length": length})
    if isinstance(form, RationalPoly):
        form = ExpPolyForm(form)
    s = form.synthesize(start, length)
    if perturbation is not None:
        index, delta = perturbation
        s = s.perturbed(index, as_rational(delta))
    return s


class Runner:
    def __init__(
        self,
        config: RunConfig,
        logger: logging.Logger | None = None,
        parallel: ParallelConfig | None = None,
    ):
        """
        Run one command.

        :param config: Run configuration, embedded verbatim in the report
        :param logger: Logger instance (optional, will use default if not provided)
        :param parallel: Worker-pool configuration; config.workers wins when set
        """
        self.config = config
        self.logger = logger or get_logger()
        parallel = parallel or ParallelConfig()
        if config.workers is not None:
            parallel = ParallelConfig(workers=config.workers, chunksize=parallel.chunksize)
        self.executor = GridExecutor(parallel, self.logger)

    def close(self) -> None:
        self.executor.close()

    def __enter__(self):
        """Context manager entry."""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit."""
        self.close()

    def _sequence(self) -> Sequence:
        if not self.config.input_path:
            raise ConfigError(f"{self.config.command} needs an input sequence")
        return ingest(self.config.input_path, self.config.input_format)

    def _report(self, body, violations: int, conclusive: bool = True) -> Report:
        return Report(
            kind=self.config.command,
            config=self.config,
            clean=violations == 0 and conclusive,
            violations=violations,
            body=body.model_dump(mode="json"),
        )

    def run(self) -> Report:
        """Dispatch on config.command."""
        command = self.config.command
        self.logger.debug(f"running {command}")
        if command == "classify":
            return self.run_classify()
        if command == "concord":
            return self.run_concordance()
        if command.startswith("verify-"):
            return self.run_verify()
        raise ConfigError(f"{command} does not produce a report")

    def run_classify(self) -> Report:
        cfg = self.config
        report = classify_mod.classify(
            self._sequence(),
            ClassifyConfig(K=cfg.K, cut=cfg.cut, require_integer=cfg.require_integer),
            self.executor,
            self.logger,
        )
        return self._report(report.to_body(), 0, report.conclusive)

    def run_concordance(self) -> Report:
        cfg = self.config
        if cfg.k is None:
            raise ConfigError("concord needs --k")
        s = self._sequence()
        lo = s.start if cfg.lo is None else cfg.lo
        hi = s.end if cfg.hi is None else cfg.hi
        verdict = concordance.concordance_scan(
            s,
            cfg.k,
            lo,
            hi,
            ConcordanceConfig(samples=cfg.samples, seed=cfg.seed, exhaustive=cfg.exhaustive),
            self.logger,
        )
        body = CongruenceBody(concordance=verdict.to_body())

        # the divisibility consequences only bind concordant windows
        if verdict.holds and cfg.k >= 1:
            violations = []
            for p in cfg.primes or []:
                top = hi - cfg.k * p
                if cfg.a_max is not None:
                    top = min(top, cfg.a_max)
                a_range = range(lo, top + 1)
                violations += concordance.delta_congruence_check(s, cfg.k, p, a_range)
                body.delta_checked += len(a_range)
            if cfg.n_max is not None:
                top = hi - cfg.n_max
                if cfg.a_max is not None:
                    top = min(top, cfg.a_max)
                a_range = range(lo, top + 1)
                violations += concordance.gap_check(s, cfg.k, range(cfg.n_max + 1), a_range)
                body.gap_checked += len(a_range) * (cfg.n_max + 1)
                body.gap_bounds = concordance.gap_bounds(cfg.k, cfg.n_max)
            body.violations = [v.to_record() for v in violations]
            for v in violations:
                self.logger.warning(f"{v.check} violation at a={v.a}, n={v.n}: {v.value} mod {v.divisor}")
        return self._report(body, len(body.violations), verdict.holds)

    def run_verify(self) -> Report:
        cfg = self.config
        kind = cfg.command.removeprefix("verify-")
        if kind == "cmain":
            body = concordance.verify_cmain_grid(
                _default(cfg.p_max, 31), _default(cfg.k_max, 5), _default(cfg.ell_max, 8),
                self.executor, self.logger,
            )
            return self._report(body, len(body.violations))
        if kind == "trace":
            primes = cfg.primes or DEFAULT_TRACE_PRIMES
            pp_primes = list(primerange(3, _default(cfg.p_max, 31) + 1))
            body = cyclotomic.verify_trace_grid(
                primes, _default(cfg.m_max, 25), pp_primes, cfg.convention,
                executor=self.executor, logger=self.logger,
            )
            return self._report(body, len(body.mismatches) + len(body.pp_failures))
        if kind == "gpoly":
            body = analytic.verify_gpoly_grid(_default(cfg.a_max, 10), self.executor, self.logger)
            return self._report(body, sum(not c.passed for c in body.cells))
        if kind == "integral":
            quad = QuadratureConfig(
                precision=cfg.precision, simpson_nodes=cfg.simpson_nodes, mu_max=_default(cfg.mu_max, 8)
            )
            body = contour.verify_integral_bounds(
                cfg.n_values or DEFAULT_INTEGRAL_N, quad, self.executor, self.logger
            )
            return self._report(body, sum(not (c.passed and c.agreement) for c in body.cells))
        if kind == "error":
            return self._verify_error()
        if kind == "decay":
            return self._verify_decay()
        raise ConfigError(f"unknown verification {kind!r}")

    def _verify_error(self) -> Report:
        cfg = self.config
        bodies = [
            analytic.error_chain_check(K, _default(cfg.a_max, 10), cfg.precision, self.logger)
            for K in cfg.K_values or DEFAULT_ERROR_K
        ]
        violations = sum(not b.chain_valid or b.cutoff is None for b in bodies)
        return self._report(ErrorAuditBody(chains=bodies), violations)

    def _verify_decay(self) -> Report:
        cfg = self.config
        exp_bodies = [
            analytic.decay_exppoly(
                K, _default(cfg.a_max, 8), precision=cfg.precision,
                executor=self.executor, logger=self.logger,
            )
            for K in cfg.K_values or DEFAULT_DECAY_K
        ]
        cases = [(cfg.base, _default(cfg.k, 1))] if cfg.base else DEFAULT_POLY_DECAY
        poly_bodies = [
            analytic.decay_poly(C, k, precision=cfg.precision, logger=self.logger)
            for C, k in cases
        ]
        violations = sum(not b.matches for b in exp_bodies)
        violations += sum(b.below_threshold and not (b.holds and b.table_ok) for b in poly_bodies)
        return self._report(
            DecayAuditBody(exponential=exp_bodies, polynomial=poly_bodies), violations
        )

    def generate(self) -> Sequence:
        cfg = self.config
        if cfg.start is None or cfg.length is None:
            raise ConfigError("gen needs --start and --length")
        perturbation = None
        if cfg.perturb_index is not None:
            perturbation = (cfg.perturb_index, cfg.perturb_delta or "1")
        try:
            form = form_from_strings(cfg.p1 or [], cfg.p2 or [])
        except DeltaclassError as e:
            raise ConfigError(f"bad coefficient: {e}") from e
        return generate(form, cfg.start, cfg.length, perturbation)

    def write(self, text: str) -> None:
        """Write text to config.output_path atomically (no-op without a path)."""
        if self.config.output_path:
            write_atomic(self.config.output_path, text)


def execute(config: RunConfig, logger: logging.Logger | None = None) -> tuple[Report | None, str]:
    """
    Run a config and return its report (None for gen) with the canonical text.
    """
    with Runner(config, logger) as runner:
        if config.command == "gen":
            fmt = config.input_format or (
                "json" if config.output_path and config.output_path.endswith(".json") else "bfile"
            )
            return None, emit(runner.generate(), fmt)
        report = runner.run()
        return report, report.dumps()


def load_report(path: str | Path) -> tuple[Report, str]:
    """
    Read a report written by a previous run.

    :return: The parsed report and its exact text
    :raises ReportIOError: If the file is unreadable or not a report
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
        return Report.model_validate(json.loads(text)), text
    except OSError as e:
        raise ReportIOError(f"cannot read report: {e}", path=str(path)) from e
    except (ValueError, ValidationError) as e:
        raise ReportIOError(f"not a report: {e}", path=str(path)) from e


def replay(path: str | Path, logger: logging.Logger | None = None) -> tuple[bool, Report, str]:
    """
    Re-run the config embedded in a report.

    :return: (byte-identical, fresh report, fresh text)
    """
    original, text = load_report(path)
    report, fresh = execute(original.config, logger)
    if report is None:
        raise ConfigError("gen output is a sequence, not a replayable report")
    return fresh == text, report, fresh
