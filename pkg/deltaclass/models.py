"""Pydantic models for deltaclass run configurations and reports.

Exact integers and rationals travel as decimal strings ("num/den" or plain
integers); high-precision reals as decimal strings at the working precision.
"""

from __future__ import annotations

import json
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from deltaclass.config import env_precision

Command = Literal[
    "classify",
    "concord",
    "gen",
    "verify-cmain",
    "verify-trace",
    "verify-gpoly",
    "verify-integral",
    "verify-error",
    "verify-decay",
]


class RunConfig(BaseModel):
    """Everything needed to reproduce a run; embedded in every report."""

    model_config = ConfigDict(extra="forbid")

    command: Command = Field(..., description="Pipeline that produced the report")
    input_path: str | None = Field(None, description="Sequence file")
    input_format: Literal["bfile", "json"] | None = Field(
        None, description="Sequence file format"
    )
    output_path: str | None = Field(None, description="Report destination")
    strict: bool = Field(False, description="Inconclusive verdicts count as violations")

    # classify
    K: int = Field(2, description="Window ratio of the vanishing condition")
    cut: int | None = Field(None, description="Explicit cut B")
    require_integer: bool = Field(False, description="Reject non-integer samples")

    # concord
    k: int | None = Field(None, description="Concordance level")
    lo: int | None = Field(None, description="Window start")
    hi: int | None = Field(None, description="Window end")
    seed: int = Field(0, description="Seed for sampling modes")
    samples: int = Field(2000, description="Subsets drawn in sampling mode")
    exhaustive: bool = Field(False, description="Never sample")
    primes: list[int] | None = Field(None, description="Primes for congruence checks")
    n_max: int | None = Field(None, description="Largest difference order checked")
    a_max: int | None = Field(None, description="Largest evaluation point checked")

    # verify grids
    p_max: int | None = Field(None, description="Largest prime in a grid")
    k_max: int | None = Field(None, description="Largest k in a grid")
    ell_max: int | None = Field(None, description="Largest exponent in a grid")
    m_max: int | None = Field(None, description="Largest M in the trace grid")
    convention: Literal["full", "trace"] = Field("full", description="Left side of the trace identity")
    n_values: list[int] | None = Field(None, description="Contour radii n")
    mu_max: int | None = Field(None, description="Cap on mu")
    K_values: list[int] | None = Field(None, description="K values for audits")
    base: str | None = Field(None, description="Base C of the polynomial decay audit")
    precision: int = Field(default_factory=env_precision, description="Significant digits")
    simpson_nodes: int = Field(100_000, description="Fixed-step cross-check nodes")
    workers: int | None = Field(None, description="Worker processes (output-neutral)")

    # gen
    p1: list[str] | None = Field(None, description="Coefficients of P1")
    p2: list[str] | None = Field(None, description="Coefficients of P2")
    start: int | None = Field(None, description="First generated index")
    length: int | None = Field(None, description="Generated samples")
    perturb_index: int | None = Field(None, description="Perturbed sample index")
    perturb_delta: str | None = Field(None, description="Perturbation amount")


class FailureRecord(BaseModel):
    """A failing scan cell (n set) or a pointwise mismatch (n unset)."""

    a: int
    n: int | None = None
    residual: str


class ClassificationBody(BaseModel):
    verdict: Literal["polynomial", "expoly", "inconclusive"]
    polynomial: list[str] | None = None
    p1: list[str] | None = None
    p2: list[str] | None = None
    verified_from: int | None = None
    verified_to: int | None = None
    K_used: int
    cut: int | None = None
    integral_coefficients: bool | None = None
    reason: str | None = None
    failures: list[FailureRecord] = Field(default_factory=list)


class CounterexampleRecord(BaseModel):
    nodes: list[int]
    values: list[str]
    coefficients: list[str] | None = Field(
        None, description="Non-integral interpolant; None for conflicting duplicates"
    )


class ConcordanceBody(BaseModel):
    k: int
    window: list[int]
    holds: bool
    mode: Literal["exhaustive", "sampled"]
    tested: int
    counterexample: CounterexampleRecord | None = None


class ViolationRecord(BaseModel):
    """A congruence or divisibility cell that failed."""

    check: str
    a: int
    n: int
    p: int | None = None
    value: str
    divisor: str


class GapBoundRow(BaseModel):
    """log of the primorial divisor for Delta^n, next to the growth bound gamma_k n."""

    n: int
    theta_sum: str
    gamma_n: str


class CongruenceBody(BaseModel):
    concordance: ConcordanceBody | None = None
    delta_checked: int = 0
    gap_checked: int = 0
    violations: list[ViolationRecord] = Field(default_factory=list)
    gap_bounds: list[GapBoundRow] = Field(default_factory=list)


class CmainViolation(BaseModel):
    p: int
    k: int
    i: int | None = Field(None, description="Unset for the first family")
    ell: int
    value: str


class CmainBody(BaseModel):
    primes: list[int]
    k_max: int
    ell_max: int
    cells: int
    falling_checked: int = 0
    violations: list[CmainViolation] = Field(default_factory=list)


class TraceMismatch(BaseModel):
    p: int
    M: int
    t: int
    lhs: str
    rhs: str


class TraceBody(BaseModel):
    primes: list[int]
    m_max: int
    convention: Literal["full", "trace"]
    cells: int
    mismatches: list[TraceMismatch] = Field(default_factory=list)
    pp_primes: list[int] = Field(default_factory=list)
    pp_failures: list[int] = Field(default_factory=list)


class GPolyCell(BaseModel):
    a: int
    nonzero_terms: int
    vanishing_violations: list[list[int]] = Field(default_factory=list)
    bound_violations: list[list[int]] = Field(default_factory=list)
    max_ratio: str = Field(..., description="max |A| / (6^a a^nu), exact")
    passed: bool


class GPolyBody(BaseModel):
    cells: list[GPolyCell]


class IntegralCell(BaseModel):
    n: int
    s: int
    mu: int
    kind: Literal["I", "J"]
    value: str
    radius: str
    bound: str
    ratio: str = Field(..., description="value / bound")
    passed: bool
    simpson: str
    agreement: bool
    min_b: str | None = Field(None, description="Smallest b that works with d fixed")
    min_d: str = Field(..., description="Smallest d that works with b fixed")


class IntegralBody(BaseModel):
    b: int
    d: int
    tolerance: float
    margin: float
    cells: list[IntegralCell]


class ErrorChainRow(BaseModel):
    a: int
    max_value: str
    below_half: bool


class ErrorChainBody(BaseModel):
    K: int
    chain_factor: list[str] = Field(..., description="Enclosure of (3/2)(2/e)^K")
    chain_valid: bool
    cutoff: int | None = Field(None, description="Smallest a from which all rows are < 1/2")
    rows: list[ErrorChainRow]


class DecayCell(BaseModel):
    a: int
    n: int
    closed_form: str
    table: str
    relative_error: str
    matches: bool


class DecayBody(BaseModel):
    K: int
    base: str
    cells: list[DecayCell]
    c_star: str | None = None
    decays: bool
    matches: bool


class PolyDecayBody(BaseModel):
    C: str
    k: int
    threshold: list[str] = Field(..., description="Enclosure of e^gamma_k + 1")
    below_threshold: bool
    holds: bool
    margin: str | None = None
    c_star: str | None = None
    table_ok: bool


class ErrorAuditBody(BaseModel):
    chains: list[ErrorChainBody]


class DecayAuditBody(BaseModel):
    exponential: list[DecayBody]
    polynomial: list[PolyDecayBody]


class Report(BaseModel):
    """Envelope written by every CLI pipeline."""

    model_config = ConfigDict(extra="forbid")

    kind: str
    config: RunConfig
    clean: bool = Field(..., description="No violations and no Inconclusive verdicts")
    violations: int = 0
    body: dict[str, Any]

    def dumps(self) -> str:
        """Canonical JSON: sorted keys, two-space indent, trailing newline."""
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


class SequenceDocument(BaseModel):
    """Structured sequence file: first index plus exact values as strings."""

    model_config = ConfigDict(extra="forbid")

    start: int = Field(..., ge=0, description="Absolute index of the first value")
    values: list[int | str] = Field(..., min_length=1, description="Integers or num/den rationals")
