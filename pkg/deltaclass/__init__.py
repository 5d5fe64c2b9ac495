"""
Difference-calculus classification of integer sequences

Decides whether a finite integer sequence is a polynomial or a
P1(x) + P2(x) * 2^x exp-polynomial from the vanishing pattern of its mixed
differences, tests k-concordance over a window, and audits the exact and
numerical estimates those decisions rest on.

MIT License
"""

from deltaclass.classify import (
    ClassificationReport,
    ExpPolyForm,
    Verdict,
    classify,
    eval_expoly,
    expoly_fit,
    polya_reconstruct,
    vanishing_scan,
)
from deltaclass.concordance import (
    ConcordanceVerdict,
    concordance_scan,
    int_interpolable,
)
from deltaclass.config import (
    ClassifyConfig,
    ConcordanceConfig,
    ParallelConfig,
    QuadratureConfig,
)
from deltaclass.cyclotomic import CycloElement
from deltaclass.diffcalc import (
    MixedDiffQuery,
    forward_diff,
    iterated_diff,
    mixed_diff,
    shifted_diff,
)
from deltaclass.exact import RationalPoly, Sequence
from deltaclass.exceptions import (
    ConfigError,
    CycloDivisionError,
    DeltaclassError,
    DomainError,
    DuplicateNodeError,
    IndexGapError,
    InsufficientDataError,
    NonIntegralError,
    ReconstructionError,
    ReportIOError,
    SequenceParseError,
    SingularSystemError,
)
from deltaclass.logger import get_logger
from deltaclass.models import Report, RunConfig

__version__ = "0.1.0"

__all__ = [
    # Sequences and polynomials
    "Sequence",
    "RationalPoly",
    "ExpPolyForm",
    "CycloElement",
    # Difference calculus
    "MixedDiffQuery",
    "forward_diff",
    "iterated_diff",
    "shifted_diff",
    "mixed_diff",
    # Classification
    "Verdict",
    "ClassificationReport",
    "classify",
    "eval_expoly",
    "expoly_fit",
    "polya_reconstruct",
    "vanishing_scan",
    # Concordance
    "ConcordanceVerdict",
    "concordance_scan",
    "int_interpolable",
    # Configuration
    "ClassifyConfig",
    "ConcordanceConfig",
    "QuadratureConfig",
    "ParallelConfig",
    "RunConfig",
    "Report",
    # Exceptions
    "DeltaclassError",
    "InsufficientDataError",
    "DomainError",
    "DuplicateNodeError",
    "SingularSystemError",
    "NonIntegralError",
    "CycloDivisionError",
    "ReconstructionError",
    "SequenceParseError",
    "IndexGapError",
    "ConfigError",
    "ReportIOError",
    # Logger
    "get_logger",
]
