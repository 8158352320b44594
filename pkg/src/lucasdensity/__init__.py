"""Exact Dirichlet densities for rank-of-apparition divisibility in Lucas sequences."""

from .density import (
    REFERENCE_PROFILES,
    REFERENCE_ROWS,
    DensityResult,
    Interval,
    STerm,
    dispatch,
    s_eval,
    series_oracle,
)
from .errors import (
    CaseError,
    DegenerateError,
    DiscMismatchError,
    DivisionByZeroError,
    HypothesisError,
    LimitError,
    LucasDensityError,
    OracleMismatchError,
    PrecisionExhaustedError,
    ReducibleError,
    ShapeError,
    TorsionError,
    UnreachableCaseError,
    ZeroParameterError,
)
from .lucasrank import (
    EmpiricalReport,
    SpfTable,
    empirical_density,
    rank,
    spf_sieve,
)
from .quadfield import (
    QuadElem,
    SequenceContext,
    gamma_from_radicand,
    make_context,
    power_index,
)

__version__ = "0.1.0"

__all__ = [
    "CaseError",
    "DegenerateError",
    "DensityResult",
    "DiscMismatchError",
    "DivisionByZeroError",
    "EmpiricalReport",
    "HypothesisError",
    "Interval",
    "LimitError",
    "LucasDensityError",
    "OracleMismatchError",
    "PrecisionExhaustedError",
    "QuadElem",
    "REFERENCE_PROFILES",
    "REFERENCE_ROWS",
    "ReducibleError",
    "STerm",
    "SequenceContext",
    "ShapeError",
    "SpfTable",
    "TorsionError",
    "UnreachableCaseError",
    "ZeroParameterError",
    "__version__",
    "dispatch",
    "empirical_density",
    "gamma_from_radicand",
    "make_context",
    "power_index",
    "rank",
    "s_eval",
    "series_oracle",
    "spf_sieve",
]
