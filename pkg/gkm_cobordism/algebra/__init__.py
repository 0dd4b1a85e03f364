"""
Algebra layer: truncated series over the Lazard ring, formal group laws,
and the equivariant coefficient ring S(T)_Q with its localization.
"""

from .coeff_series import (
    LAZARD_GENERATORS,
    LazardCoefficient,
    TruncatedSeries,
    compose_univariate,
    compositional_inverse,
    divide_exact,
    lazard_generator,
    lazard_ring,
    lazard_to_json,
    lazard_to_text,
    reciprocal,
    series_ring,
    substitute,
)
from .fgl import (
    DEFAULT_LAW,
    LAW_REGISTRY,
    FormalGroupLaw,
    Specialization,
    additive_law,
    build_law,
    multiplicative_law,
    parse_law,
    specialize,
    universal_law,
)
from .torus_ring import (
    Character,
    ClearResult,
    LocalizedElement,
    ReductionReport,
    TorusRing,
    parse_rational,
)

__all__ = [
    "Character",
    "ClearResult",
    "DEFAULT_LAW",
    "FormalGroupLaw",
    "LAW_REGISTRY",
    "LAZARD_GENERATORS",
    "LazardCoefficient",
    "LocalizedElement",
    "ReductionReport",
    "Specialization",
    "TorusRing",
    "TruncatedSeries",
    "additive_law",
    "build_law",
    "compose_univariate",
    "compositional_inverse",
    "divide_exact",
    "lazard_generator",
    "lazard_ring",
    "lazard_to_json",
    "lazard_to_text",
    "multiplicative_law",
    "parse_law",
    "parse_rational",
    "reciprocal",
    "series_ring",
    "specialize",
    "substitute",
    "universal_law",
]
