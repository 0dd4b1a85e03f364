"""
gkm_cobordism: rational T-equivariant algebraic cobordism, computed.

Truncated power series over the rationalized Lazard ring, the universal
formal group law and its specializations, and GKM-style descriptions of
equivariant cobordism for flag varieties and smooth horospherical
varieties of Picard number one.

.. rubric:: Usage

::

    from gkm_cobordism import PasquierTriple, TorusRing, build_gkm, parse_law

    datum = build_gkm(PasquierTriple(family=3, n=2, m=2))
    ring = TorusRing(datum.rank, parse_law("universal", order=8))
"""

from ._config import DEFAULT_ORDER, RunConfig, config_from_env
from .algebra import (
    Character,
    FormalGroupLaw,
    LocalizedElement,
    TorusRing,
    TruncatedSeries,
    parse_law,
)
from .errors import (
    CobordismError,
    ConfigError,
    CongruenceError,
    InvalidDatumError,
    NotDivisibleError,
    TruncationError,
    UnresolvedSurfaceKindError,
    VariableCountError,
)
from .geometry import (
    CobordismTuple,
    GkmDatum,
    PasquierTriple,
    build_gkm,
    check_membership,
    congruence_system,
)

__version__ = "0.1.0"

__all__ = [
    "Character",
    "CobordismError",
    "CobordismTuple",
    "ConfigError",
    "CongruenceError",
    "DEFAULT_ORDER",
    "FormalGroupLaw",
    "GkmDatum",
    "InvalidDatumError",
    "LocalizedElement",
    "NotDivisibleError",
    "PasquierTriple",
    "RunConfig",
    "TorusRing",
    "TruncatedSeries",
    "TruncationError",
    "UnresolvedSurfaceKindError",
    "VariableCountError",
    "build_gkm",
    "check_membership",
    "config_from_env",
    "congruence_system",
    "parse_law",
]
