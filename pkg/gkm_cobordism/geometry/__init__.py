"""
Geometry layer: GKM data and their congruences, root systems and flag
varieties, horospherical varieties of Picard number one, and equivariant
multiplicities at fixed points.
"""

from .gkm_model import (
    CobordismTuple,
    CongruenceConstraint,
    ConstraintResult,
    Edge,
    GkmDatum,
    MembershipCertificate,
    SurfaceComponent,
    SurfaceDecomposition,
    canonical_constraints,
    check_membership,
    congruence_system,
    parse_surface_kind,
    reconstruct,
    surface_datum,
    surface_decompose,
    surface_generators,
)
from .horospherical import (
    PasquierTriple,
    ScanReport,
    build_gkm,
    chi,
    point_positions,
    surface_scan,
)
from .multiplicities import (
    SingularPullback,
    TangentData,
    euler_factor,
    fiber_multiplicity,
    ig25_datasets,
    load_ig25_dataset,
    load_tangent_data,
    point_class,
    point_classes,
    singular_class_pullback,
    smooth_multiplicity,
    subvariety_class,
)
from .root_flag import (
    Coset,
    Curve,
    RootSystem,
    curve_degree,
    enumerate_curves,
    enumerate_fixed_points,
    parse_cartan_type,
    parse_parabolic,
    root_system,
)

__all__ = [
    "CobordismTuple",
    "CongruenceConstraint",
    "ConstraintResult",
    "Coset",
    "Curve",
    "Edge",
    "GkmDatum",
    "MembershipCertificate",
    "PasquierTriple",
    "RootSystem",
    "ScanReport",
    "SingularPullback",
    "SurfaceComponent",
    "SurfaceDecomposition",
    "TangentData",
    "build_gkm",
    "canonical_constraints",
    "check_membership",
    "chi",
    "congruence_system",
    "curve_degree",
    "enumerate_curves",
    "enumerate_fixed_points",
    "euler_factor",
    "fiber_multiplicity",
    "ig25_datasets",
    "load_ig25_dataset",
    "load_tangent_data",
    "parse_cartan_type",
    "parse_parabolic",
    "parse_surface_kind",
    "point_class",
    "point_classes",
    "point_positions",
    "reconstruct",
    "root_system",
    "singular_class_pullback",
    "smooth_multiplicity",
    "subvariety_class",
    "surface_datum",
    "surface_decompose",
    "surface_generators",
    "surface_scan",
]
