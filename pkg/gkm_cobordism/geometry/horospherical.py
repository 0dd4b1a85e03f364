"""
GKM data of smooth projective horospherical varieties of Picard number one.

Such a variety X is given by a triple (G, P(ω_Y), P(ω_Z)) from the list

    1. (B_n, ω_{n−1}, ω_n), n >= 3
    2. (B_3, ω_1, ω_3)
    3. (C_n, ω_m, ω_{m−1}), n >= 2, 2 <= m <= n
    4. (F_4, ω_2, ω_3)
    5. (G_2, ω_1, ω_2)

Its T-fixed points are those of the two closed orbits Y = G/P(ω_Y) and
Z = G/P(ω_Z); they are joined by the curves of Y and Z and by one line
y(w)–z(w) of weight wχ per coset, χ = ω_Y − ω_Z.  Surfaces appear only
when a root α is a multiple of χ: then y(w), y(ws_α), z(w), z(ws_α) span
a ℙ² (3 distinct points) or a Hirzebruch surface (4 points).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from ..algebra.torus_ring import Character
from ..errors import CobordismError, InvalidDatumError, UnresolvedSurfaceKindError
from .gkm_model import Edge, GkmDatum, SurfaceComponent, parse_surface_kind
from .root_flag import (
    Coset,
    RootSystem,
    enumerate_curves,
    enumerate_fixed_points,
    maximal_parabolic,
    pairing,
    root_system,
)

logger = logging.getLogger(__name__)

# Surface kinds established for each family; families 2 and 4 are absent
# on purpose and need an explicit override.
SURFACE_KIND_TABLE = {
    3: "P2:V2",
    5: "F3",
}


# ── Triples ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PasquierTriple:
    family: int
    n: Optional[int] = None
    m: Optional[int] = None

    def __post_init__(self):
        family, n, m = self.family, self.n, self.m
        if family == 1:
            if n is None or not 3 <= n <= 5:
                raise CobordismError(f"family 1 needs 3 <= n <= 5, got n={n}")
            if m is not None:
                raise CobordismError("family 1 takes no m")
        elif family == 3:
            if n is None or not 2 <= n <= 5:
                raise CobordismError(f"family 3 needs 2 <= n <= 5, got n={n}")
            if m is None or not 2 <= m <= n:
                raise CobordismError(f"family 3 needs 2 <= m <= n, got m={m}")
        elif family in (2, 4, 5):
            if n is not None or m is not None:
                raise CobordismError(f"family {family} takes no parameters")
        else:
            raise CobordismError(f"unknown family {family}; expected 1..5")

    @property
    def cartan(self) -> tuple[str, int]:
        return {
            1: ("B", self.n),
            2: ("B", 3),
            3: ("C", self.n),
            4: ("F", 4),
            5: ("G", 2),
        }[self.family]

    @property
    def system(self) -> RootSystem:
        return root_system(*self.cartan)

    @property
    def y_index(self) -> int:
        return {1: (self.n or 0) - 1, 2: 1, 3: self.m, 4: 2, 5: 1}[self.family]

    @property
    def z_index(self) -> int:
        return {1: self.n, 2: 3, 3: (self.m or 0) - 1, 4: 3, 5: 2}[self.family]

    @property
    def omega_y(self) -> Character:
        return self.system.fundamental_weight(self.y_index)

    @property
    def omega_z(self) -> Character:
        return self.system.fundamental_weight(self.z_index)

    @property
    def label(self) -> str:
        return f"({self.system.name}, ω{self.y_index}, ω{self.z_index})"


def chi(triple: PasquierTriple) -> Character:
    """χ = ω_Y − ω_Z."""
    return triple.omega_y - triple.omega_z


# ── Surface scan ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class ScanReport:
    triple: PasquierTriple
    chi: Character
    alpha: Optional[Character]
    pairings: Optional[tuple[Fraction, Fraction]]
    point_count: int
    kind: Optional[str]

    @property
    def has_surface(self) -> bool:
        return self.alpha is not None

    @property
    def resolved(self) -> bool:
        return self.alpha is None or self.kind is not None

    def to_json(self) -> dict:
        return {
            "family": self.triple.family,
            "triple": self.triple.label,
            "chi": self.chi.to_json(),
            "alpha": None if self.alpha is None else self.alpha.to_json(),
            "pairings": None if self.pairings is None else [str(p) for p in self.pairings],
            "points": self.point_count,
            "kind": self.kind,
            "resolved": self.resolved,
        }

    def to_text(self) -> str:
        lines = [f"triple: {self.triple.label}", f"chi: {self.chi.to_text()}"]
        if self.alpha is None:
            lines.append("surface: none (no root is a multiple of chi)")
            return "\n".join(lines)
        a, b = self.pairings
        lines.append(f"alpha: {self.alpha.to_text()}")
        lines.append(f"pairings: ({a}, {b})")
        lines.append(f"fixed points per surface: {self.point_count}")
        lines.append(f"kind: {self.kind or 'unresolved'}")
        return "\n".join(lines)


def surface_scan(triple: PasquierTriple) -> ScanReport:
    """Find the positive root proportional to χ, its pairings and the surface kind."""
    system = triple.system
    difference = chi(triple)
    alpha = next((b for b in system.positive_roots if b.is_proportional(difference)), None)
    if alpha is None:
        logger.debug("%s: no root proportional to χ", triple.label)
        return ScanReport(triple, difference, None, None, 0, None)
    a = pairing(alpha, triple.omega_y)
    b = pairing(alpha, triple.omega_z)
    count = (2 if a else 1) + (2 if b else 1)
    kind = SURFACE_KIND_TABLE.get(triple.family)
    if kind is not None:
        expected = 3 if kind.startswith("P2") else 4
        if expected != count:
            raise CobordismError(f"tabulated kind {kind} does not fit {count} fixed points")
    logger.debug("%s: α=%s pairings=(%s, %s) kind=%s", triple.label, alpha.to_text(), a, b, kind)
    return ScanReport(triple, difference, alpha, (a, b), count, kind)


# ── Point naming ──────────────────────────────────────────────────────

def _generic_namer(orbit: str, coset: Coset) -> str:
    return f"{orbit}({coset.label()})"


def _isotropic_namer(n: int) -> Callable[[str, Coset], str]:
    """Names of IG(m, 2n+1): e_i ↔ ε_i (i <= n), e_{n+1} ↔ 0, e_{2n+2−i} ↔ −ε_i."""
    separator = "" if 2 * n + 1 < 10 else "_"

    def namer(orbit: str, coset: Coset) -> str:
        indices = []
        for i, c in enumerate(coset.weight.coords, start=1):
            if c == 1:
                indices.append(i)
            elif c == -1:
                indices.append(2 * n + 2 - i)
            elif c != 0:
                raise InvalidDatumError(f"unexpected weight {coset.weight.to_text()} in type C")
        if orbit == "z":
            indices.append(n + 1)
        return "x" + separator.join(str(i) for i in sorted(indices))

    return namer


def _namer_for(triple: PasquierTriple) -> Callable[[str, Coset], str]:
    if triple.family == 3:
        return _isotropic_namer(triple.n)
    return _generic_namer


@dataclass(frozen=True)
class _Orbits:
    system: RootSystem
    y_parabolic: frozenset
    z_parabolic: frozenset
    y_names: dict
    z_names: dict


def _orbits(triple: PasquierTriple) -> _Orbits:
    system = triple.system
    namer = _namer_for(triple)
    y_parabolic = maximal_parabolic(system, triple.y_index)
    z_parabolic = maximal_parabolic(system, triple.z_index)
    y_names = {c.weight: namer("y", c) for c in enumerate_fixed_points(system, y_parabolic)}
    z_names = {c.weight: namer("z", c) for c in enumerate_fixed_points(system, z_parabolic)}
    if len(set(y_names.values()) | set(z_names.values())) != len(y_names) + len(z_names):
        raise InvalidDatumError(f"{triple.label}: fixed-point names collide")
    return _Orbits(system, y_parabolic, z_parabolic, y_names, z_names)


def point_positions(triple: PasquierTriple) -> dict[str, Character]:
    """y(w) ↦ wω_Y, z(w) ↦ wω_Z."""
    orbits = _orbits(triple)
    positions = {name: weight for weight, name in orbits.y_names.items()}
    positions.update({name: weight for weight, name in orbits.z_names.items()})
    return positions


# ── Builder ───────────────────────────────────────────────────────────

def build_gkm(triple: PasquierTriple, force_kind: Optional[str] = None, *, strict: bool = True) -> GkmDatum:
    """The GKM datum of the horospherical variety of *triple*.

    When a surface exists but its kind is not tabulated (families 2 and 4)
    and no ``force_kind`` is given, the datum is built without surface
    components; with ``strict`` an :class:`UnresolvedSurfaceKindError`
    carrying that datum is raised.
    """
    system = triple.system
    orbits = _orbits(triple)
    omega_y, omega_z = triple.omega_y, triple.omega_z
    ordering = system.rho

    edges: list[Edge] = []
    seen: set[frozenset] = set()

    def add_edge(a: str, b: str, weight: Character) -> None:
        key = frozenset((a, b))
        if key not in seen:
            seen.add(key)
            edges.append(Edge(a, b, weight))

    for names, parabolic in ((orbits.y_names, orbits.y_parabolic), (orbits.z_names, orbits.z_parabolic)):
        for curve in enumerate_curves(system, parabolic):
            add_edge(names[curve.u.weight], names[curve.v.weight], curve.weight)

    joint = enumerate_fixed_points(system, orbits.y_parabolic & orbits.z_parabolic)
    for coset in joint:
        py = system.act(coset.word, omega_y)
        pz = system.act(coset.word, omega_z)
        add_edge(orbits.y_names[py], orbits.z_names[pz], py - pz)

    positions = point_positions(triple)
    report = surface_scan(triple)
    kind = force_kind or report.kind
    if force_kind and not report.has_surface:
        logger.warning("%s has no surface component; ignoring forced kind %s", triple.label, force_kind)
    surfaces: list[SurfaceComponent] = []
    if report.has_surface and kind is not None:
        surfaces = _surface_components(triple, orbits, joint, report, kind, positions, ordering)

    datum = GkmDatum(
        rank=system.dimension,
        points=tuple(sorted(positions)),
        edges=tuple(edges),
        surfaces=tuple(surfaces),
        ordering=ordering.coords,
        positions=positions,
    ).validate()
    logger.info(
        "Built %s: %d points, %d edges, %d surfaces",
        triple.label, len(datum.points), len(datum.edges), len(datum.surfaces),
    )
    if report.has_surface and kind is None and strict:
        a, b = report.pairings
        raise UnresolvedSurfaceKindError(
            f"family {triple.family} {triple.label}: root {report.alpha.to_text()} is proportional to χ "
            f"with pairings ({a}, {b}) and {report.point_count} fixed points per surface, but the "
            f"Hirzebruch index for these pairings is not established; pass a kind override "
            f"(P2:V01, P2:V2, F0 or F<n>)",
            family=triple.family,
            pairings=report.pairings,
            datum=datum,
        )
    return datum


def _surface_components(triple, orbits, joint, report, kind, positions, ordering) -> list[SurfaceComponent]:
    system = orbits.system
    surface_kind, n, model = parse_surface_kind(kind)
    a, b = report.pairings
    components: dict[frozenset, SurfaceComponent] = {}
    for coset in joint:
        py = system.act(coset.word, triple.omega_y)
        pz = system.act(coset.word, triple.omega_z)
        root = system.act(coset.word, report.alpha)
        names = {
            orbits.y_names[py],
            orbits.y_names[py - root * a],
            orbits.z_names[pz],
            orbits.z_names[pz - root * b],
        }
        key = frozenset(names)
        if key in components:
            continue
        ordered = tuple(sorted(names, key=lambda p: positions[p].dot(ordering), reverse=True))
        alpha = root if root.dot(ordering) > 0 else -root
        try:
            components[key] = SurfaceComponent(surface_kind, ordered, alpha, n=n, model=model)
        except InvalidDatumError as exc:
            raise InvalidDatumError(f"{triple.label}: kind {kind} does not fit the surface {ordered}: {exc}") from exc
    return sorted(components.values(), key=lambda s: s.points)
