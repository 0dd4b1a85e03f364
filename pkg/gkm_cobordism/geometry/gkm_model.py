"""
GKM data and the congruence description of equivariant cobordism.

A :class:`GkmDatum` lists the T-fixed points of a variety, the weighted
T-stable curves joining them and the two-dimensional components of
X^{Ker(α)⁰} (projective planes and Hirzebruch surfaces).  A family
(f_x) of series indexed by the fixed points lies in the image of the
restriction map iff it satisfies

  - f_a ≡ f_b            mod c(χ)    along every curve of weight χ,
  - (f_x − f_y) + ρ_{1/2}c(α)·(f_z − f_x) ≡ 0          mod c(α)²   on ℙ²,
  - f_w − f_x − f_y + f_z ≡ 0                          mod c(α)²   on F_0,
  - ρ_{n/2}c(α)·(f_y − f_z) + ρ_{−n/2}c(α)·(f_w − f_x) ≡ 0   mod c(α)² on F_n,

where x ≥ y ≥ z (resp. w ≥ x ≥ y ≥ z) are ordered by their weights.
The module also carries the generator tables of the single surfaces and
the triangular decomposition of a member tuple against them.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from ..algebra.coeff_series import TruncatedSeries
from ..algebra.torus_ring import Character, TorusRing, parse_rational
from ..errors import CongruenceError, InvalidDatumError

logger = logging.getLogger(__name__)

SURFACE_KINDS = ("P2", "F0", "Fn")
P2_MODELS = ("V01", "V2")
CONSTRAINT_KINDS = ("edge", "p2", "f0", "fn")

_ROLES = {
    "P2": ("x", "y", "z"),
    "F0": ("w", "x", "y", "z"),
    "Fn": ("w", "x", "y", "z"),
}

# Curves inside a surface that carry an explicit congruence mod c(α);
# the remaining pairs follow by transitivity.
_INTERNAL_PAIRS = {
    "P2": (("x", "y"), ("y", "z")),
    "F0": (("w", "x"), ("w", "y"), ("x", "z"), ("y", "z")),
    "Fn": (("w", "x"), ("x", "y"), ("y", "z")),
}


# ── Datum ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Edge:
    """A T-stable curve between two fixed points."""

    a: str
    b: str
    weight: Character

    @property
    def key(self) -> tuple[str, str]:
        return tuple(sorted((self.a, self.b)))

    def to_json(self) -> dict:
        a, b = self.key
        return {"a": a, "b": b, "weight": self.weight.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "Edge":
        try:
            return cls(str(data["a"]), str(data["b"]), Character.from_json(data["weight"]))
        except KeyError as exc:
            raise InvalidDatumError(f"edge entry is missing {exc}") from exc


_KIND_RE = re.compile(r"^(P2)(?::(V01|V2))?$|^F(\d+)$|^Fn:(\d+)$")


def parse_surface_kind(text: str) -> tuple[str, int, str]:
    """``"P2:V2"``, ``"P2"``, ``"F0"``, ``"F3"`` → (kind, n, model)."""
    match = _KIND_RE.match((text or "").strip())
    if not match:
        raise InvalidDatumError(
            f"unknown surface kind {text!r}; expected P2, P2:V01, P2:V2, F0 or F<n>"
        )
    if match.group(1):
        return "P2", 0, match.group(2) or "V01"
    n = int(match.group(3) if match.group(3) is not None else match.group(4))
    return ("F0", 0, "V01") if n == 0 else ("Fn", n, "V01")


@dataclass(frozen=True)
class SurfaceComponent:
    """A ℙ², F_0 or F_n component, points stored in decreasing weight order.

    ``n`` is the Hirzebruch index (F_n only); ``model`` tells the two
    ℙ² generator tables apart: ``V01`` for weights spaced by α/2, ``V2``
    for weights spaced by α.
    """

    kind: str
    points: tuple[str, ...]
    alpha: Character
    n: int = 0
    model: str = "V01"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.kind not in SURFACE_KINDS:
            raise InvalidDatumError(f"unknown surface kind {self.kind!r}")
        expected = len(_ROLES[self.kind])
        if len(self.points) != expected:
            raise InvalidDatumError(
                f"{self.kind} component needs {expected} points, got {len(self.points)}"
            )
        if len(set(self.points)) != expected:
            raise InvalidDatumError(f"{self.kind} component repeats a point: {self.points}")
        if self.alpha.is_zero():
            raise InvalidDatumError("surface component with zero root")
        if self.kind == "Fn" and self.n < 1:
            raise InvalidDatumError(f"F_n needs n >= 1, got {self.n}")
        if self.kind == "P2" and self.model not in P2_MODELS:
            raise InvalidDatumError(f"unknown ℙ² model {self.model!r}")

    @property
    def label(self) -> str:
        if self.kind == "P2":
            return f"P2:{self.model}"
        if self.kind == "F0":
            return "F0"
        return f"F{self.n}"

    @property
    def roles(self) -> dict[str, str]:
        return dict(zip(_ROLES[self.kind], self.points))

    def internal_pairs(self) -> tuple[tuple[str, str], ...]:
        roles = self.roles
        return tuple((roles[a], roles[b]) for a, b in _INTERNAL_PAIRS[self.kind])

    def to_json(self) -> dict:
        data = {"kind": self.kind, "points": list(self.points), "alpha": self.alpha.to_json()}
        if self.kind == "Fn":
            data["n"] = self.n
        if self.kind == "P2":
            data["model"] = self.model
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "SurfaceComponent":
        try:
            return cls(
                kind=str(data["kind"]),
                points=tuple(str(p) for p in data["points"]),
                alpha=Character.from_json(data["alpha"]),
                n=int(data.get("n", 0)),
                model=str(data.get("model", "V01")),
            )
        except KeyError as exc:
            raise InvalidDatumError(f"surface entry is missing {exc}") from exc


@dataclass(frozen=True)
class GkmDatum:
    """Fixed points, weighted curves and surface components of a T-variety.

    ``ordering`` is the covector λ used to order points by weight;
    ``positions`` optionally maps each point to its moment weight so that
    the stored order of every surface component can be checked.
    """

    rank: int
    points: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    surfaces: tuple[SurfaceComponent, ...] = ()
    ordering: Optional[tuple[Fraction, ...]] = None
    positions: Mapping[str, Character] = field(default_factory=dict)

    def validate(self) -> "GkmDatum":
        names = set(self.points)
        if len(names) != len(self.points):
            raise InvalidDatumError("duplicate fixed-point names")
        if any(not p for p in self.points):
            raise InvalidDatumError("empty fixed-point name")
        for edge in self.edges:
            if edge.a not in names or edge.b not in names:
                raise InvalidDatumError(f"edge {edge.a}–{edge.b} references an unknown point")
            if edge.a == edge.b:
                raise InvalidDatumError(f"edge {edge.a}–{edge.b} is a loop")
            if edge.weight.rank != self.rank:
                raise InvalidDatumError(f"edge {edge.a}–{edge.b} has a weight of rank {edge.weight.rank}")
            if edge.weight.is_zero():
                raise InvalidDatumError(f"edge {edge.a}–{edge.b} has zero weight")
        for surface in self.surfaces:
            missing = [p for p in surface.points if p not in names]
            if missing:
                raise InvalidDatumError(f"{surface.label} component references unknown points {missing}")
            if surface.alpha.rank != self.rank:
                raise InvalidDatumError(f"{surface.label} component root has rank {surface.alpha.rank}")
        for name, position in self.positions.items():
            if name not in names:
                raise InvalidDatumError(f"position given for unknown point {name!r}")
            if position.rank != self.rank:
                raise InvalidDatumError(f"position of {name!r} has rank {position.rank}")
        if self.ordering is not None:
            if len(self.ordering) != self.rank:
                raise InvalidDatumError(f"ordering covector has length {len(self.ordering)}, expected {self.rank}")
            for surface in self.surfaces:
                self._check_surface_order(surface)
        return self

    def level(self, point: str) -> Fraction:
        """⟨λ, position⟩ of a point."""
        return self.positions[point].dot(self.ordering)

    def _check_surface_order(self, surface: SurfaceComponent) -> None:
        if not all(p in self.positions for p in surface.points):
            return
        roles = {role: self.level(p) for role, p in surface.roles.items()}
        if surface.kind == "F0":
            chains = [("w", "x"), ("w", "y"), ("x", "z"), ("y", "z")]
        else:
            keys = list(roles)
            chains = list(zip(keys, keys[1:]))
        for upper, lower in chains:
            if not roles[upper] > roles[lower]:
                raise InvalidDatumError(
                    f"{surface.label} component {surface.points}: {upper} is not strictly above {lower} under λ"
                )

    def neighbours(self, point: str) -> list[str]:
        out = set()
        for edge in self.edges:
            if edge.a == point:
                out.add(edge.b)
            elif edge.b == point:
                out.add(edge.a)
        return sorted(out)

    # ── Serialization ─────────────────────────────────────────────────

    def to_json(self) -> dict:
        data = {
            "rank": self.rank,
            "points": sorted(self.points),
            "edges": sorted((e.to_json() for e in self.edges), key=lambda e: (e["a"], e["b"])),
            "surfaces": sorted((s.to_json() for s in self.surfaces), key=lambda s: s["points"]),
        }
        if self.ordering is not None:
            data["lambda"] = [str(c) for c in self.ordering]
        if self.positions:
            data["positions"] = {p: self.positions[p].to_json() for p in sorted(self.positions)}
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "GkmDatum":
        try:
            rank = int(data["rank"])
            points = tuple(str(p) for p in data["points"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDatumError(f"datum needs integer 'rank' and a 'points' list: {exc}") from exc
        ordering = data.get("lambda")
        datum = cls(
            rank=rank,
            points=points,
            edges=tuple(Edge.from_json(e) for e in data.get("edges", ())),
            surfaces=tuple(SurfaceComponent.from_json(s) for s in data.get("surfaces", ())),
            ordering=None if ordering is None else tuple(parse_rational(c) for c in ordering),
            positions={str(k): Character.from_json(v) for k, v in data.get("positions", {}).items()},
        )
        return datum.validate()


# ── Tuples ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CobordismTuple:
    """A family (f_x) of series indexed by fixed-point names."""

    values: Mapping[str, TruncatedSeries]

    def __getitem__(self, point: str) -> TruncatedSeries:
        try:
            return self.values[point]
        except KeyError:
            raise InvalidDatumError(f"tuple has no value at {point!r}") from None

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(sorted(self.values))

    @property
    def order(self) -> int:
        return min(v.order for v in self.values.values())

    @property
    def rank(self) -> int:
        return next(iter(self.values.values())).rank

    @classmethod
    def constant(cls, points: Iterable[str], value: TruncatedSeries) -> "CobordismTuple":
        return cls({p: value for p in points})

    def require_points(self, points: Iterable[str]) -> None:
        expected = set(points)
        have = set(self.values)
        if have != expected:
            missing = sorted(expected - have)
            extra = sorted(have - expected)
            raise InvalidDatumError(f"tuple point set mismatch: missing {missing}, unexpected {extra}")

    def scaled(self, factor: TruncatedSeries) -> "CobordismTuple":
        return CobordismTuple({p: v * factor for p, v in self.values.items()})

    def __add__(self, other: "CobordismTuple") -> "CobordismTuple":
        other.require_points(self.values)
        return CobordismTuple({p: v + other.values[p] for p, v in self.values.items()})

    def __sub__(self, other: "CobordismTuple") -> "CobordismTuple":
        other.require_points(self.values)
        return CobordismTuple({p: v - other.values[p] for p, v in self.values.items()})

    def agrees_with(self, other: "CobordismTuple", order: int) -> bool:
        other.require_points(self.values)
        return all(v.agrees_with(other.values[p], order) for p, v in self.values.items())

    def to_json(self) -> dict:
        return {p: self.values[p].to_json() for p in sorted(self.values)}

    @classmethod
    def from_json(cls, data: Mapping) -> "CobordismTuple":
        if not data:
            raise InvalidDatumError("empty tuple")
        return cls({str(p): TruncatedSeries.from_json(v) for p, v in data.items()})


# ── Constraints ───────────────────────────────────────────────────────

@dataclass(frozen=True)
class RhoFactor:
    """ρ_q applied to c(χ)."""

    q: Fraction
    character: Character

    def to_text(self) -> str:
        return f"rho({self.q}, {self.character.to_text()})"

    def evaluate(self, ring: TorusRing, order: int) -> TruncatedSeries:
        return ring.rho(self.q.numerator, self.q.denominator, self.character, order)


@dataclass(frozen=True)
class Term:
    """±(∏ factors)·f[point]."""

    sign: int
    point: str
    factors: tuple[RhoFactor, ...] = ()

    def to_text(self) -> str:
        prefix = "".join(f"{factor.to_text()}*" for factor in self.factors)
        return f"{prefix}f[{self.point}]"


@dataclass(frozen=True)
class CongruenceConstraint:
    """Σ terms ≡ 0 mod c(χ)^power."""

    kind: str
    points: tuple[str, ...]
    character: Character
    power: int
    terms: tuple[Term, ...]

    @property
    def modulus(self) -> Character:
        """Primitive generator of the same ideal."""
        return self.character.primitive()[1]

    @property
    def sort_key(self) -> tuple:
        return CONSTRAINT_KINDS.index(self.kind), self.points

    def expression(self) -> str:
        parts = []
        for i, term in enumerate(self.terms):
            if i == 0:
                parts.append(("-" if term.sign < 0 else "") + term.to_text())
            else:
                parts.append((" - " if term.sign < 0 else " + ") + term.to_text())
        return "".join(parts)

    def to_text(self) -> str:
        power = "" if self.power == 1 else f"^{self.power}"
        return f"{self.expression()} ≡ 0 mod c({self.modulus.to_text()}){power}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "points": list(self.points),
            "modulus": self.modulus.to_json(),
            "power": self.power,
            "expression": self.expression(),
        }

    def evaluate(self, f: CobordismTuple, ring: TorusRing, order: Optional[int] = None) -> TruncatedSeries:
        order = f.order if order is None else order
        total = ring.zero(order)
        for term in self.terms:
            value = f[term.point]
            for factor in term.factors:
                value = value * factor.evaluate(ring, order)
            total = total + value if term.sign > 0 else total - value
        return total


def _edge_constraint(a: str, b: str, weight: Character) -> CongruenceConstraint:
    a, b = sorted((a, b))
    return CongruenceConstraint("edge", (a, b), weight, 1, (Term(1, a), Term(-1, b)))


def _surface_constraint(surface: SurfaceComponent) -> CongruenceConstraint:
    r = surface.roles
    alpha = surface.alpha
    if surface.kind == "P2":
        half = (RhoFactor(Fraction(1, 2), alpha),)
        terms = (Term(1, r["x"]), Term(-1, r["y"]), Term(1, r["z"], half), Term(-1, r["x"], half))
        kind = "p2"
    elif surface.kind == "F0":
        terms = (Term(1, r["w"]), Term(-1, r["x"]), Term(-1, r["y"]), Term(1, r["z"]))
        kind = "f0"
    else:
        up = (RhoFactor(Fraction(surface.n, 2), alpha),)
        down = (RhoFactor(Fraction(-surface.n, 2), alpha),)
        terms = (Term(1, r["y"], up), Term(-1, r["z"], up), Term(1, r["w"], down), Term(-1, r["x"], down))
        kind = "fn"
    return CongruenceConstraint(kind, surface.points, alpha, 2, terms)


def congruence_system(datum: GkmDatum) -> list[CongruenceConstraint]:
    """Every congruence the datum imposes, in canonical order.

    Curves inside a surface component whose weight is a multiple of the
    component's root are covered by the component's own edge congruences
    and are not repeated.
    """
    datum.validate()
    constraints: list[CongruenceConstraint] = []
    covered: dict[frozenset, Character] = {}
    for surface in datum.surfaces:
        for a, b in surface.internal_pairs():
            key = frozenset((a, b))
            if key not in covered:
                covered[key] = surface.alpha
                constraints.append(_edge_constraint(a, b, surface.alpha))
        constraints.append(_surface_constraint(surface))
    inside = {}
    for surface in datum.surfaces:
        members = surface.points
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                inside.setdefault(frozenset((a, b)), surface.alpha)
    seen = set()
    for edge in datum.edges:
        key = frozenset((edge.a, edge.b))
        alpha = inside.get(key)
        if alpha is not None and edge.weight.is_proportional(alpha):
            continue
        if (key, edge.weight.primitive()[1]) in seen:
            continue
        seen.add((key, edge.weight.primitive()[1]))
        constraints.append(_edge_constraint(edge.a, edge.b, edge.weight))
    constraints.sort(key=lambda c: c.sort_key)
    logger.debug("Congruence system: %d constraints", len(constraints))
    return constraints


def canonical_constraints(constraints: Sequence[CongruenceConstraint]) -> list[dict]:
    """JSON form with primitive moduli, sorted by (kind, points)."""
    return [c.to_json() for c in sorted(constraints, key=lambda c: c.sort_key)]


# ── Membership ────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ConstraintResult:
    index: int
    constraint: CongruenceConstraint
    passed: bool
    remainder: Optional[TruncatedSeries]
    certified_order: int

    def to_json(self) -> dict:
        data = {"id": self.index, **self.constraint.to_json()}
        data["status"] = "pass" if self.passed else "fail"
        data["remainder"] = None if self.remainder is None else self.remainder.to_json()
        data["certified_order"] = self.certified_order
        return data


@dataclass(frozen=True)
class MembershipCertificate:
    """Per-constraint verdicts of a membership check."""

    law: str
    order: int
    results: tuple[ConstraintResult, ...]

    @property
    def is_member(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[ConstraintResult]:
        return [r for r in self.results if not r.passed]

    @property
    def certified_order(self) -> int:
        return min((r.certified_order for r in self.results), default=self.order)

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "order": self.order,
            "member": self.is_member,
            "certified_order": self.certified_order,
            "constraints": [r.to_json() for r in self.results],
        }

    def to_text(self) -> str:
        lines = [
            f"member: {'yes' if self.is_member else 'no'} "
            f"({len(self.results) - len(self.failures)}/{len(self.results)} constraints hold, "
            f"law {self.law}, certified through order {self.certified_order})"
        ]
        for r in self.failures:
            lines.append(f"  FAIL #{r.index}: {r.constraint.to_text()}")
            if r.remainder is not None:
                lines.append(f"      remainder: {r.remainder.to_text()}")
        return "\n".join(lines)


def check_membership(datum: GkmDatum, f: CobordismTuple, ring: TorusRing) -> MembershipCertificate:
    """Evaluate every congruence of *datum* on *f*."""
    f.require_points(datum.points)
    order = f.order
    results = []
    for index, constraint in enumerate(congruence_system(datum)):
        value = constraint.evaluate(f, ring, order)
        report = ring.reduce_mod(value, constraint.character, constraint.power)
        remainder = next((c for c in report.components if not c.is_zero()), None)
        if not report.divisible:
            logger.warning("Constraint #%d fails: %s", index, constraint.to_text())
        results.append(ConstraintResult(index, constraint, report.divisible, remainder, report.certified_order))
    certificate = MembershipCertificate(ring.law.name, order, tuple(results))
    logger.info(
        "Membership check: %d/%d constraints hold",
        len(results) - len(certificate.failures), len(results),
    )
    return certificate


# ── Surface generators ────────────────────────────────────────────────

# Each generator: (name, {role: multiples q of α in ∏ c(qα), None for 0}, pivot role).
# The tables are triangular: a generator vanishes at the pivots listed before it.

def _generator_table(surface: SurfaceComponent) -> list[tuple[str, dict, str]]:
    half = Fraction(1, 2)
    if surface.kind == "P2":
        step = half if surface.model == "V01" else Fraction(1)
        return [
            ("unit", {"x": (), "y": (), "z": ()}, "x"),
            ("line", {"x": None, "y": (step,), "z": (2 * step,)}, "y"),
            ("point", {"x": None, "y": None, "z": (step, 2 * step)}, "z"),
        ]
    if surface.kind == "F0":
        return [
            ("unit", {"w": (), "x": (), "y": (), "z": ()}, "z"),
            ("wx", {"w": (-1,), "x": (-1,), "y": None, "z": None}, "x"),
            ("wy", {"w": (-1,), "x": None, "y": (-1,), "z": None}, "y"),
            ("point", {"w": (-1, -1), "x": None, "y": None, "z": None}, "w"),
        ]
    half_n = Fraction(surface.n, 2)
    return [
        ("unit", {"w": (), "x": (), "y": (), "z": ()}, "z"),
        ("xy", {"w": None, "x": (half_n,), "y": (-half_n,), "z": None}, "y"),
        ("wx", {"w": (-1,), "x": (-1,), "y": None, "z": None}, "x"),
        ("point", {"w": (-1, -half_n), "x": None, "y": None, "z": None}, "w"),
    ]


def generator_names(surface: SurfaceComponent) -> list[str]:
    return [name for name, _, _ in _generator_table(surface)]


def _factor_characters(surface: SurfaceComponent, multiples) -> list[Character]:
    return [surface.alpha * q for q in multiples]


def surface_generators(surface: SurfaceComponent, ring: TorusRing,
                       order: Optional[int] = None) -> list[CobordismTuple]:
    """The module generators of a single surface, unit first."""
    order = ring.order if order is None else order
    roles = surface.roles
    generators = []
    for _, entries, _ in _generator_table(surface):
        values = {}
        for role, multiples in entries.items():
            if multiples is None:
                values[roles[role]] = ring.zero(order)
            else:
                values[roles[role]] = ring.chern_product(_factor_characters(surface, multiples), order)
        generators.append(CobordismTuple(values))
    return generators


@dataclass(frozen=True)
class SurfaceDecomposition:
    names: tuple[str, ...]
    coefficients: tuple[TruncatedSeries, ...]

    @property
    def certified_order(self) -> int:
        return min(c.order for c in self.coefficients)

    def to_json(self) -> dict:
        return {
            "certified_order": self.certified_order,
            "coefficients": {n: c.to_json() for n, c in zip(self.names, self.coefficients)},
        }


def surface_datum(surface: SurfaceComponent, rank: int) -> GkmDatum:
    """The datum made of one surface component and nothing else."""
    return GkmDatum(rank=rank, points=surface.points, surfaces=(surface,)).validate()


def surface_decompose(surface: SurfaceComponent, f: CobordismTuple, ring: TorusRing) -> SurfaceDecomposition:
    """Coefficients a_k in S(T) with f = Σ a_k·g_k over the surface generators.

    The tuple must satisfy the component's congruences; the coefficients
    are then obtained one pivot at a time by exact division.
    """
    f.require_points(surface.points)
    certificate = check_membership(surface_datum(surface, ring.rank), f, ring)
    if not certificate.is_member:
        raise CongruenceError(
            f"tuple fails {len(certificate.failures)} congruence(s) of the {surface.label} component",
            failures=certificate.failures,
        )
    order = f.order
    table = _generator_table(surface)
    generators = surface_generators(surface, ring, order)
    roles = surface.roles
    coefficients: list[TruncatedSeries] = []
    for k, (name, entries, pivot) in enumerate(table):
        point = roles[pivot]
        residual = f[point]
        for j in range(k):
            residual = residual - coefficients[j] * generators[j][point]
        for chi in _factor_characters(surface, entries[pivot]):
            residual = ring.divide_by_chern(residual, chi)
        coefficients.append(residual)
    return SurfaceDecomposition(tuple(name for name, _, _ in table), tuple(coefficients))


def reconstruct(surface: SurfaceComponent, decomposition: SurfaceDecomposition, ring: TorusRing) -> CobordismTuple:
    """Σ a_k·g_k."""
    order = decomposition.certified_order
    generators = surface_generators(surface, ring, order)
    total = CobordismTuple.constant(surface.points, ring.zero(order))
    for coefficient, generator in zip(decomposition.coefficients, generators):
        total = total + generator.scaled(coefficient)
    return total
