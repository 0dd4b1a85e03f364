"""
Equivariant multiplicities at nondegenerate fixed points.

At a smooth fixed point y of a subvariety Y with normal (or tangent)
weights χ_1, ..., χ_m the multiplicity is 1 / ∏ c(−χ_i).  Classes of
smooth subvarieties restrict to ∏ c(−χ_i) at their fixed points; a
singular point x of Y is handled through a resolution f: Ỹ → Y, whose
fiber over x contributes Σ_{ỹ ∈ f⁻¹(x)} 1 / ∏ c(−χ) over the tangent
weights at ỹ.

Weight data is declarative: :class:`TangentData` files tagged
``tangent`` (ambient tangent weights), ``normal`` (normal weights of a
subvariety) or ``fiber`` (tangent weights of resolution points over one
fixed point).  The IG(2,5) tables ship under ``datasets/ig25``.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .._resources import get_dataset_path, list_dataset_files
from ..algebra.coeff_series import TruncatedSeries
from ..algebra.torus_ring import Character, ClearResult, LocalizedElement, TorusRing
from ..errors import CobordismError, InvalidDatumError, TruncationError
from .gkm_model import CobordismTuple

logger = logging.getLogger(__name__)

TANGENT_KINDS = ("tangent", "normal", "fiber")


# ── Weight data ───────────────────────────────────────────────────────

@dataclass(frozen=True)
class TangentData:
    """Weights attached to fixed points.

    ``dimension`` (optional) is the declared size of every weight multiset:
    the ambient dimension for ``tangent``, the codimension for ``normal``,
    the resolution's dimension for ``fiber``.  ``over`` names the point a
    fiber lies over.
    """

    kind: str
    rank: int
    weights: Mapping[str, tuple[Character, ...]]
    dimension: Optional[int] = None
    over: Optional[str] = None
    note: str = ""

    def validate(self) -> "TangentData":
        if self.kind not in TANGENT_KINDS:
            raise InvalidDatumError(f"unknown weight data kind {self.kind!r}")
        for point, chars in self.weights.items():
            for chi in chars:
                if chi.rank != self.rank:
                    raise InvalidDatumError(f"weight {chi.to_text()} at {point!r} has rank {chi.rank}")
                if chi.is_zero():
                    raise InvalidDatumError(f"zero weight at {point!r}: the fixed point is degenerate")
            if self.dimension is not None and len(chars) != self.dimension:
                raise InvalidDatumError(
                    f"{point!r} carries {len(chars)} weights, expected {self.dimension}"
                )
        if self.kind == "fiber" and not self.over:
            raise InvalidDatumError("fiber data must name the point it lies over")
        return self

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(sorted(self.weights))

    def at(self, point: str) -> tuple[Character, ...]:
        try:
            return self.weights[point]
        except KeyError:
            raise InvalidDatumError(f"no {self.kind} weights at {point!r}") from None

    def to_json(self) -> dict:
        data = {"kind": self.kind, "rank": self.rank}
        if self.dimension is not None:
            data["dimension"] = self.dimension
        if self.over:
            data["over"] = self.over
        if self.note:
            data["note"] = self.note
        data["weights"] = {p: [c.to_json() for c in self.weights[p]] for p in self.points}
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "TangentData":
        try:
            weights = {
                str(p): tuple(Character.from_json(c) for c in chars)
                for p, chars in data["weights"].items()
            }
            rank = int(data["rank"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDatumError(f"malformed weight data: {exc}") from exc
        dimension = data.get("dimension")
        return cls(
            kind=str(data.get("kind", "tangent")),
            rank=rank,
            weights=weights,
            dimension=None if dimension is None else int(dimension),
            over=data.get("over"),
            note=str(data.get("note", "")),
        ).validate()


def load_tangent_data(path: str) -> TangentData:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidDatumError(f"cannot read weight data {path}: {exc}") from exc
    return TangentData.from_json(data)


def dump_tangent_data(data: TangentData, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data.to_json(), f, indent=2, ensure_ascii=False)
        f.write("\n")


def ig25_datasets() -> list[str]:
    return [name[:-len(".json")] for name in list_dataset_files("ig25")]


def load_ig25_dataset(name: str) -> TangentData:
    """One of the bundled IG(2,5) tables, e.g. ``"tangent"`` or ``"x4_resolution_fiber"``."""
    if name not in ig25_datasets():
        raise InvalidDatumError(f"unknown IG(2,5) dataset {name!r}; available: {', '.join(ig25_datasets())}")
    return load_tangent_data(get_dataset_path("ig25", f"{name}.json"))


# ── Multiplicities and classes ────────────────────────────────────────

def _check_weights(weights: Iterable[Character]) -> list[Character]:
    weights = list(weights)
    for chi in weights:
        if chi.is_zero():
            raise CobordismError("zero weight: the fixed point is degenerate")
    return weights


def smooth_multiplicity(ring: TorusRing, weights: Iterable[Character], order: Optional[int] = None) -> LocalizedElement:
    """1 / ∏ c(−χ)."""
    weights = _check_weights(weights)
    return ring.inverse_chern_product([-chi for chi in weights], order)


def euler_factor(ring: TorusRing, weights: Iterable[Character], order: Optional[int] = None) -> TruncatedSeries:
    """∏ c(−χ), the top Chern class of the normal space."""
    weights = _check_weights(weights)
    return ring.chern_product([-chi for chi in weights], order)


def point_class(ring: TorusRing, point: str, ambient: TangentData, order: Optional[int] = None) -> CobordismTuple:
    """Restriction of [x → X] to the fixed points of X."""
    order = ring.order if order is None else order
    value = euler_factor(ring, ambient.at(point), order)
    return CobordismTuple({p: value if p == point else ring.zero(order) for p in ambient.points})


def point_classes(ring: TorusRing, ambient: TangentData, order: Optional[int] = None) -> dict[str, CobordismTuple]:
    return {p: point_class(ring, p, ambient, order) for p in ambient.points}


def subvariety_class(ring: TorusRing, normal: TangentData, points: Sequence[str],
                     order: Optional[int] = None) -> CobordismTuple:
    """Restriction of [Y → X] for smooth Y with the given normal weights.

    ``points`` is the fixed-point set of X; points of X not carrying
    normal data do not lie on Y and get 0.
    """
    order = ring.order if order is None else order
    unknown = [p for p in normal.points if p not in points]
    if unknown:
        raise InvalidDatumError(f"normal weights given at points outside the ambient: {unknown}")
    return CobordismTuple({
        p: euler_factor(ring, normal.at(p), order) if p in normal.weights else ring.zero(order)
        for p in points
    })


def fiber_multiplicity(ring: TorusRing, fiber: TangentData, order: Optional[int] = None) -> LocalizedElement:
    """Σ over the fiber points of their smooth multiplicities (kept unreduced)."""
    if not fiber.weights:
        raise InvalidDatumError("empty fiber")
    return ring.loc_sum(smooth_multiplicity(ring, fiber.at(p), order) for p in fiber.points)


def denominator_size(fiber: TangentData) -> int:
    """Number of Chern factors in the common denominator of the fiber sum."""
    common: Counter = Counter()
    for p in fiber.points:
        common |= Counter(chi.primitive()[1] for chi in _check_weights(fiber.at(p)))
    return sum(common.values())


@dataclass(frozen=True)
class SingularPullback:
    """e_{x}[Ỹ → Y] · i_x^*[x → X] and its series representative."""

    point: str
    localized: LocalizedElement
    cleared: ClearResult
    order: int

    @property
    def ok(self) -> bool:
        return self.cleared.ok

    @property
    def series(self):
        if not self.ok:
            return None
        return self.cleared.series.truncate(self.order)

    def to_json(self) -> dict:
        return {
            "point": self.point,
            "order": self.order,
            "localized": self.localized.to_json(),
            "cleared": self.ok,
            "obstruction": None if self.cleared.obstruction is None else self.cleared.obstruction.to_json(),
            "series": None if not self.ok else self.series.to_json(),
        }


def singular_class_pullback(ring: TorusRing, point: str, ambient: TangentData, fiber: TangentData) -> SingularPullback:
    """i_x^*[Ỹ → X] at a possibly singular point x of Y.

    The computation runs at ring.order plus the size of the common
    denominator so that clearing it leaves a series certified through
    ring.order.
    """
    if fiber.over is not None and fiber.over != point:
        raise InvalidDatumError(f"fiber lies over {fiber.over!r}, not {point!r}")
    target = ring.order
    working = target + denominator_size(fiber)
    try:
        wide = ring.with_order(working)
    except TruncationError as exc:
        raise TruncationError(
            f"order {target} needs working order {working}, beyond what the Lazard generators carry"
        ) from exc
    multiplicity = fiber_multiplicity(wide, fiber, working)
    localized = wide.loc_scale(multiplicity, euler_factor(wide, ambient.at(point), working))
    cleared = wide.clear_denominators(localized)
    if cleared.ok:
        logger.info("Pullback at %s cleared through order %d", point, cleared.certified_order)
    else:
        logger.warning("Pullback at %s is not a series: c(%s) does not divide", point, cleared.obstruction.to_text())
    return SingularPullback(point, localized, cleared, min(target, cleared.certified_order))
