"""
The equivariant coefficient ring S(T)_Q and its localization.

``TorusRing`` binds a torus rank to a formal group law and provides

  - equivariant first Chern classes of characters, chern(χ) = e(Σ χ_i l(t_i)),
  - divisibility tests modulo chern(χ) and chern(χ)²,
  - fractions over products of Chern classes (``LocalizedElement``),
  - the rescaling isomorphism for finite-index sublattices and the
    augmentation S(T) → Λ.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Optional, Sequence

from ..errors import CobordismError, NotDivisibleError, TruncationError, VariableCountError
from .coeff_series import (
    LazardCoefficient,
    Rational,
    TruncatedSeries,
    divide_exact,
    reciprocal,
    substitute,
)
from .fgl import FormalGroupLaw, universal_law

logger = logging.getLogger(__name__)


# ── Characters ────────────────────────────────────────────────────────

def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise CobordismError(f"not a rational: {value!r}")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise CobordismError(f"not a rational: {value!r}") from exc
    raise CobordismError(f"not a rational: {value!r}")


@dataclass(frozen=True, order=True)
class Character:
    """Rational vector in a fixed basis of the character lattice."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable[Rational]):
        object.__setattr__(self, "coords", tuple(parse_rational(c) for c in coords))

    @classmethod
    def basis(cls, i: int, rank: int) -> "Character":
        """ε_i (1-based)."""
        return cls(1 if j == i else 0 for j in range(1, rank + 1))

    @classmethod
    def zero(cls, rank: int) -> "Character":
        return cls([0] * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "Character") -> None:
        if self.rank != other.rank:
            raise VariableCountError(f"characters of rank {self.rank} and {other.rank}")

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Character":
        return Character(-a for a in self.coords)

    def __mul__(self, factor: Rational) -> "Character":
        factor = Fraction(factor)
        return Character(factor * a for a in self.coords)

    __rmul__ = __mul__

    def dot(self, other: Sequence[Rational]) -> Fraction:
        coords = other.coords if isinstance(other, Character) else tuple(Fraction(c) for c in other)
        if len(coords) != self.rank:
            raise VariableCountError(f"pairing of rank {self.rank} with rank {len(coords)}")
        return sum((a * b for a, b in zip(self.coords, coords)), Fraction(0))

    def denominator(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in self.coords), 1)

    def primitive(self) -> tuple[Fraction, "Character"]:
        """(q, χ₀) with χ = q·χ₀, χ₀ primitive integral, leading coordinate > 0."""
        if self.is_zero():
            raise CobordismError("the zero character has no primitive direction")
        den = self.denominator()
        ints = [int(c * den) for c in self.coords]
        g = reduce(gcd, (abs(i) for i in ints if i))
        lead = next(i for i in ints if i)
        sign = 1 if lead > 0 else -1
        base = Character(Fraction(sign * i, g) for i in ints)
        return Fraction(sign * g, den), base

    def is_proportional(self, other: "Character") -> bool:
        if self.is_zero() or other.is_zero():
            return False
        return self.primitive()[1] == other.primitive()[1]

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence) -> "Character":
        return cls(parse_rational(c) for c in data)

    def to_text(self, basis: str = "e") -> str:
        terms = []
        for i, c in enumerate(self.coords, start=1):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coeff = "" if mag == 1 else f"{mag}*"
            terms.append(f"{sign}{coeff}{basis}{i}")
        if not terms:
            return "0"
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text

    def __repr__(self) -> str:
        return f"Character({self.to_text()})"


# ── Localized elements ────────────────────────────────────────────────

@dataclass(frozen=True)
class LocalizedElement:
    """numerator / ∏ chern(χ) over a multiset of canonical characters.

    Denominator characters are primitive with positive leading coordinate;
    :meth:`TorusRing.localize` folds the unit c(qχ₀)/c(χ₀) of any other
    representative into the numerator.  ``order`` is the order through
    which the fraction is certified: the numerator order minus the number
    of denominator factors.
    """

    numerator: TruncatedSeries
    denominator: tuple[Character, ...] = ()

    @property
    def order(self) -> int:
        return self.numerator.order - len(self.denominator)

    def to_json(self) -> dict:
        return {
            "num": self.numerator.to_json(),
            "den": [c.to_json() for c in self.denominator],
        }

    @classmethod
    def from_json(cls, data) -> "LocalizedElement":
        den = tuple(sorted(Character.from_json(c) for c in data.get("den", ())))
        return cls(TruncatedSeries.from_json(data["num"]), den)


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of a test f ∈ (chern(χ)^power)."""

    divisible: bool
    character: Character
    power: int
    pivot: int
    components: tuple[TruncatedSeries, ...]
    certified_order: int

    def to_json(self) -> dict:
        return {
            "divisible": self.divisible,
            "character": self.character.to_json(),
            "power": self.power,
            "pivot": self.pivot,
            "certified_order": self.certified_order,
            "components": [c.to_json() for c in self.components],
        }


@dataclass(frozen=True)
class ClearResult:
    """Outcome of clearing the denominators of a localized element."""

    series: Optional[TruncatedSeries]
    obstruction: Optional[Character] = None
    certified_order: int = 0

    @property
    def ok(self) -> bool:
        return self.series is not None


# ── The ring ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class TorusRing:
    """S(T)_Q for a rank-``rank`` torus under a given formal group law."""

    rank: int
    law: FormalGroupLaw = field(default_factory=universal_law)

    @property
    def order(self) -> int:
        return self.law.order

    def with_order(self, order: int) -> "TorusRing":
        return TorusRing(self.rank, self.law.at_order(order))

    # ── Basic series ──────────────────────────────────────────────────

    def zero(self, order: Optional[int] = None) -> TruncatedSeries:
        return TruncatedSeries.zero(self.rank, self.order if order is None else order)

    def one(self, order: Optional[int] = None) -> TruncatedSeries:
        return TruncatedSeries.one(self.rank, self.order if order is None else order)

    def variable(self, j: int, order: Optional[int] = None) -> TruncatedSeries:
        return TruncatedSeries.variable(j, self.rank, self.order if order is None else order)

    def _check_character(self, chi: Character) -> None:
        if chi.rank != self.rank:
            raise VariableCountError(f"character of rank {chi.rank} on a rank-{self.rank} torus")

    def _check_series(self, f: TruncatedSeries) -> None:
        if f.rank != self.rank:
            raise VariableCountError(f"series of rank {f.rank} on a rank-{self.rank} torus")

    # ── Chern classes ─────────────────────────────────────────────────

    def chern(self, chi: Character, order: Optional[int] = None) -> TruncatedSeries:
        """c_1^T(L_χ) = e(Σ χ_i l(t_i))."""
        self._check_character(chi)
        return _chern(self.law.at_order(self.order if order is None else order), chi)

    def chern_product(self, characters: Iterable[Character], order: Optional[int] = None) -> TruncatedSeries:
        result = self.one(order)
        for chi in characters:
            result = result * self.chern(chi, order)
        return result

    def rho(self, n: int, m: int, chi: Character, order: Optional[int] = None) -> TruncatedSeries:
        """ρ_{n/m}(chern(χ)), known through ``order`` (computed one order higher)."""
        order = self.order if order is None else order
        self._check_character(chi)
        return _rho(self.law.at_order(order + 1), n, m, chi)

    # ── Divisibility ──────────────────────────────────────────────────

    def pivot_solution(self, chi: Character, order: Optional[int] = None) -> tuple[int, TruncatedSeries]:
        """(j, φ) with chern(χ) = 0 ⟺ t_j = φ(t_i, i ≠ j).

        chern(χ) vanishes exactly where Σ χ_i l(t_i) does, so
        φ = e(-Σ_{i≠j} (χ_i/χ_j) l(t_i)).
        """
        self._check_character(chi)
        if chi.is_zero():
            raise CobordismError("cannot reduce modulo the Chern class of the zero character")
        order = self.order if order is None else order
        law = self.law.at_order(order)
        j = next(i for i, c in enumerate(chi.coords, start=1) if c)
        cj = chi.coords[j - 1]
        total = TruncatedSeries.zero(self.rank, order)
        for i, c in enumerate(chi.coords, start=1):
            if i != j and c:
                total = total + law.log_of(self.variable(i, order)).scale(-c / cj)
        return j, law.exp_of(total)

    def reduce_mod(self, f: TruncatedSeries, chi: Character, power: int = 1) -> ReductionReport:
        """Test f ∈ (chern(χ)^power) for power 1 or 2.

        Evaluates f (and for power 2 also ∂f/∂t_j) at t_j = φ; membership
        holds iff every component vanishes.  Verdicts are certified through
        order ``f.order - power``.
        """
        self._check_series(f)
        if power not in (1, 2):
            raise CobordismError(f"only powers 1 and 2 are supported, got {power}")
        j, phi = self.pivot_solution(chi, f.order)
        images = [self.variable(i, f.order) if i != j else phi for i in range(1, self.rank + 1)]
        components = [substitute(f, images)]
        if power == 2:
            components.append(substitute(f.derivative(j), images))
        divisible = all(c.is_zero() for c in components)
        return ReductionReport(
            divisible=divisible,
            character=chi,
            power=power,
            pivot=j,
            components=tuple(components),
            certified_order=max(f.order - power, 0),
        )

    def divide_by_chern(self, f: TruncatedSeries, chi: Character) -> TruncatedSeries:
        """f / chern(χ); raises :class:`NotDivisibleError` on a remainder."""
        self._check_series(f)
        quotient, divisible = divide_exact(f, self.chern(chi, f.order))
        if not divisible:
            raise NotDivisibleError(f"series is not divisible by c({chi.to_text()})", obstruction=chi)
        return quotient

    # ── Localization ──────────────────────────────────────────────────

    def localize(self, numerator: TruncatedSeries, characters: Iterable[Character] = ()) -> LocalizedElement:
        """numerator / ∏ chern(χ), with denominators put in canonical form."""
        self._check_series(numerator)
        den: list[Character] = []
        for chi in characters:
            self._check_character(chi)
            if chi.is_zero():
                raise CobordismError("zero character inserted into a denominator")
            q, base = chi.primitive()
            if q != 1:
                # c(qχ₀) = ρ_q(c(χ₀))·c(χ₀)
                unit = self.rho(q.numerator, q.denominator, base, numerator.order)
                numerator = numerator * reciprocal(unit)
            den.append(base)
        return LocalizedElement(numerator, tuple(sorted(den)))

    def inverse_chern_product(self, characters: Iterable[Character], order: Optional[int] = None) -> LocalizedElement:
        return self.localize(self.one(order), characters)

    def _common(self, a: LocalizedElement, b: LocalizedElement) -> tuple[TruncatedSeries, TruncatedSeries, tuple[Character, ...]]:
        ca, cb = Counter(a.denominator), Counter(b.denominator)
        common = ca | cb
        order = max(a.numerator.order, b.numerator.order)
        num_a = a.numerator * self.chern_product((common - ca).elements(), order)
        num_b = b.numerator * self.chern_product((common - cb).elements(), order)
        return num_a, num_b, tuple(sorted(common.elements()))

    def loc_add(self, a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
        num_a, num_b, den = self._common(a, b)
        return LocalizedElement(num_a + num_b, den)

    def loc_neg(self, a: LocalizedElement) -> LocalizedElement:
        return LocalizedElement(-a.numerator, a.denominator)

    def loc_sub(self, a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
        return self.loc_add(a, self.loc_neg(b))

    def loc_mul(self, a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
        return LocalizedElement(a.numerator * b.numerator, tuple(sorted(a.denominator + b.denominator)))

    def loc_scale(self, a: LocalizedElement, f: TruncatedSeries) -> LocalizedElement:
        return LocalizedElement(a.numerator * f, a.denominator)

    def loc_sum(self, items: Iterable[LocalizedElement], order: Optional[int] = None) -> LocalizedElement:
        items = list(items)
        if not items:
            return LocalizedElement(self.zero(order))
        total = items[0]
        for item in items[1:]:
            total = self.loc_add(total, item)
        return total

    def loc_eq(self, a: LocalizedElement, b: LocalizedElement, order: Optional[int] = None) -> bool:
        """Cross-multiplied comparison of numerators.

        Without ``order`` the numerators are compared through their common
        order. An explicit ``order`` is the precision wanted for the
        fractions themselves; the numerators must then reach ``order`` plus
        the size of the common denominator, otherwise TruncationError.
        """
        num_a, num_b, den = self._common(a, b)
        if order is None:
            return num_a == num_b
        return num_a.agrees_with(num_b, order + len(den))

    def clear_denominators(self, a: LocalizedElement) -> ClearResult:
        """The series representative of *a*, or the first obstructing factor."""
        numerator = a.numerator
        for chi in a.denominator:
            quotient, divisible = divide_exact(numerator, self.chern(chi, numerator.order))
            if not divisible:
                logger.debug("Denominator factor c(%s) does not divide", chi.to_text())
                return ClearResult(None, obstruction=chi, certified_order=a.order)
            numerator = quotient
        return ClearResult(numerator, None, certified_order=numerator.order)

    # ── Rescaling and augmentation ────────────────────────────────────

    def rescale_characters(self, f: TruncatedSeries, factors: Sequence[int]) -> TruncatedSeries:
        """Substitute t_i ↦ [a_i]t_i (the identification for a finite-index sublattice)."""
        return self._rescale(f, [Fraction(a) for a in self._check_factors(factors)])

    def unrescale_characters(self, f: TruncatedSeries, factors: Sequence[int]) -> TruncatedSeries:
        """Inverse of :meth:`rescale_characters`: t_i ↦ [1/a_i]t_i."""
        return self._rescale(f, [1 / Fraction(a) for a in self._check_factors(factors)])

    def _check_factors(self, factors: Sequence[int]) -> Sequence[int]:
        if len(factors) != self.rank:
            raise VariableCountError(f"expected {self.rank} factors, got {len(factors)}")
        for a in factors:
            if a <= 0:
                raise CobordismError(f"rescaling factors must be positive, got {a}")
        return factors

    def _rescale(self, f: TruncatedSeries, factors: Sequence[Fraction]) -> TruncatedSeries:
        self._check_series(f)
        law = self.law.at_order(f.order)
        images = [law.rational_multiple(a, self.variable(i, f.order)) for i, a in enumerate(factors, start=1)]
        return substitute(f, images)

    def augment(self, f: TruncatedSeries) -> LazardCoefficient:
        """The constant term (t_i ↦ 0) as an element of the Lazard ring."""
        self._check_series(f)
        return f.constant_term()


@lru_cache(maxsize=4096)
def _chern(law: FormalGroupLaw, chi: Character) -> TruncatedSeries:
    rank = chi.rank
    if chi.is_zero():
        return TruncatedSeries.zero(rank, law.order)
    nonzero = [(i, c) for i, c in enumerate(chi.coords, start=1) if c]
    if len(nonzero) == 1 and nonzero[0][1] == 1:
        return TruncatedSeries.variable(nonzero[0][0], rank, law.order)
    total = TruncatedSeries.zero(rank, law.order)
    for i, c in nonzero:
        total = total + law.log_of(TruncatedSeries.variable(i, rank, law.order)).scale(c)
    return law.exp_of(total)


@lru_cache(maxsize=4096)
def _rho(law: FormalGroupLaw, n: int, m: int, chi: Character) -> TruncatedSeries:
    return law.rho(n, m, _chern(law, chi))
