"""
Root systems, Weyl groups and T-stable curves of flag varieties G/P_I.

Roots and weights are rational vectors in Bourbaki's ε-coordinates and are
stored as :class:`Character` instances, so they can be fed straight into
the torus ring.  Supported types: A_n (tests only), B_n and C_n for
2 <= n <= 5, F4 and G2.

Conventions:

  - a Weyl element is a reduced word (i_1, ..., i_k) meaning
    s_{i_1} s_{i_2} ... s_{i_k}; simple roots are numbered from 1;
  - a parabolic is given by the set I of simple roots it contains, so
    P(ω_k) corresponds to I = S \\ {k};
  - the fixed point x(u) = uP_I/P_I is identified with the weight uλ_I,
    λ_I = Σ_{k ∉ I} ω_k.
"""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterable, Optional, Sequence

from ..algebra.torus_ring import Character
from ..errors import CobordismError

logger = logging.getLogger(__name__)

SUPPORTED_TYPES = ("A", "B", "C", "F", "G")
MAX_CLASSICAL_RANK = 5


# ── Pairings and reflections ──────────────────────────────────────────

def pairing(alpha: Character, weight: Character) -> Fraction:
    """⟨α∨, λ⟩ = 2(α, λ)/(α, α)."""
    norm = alpha.dot(alpha)
    if norm == 0:
        raise CobordismError("pairing with the zero root")
    return 2 * alpha.dot(weight) / norm


def reflect(alpha: Character, weight: Character) -> Character:
    """s_α(λ) = λ − ⟨α∨, λ⟩α."""
    return weight - alpha * pairing(alpha, weight)


# ── Cartan data ───────────────────────────────────────────────────────

def standard_cartan_matrix(cartan_type: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix a_ij = ⟨α_i∨, α_j⟩ in Bourbaki numbering."""
    _check_type(cartan_type, rank)
    a = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        a[i][i] = 2
    if cartan_type == "G":
        a[0][1], a[1][0] = -3, -1
    else:
        for i in range(rank - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if cartan_type == "B":
            a[rank - 1][rank - 2] = -2
        elif cartan_type == "C":
            a[rank - 2][rank - 1] = -2
        elif cartan_type == "F":
            a[2][1] = -2
    return tuple(tuple(row) for row in a)


def _check_type(cartan_type: str, rank: int) -> None:
    if cartan_type not in SUPPORTED_TYPES:
        raise CobordismError(f"unsupported Cartan type {cartan_type!r}")
    if cartan_type == "A" and rank < 1:
        raise CobordismError("type A needs rank >= 1")
    if cartan_type in ("B", "C") and not 2 <= rank <= MAX_CLASSICAL_RANK:
        raise CobordismError(f"type {cartan_type} is supported for ranks 2..{MAX_CLASSICAL_RANK}, got {rank}")
    if cartan_type == "F" and rank != 4:
        raise CobordismError("type F only exists in rank 4")
    if cartan_type == "G" and rank != 2:
        raise CobordismError("type G only exists in rank 2")


def _expected_positive_roots(cartan_type: str, rank: int) -> int:
    return {
        "A": rank * (rank + 1) // 2,
        "B": rank * rank,
        "C": rank * rank,
        "F": 24,
        "G": 6,
    }[cartan_type]


def _expected_weyl_order(cartan_type: str, rank: int) -> int:
    return {
        "A": factorial(rank + 1),
        "B": 2 ** rank * factorial(rank),
        "C": 2 ** rank * factorial(rank),
        "F": 1152,
        "G": 12,
    }[cartan_type]


def _vec(*coords) -> Character:
    return Character(coords)


def _unit(i: int, dim: int) -> Character:
    return Character.basis(i, dim)


def _sum_units(indices: Iterable[int], dim: int) -> Character:
    total = Character.zero(dim)
    for i in indices:
        total = total + _unit(i, dim)
    return total


def _bourbaki_data(cartan_type: str, rank: int) -> tuple[list[Character], list[Character]]:
    """(simple roots, fundamental weights) in ε-coordinates."""
    half = Fraction(1, 2)
    if cartan_type == "A":
        dim = rank + 1
        everything = _sum_units(range(1, dim + 1), dim)
        simple = [_unit(i, dim) - _unit(i + 1, dim) for i in range(1, rank + 1)]
        weights = [
            _sum_units(range(1, i + 1), dim) - everything * Fraction(i, dim)
            for i in range(1, rank + 1)
        ]
        return simple, weights
    if cartan_type in ("B", "C"):
        dim = rank
        simple = [_unit(i, dim) - _unit(i + 1, dim) for i in range(1, rank)]
        simple.append(_unit(rank, dim) * (1 if cartan_type == "B" else 2))
        weights = [_sum_units(range(1, i + 1), dim) for i in range(1, rank + 1)]
        if cartan_type == "B":
            weights[-1] = _sum_units(range(1, rank + 1), dim) * half
        return simple, weights
    if cartan_type == "F":
        simple = [
            _vec(0, 1, -1, 0),
            _vec(0, 0, 1, -1),
            _vec(0, 0, 0, 1),
            _vec(half, -half, -half, -half),
        ]
        weights = [
            _vec(1, 1, 0, 0),
            _vec(2, 1, 1, 0),
            _vec(Fraction(3, 2), half, half, half),
            _vec(1, 0, 0, 0),
        ]
        return simple, weights
    # G2 inside the plane ε1 + ε2 + ε3 = 0; α1 is the short root
    simple = [_vec(1, -1, 0), _vec(-2, 1, 1)]
    weights = [_vec(0, -1, 1), _vec(-1, -1, 2)]
    return simple, weights


# ── Root systems ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class Coset:
    """A Weyl element (or a minimal coset representative) with its weight.

    ``weight`` is the image of the dominant weight the enumeration was run
    against: ρ for the whole group, λ_I for W/W_I.
    """

    word: tuple[int, ...]
    weight: Character

    @property
    def length(self) -> int:
        return len(self.word)

    def label(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"s{i}" for i in self.word)


WeylElement = Coset


@dataclass(frozen=True)
class RootSystem:
    """Simple roots and fundamental weights of one Cartan type."""

    cartan_type: str
    rank: int
    simple_roots: tuple[Character, ...]
    fundamental_weights: tuple[Character, ...]

    @property
    def name(self) -> str:
        return f"{self.cartan_type}{self.rank}"

    @property
    def dimension(self) -> int:
        """Number of ε-coordinates."""
        return self.simple_roots[0].rank

    @property
    def simple_indices(self) -> frozenset[int]:
        return frozenset(range(1, self.rank + 1))

    def simple_root(self, i: int) -> Character:
        self._check_index(i)
        return self.simple_roots[i - 1]

    def fundamental_weight(self, i: int) -> Character:
        self._check_index(i)
        return self.fundamental_weights[i - 1]

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.rank:
            raise CobordismError(f"{self.name} has no simple root {i}")

    @cached_property
    def rho(self) -> Character:
        total = Character.zero(self.dimension)
        for w in self.fundamental_weights:
            total = total + w
        return total

    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        rows = []
        for a in self.simple_roots:
            row = []
            for b in self.simple_roots:
                value = pairing(a, b)
                if value.denominator != 1:
                    raise CobordismError(f"non-integral Cartan entry {value} in {self.name}")
                row.append(int(value))
            rows.append(tuple(row))
        return tuple(rows)

    # ── Roots ─────────────────────────────────────────────────────────

    @cached_property
    def roots(self) -> tuple[Character, ...]:
        """All roots: the closure of S under the simple reflections."""
        seen = set(self.simple_roots)
        queue = deque(self.simple_roots)
        while queue:
            beta = queue.popleft()
            for alpha in self.simple_roots:
                image = reflect(alpha, beta)
                if image not in seen:
                    seen.add(image)
                    queue.append(image)
        return tuple(sorted(seen, key=lambda b: (-self.rho.dot(b), b)))

    @cached_property
    def positive_roots(self) -> tuple[Character, ...]:
        return tuple(b for b in self.roots if self.rho.dot(b) > 0)

    def is_positive(self, beta: Character) -> bool:
        return self.rho.dot(beta) > 0

    def make_positive(self, beta: Character) -> Character:
        return beta if self.is_positive(beta) else -beta

    def simple_coefficients(self, beta: Character) -> tuple[Fraction, ...]:
        """(n_1, ..., n_r) with β = Σ n_i α_i, read off as 2(β, ω_i)/(α_i, α_i)."""
        return tuple(
            2 * beta.dot(w) / a.dot(a)
            for a, w in zip(self.simple_roots, self.fundamental_weights)
        )

    def parabolic_roots(self, parabolic: Iterable[int]) -> tuple[Character, ...]:
        """R⁺_{P_I}: positive roots in the span of the simple roots in I."""
        excluded = self.simple_indices - frozenset(parabolic)
        return tuple(
            b for b in self.positive_roots
            if all(self.simple_coefficients(b)[k - 1] == 0 for k in excluded)
        )

    # ── Weyl group ────────────────────────────────────────────────────

    def act(self, word: Sequence[int], weight: Character) -> Character:
        """(s_{i_1} ... s_{i_k})(λ)."""
        for i in reversed(word):
            weight = reflect(self.simple_roots[i - 1], weight)
        return weight

    def act_inverse(self, word: Sequence[int], weight: Character) -> Character:
        """(s_{i_1} ... s_{i_k})⁻¹(λ)."""
        for i in word:
            weight = reflect(self.simple_roots[i - 1], weight)
        return weight

    def orbit(self, weight: Character) -> tuple[Coset, ...]:
        """Breadth-first orbit of a dominant weight.

        The words found are reduced and are the minimal-length
        representatives of W/Stab(λ).
        """
        start = Coset((), weight)
        seen = {weight: start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for i, alpha in enumerate(self.simple_roots, start=1):
                image = reflect(alpha, current.weight)
                if image not in seen:
                    element = Coset((i,) + current.word, image)
                    seen[image] = element
                    queue.append(element)
        return tuple(seen.values())

    @cached_property
    def weyl_group(self) -> tuple[Coset, ...]:
        elements = self.orbit(self.rho)
        logger.debug("Enumerated W(%s): %d elements", self.name, len(elements))
        return elements

    def validate(self) -> "RootSystem":
        """Check the stored data against the type's invariants."""
        expected = standard_cartan_matrix(self.cartan_type, self.rank)
        if self.cartan_matrix() != expected:
            raise CobordismError(f"simple roots of {self.name} do not reproduce its Cartan matrix")
        for i, a in enumerate(self.simple_roots):
            for j, w in enumerate(self.fundamental_weights):
                if pairing(a, w) != (1 if i == j else 0):
                    raise CobordismError(f"fundamental weights of {self.name} are not dual to the coroots")
        count = _expected_positive_roots(self.cartan_type, self.rank)
        if len(self.positive_roots) != count:
            raise CobordismError(
                f"{self.name} has {len(self.positive_roots)} positive roots, expected {count}"
            )
        return self


@lru_cache(maxsize=None)
def root_system(cartan_type: str, rank: int) -> RootSystem:
    """The validated root system of the given type."""
    cartan_type = cartan_type.upper()
    _check_type(cartan_type, rank)
    simple, weights = _bourbaki_data(cartan_type, rank)
    system = RootSystem(cartan_type, rank, tuple(simple), tuple(weights)).validate()
    logger.debug("Built root system %s", system.name)
    return system


_TYPE_RE = re.compile(r"^\s*([A-Za-z])\s*(\d+)\s*$")


def parse_cartan_type(text: str) -> RootSystem:
    """``"G2"`` / ``"c3"`` → root system."""
    match = _TYPE_RE.match(text or "")
    if not match:
        raise CobordismError(f"cannot parse Cartan type {text!r}")
    return root_system(match.group(1).upper(), int(match.group(2)))


def parse_parabolic(system: RootSystem, text: Optional[str]) -> frozenset[int]:
    """``"a1,a3"`` (or ``"1,3"``) → {1, 3}; empty means the Borel."""
    if not text:
        return frozenset()
    indices = set()
    for part in text.split(","):
        part = part.strip().lower().lstrip("a")
        if not part.isdigit():
            raise CobordismError(f"cannot parse parabolic {text!r}")
        index = int(part)
        system.simple_root(index)
        indices.add(index)
    return frozenset(indices)


def maximal_parabolic(system: RootSystem, k: int) -> frozenset[int]:
    """I for P(ω_k): every simple root except α_k."""
    system.simple_root(k)
    return system.simple_indices - {k}


def weyl_order(system: RootSystem) -> int:
    return _expected_weyl_order(system.cartan_type, system.rank)


# ── Flag varieties ────────────────────────────────────────────────────

def dominant_weight(system: RootSystem, parabolic: Iterable[int]) -> Character:
    """λ_I = Σ_{k ∉ I} ω_k (zero for I = S)."""
    excluded = sorted(system.simple_indices - frozenset(parabolic))
    total = Character.zero(system.dimension)
    for k in excluded:
        total = total + system.fundamental_weight(k)
    return total


def enumerate_fixed_points(system: RootSystem, parabolic: Iterable[int]) -> tuple[Coset, ...]:
    """T-fixed points of G/P_I as minimal coset representatives of W/W_I."""
    parabolic = frozenset(parabolic)
    for k in parabolic:
        system.simple_root(k)
    points = system.orbit(dominant_weight(system, parabolic))
    logger.debug("G/P_I for %s, I=%s: %d fixed points", system.name, sorted(parabolic), len(points))
    return points


def curve_degree(system: RootSystem, alpha: Character, parabolic: Iterable[int]) -> dict[int, Fraction]:
    """d(α) = Σ_{β ∈ S∖I} n_{αβ}(β, β)/(α, α) σ(s_β), as {β index: coefficient}."""
    parabolic = frozenset(parabolic)
    if alpha not in system.positive_roots:
        raise CobordismError(f"{alpha.to_text()} is not a positive root of {system.name}")
    coefficients = system.simple_coefficients(alpha)
    norm = alpha.dot(alpha)
    degree = {}
    for k in sorted(system.simple_indices - parabolic):
        beta = system.simple_root(k)
        value = coefficients[k - 1] * beta.dot(beta) / norm
        if value:
            degree[k] = value
    if not degree:
        raise CobordismError(f"{alpha.to_text()} is a root of the Levi of P_I; it spans no curve")
    return degree


@dataclass(frozen=True)
class Curve:
    """A T-stable curve joining x(u) and x(v) = x(s_β u)."""

    u: Coset
    v: Coset
    root: Character
    weight: Character
    degree: dict

    def total_degree(self) -> Fraction:
        return sum(self.degree.values(), Fraction(0))

    def to_json(self) -> dict:
        return {
            "u": list(self.u.word),
            "v": list(self.v.word),
            "root": self.root.to_json(),
            "weight": self.weight.to_json(),
            "degree": {str(k): str(c) for k, c in sorted(self.degree.items())},
        }


def enumerate_curves(system: RootSystem, parabolic: Iterable[int]) -> tuple[Curve, ...]:
    """All T-stable curves of G/P_I.

    Points x(u), x(v) are adjacent when v W_I = s_β u W_I for a positive
    root β with ⟨β∨, uλ_I⟩ ≠ 0.  The weight of the curve is uλ_I − vλ_I and
    its degree is d(γ) for the positive root γ = ±u⁻¹β.
    """
    parabolic = frozenset(parabolic)
    points = enumerate_fixed_points(system, parabolic)
    index = {p.weight: i for i, p in enumerate(points)}
    curves = []
    for i, point in enumerate(points):
        for beta in system.positive_roots:
            if pairing(beta, point.weight) == 0:
                continue
            other = reflect(beta, point.weight)
            j = index[other]
            if j <= i:
                continue
            gamma = system.make_positive(system.act_inverse(point.word, beta))
            curves.append(Curve(
                u=point,
                v=points[j],
                root=beta,
                weight=point.weight - other,
                degree=curve_degree(system, gamma, parabolic),
            ))
    logger.debug("G/P_I for %s, I=%s: %d T-stable curves", system.name, sorted(parabolic), len(curves))
    return tuple(curves)
