"""
The universal formal group law over the rational Lazard ring.

Every operation goes through the logarithm l(u) = u + Σ m_k u^{k+1} and its
compositional inverse e:

    F(u, v)  = e(l(u) + l(v))
    [n]u     = e(n·l(u))          (any integer n, [-1]u = χ(u))
    [1/m]u   = e(l(u)/m)
    ρ_{n/m}u = [n]([1/m]u) / u

A law may be specialized by assigning rationals to the m_k; the additive
(m_k = 0) and multiplicative (m_k = β^k/(k+1), F = u + v - βuv) laws are
registered by name in ``LAW_REGISTRY``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Optional

from .._config import DEFAULT_ORDER
from ..errors import CobordismError, NotDivisibleError, TruncationError
from .coeff_series import (
    LAZARD_GENERATORS,
    LazardCoefficient,
    Rational,
    TruncatedSeries,
    compose_univariate,
    compositional_inverse,
    divide_exact,
    lazard_generator,
)

logger = logging.getLogger(__name__)


# ── Specializations ───────────────────────────────────────────────────

@dataclass(frozen=True)
class Specialization:
    """An assignment m_k ↦ rational for k = 1..len(values)."""

    name: str
    values: tuple[Fraction, ...]

    def value(self, k: int) -> Fraction:
        if not 1 <= k <= len(self.values):
            raise TruncationError(
                f"specialization {self.name!r} does not assign m_{k}"
            )
        return self.values[k - 1]

    def covers(self, order: int) -> bool:
        return len(self.values) >= order


def additive_specialization() -> Specialization:
    return Specialization("additive", tuple(Fraction(0) for _ in range(LAZARD_GENERATORS)))


def multiplicative_specialization(beta: Rational) -> Specialization:
    beta = Fraction(beta)
    values = tuple(beta ** k / (k + 1) for k in range(1, LAZARD_GENERATORS + 1))
    return Specialization(f"multiplicative:{beta}", values)


def assignment_specialization(assignment: Mapping[int, Rational], order: int) -> Specialization:
    missing = [k for k in range(1, order + 1) if k not in assignment]
    if missing:
        raise CobordismError(
            f"incomplete assignment: m_{missing[0]} is not assigned (order {order} needs m_1..m_{order})"
        )
    top = max(assignment)
    values = tuple(Fraction(assignment.get(k, 0)) for k in range(1, top + 1))
    return Specialization("assignment", values)


# ── The law ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FormalGroupLaw:
    """A (possibly specialized) formal group law truncated at ``order``.

    Build instances with :func:`build_law` (or the registry helpers) so the
    log/exp caches are shared.
    """

    order: int
    specialization: Optional[Specialization] = None
    log: TruncatedSeries = field(default=None, compare=False, repr=False)
    exp: TruncatedSeries = field(default=None, compare=False, repr=False)

    @property
    def name(self) -> str:
        return "universal" if self.specialization is None else self.specialization.name

    @property
    def is_universal(self) -> bool:
        return self.specialization is None

    def at_order(self, order: int) -> "FormalGroupLaw":
        """The same law truncated at another order."""
        if order == self.order:
            return self
        return build_law(order, self.specialization)

    # ── log / exp ─────────────────────────────────────────────────────

    def log_of(self, u: TruncatedSeries) -> TruncatedSeries:
        _require_no_constant(u)
        return compose_univariate(self.log, u)

    def exp_of(self, s: TruncatedSeries) -> TruncatedSeries:
        _require_no_constant(s)
        return compose_univariate(self.exp, s)

    # ── Group operations ──────────────────────────────────────────────

    def fgl_sum(self, u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
        """u +_F v."""
        return self.exp_of(self.log_of(u) + self.log_of(v))

    def fgl_inverse(self, u: TruncatedSeries) -> TruncatedSeries:
        """[-1]u, the χ(u) with F(u, χ(u)) = 0."""
        return self.exp_of(-self.log_of(u))

    def fgl_multiple(self, n: int, u: TruncatedSeries) -> TruncatedSeries:
        """[n]u for any integer n."""
        return self.exp_of(self.log_of(u).scale(n))

    def fgl_divide(self, m: int, u: TruncatedSeries) -> TruncatedSeries:
        """[1/m]u, the unique u' with [m]u' = u."""
        if m <= 0:
            raise CobordismError(f"[1/m] needs a positive integer m, got {m}")
        return self.exp_of(self.log_of(u).scale(Fraction(1, m)))

    def rational_multiple(self, q: Rational, u: TruncatedSeries) -> TruncatedSeries:
        """[n]([1/m]u) for q = n/m."""
        return self.exp_of(self.log_of(u).scale(Fraction(q)))

    def fgl_multiple_recursive(self, n: int, u: TruncatedSeries) -> TruncatedSeries:
        """[n]u through [b]u = F(u, [b-1]u) and [-n]u = [-1]([n]u)."""
        if n == 0:
            return TruncatedSeries.zero(u.rank, min(u.order, self.order))
        if n < 0:
            return self.fgl_inverse(self.fgl_multiple_recursive(-n, u))
        acc = u
        for _ in range(n - 1):
            acc = self.fgl_sum(u, acc)
        return acc

    def rho(self, n: int, m: int, u: TruncatedSeries) -> TruncatedSeries:
        """ρ_{n/m}u = [n]([1/m]u)/u for u of t-order exactly 1.

        The quotient is known one order below the input.
        """
        if n == 0:
            raise CobordismError("ρ_{n/m} needs a nonzero integer n")
        if m <= 0:
            raise CobordismError(f"ρ_{{n/m}} needs a positive integer m, got {m}")
        if u.t_order() != 1:
            raise TruncationError("ρ is only defined for series of t-order exactly 1")
        quotient, divisible = divide_exact(self.rational_multiple(Fraction(n, m), u), u)
        if not divisible:
            raise NotDivisibleError("[n]([1/m]u) is not divisible by u")
        return quotient

    def divisor_combination(self, z0: TruncatedSeries, zinf: TruncatedSeries) -> TruncatedSeries:
        """F(z0, [-1]z∞): the class a rational section's zeros and poles give."""
        return self.fgl_sum(z0, self.fgl_inverse(zinf))

    def division_series(self, b: int) -> TruncatedSeries:
        """The univariate g with g([b]u) = u, namely e(l(u)/b)."""
        if b == 0:
            raise CobordismError("[b] is not invertible for b = 0")
        u = TruncatedSeries.variable(1, 1, self.order)
        return self.exp_of(self.log_of(u).scale(Fraction(1, b)))

    # ── Coefficients ──────────────────────────────────────────────────

    def a_coefficient(self, i: int, j: int) -> LazardCoefficient:
        """a_{ij} of F(u, v) = Σ a_{ij} u^i v^j."""
        if i < 0 or j < 0:
            raise CobordismError(f"a_{{ij}} needs non-negative indices, got ({i}, {j})")
        if i + j > self.order:
            raise TruncationError(f"a_{i}{j} lies beyond truncation order {self.order}")
        return _two_variable_sum(self).coefficient((i, j))

    def a_table(self, degree: Optional[int] = None) -> dict[tuple[int, int], LazardCoefficient]:
        """All nonzero a_{ij} with 1 <= i <= j and i + j <= degree."""
        degree = self.order if degree is None else degree
        if degree > self.order:
            raise TruncationError(f"degree {degree} lies beyond truncation order {self.order}")
        table = {}
        for total in range(2, degree + 1):
            for i in range(1, total // 2 + 1):
                coeff = self.a_coefficient(i, total - i)
                if coeff:
                    table[(i, total - i)] = coeff
        return table


def _require_no_constant(u: TruncatedSeries) -> None:
    if u.has_constant_term():
        raise TruncationError("formal group law arguments must have zero constant term")


@lru_cache(maxsize=None)
def _two_variable_sum(law: FormalGroupLaw) -> TruncatedSeries:
    u = TruncatedSeries.variable(1, 2, law.order)
    v = TruncatedSeries.variable(2, 2, law.order)
    return law.fgl_sum(u, v)


# ── Construction ──────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def build_law(order: int, specialization: Optional[Specialization] = None) -> FormalGroupLaw:
    """Construct (and cache) the log/exp pair at the given order."""
    if order < 1:
        raise TruncationError(f"truncation order must be positive, got {order}")
    if order - 1 > LAZARD_GENERATORS:
        raise TruncationError(
            f"order {order} needs m_{order - 1}; only m_1..m_{LAZARD_GENERATORS} are carried"
        )
    terms: dict = {(1,): 1}
    for k in range(1, order):
        if specialization is None:
            terms[(k + 1,)] = lazard_generator(k)
        else:
            value = specialization.value(k)
            if value:
                terms[(k + 1,)] = value
    log = TruncatedSeries.from_terms(terms, 1, order)
    exp = compositional_inverse(log)
    law = FormalGroupLaw(order, specialization, log, exp)
    logger.debug("Built %s formal group law at order %d", law.name, order)
    return law


def universal_law(order: int = DEFAULT_ORDER) -> FormalGroupLaw:
    return build_law(order, None)


def additive_law(order: int = DEFAULT_ORDER) -> FormalGroupLaw:
    return build_law(order, additive_specialization())


def multiplicative_law(order: int = DEFAULT_ORDER, beta: Rational = 1) -> FormalGroupLaw:
    return build_law(order, multiplicative_specialization(beta))


def specialize(kind: str, order: int = DEFAULT_ORDER, *, beta: Rational = 1,
               assignment: Optional[Mapping[int, Rational]] = None) -> FormalGroupLaw:
    """Specialized law: ``additive``, ``multiplicative`` (with β) or ``assignment``."""
    if kind == "additive":
        return additive_law(order)
    if kind == "multiplicative":
        return multiplicative_law(order, beta)
    if kind == "assignment":
        if assignment is None:
            raise CobordismError("assignment specialization needs an assignment")
        return build_law(order, assignment_specialization(assignment, order))
    raise CobordismError(f"unknown specialization {kind!r}")


# ── Law registry ──────────────────────────────────────────────────────

LAW_REGISTRY: dict[str, Callable[..., FormalGroupLaw]] = {
    "universal": universal_law,
    "additive": additive_law,
    "multiplicative": multiplicative_law,
}

DEFAULT_LAW = "universal"


def parse_law(text: str, order: int = DEFAULT_ORDER) -> FormalGroupLaw:
    """Law from a CLI spelling: ``universal``, ``additive``, ``multiplicative:β``."""
    name, _, param = (text or DEFAULT_LAW).strip().partition(":")
    builder = LAW_REGISTRY.get(name)
    if builder is None:
        raise CobordismError(
            f"unknown law {name!r}; expected one of {', '.join(sorted(LAW_REGISTRY))}"
        )
    if name == "multiplicative":
        try:
            beta = Fraction(param) if param else Fraction(1)
        except (ValueError, ZeroDivisionError) as exc:
            raise CobordismError(f"invalid β {param!r} for the multiplicative law") from exc
        return builder(order, beta)
    if param:
        raise CobordismError(f"law {name!r} takes no parameter")
    return builder(order)
