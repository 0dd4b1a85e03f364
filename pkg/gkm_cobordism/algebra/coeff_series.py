"""
Truncated power series in torus variables over the rational Lazard ring.

A ``TruncatedSeries`` is an element of Λ_Q[[t_1, ..., t_r]] known up to
total t-degree D.  Over the rationals Λ is the polynomial ring on the
logarithm coefficients m_1, m_2, ... (deg m_k = -k), so every series is a
sparse sympy polynomial in ``t_1..t_r, m_1..m_16`` over ``QQ`` whose
t-degree never exceeds the truncation order.  Lazard parts are exact; only
the t-direction is truncated.

Univariate series (the log and exp of a formal group law, [n]u, ...) are
rank-1 series; their variable prints as ``u``.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

import sympy
from sympy.polys.domains import QQ
from sympy.polys.monomials import monomial_mul
from sympy.polys.rings import PolyElement, PolyRing, ring

from .._config import MAX_ORDER
from ..errors import TruncationError, VariableCountError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]
LazardCoefficient = PolyElement
"""Element of QQ[m_1..m_16] (see :func:`lazard_ring`)."""

LAZARD_GENERATORS = MAX_ORDER


# ── Rings ─────────────────────────────────────────────────────────────

def _lazard_names() -> list[str]:
    return [f"m{k}" for k in range(1, LAZARD_GENERATORS + 1)]


@lru_cache(maxsize=None)
def lazard_ring() -> PolyRing:
    """QQ[m_1, ..., m_16]."""
    return ring(",".join(_lazard_names()), QQ)[0]


@lru_cache(maxsize=None)
def series_ring(rank: int) -> PolyRing:
    """QQ[t_1..t_rank, m_1..m_16]; every rank-``rank`` series lives here."""
    if rank < 1:
        raise VariableCountError(f"rank must be positive, got {rank}")
    names = [f"t{i}" for i in range(1, rank + 1)] + _lazard_names()
    logger.debug("Building series ring of rank %d", rank)
    return ring(",".join(names), QQ)[0]


def to_qq(value: Rational):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _t_degree(monom: tuple, rank: int) -> int:
    return sum(monom[:rank])


def _format_rational(value: Fraction) -> str:
    return str(value)


# ── Lazard coefficients ───────────────────────────────────────────────

def lazard_generator(k: int) -> LazardCoefficient:
    if not 1 <= k <= LAZARD_GENERATORS:
        raise TruncationError(f"m_{k} is outside the carried generators m_1..m_{LAZARD_GENERATORS}")
    return lazard_ring().gens[k - 1]


def lazard_degrees(coeff: LazardCoefficient) -> set[int]:
    """Cohomological degrees (-Σ k·e_k) of the monomials of *coeff*."""
    return {-sum((k + 1) * e for k, e in enumerate(monom)) for monom in coeff.keys()}


def lazard_to_text(coeff: LazardCoefficient) -> str:
    return str(coeff.as_expr())


def lazard_to_json(coeff: LazardCoefficient) -> list[dict]:
    terms = []
    for monom, c in coeff.items():
        terms.append({
            "m_exponents": [[k + 1, e] for k, e in enumerate(monom) if e],
            "coeff": _format_rational(to_fraction(c)),
        })
    terms.sort(key=lambda term: term["m_exponents"])
    return terms


# ── TruncatedSeries ───────────────────────────────────────────────────

class TruncatedSeries:
    """Immutable truncated series of a given rank and order.

    Equality compares the two series through the smaller of their orders,
    which is the only statement a truncated model can certify.
    """

    __slots__ = ("_poly", "_rank", "_order", "_buckets")

    def __init__(self, poly: PolyElement, rank: int, order: int, *, _trusted: bool = False):
        if order < 0:
            raise TruncationError(f"truncation order must be >= 0, got {order}")
        if poly.ring is not series_ring(rank):
            raise VariableCountError("polynomial does not belong to the rank's series ring")
        if not _trusted:
            poly = _truncate(poly, rank, order)
        self._poly = poly
        self._rank = rank
        self._order = order
        self._buckets = None

    # ── Constructors ──────────────────────────────────────────────────

    @classmethod
    def zero(cls, rank: int, order: int) -> "TruncatedSeries":
        return cls(series_ring(rank).zero, rank, order, _trusted=True)

    @classmethod
    def one(cls, rank: int, order: int) -> "TruncatedSeries":
        return cls.constant(1, rank, order)

    @classmethod
    def constant(cls, value: Union[Rational, LazardCoefficient], rank: int, order: int) -> "TruncatedSeries":
        R = series_ring(rank)
        if isinstance(value, PolyElement):
            return cls(embed_lazard(value, rank), rank, order, _trusted=True)
        return cls(R.ground_new(to_qq(value)), rank, order, _trusted=True)

    @classmethod
    def variable(cls, j: int, rank: int, order: int) -> "TruncatedSeries":
        """The torus variable t_j (1-based)."""
        if not 1 <= j <= rank:
            raise VariableCountError(f"t_{j} does not exist in rank {rank}")
        return cls(series_ring(rank).gens[j - 1], rank, order)

    @classmethod
    def from_terms(
        cls,
        terms: Mapping[tuple[int, ...], Union[Rational, LazardCoefficient]],
        rank: int,
        order: int,
    ) -> "TruncatedSeries":
        """Build from ``{t_exponents: coefficient}``."""
        R = series_ring(rank)
        poly = R.zero
        for t_exps, coeff in terms.items():
            if len(t_exps) != rank:
                raise VariableCountError(f"exponent {t_exps} does not have length {rank}")
            monomial = R.from_dict({tuple(t_exps) + (0,) * LAZARD_GENERATORS: QQ.one})
            if isinstance(coeff, PolyElement):
                poly += monomial * embed_lazard(coeff, rank)
            else:
                poly += monomial * to_qq(coeff)
        return cls(poly, rank, order)

    @classmethod
    def from_sympy(cls, expr, rank: int, order: int) -> "TruncatedSeries":
        """Parse a sympy expression (or string) in t1.. and m1..; ``u`` means t1."""
        R = series_ring(rank)
        if isinstance(expr, str):
            expr = sympy.sympify(expr)
        if rank == 1:
            expr = expr.subs(sympy.Symbol("u"), sympy.Symbol("t1"))
        return cls(R.from_expr(expr), rank, order)

    # ── Accessors ─────────────────────────────────────────────────────

    @property
    def poly(self) -> PolyElement:
        return self._poly

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def order(self) -> int:
        return self._order

    @property
    def ring(self) -> PolyRing:
        return self._poly.ring

    def is_zero(self) -> bool:
        return not self._poly

    def t_order(self) -> Optional[int]:
        """Lowest t-degree present, ``None`` for the zero series."""
        if not self._poly:
            return None
        return min(_t_degree(m, self._rank) for m in self._poly.keys())

    def _degree_buckets(self) -> dict[int, list]:
        if self._buckets is None:
            buckets: dict[int, list] = {}
            for monom, coeff in self._poly.items():
                buckets.setdefault(_t_degree(monom, self._rank), []).append((monom, coeff))
            self._buckets = buckets
        return self._buckets

    def homogeneous_part(self, k: int) -> "TruncatedSeries":
        if k > self._order:
            raise TruncationError(f"degree {k} exceeds truncation order {self._order}")
        part = dict(self._degree_buckets().get(k, ()))
        return TruncatedSeries(self.ring.from_dict(part), self._rank, self._order, _trusted=True)

    def constant_term(self) -> LazardCoefficient:
        """The t-degree 0 part, as an element of the Lazard ring."""
        return self.coefficient((0,) * self._rank)

    def coefficient(self, t_exponents: Sequence[int]) -> LazardCoefficient:
        if len(t_exponents) != self._rank:
            raise VariableCountError(f"exponent {tuple(t_exponents)} does not have length {self._rank}")
        if sum(t_exponents) > self._order:
            raise TruncationError(f"t-degree {sum(t_exponents)} exceeds truncation order {self._order}")
        key = tuple(t_exponents)
        terms = {m[self._rank:]: c for m, c in self._poly.items() if m[: self._rank] == key}
        return lazard_ring().from_dict(terms)

    def rational_constant(self) -> Optional[Fraction]:
        """The constant term if it is a plain rational, else ``None``."""
        const = self.constant_term()
        if not const:
            return Fraction(0)
        if len(const) == 1 and const.LM == lazard_ring().zero_monom:
            return to_fraction(const.LC)
        return None

    def has_constant_term(self) -> bool:
        return bool(self._degree_buckets().get(0))

    def uses_lazard(self) -> bool:
        return any(any(m[self._rank:]) for m in self._poly.keys())

    # ── Arithmetic ────────────────────────────────────────────────────

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected TruncatedSeries, got {type(other).__name__}")
        if other._rank != self._rank:
            raise VariableCountError(
                f"variable-count mismatch: rank {self._rank} vs rank {other._rank}"
            )

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self._rank, self._order)
        self._check(other)
        return other

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        order = min(self._order, other._order)
        return TruncatedSeries(self._poly + other._poly, self._rank, order)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self._poly, self._rank, self._order, _trusted=True)

    def __sub__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        order = min(self._order, other._order)
        return TruncatedSeries(self._poly - other._poly, self._rank, order)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        order = min(self._order, other._order)
        return TruncatedSeries(_graded_mul(self, other, order), self._rank, order, _trusted=True)

    def __rmul__(self, other) -> "TruncatedSeries":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return reciprocal(self) ** (-n)
        result = TruncatedSeries.one(self._rank, self._order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, factor: Union[Rational, LazardCoefficient]) -> "TruncatedSeries":
        if isinstance(factor, PolyElement):
            return self * TruncatedSeries.constant(factor, self._rank, self._order)
        return TruncatedSeries(self._poly * to_qq(factor), self._rank, self._order, _trusted=True)

    def truncate(self, order: int) -> "TruncatedSeries":
        """Drop to a lower order; raising the order is refused."""
        if order > self._order:
            raise TruncationError(f"cannot raise truncation order {self._order} to {order}")
        return TruncatedSeries(self._poly, self._rank, order)

    def derivative(self, j: int) -> "TruncatedSeries":
        """∂/∂t_j; the result is known one order less."""
        if not 1 <= j <= self._rank:
            raise VariableCountError(f"t_{j} does not exist in rank {self._rank}")
        return TruncatedSeries(self._poly.diff(self.ring.gens[j - 1]), self._rank, max(self._order - 1, 0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(other, self._rank, self._order)
        if not isinstance(other, TruncatedSeries) or other._rank != self._rank:
            return NotImplemented
        order = min(self._order, other._order)
        return _truncate(self._poly - other._poly, self._rank, order) == self.ring.zero

    __hash__ = None

    def agrees_with(self, other: "TruncatedSeries", order: int) -> bool:
        """Equality through an explicit order (both sides must reach it)."""
        self._check(other)
        if order > min(self._order, other._order):
            raise TruncationError(
                f"cannot compare through order {order}: operands known to {self._order} and {other._order}"
            )
        return not _truncate(self._poly - other._poly, self._rank, order)

    # ── Rendering ─────────────────────────────────────────────────────

    def to_sympy(self):
        names = ["u"] if self._rank == 1 else [f"t{i}" for i in range(1, self._rank + 1)]
        symbols = [sympy.Symbol(n) for n in names + _lazard_names()]
        return self._poly.as_expr(*symbols)

    def to_text(self) -> str:
        if not self._poly:
            return "0"
        return str(self.to_sympy())

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.to_text()} + O({self._order + 1}), rank={self._rank})"

    def to_json(self) -> dict:
        """Canonical JSON: terms sorted by (t_exponents, m_exponents)."""
        terms = []
        for monom, coeff in self._poly.items():
            terms.append({
                "t_exponents": list(monom[: self._rank]),
                "m_exponents": [[k + 1, e] for k, e in enumerate(monom[self._rank:]) if e],
                "coeff": _format_rational(to_fraction(coeff)),
            })
        terms.sort(key=lambda term: (term["t_exponents"], term["m_exponents"]))
        return {"rank": self._rank, "order": self._order, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "TruncatedSeries":
        rank = int(data["rank"])
        order = int(data["order"])
        R = series_ring(rank)
        poly = {}
        for term in data.get("terms", ()):
            t_exps = list(term["t_exponents"])
            if len(t_exps) != rank:
                raise VariableCountError(f"term {term} does not have {rank} t-exponents")
            m_exps = [0] * LAZARD_GENERATORS
            for k, e in term.get("m_exponents", ()):
                if not 1 <= k <= LAZARD_GENERATORS:
                    raise TruncationError(f"m_{k} is outside the carried generators")
                m_exps[k - 1] = int(e)
            poly[tuple(t_exps) + tuple(m_exps)] = to_qq(Fraction(term["coeff"]))
        return cls(R.from_dict(poly), rank, order)


# ── Internal helpers ──────────────────────────────────────────────────

def _truncate(poly: PolyElement, rank: int, order: int) -> PolyElement:
    if all(_t_degree(m, rank) <= order for m in poly.keys()):
        return poly
    return poly.ring.from_dict({m: c for m, c in poly.items() if _t_degree(m, rank) <= order})


def _graded_mul(a: TruncatedSeries, b: TruncatedSeries, order: int) -> PolyElement:
    # Only pairs of t-degree buckets whose sum stays within the order are multiplied.
    buckets_a = a._degree_buckets()
    buckets_b = b._degree_buckets()
    acc: dict = {}
    get = acc.get
    for da, terms_a in buckets_a.items():
        if da > order:
            continue
        for db, terms_b in buckets_b.items():
            if da + db > order:
                continue
            for ma, ca in terms_a:
                for mb, cb in terms_b:
                    m = monomial_mul(ma, mb)
                    acc[m] = get(m, 0) + ca * cb
    return a.ring.from_dict(acc)


def embed_lazard(coeff: LazardCoefficient, rank: int) -> PolyElement:
    """View a Lazard coefficient as a t-constant element of the rank's ring."""
    prefix = (0,) * rank
    return series_ring(rank).from_dict({prefix + m: c for m, c in coeff.items()})


def _univariate_coefficients(f: TruncatedSeries) -> list[LazardCoefficient]:
    L = lazard_ring()
    coeffs: list[dict] = [dict() for _ in range(f.order + 1)]
    for monom, c in f.poly.items():
        coeffs[monom[0]][monom[1:]] = c
    return [L.from_dict(c) for c in coeffs]


def _require_univariate(f: TruncatedSeries, what: str) -> None:
    if f.rank != 1:
        raise VariableCountError(f"{what} expects a univariate series, got rank {f.rank}")


def _require_no_constant(g: TruncatedSeries, what: str) -> None:
    if g.has_constant_term():
        raise TruncationError(f"{what}: series has a nonzero constant term")


# ── Composition and inversion ─────────────────────────────────────────

def compose_univariate(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g) for univariate *f* and a series *g* of t-order >= 1 (Horner)."""
    _require_univariate(f, "compose_univariate")
    _require_no_constant(g, "compose_univariate")
    order = min(f.order, g.order)
    coeffs = _univariate_coefficients(f)[: order + 1]
    result = TruncatedSeries.zero(g.rank, order)
    g = g.truncate(order) if g.order > order else g
    for coeff in reversed(coeffs):
        result = result * g
        if coeff:
            result = result + TruncatedSeries.constant(coeff, g.rank, order)
    return result


def linear_coefficient(f: TruncatedSeries) -> Fraction:
    """Rational coefficient of u in a univariate series, or an error."""
    _require_univariate(f, "linear_coefficient")
    c = f.coefficient((1,))
    if not c:
        raise TruncationError("series has no linear term")
    if len(c) != 1 or c.LM != lazard_ring().zero_monom:
        raise TruncationError("linear coefficient is not an invertible rational")
    return to_fraction(c.LC)


def compositional_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """The e with f(e(u)) = u, solved degree by degree."""
    _require_univariate(f, "compositional_inverse")
    _require_no_constant(f, "compositional_inverse")
    a1 = linear_coefficient(f)
    u = TruncatedSeries.variable(1, 1, f.order)
    e = u.scale(1 / a1)
    for n in range(2, f.order + 1):
        residue = compose_univariate(f.truncate(n), e.truncate(n)).coefficient((n,))
        if residue:
            correction = TruncatedSeries.from_terms({(n,): residue}, 1, f.order)
            e = e - correction.scale(1 / a1)
    return e


def reciprocal(f: TruncatedSeries) -> TruncatedSeries:
    """1/f for a series whose constant term is a nonzero rational."""
    c0 = f.rational_constant()
    if c0 is None or c0 == 0:
        raise TruncationError("series is not a unit: constant term must be a nonzero rational")
    inv_c0 = 1 / c0
    parts = [f.homogeneous_part(k) for k in range(f.order + 1)]
    pieces = [TruncatedSeries.constant(inv_c0, f.rank, f.order)]
    for n in range(1, f.order + 1):
        acc = TruncatedSeries.zero(f.rank, f.order)
        for k in range(1, n + 1):
            if not parts[k].is_zero():
                acc = acc + parts[k] * pieces[n - k]
        pieces.append(acc.scale(-inv_c0))
    result = TruncatedSeries.zero(f.rank, f.order)
    for piece in pieces:
        result = result + piece
    return result


def substitute(f: TruncatedSeries, images: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Simultaneous substitution t_i ↦ images[i]; images need t-order >= 1.

    The images may live in a different rank than *f*; the result lives in
    the images' rank.
    """
    if len(images) != f.rank:
        raise VariableCountError(f"expected {f.rank} images, got {len(images)}")
    if not images:
        raise VariableCountError("substitution needs at least one image")
    target_rank = images[0].rank
    for g in images:
        if g.rank != target_rank:
            raise VariableCountError("substitution images have mixed ranks")
        _require_no_constant(g, "substitute")
    order = min([f.order] + [g.order for g in images])
    powers: list[list[TruncatedSeries]] = [[TruncatedSeries.one(target_rank, order)] for _ in images]

    def power(i: int, e: int) -> TruncatedSeries:
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * images[i])
        return cache[e]

    grouped: dict[tuple, dict] = {}
    for monom, c in f.poly.items():
        grouped.setdefault(monom[: f.rank], {})[monom[f.rank:]] = c
    result = TruncatedSeries.zero(target_rank, order)
    L = lazard_ring()
    for t_exps in sorted(grouped):
        term = TruncatedSeries.constant(L.from_dict(grouped[t_exps]), target_rank, order)
        for i, e in enumerate(t_exps):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


# ── Exact division ────────────────────────────────────────────────────

def divide_exact(f: TruncatedSeries, g: TruncatedSeries) -> tuple[TruncatedSeries, bool]:
    """Quotient q with f = g·q, for g of t-order exactly 1.

    Solves q_{n-1} = (f_n - Σ_{k>=2} g_k q_{n-k}) / g_1 degree by degree, the
    division by the linear part g_1 being exact polynomial division.  Returns
    ``(q, divisible)``; q is known through ``min(orders) - 1``.
    """
    if f.rank != g.rank:
        raise VariableCountError(f"variable-count mismatch: rank {f.rank} vs rank {g.rank}")
    _require_no_constant(g, "divide_exact")
    order = min(f.order, g.order)
    g1 = g.homogeneous_part(1).poly
    if not g1:
        raise TruncationError("divisor has no linear part")
    g_parts = [g.homogeneous_part(k) for k in range(order + 1)]
    divisible = not f.homogeneous_part(0).poly
    q_parts: list[TruncatedSeries] = []
    for n in range(1, order + 1):
        h = f.homogeneous_part(n)
        for k in range(2, n + 1):
            if not g_parts[k].is_zero() and not q_parts[n - k].is_zero():
                h = h - g_parts[k] * q_parts[n - k]
        quotient, remainder = h.poly.div(g1)
        if remainder:
            divisible = False
        q_parts.append(TruncatedSeries(quotient, f.rank, order, _trusted=True))
    q_order = max(order - 1, 0)
    q = TruncatedSeries.zero(f.rank, q_order)
    for part in q_parts[: q_order + 1]:
        q = q + part
    return q, divisible


def series_sum(items: Iterable[TruncatedSeries], rank: int, order: int) -> TruncatedSeries:
    total = TruncatedSeries.zero(rank, order)
    for item in items:
        total = total + item
    return total
