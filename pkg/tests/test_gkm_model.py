"""Tests for GKM data, congruences, membership and surface generators."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from gkm_cobordism.algebra.coeff_series import TruncatedSeries, lazard_generator
from gkm_cobordism.algebra.fgl import additive_law, universal_law
from gkm_cobordism.algebra.torus_ring import Character, TorusRing, _rho
from gkm_cobordism.errors import CongruenceError, InvalidDatumError
from gkm_cobordism.geometry.gkm_model import (
    CobordismTuple,
    Edge,
    GkmDatum,
    RhoFactor,
    SurfaceComponent,
    canonical_constraints,
    check_membership,
    congruence_system,
    generator_names,
    parse_surface_kind,
    reconstruct,
    surface_datum,
    surface_decompose,
    surface_generators,
)

ALPHA = Character((1, -1))

SURFACES = [
    SurfaceComponent("P2", ("x", "y", "z"), ALPHA, model="V01"),
    SurfaceComponent("P2", ("x", "y", "z"), ALPHA, model="V2"),
    SurfaceComponent("F0", ("w", "x", "y", "z"), ALPHA),
] + [SurfaceComponent("Fn", ("w", "x", "y", "z"), ALPHA, n=n) for n in range(1, 5)]


@pytest.fixture(scope="module")
def ring() -> TorusRing:
    return TorusRing(2, universal_law(6))


def random_coefficient(rng: random.Random, order: int) -> TruncatedSeries:
    terms = {(0, 0): Fraction(rng.randint(-3, 3), rng.randint(1, 3))}
    for _ in range(3):
        i, j = rng.randint(0, 2), rng.randint(0, 2)
        if 0 < i + j:
            terms[(i, j)] = lazard_generator(rng.randint(1, 2)) * rng.randint(-2, 2) + rng.randint(-2, 2)
    return TruncatedSeries.from_terms(terms, 2, order)


def assert_round_trips(surface: SurfaceComponent, ring: TorusRing, rng: random.Random, count: int) -> None:
    generators = surface_generators(surface, ring)
    for _ in range(count):
        coefficients = [random_coefficient(rng, ring.order) for _ in generators]
        f = CobordismTuple.constant(surface.points, ring.zero())
        for a, g in zip(coefficients, generators):
            f = f + g.scaled(a)
        decomposition = surface_decompose(surface, f, ring)
        assert decomposition.names == tuple(generator_names(surface))
        for found, expected in zip(decomposition.coefficients, coefficients):
            assert found == expected
        rebuilt = reconstruct(surface, decomposition, ring)
        assert rebuilt.agrees_with(f, decomposition.certified_order)


def p1_datum() -> GkmDatum:
    return GkmDatum(rank=2, points=("a", "b"), edges=(Edge("a", "b", Character((1, 0))),)).validate()


# ── Surface kinds ─────────────────────────────────────────────────────

class TestSurfaceKinds:
    @pytest.mark.parametrize("text,expected", [
        ("P2", ("P2", 0, "V01")),
        ("P2:V2", ("P2", 0, "V2")),
        ("F0", ("F0", 0, "V01")),
        ("F3", ("Fn", 3, "V01")),
        ("Fn:4", ("Fn", 4, "V01")),
    ])
    def test_parse(self, text, expected):
        assert parse_surface_kind(text) == expected

    @pytest.mark.parametrize("text", ["", "P3", "P2:V3", "Fx", "F-1"])
    def test_parse_errors(self, text):
        with pytest.raises(InvalidDatumError):
            parse_surface_kind(text)

    def test_component_validation(self):
        with pytest.raises(InvalidDatumError):
            SurfaceComponent("P2", ("x", "y"), ALPHA)
        with pytest.raises(InvalidDatumError):
            SurfaceComponent("F0", ("w", "x", "x", "z"), ALPHA)
        with pytest.raises(InvalidDatumError):
            SurfaceComponent("Fn", ("w", "x", "y", "z"), ALPHA, n=0)
        with pytest.raises(InvalidDatumError):
            SurfaceComponent("P2", ("x", "y", "z"), Character((0, 0)))

    def test_labels_and_roles(self):
        assert [s.label for s in SURFACES[:4]] == ["P2:V01", "P2:V2", "F0", "F1"]
        assert SURFACES[0].roles == {"x": "x", "y": "y", "z": "z"}
        assert SURFACES[2].internal_pairs() == (("w", "x"), ("w", "y"), ("x", "z"), ("y", "z"))
        assert SURFACES[3].internal_pairs() == (("w", "x"), ("x", "y"), ("y", "z"))


# ── Datum ─────────────────────────────────────────────────────────────

class TestDatum:
    def test_json_round_trip(self):
        datum = GkmDatum(
            rank=2,
            points=("x", "y", "z"),
            edges=(Edge("y", "x", ALPHA),),
            surfaces=(SURFACES[0],),
            ordering=(Fraction(2), Fraction(1)),
            positions={"x": Character((1, 0)), "y": Character((0, 0)), "z": Character((-1, 1))},
        ).validate()
        data = datum.to_json()
        assert data["edges"] == [{"a": "x", "b": "y", "weight": ["1", "-1"]}]
        assert data["lambda"] == ["2", "1"]
        assert GkmDatum.from_json(data).to_json() == data

    def test_unknown_point(self):
        with pytest.raises(InvalidDatumError, match="unknown point"):
            GkmDatum(rank=2, points=("a",), edges=(Edge("a", "b", ALPHA),)).validate()

    def test_loop_and_zero_weight(self):
        with pytest.raises(InvalidDatumError, match="loop"):
            GkmDatum(rank=2, points=("a",), edges=(Edge("a", "a", ALPHA),)).validate()
        with pytest.raises(InvalidDatumError, match="zero weight"):
            GkmDatum(rank=2, points=("a", "b"), edges=(Edge("a", "b", Character((0, 0))),)).validate()

    def test_duplicate_points(self):
        with pytest.raises(InvalidDatumError):
            GkmDatum(rank=1, points=("a", "a")).validate()

    def test_surface_order_checked(self):
        with pytest.raises(InvalidDatumError, match="strictly above"):
            GkmDatum(
                rank=2,
                points=("x", "y", "z"),
                surfaces=(SURFACES[0],),
                ordering=(Fraction(1), Fraction(0)),
                positions={"x": Character((0, 0)), "y": Character((1, 0)), "z": Character((-1, 0))},
            ).validate()

    def test_from_json_needs_points(self):
        with pytest.raises(InvalidDatumError):
            GkmDatum.from_json({"rank": 2})

    def test_neighbours(self):
        assert p1_datum().neighbours("a") == ["b"]


# ── Congruence system ─────────────────────────────────────────────────

class TestCongruences:
    def test_p1(self):
        (constraint,) = congruence_system(p1_datum())
        assert constraint.to_json() == {
            "kind": "edge",
            "points": ["a", "b"],
            "modulus": ["1", "0"],
            "power": 1,
            "expression": "f[a] - f[b]",
        }

    def test_internal_edges_not_repeated(self):
        datum = GkmDatum(
            rank=2,
            points=("x", "y", "z", "o"),
            edges=(
                Edge("x", "y", ALPHA),
                Edge("x", "z", ALPHA * 2),
                Edge("y", "z", ALPHA),
                Edge("z", "o", Character((0, 1))),
            ),
            surfaces=(SURFACES[0],),
        ).validate()
        constraints = congruence_system(datum)
        assert [(c.kind, c.points) for c in constraints] == [
            ("edge", ("o", "z")),
            ("edge", ("x", "y")),
            ("edge", ("y", "z")),
            ("p2", ("x", "y", "z")),
        ]

    def test_parallel_edges_deduplicated(self):
        datum = GkmDatum(
            rank=2,
            points=("a", "b"),
            edges=(Edge("a", "b", Character((2, 0))), Edge("b", "a", Character((-1, 0)))),
        ).validate()
        assert len(congruence_system(datum)) == 1

    def test_surface_expressions(self):
        p2 = congruence_system(surface_datum(SURFACES[0], 2))[-1]
        assert p2.expression() == "f[x] - f[y] + rho(1/2, e1-e2)*f[z] - rho(1/2, e1-e2)*f[x]"
        assert p2.power == 2
        f0 = congruence_system(surface_datum(SURFACES[2], 2))[-1]
        assert f0.expression() == "f[w] - f[x] - f[y] + f[z]"
        f3 = congruence_system(surface_datum(SURFACES[5], 2))[-1]
        assert f3.expression() == (
            "rho(3/2, e1-e2)*f[y] - rho(3/2, e1-e2)*f[z] + rho(-3/2, e1-e2)*f[w] - rho(-3/2, e1-e2)*f[x]"
        )

    def test_canonical_order(self):
        constraints = congruence_system(surface_datum(SURFACES[2], 2))
        kinds = [c["kind"] for c in canonical_constraints(reversed(constraints))]
        assert kinds == ["edge"] * 4 + ["f0"]

    def test_modulus_is_primitive(self):
        datum = surface_datum(SurfaceComponent("P2", ("x", "y", "z"), Character((0, 2))), 2)
        assert all(c["modulus"] == ["0", "1"] for c in canonical_constraints(congruence_system(datum)))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_additive_reduction(self, n):
        additive = TorusRing(2, additive_law(6))
        assert RhoFactor(Fraction(1, 2), ALPHA).evaluate(additive, 5) == TruncatedSeries.constant(Fraction(1, 2), 2, 5)
        assert RhoFactor(Fraction(n, 2), ALPHA).evaluate(additive, 5) == TruncatedSeries.constant(Fraction(n, 2), 2, 5)
        assert RhoFactor(Fraction(-n, 2), ALPHA).evaluate(additive, 5) == TruncatedSeries.constant(Fraction(-n, 2), 2, 5)


# ── Membership ────────────────────────────────────────────────────────

class TestMembership:
    def test_constant_tuple(self, ring):
        f = CobordismTuple.constant(("a", "b"), ring.one())
        assert check_membership(p1_datum(), f, ring).is_member

    def test_chern_class_tuple(self, ring):
        f = CobordismTuple({"a": ring.variable(1), "b": ring.zero()})
        assert check_membership(p1_datum(), f, ring).is_member

    def test_non_member(self, ring):
        f = CobordismTuple({"a": ring.one(), "b": ring.zero()})
        certificate = check_membership(p1_datum(), f, ring)
        assert not certificate.is_member
        (failure,) = certificate.failures
        assert failure.constraint.points == ("a", "b")
        data = certificate.to_json()
        assert data["member"] is False
        assert data["constraints"][0]["status"] == "fail"
        assert "FAIL #0" in certificate.to_text()

    def test_point_set_mismatch(self, ring):
        with pytest.raises(InvalidDatumError):
            check_membership(p1_datum(), CobordismTuple({"a": ring.one()}), ring)

    def test_p2_failure(self, ring):
        surface = SURFACES[0]
        c = ring.chern(ALPHA)
        f = CobordismTuple({"x": ring.zero(), "y": c, "z": ring.zero()})
        certificate = check_membership(surface_datum(surface, 2), f, ring)
        assert [r.constraint.kind for r in certificate.failures] == ["p2"]
        with pytest.raises(CongruenceError) as info:
            surface_decompose(surface, f, ring)
        assert len(info.value.failures) == 1

    def test_certified_order(self, ring):
        surface = SURFACES[0]
        f = CobordismTuple.constant(surface.points, ring.one())
        assert check_membership(surface_datum(surface, 2), f, ring).certified_order == ring.order - 2

    def test_tuple_json(self, ring):
        f = CobordismTuple({"a": ring.variable(1), "b": ring.one()})
        assert CobordismTuple.from_json(f.to_json()).agrees_with(f, ring.order)
        with pytest.raises(InvalidDatumError):
            CobordismTuple.from_json({})


# ── Surface generators ────────────────────────────────────────────────

class TestGenerators:
    @pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.label)
    def test_generators_are_members(self, ring, surface):
        datum = surface_datum(surface, 2)
        for name, g in zip(generator_names(surface), surface_generators(surface, ring)):
            assert check_membership(datum, g, ring).is_member, name

    def test_generator_names(self):
        assert generator_names(SURFACES[0]) == ["unit", "line", "point"]
        assert generator_names(SURFACES[2]) == ["unit", "wx", "wy", "point"]
        assert generator_names(SURFACES[3]) == ["unit", "xy", "wx", "point"]

    def test_p2_line_values(self, ring):
        _, line, point = surface_generators(SURFACES[0], ring)
        half = ALPHA * Fraction(1, 2)
        assert line["x"].is_zero()
        assert line["y"] == ring.chern(half)
        assert point["z"] == ring.chern(half) * ring.chern(ALPHA)

    @pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.label)
    def test_decompose_round_trip(self, ring, surface):
        assert_round_trips(surface, ring, random.Random(surface.label), 5)

    @pytest.mark.slow
    @pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.label)
    def test_decompose_round_trip_order_eight(self, surface):
        wide = TorusRing(2, universal_law(8))
        assert_round_trips(surface, wide, random.Random(f"{surface.label}:8"), 50)

    @pytest.mark.slow
    @pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.label)
    def test_generators_are_members_order_eight(self, surface):
        wide = TorusRing(2, universal_law(8))
        datum = surface_datum(surface, 2)
        for g in surface_generators(surface, wide):
            assert check_membership(datum, g, wide).is_member

    def test_rho_factors_are_reused(self, ring):
        surface = SURFACES[3]
        datum = surface_datum(surface, 2)
        f = surface_generators(surface, ring)[3]
        check_membership(datum, f, ring)
        before = _rho.cache_info()
        check_membership(datum, f, ring)
        after = _rho.cache_info()
        assert after.misses == before.misses
        assert after.hits > before.hits

    def test_decomposition_json(self, ring):
        surface = SURFACES[2]
        f = surface_generators(surface, ring)[3]
        data = surface_decompose(surface, f, ring).to_json()
        assert set(data["coefficients"]) == {"unit", "wx", "wy", "point"}
        assert data["certified_order"] == ring.order - 2
