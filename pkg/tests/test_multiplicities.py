"""Tests for gkm_cobordism.geometry.multiplicities"""

import random

import pytest

from gkm_cobordism.algebra import Character, TorusRing, TruncatedSeries
from gkm_cobordism.algebra.fgl import additive_law, universal_law
from gkm_cobordism.errors import CobordismError, InvalidDatumError, TruncationError
from gkm_cobordism.geometry import (
    PasquierTriple,
    build_gkm,
    check_membership,
    euler_factor,
    fiber_multiplicity,
    ig25_datasets,
    load_ig25_dataset,
    point_class,
    point_classes,
    singular_class_pullback,
    smooth_multiplicity,
    subvariety_class,
)
from gkm_cobordism.geometry.multiplicities import TangentData, denominator_size, dump_tangent_data, load_tangent_data

A = Character((1, 0))
B = Character((0, 1))


@pytest.fixture(scope="module")
def tangent():
    return load_ig25_dataset("tangent")


@pytest.fixture(scope="module")
def ig25():
    return build_gkm(PasquierTriple(3, n=2, m=2))


@pytest.fixture(scope="module")
def ring():
    return TorusRing(2, universal_law(4))


# ── Weight data ───────────────────────────────────────────────────────

class TestTangentData:
    def test_bundled_datasets(self):
        assert ig25_datasets() == [
            "P2_14_34_45_normal", "X0_normal", "X1_normal", "X2_normal", "X2prime_normal",
            "tangent", "x4_resolution_fiber", "x4_star_fiber",
        ]

    def test_tangent_table(self, tangent):
        assert tangent.kind == "tangent"
        assert tangent.dimension == 5
        assert len(tangent.points) == 8
        assert tangent.at("x12")[0] == Character((-1, 0))

    def test_fiber_tables(self):
        resolution = load_ig25_dataset("x4_resolution_fiber")
        star = load_ig25_dataset("x4_star_fiber")
        assert resolution.over == star.over == "x12"
        assert resolution.points == ("p1", "p2", "p3", "p4")
        assert len(star.points) == 2

    def test_unknown_dataset(self):
        with pytest.raises(InvalidDatumError, match="available"):
            load_ig25_dataset("nope")

    def test_missing_point(self, tangent):
        with pytest.raises(InvalidDatumError):
            tangent.at("x15")

    @pytest.mark.parametrize("data,match", [
        ({"kind": "cotangent", "rank": 1, "weights": {}}, "kind"),
        ({"kind": "tangent", "rank": 1, "weights": {"p": [["0"]]}}, "zero weight"),
        ({"kind": "tangent", "rank": 2, "weights": {"p": [["1"]]}}, "rank"),
        ({"kind": "tangent", "rank": 1, "dimension": 2, "weights": {"p": [["1"]]}}, "expected 2"),
        ({"kind": "fiber", "rank": 1, "weights": {"p": [["1"]]}}, "lies over"),
        ({"kind": "tangent", "weights": {}}, "malformed"),
    ])
    def test_validation(self, data, match):
        with pytest.raises(InvalidDatumError, match=match):
            TangentData.from_json(data)

    def test_file_round_trip(self, tmp_path, tangent):
        path = tmp_path / "tangent.json"
        dump_tangent_data(tangent, str(path))
        assert load_tangent_data(str(path)).to_json() == tangent.to_json()

    def test_unreadable_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(InvalidDatumError, match="cannot read"):
            load_tangent_data(str(path))


# ── Smooth points ─────────────────────────────────────────────────────

class TestSmoothMultiplicity:
    def test_inverse_of_euler_factor(self, ring):
        weights = [A, -B, A + B]
        localized = ring.loc_scale(smooth_multiplicity(ring, weights), euler_factor(ring, weights))
        cleared = ring.clear_denominators(localized)
        assert cleared.ok
        assert cleared.series == ring.one(cleared.certified_order)

    def test_zero_weight(self, ring):
        with pytest.raises(CobordismError, match="degenerate"):
            smooth_multiplicity(ring, [A, Character((0, 0))])

    def test_euler_factor_additive(self):
        flat = TorusRing(2, additive_law(4))
        assert euler_factor(flat, [A, B]) == TruncatedSeries.from_sympy("t1*t2", 2, 4)


class TestClasses:
    def test_point_class_support(self, ring, tangent):
        f = point_class(ring, "x45", tangent)
        assert f["x45"] == ring.chern_product([-w for w in tangent.at("x45")])
        assert all(f[p].is_zero() for p in tangent.points if p != "x45")

    def test_point_classes_are_members(self, ring, tangent, ig25):
        for point, f in point_classes(ring, tangent).items():
            assert check_membership(ig25, f, ring).is_member, point

    @pytest.mark.parametrize("name", ["X0_normal", "X1_normal", "X2_normal", "X2prime_normal", "P2_14_34_45_normal"])
    def test_subvariety_classes_are_members(self, ring, tangent, ig25, name):
        normal = load_ig25_dataset(name)
        f = subvariety_class(ring, normal, tangent.points)
        assert check_membership(ig25, f, ring).is_member
        assert all(f[p].is_zero() for p in tangent.points if p not in normal.weights)

    def test_point_equals_smallest_schubert_variety(self, ring, tangent):
        normal = load_ig25_dataset("X0_normal")
        f = subvariety_class(ring, normal, tangent.points)
        assert f.agrees_with(point_class(ring, "x12", tangent), ring.order)

    def test_normal_weights_outside_ambient(self, ring):
        normal = load_ig25_dataset("X1_normal")
        with pytest.raises(InvalidDatumError, match="outside the ambient"):
            subvariety_class(ring, normal, ["x12"])

    def test_explicit_order(self, ring, tangent):
        f = point_class(ring, "x45", tangent, order=3)
        assert f["x45"].order == 3
        assert f["x12"].order == 3
        assert subvariety_class(ring, load_ig25_dataset("X0_normal"), tangent.points, order=3)["x12"].order == 3

    @pytest.mark.slow
    def test_point_classes_at_default_order(self, tangent, ig25):
        wide = TorusRing(2, universal_law(8))
        for point, f in point_classes(wide, tangent).items():
            assert f[point] == wide.chern_product([-w for w in tangent.at(point)])
            assert check_membership(ig25, f, wide).is_member, point

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["X0_normal", "X1_normal", "X2_normal", "X2prime_normal", "P2_14_34_45_normal"])
    def test_subvariety_classes_at_default_order(self, tangent, ig25, name):
        wide = TorusRing(2, universal_law(8))
        f = subvariety_class(wide, load_ig25_dataset(name), tangent.points)
        assert check_membership(ig25, f, wide).is_member


# ── Singular points ───────────────────────────────────────────────────

class TestSingularPullback:
    def test_denominator_size(self):
        assert denominator_size(load_ig25_dataset("x4_resolution_fiber")) == 5
        assert denominator_size(load_ig25_dataset("x4_star_fiber")) == 5

    def test_fiber_sum_is_sum_of_terms(self, ring):
        fiber = load_ig25_dataset("x4_resolution_fiber")
        total = fiber_multiplicity(ring, fiber)
        terms = [smooth_multiplicity(ring, fiber.at(p)) for p in fiber.points]
        expected = ring.loc_add(ring.loc_add(terms[0], terms[1]), ring.loc_add(terms[2], terms[3]))
        assert ring.loc_eq(total, expected)

    def test_empty_fiber(self, ring):
        empty = TangentData("fiber", 2, {}, over="x12")
        with pytest.raises(InvalidDatumError, match="empty fiber"):
            fiber_multiplicity(ring, empty)

    def test_resolution_clears(self, ring, tangent):
        pullback = singular_class_pullback(ring, "x12", tangent, load_ig25_dataset("x4_resolution_fiber"))
        assert pullback.ok
        assert pullback.order == ring.order
        assert pullback.series.order == ring.order
        assert pullback.to_json()["cleared"] is True

    def test_additive_resolutions_agree(self, tangent):
        flat = TorusRing(2, additive_law(4))
        expected = TruncatedSeries.from_sympy("2*(t1 + t2)**2", 2, 4)
        for name in ("x4_resolution_fiber", "x4_star_fiber"):
            pullback = singular_class_pullback(flat, "x12", tangent, load_ig25_dataset(name))
            assert pullback.series == expected, name

    @pytest.mark.slow
    def test_universal_resolutions_differ(self, tangent):
        wide = TorusRing(2, universal_law(6))
        first = singular_class_pullback(wide, "x12", tangent, load_ig25_dataset("x4_resolution_fiber"))
        second = singular_class_pullback(wide, "x12", tangent, load_ig25_dataset("x4_star_fiber"))
        assert first.ok and second.ok
        assert not first.series.agrees_with(second.series, 6)

    @pytest.mark.slow
    def test_additive_resolutions_agree_order_eight(self, tangent):
        flat = TorusRing(2, additive_law(8))
        expected = TruncatedSeries.from_sympy("2*(t1 + t2)**2", 2, 8)
        for name in ("x4_resolution_fiber", "x4_star_fiber"):
            pullback = singular_class_pullback(flat, "x12", tangent, load_ig25_dataset(name))
            assert pullback.ok, name
            assert pullback.series.agrees_with(expected, 8), name

    @pytest.mark.slow
    def test_universal_resolutions_differ_order_eight(self, tangent):
        wide = TorusRing(2, universal_law(8))
        first = singular_class_pullback(wide, "x12", tangent, load_ig25_dataset("x4_resolution_fiber"))
        second = singular_class_pullback(wide, "x12", tangent, load_ig25_dataset("x4_star_fiber"))
        assert first.ok and second.ok
        assert first.series.order == second.series.order == 8
        assert not first.series.agrees_with(second.series, 8)

    def test_one_point_fiber_is_subvariety_class(self, ring):
        rng = random.Random(25)
        for _ in range(10):
            weights = []
            while len(weights) < 4:
                chi = Character((rng.randint(-2, 2), rng.randint(-2, 2)))
                if not chi.is_zero():
                    weights.append(chi)
            split = rng.randint(1, 3)
            ambient = TangentData("tangent", 2, {"x": tuple(weights)})
            fiber = TangentData("fiber", 2, {"y": tuple(weights[:split])}, over="x")
            normal = TangentData("normal", 2, {"x": tuple(weights[split:])})
            pullback = singular_class_pullback(ring, "x", ambient, fiber)
            assert pullback.ok, weights
            assert pullback.series.agrees_with(subvariety_class(ring, normal, ["x"])["x"], ring.order), weights

    def test_fiber_over_another_point(self, ring, tangent):
        with pytest.raises(InvalidDatumError, match="lies over"):
            singular_class_pullback(ring, "x13", tangent, load_ig25_dataset("x4_star_fiber"))

    def test_working_order_limit(self, tangent):
        deep = TorusRing(2, additive_law(14))
        with pytest.raises(TruncationError, match="working order"):
            singular_class_pullback(deep, "x12", tangent, load_ig25_dataset("x4_star_fiber"))
