"""Tests for root systems, Weyl groups and T-stable curves of G/P."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest

from gkm_cobordism.algebra.torus_ring import Character
from gkm_cobordism.errors import CobordismError
from gkm_cobordism.geometry.root_flag import (
    curve_degree,
    dominant_weight,
    enumerate_curves,
    enumerate_fixed_points,
    maximal_parabolic,
    pairing,
    parse_cartan_type,
    parse_parabolic,
    reflect,
    root_system,
    standard_cartan_matrix,
    weyl_order,
)


# ── Root systems ──────────────────────────────────────────────────────

class TestRootSystem:
    @pytest.mark.parametrize("cartan,rank,positive", [
        ("A", 2, 3), ("A", 3, 6), ("B", 2, 4), ("B", 3, 9), ("C", 3, 9),
        ("C", 5, 25), ("F", 4, 24), ("G", 2, 6),
    ])
    def test_positive_root_count(self, cartan, rank, positive):
        system = root_system(cartan, rank)
        assert len(system.positive_roots) == positive
        assert len(system.roots) == 2 * positive

    @pytest.mark.parametrize("cartan,rank", [("A", 2), ("B", 3), ("C", 3), ("G", 2), ("F", 4)])
    def test_weyl_group_order(self, cartan, rank):
        system = root_system(cartan, rank)
        assert len(system.weyl_group) == weyl_order(system)

    @pytest.mark.parametrize("cartan,rank", [("B", 4), ("C", 4), ("F", 4), ("G", 2)])
    def test_cartan_matrix(self, cartan, rank):
        system = root_system(cartan, rank)
        assert system.cartan_matrix() == standard_cartan_matrix(cartan, rank)

    def test_g2_cartan_entries(self):
        assert standard_cartan_matrix("G", 2) == ((2, -3), (-1, 2))

    def test_fundamental_weights_dual(self):
        system = root_system("C", 3)
        for i in range(1, 4):
            for j in range(1, 4):
                expected = 1 if i == j else 0
                assert pairing(system.simple_root(i), system.fundamental_weight(j)) == expected

    def test_g2_coordinates(self):
        system = root_system("G", 2)
        assert system.dimension == 3
        assert all(sum(b.coords) == 0 for b in system.roots)

    def test_simple_coefficients(self):
        system = root_system("G", 2)
        highest = system.simple_root(1) * 3 + system.simple_root(2) * 2
        assert system.simple_coefficients(highest) == (3, 2)

    def test_reflection_is_involution(self):
        system = root_system("B", 3)
        weight = system.rho
        for alpha in system.positive_roots:
            assert reflect(alpha, reflect(alpha, weight)) == weight
            assert reflect(alpha, alpha) == -alpha

    def test_act_and_inverse(self):
        system = root_system("C", 3)
        for element in system.weyl_group[:20]:
            assert system.act(element.word, system.rho) == element.weight
            assert system.act_inverse(element.word, element.weight) == system.rho

    def test_parabolic_roots(self):
        system = root_system("C", 2)
        assert system.parabolic_roots({1}) == (system.simple_root(1),)
        assert system.parabolic_roots(set()) == ()

    def test_unsupported(self):
        for cartan, rank in (("E", 6), ("B", 6), ("C", 1), ("G", 3), ("F", 2)):
            with pytest.raises(CobordismError):
                root_system(cartan, rank)

    def test_unknown_index(self):
        with pytest.raises(CobordismError):
            root_system("G", 2).simple_root(3)


# ── Parsing ───────────────────────────────────────────────────────────

class TestParsing:
    def test_cartan_type(self):
        assert parse_cartan_type("G2").name == "G2"
        assert parse_cartan_type(" c3 ").name == "C3"
        with pytest.raises(CobordismError):
            parse_cartan_type("G")

    def test_parabolic(self):
        system = root_system("B", 3)
        assert parse_parabolic(system, "a1,a3") == frozenset({1, 3})
        assert parse_parabolic(system, "2") == frozenset({2})
        assert parse_parabolic(system, "") == frozenset()
        with pytest.raises(CobordismError):
            parse_parabolic(system, "a4")
        with pytest.raises(CobordismError):
            parse_parabolic(system, "alpha")

    def test_maximal_parabolic(self):
        system = root_system("C", 3)
        assert maximal_parabolic(system, 2) == frozenset({1, 3})


# ── Flag varieties ────────────────────────────────────────────────────

class TestFixedPoints:
    def test_dominant_weight(self):
        system = root_system("C", 2)
        assert dominant_weight(system, {1}) == system.fundamental_weight(2)
        assert dominant_weight(system, set()) == system.rho

    @pytest.mark.parametrize("cartan,rank,parabolic,count", [
        ("A", 2, {2}, 3),
        ("C", 2, {1}, 4),
        ("C", 2, {2}, 4),
        ("G", 2, {1}, 6),
        ("G", 2, set(), 12),
        ("C", 3, {1, 3}, 12),
    ])
    def test_counts(self, cartan, rank, parabolic, count):
        assert len(enumerate_fixed_points(root_system(cartan, rank), parabolic)) == count

    def test_minimal_words(self):
        system = root_system("G", 2)
        points = enumerate_fixed_points(system, {1})
        assert points[0].word == ()
        assert sorted(p.length for p in points) == [0, 1, 2, 3, 4, 5]
        assert all(not p.word or p.word[-1] == 2 for p in points)


class TestCurves:
    def test_projective_plane(self):
        curves = enumerate_curves(root_system("A", 2), {2})
        assert len(curves) == 3
        assert all(c.total_degree() == 1 for c in curves)

    def test_g2_curves(self):
        system = root_system("G", 2)
        curves = enumerate_curves(system, {1})
        assert len(curves) == 15
        degrees = Counter(c.total_degree() for c in curves)
        assert degrees == {1: 6, 3: 6, 2: 3}
        assert all(set(c.degree) == {2} for c in curves)

    def test_curve_weight_is_multiple_of_root(self):
        for curve in enumerate_curves(root_system("C", 3), {1, 3}):
            assert curve.weight.is_proportional(curve.root)
            assert curve.u.weight - curve.v.weight == curve.weight

    def test_every_point_has_dimension_many_curves(self):
        system = root_system("C", 3)
        parabolic = {1, 3}
        points = enumerate_fixed_points(system, parabolic)
        curves = enumerate_curves(system, parabolic)
        dimension = len(system.positive_roots) - len(system.parabolic_roots(parabolic))
        valence = Counter()
        for c in curves:
            valence[c.u.weight] += 1
            valence[c.v.weight] += 1
        assert all(valence[p.weight] == dimension for p in points)

    def test_curve_degree(self):
        system = root_system("G", 2)
        alpha1, alpha2 = system.simple_root(1), system.simple_root(2)
        assert curve_degree(system, alpha2, {1}) == {2: Fraction(1)}
        assert curve_degree(system, alpha1 + alpha2, {1}) == {2: Fraction(3)}
        assert curve_degree(system, alpha1 * 3 + alpha2 * 2, {1}) == {2: Fraction(2)}

    def test_curve_degree_errors(self):
        system = root_system("G", 2)
        with pytest.raises(CobordismError, match="Levi"):
            curve_degree(system, system.simple_root(1), {1})
        with pytest.raises(CobordismError, match="not a positive root"):
            curve_degree(system, Character((1, 1, -2)), {1})

    def test_curve_json(self):
        curve = enumerate_curves(root_system("A", 2), {2})[0]
        data = curve.to_json()
        assert set(data) == {"u", "v", "root", "weight", "degree"}
        assert data["degree"] == {"1": "1"}
