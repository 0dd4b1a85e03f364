"""Tests for gkm_cobordism.geometry.horospherical"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from gkm_cobordism.algebra import Character
from gkm_cobordism.errors import CobordismError, InvalidDatumError, UnresolvedSurfaceKindError
from gkm_cobordism.geometry import (
    GkmDatum,
    PasquierTriple,
    build_gkm,
    canonical_constraints,
    chi,
    congruence_system,
    point_positions,
    surface_scan,
)

FIXTURE = Path(__file__).parent / "fixtures" / "ig25_congruences.json"
IG25 = PasquierTriple(3, n=2, m=2)


@pytest.fixture(scope="module")
def ig25():
    return build_gkm(IG25)


# ── Triples ───────────────────────────────────────────────────────────

class TestPasquierTriple:
    @pytest.mark.parametrize("family,n,m", [(1, 3, None), (1, 5, None), (2, None, None), (3, 2, 2), (3, 4, 3), (4, None, None), (5, None, None)])
    def test_valid(self, family, n, m):
        PasquierTriple(family, n=n, m=m)

    @pytest.mark.parametrize("family,n,m", [
        (1, 2, None),
        (1, 3, 2),
        (3, 2, 1),
        (3, 2, 3),
        (3, 6, 2),
        (2, 3, None),
        (5, None, 1),
        (6, None, None),
    ])
    def test_invalid(self, family, n, m):
        with pytest.raises(CobordismError):
            PasquierTriple(family, n=n, m=m)

    def test_cartan_types(self):
        assert IG25.cartan == ("C", 2)
        assert PasquierTriple(4).cartan == ("F", 4)
        assert PasquierTriple(5).cartan == ("G", 2)

    def test_chi(self):
        assert chi(IG25) == Character((0, 1))
        assert chi(PasquierTriple(5)) == Character((1, 0, -1))


# ── Surface scan ──────────────────────────────────────────────────────

class TestSurfaceScan:
    def test_family_1_has_no_surface(self):
        report = surface_scan(PasquierTriple(1, n=3))
        assert not report.has_surface
        assert report.resolved
        assert report.point_count == 0

    def test_family_2_has_no_surface(self):
        assert not surface_scan(PasquierTriple(2)).has_surface

    def test_isotropic_grassmannian(self):
        report = surface_scan(IG25)
        assert report.alpha == Character((0, 2))
        assert report.pairings == (Fraction(1), Fraction(0))
        assert report.point_count == 3
        assert report.kind == "P2:V2"

    def test_g2(self):
        report = surface_scan(PasquierTriple(5))
        assert report.pairings == (Fraction(1), Fraction(3))
        assert report.point_count == 4
        assert report.kind == "F3"

    def test_family_4_is_unresolved(self):
        report = surface_scan(PasquierTriple(4))
        assert report.has_surface
        assert report.kind is None
        assert not report.resolved
        assert "unresolved" in report.to_text()

    def test_json(self):
        data = surface_scan(IG25).to_json()
        assert data["family"] == 3
        assert data["pairings"] == ["1", "0"]
        assert data["kind"] == "P2:V2"
        assert data["resolved"] is True


# ── Names and positions ───────────────────────────────────────────────

class TestPointNames:
    def test_isotropic_names(self):
        positions = point_positions(IG25)
        assert sorted(positions) == ["x12", "x13", "x14", "x23", "x25", "x34", "x35", "x45"]

    def test_positions(self):
        positions = point_positions(IG25)
        assert positions["x12"] == Character((1, 1))
        assert positions["x45"] == Character((-1, -1))
        assert positions["x13"] == Character((1, 0))
        assert positions["x34"] == Character((0, -1))

    def test_generic_names(self):
        names = list(point_positions(PasquierTriple(5)))
        assert len(names) == 12
        assert sum(name.startswith("y(") for name in names) == 6
        assert sum(name.startswith("z(") for name in names) == 6


# ── Builder ───────────────────────────────────────────────────────────

class TestBuildGkm:
    def test_ig25_shape(self, ig25):
        assert ig25.rank == 2
        assert len(ig25.points) == 8
        assert "x15" not in ig25.points and "x24" not in ig25.points
        assert len(ig25.surfaces) == 4
        assert all(s.kind == "P2" and s.model == "V2" for s in ig25.surfaces)

    def test_ig25_congruences_match_reference(self, ig25):
        expected = json.loads(FIXTURE.read_text(encoding="utf-8"))["constraints"]
        assert canonical_constraints(congruence_system(ig25)) == expected

    def test_json_round_trip(self, ig25):
        data = ig25.to_json()
        assert GkmDatum.from_json(data).to_json() == data

    def test_output_is_stable(self):
        first = json.dumps(build_gkm(IG25).to_json(), sort_keys=True)
        second = json.dumps(build_gkm(IG25).to_json(), sort_keys=True)
        assert first == second

    def test_no_surface(self):
        datum = build_gkm(PasquierTriple(1, n=3))
        assert datum.surfaces == ()
        assert datum.to_json()["surfaces"] == []

    def test_forced_kind_without_surface_is_ignored(self, caplog):
        datum = build_gkm(PasquierTriple(1, n=3), force_kind="F1")
        assert datum.surfaces == ()
        assert "ignoring forced kind" in caplog.text

    def test_g2_surfaces(self):
        datum = build_gkm(PasquierTriple(5))
        assert datum.rank == 3
        assert datum.surfaces
        for surface in datum.surfaces:
            assert surface.kind == "Fn" and surface.n == 3
            assert sum(p.startswith("y(") for p in surface.points) == 2

    @pytest.mark.slow
    def test_family_4_raises_with_partial_datum(self):
        with pytest.raises(UnresolvedSurfaceKindError) as info:
            build_gkm(PasquierTriple(4))
        err = info.value
        assert err.family == 4
        assert err.datum is not None
        assert err.datum.surfaces == ()

    @pytest.mark.slow
    def test_family_4_lenient(self):
        datum = build_gkm(PasquierTriple(4), strict=False)
        assert datum.surfaces == ()
        assert datum.rank == 4

    @pytest.mark.slow
    def test_family_4_rejects_plane(self):
        with pytest.raises(InvalidDatumError, match="does not fit"):
            build_gkm(PasquierTriple(4), force_kind="P2:V2")
