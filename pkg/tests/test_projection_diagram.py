import numpy as np
import pytest

from app.services.errors import DiagramFormatError, PlanarInput, SelfIntersection
from app.services.poly_model import PolygonalKnot, load_polygon, parse_polygon
from app.services.projection_diagram import (
    KnotDiagram,
    format_pd,
    gauss_code,
    parse_gauss_code,
    parse_pd,
    project,
    schedule,
    writhe,
)
from tests.conftest import DATA_DIR, TREFOIL_PD, UNIT_SQUARE
from tests.oracles import crossing_count


def _gauss_valid(D: KnotDiagram) -> bool:
    tokens = gauss_code(D).split()
    for c in D.crossings:
        mine = [t for t in tokens if t[1:-1] == str(c.label)]
        if sorted(t[0] for t in mine) != ["O", "U"]:
            return False
    return len(tokens) == 2 * len(D.crossings)


class TestParsePd:
    def test_trefoil(self, trefoil):
        assert len(trefoil.crossings) == 3
        assert all(c.sign == -1 for c in trefoil.crossings)
        assert writhe(trefoil) == -3
        assert _gauss_valid(trefoil)

    def test_trefoil_arcs(self, trefoil):
        arcs = trefoil.arcs
        assert [a.edges for a in arcs] == [(6, 1), (2, 3), (4, 5)]
        assert [a.strand_spec for a in arcs] == [(-3, 2, -1), (-1, 3, -2), (-2, 1, -3)]

    def test_figure_eight(self, figure_eight):
        assert writhe(figure_eight) == 0
        assert len(figure_eight.arcs) == 4
        assert figure_eight.arcs[0].strand_spec == (-2, 1, -4)

    def test_pd_wrapper_and_comments(self):
        D = parse_pd("# trefoil\nPD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]")
        assert format_pd(D) == TREFOIL_PD

    def test_empty_input_is_the_unknot(self):
        D = parse_pd("")
        assert D.crossings == ()
        assert D.arcs == ()
        assert gauss_code(D) == ""

    def test_five_entries_are_rejected(self):
        with pytest.raises(DiagramFormatError):
            parse_pd("X[1,4,2,5,7] X[3,6,4,1] X[5,2,6,3]")

    def test_edge_used_three_times(self):
        with pytest.raises(DiagramFormatError):
            parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,1]")


class TestGaussCode:
    def test_trefoil_code(self, trefoil):
        assert gauss_code(trefoil) == "U1- O3- U2- O1- U3- O2-"

    def test_round_trip(self, trefoil, figure_eight):
        for D in (trefoil, figure_eight):
            assert format_pd(parse_gauss_code(gauss_code(D))) == format_pd(D)

    def test_missing_under_passage(self):
        with pytest.raises(DiagramFormatError):
            parse_gauss_code("O1+ O1+")

    def test_bad_token(self):
        with pytest.raises(DiagramFormatError):
            parse_gauss_code("U1 O1+")


class TestProject:
    """Generic projections of fixture and random polygons"""

    def test_8_10_from_above(self, fixture_polygon):
        D, pose = project(fixture_polygon("8_10"))
        assert pose.direction == (0, 0, 1)
        assert len(D.crossings) >= 8
        assert _gauss_valid(D)
        assert len(D.arcs) == len(D.crossings)

    def test_deterministic(self, fixture_polygon):
        P = fixture_polygon("9_7")
        assert project(P) == project(P)

    def test_every_fixture_projects_to_a_valid_diagram(self):
        for path in sorted(DATA_DIR.glob("*.poly")):
            D, pose = project(load_polygon(path))
            assert _gauss_valid(D), path.stem
            assert all(ok for _, ok in pose.checks)
            assert crossing_count(load_polygon(path).vertices, pose.direction) == len(D.crossings)

    def test_planar_polygon(self):
        with pytest.raises(PlanarInput):
            project(parse_polygon(UNIT_SQUARE))

    def test_repeated_vertex(self):
        """Vertices 1 and 4 coincide."""
        P = parse_polygon("0 0 0\n4 0 0\n2 3 1\n0 0 0\n-2 3 5\n1 -4 2")
        with pytest.raises(SelfIntersection):
            project(P)

    def test_hint_is_tried_first(self):
        assert next(schedule((1, 2, 3))) == (0, (1, 2, 3))

    def test_crossing_counts_match_all_pairs_oracle(self):
        """Sweep crossings agree with an all-pairs segment test on random 10-gons."""
        rng = np.random.default_rng(5)
        checked = 0
        while checked < 100:
            verts = tuple(tuple(int(x) for x in row) for row in rng.integers(-60, 60, size=(10, 3), endpoint=True))
            try:
                P = PolygonalKnot(name="random", vertices=verts)
                D, pose = project(P)
            except (SelfIntersection, PlanarInput, ValueError):
                continue
            assert crossing_count(P.vertices, pose.direction) == len(D.crossings)
            assert _gauss_valid(D)
            checked += 1

    def test_default_schedule(self):
        """The z axis comes first, then the fixed fallback directions."""
        first = [d for _, d in schedule()][:3]
        assert first == [(0, 0, 1), (1, 4, 8), (2, 10, 29)]
