import pytest

from app.services.errors import (
    CollinearFrame,
    DegeneratePolygon,
    OddEdgeCount,
    PolygonFormatError,
    UnsupportedPose,
)
from app.services.poly_model import (
    EdgeVectors,
    PolygonalKnot,
    edge_vectors,
    is_posed,
    load_polygon,
    normalize_pose,
    parse_polygon,
    serialize_polygon,
    sign_matrix,
)
from tests.conftest import DATA_DIR, UNIT_SQUARE


def test_parse_8_5_table(fixture_polygon):
    P = fixture_polygon("8_5")
    assert P.name == "8_5"
    assert P.n == 10
    assert P.vertices[0] == (0, 0, 0)
    assert P.vertices[1] == (1000, 0, 0)
    assert P.vertices[9] == (182, 877, 444)


def test_parse_minimal_triangle():
    P = parse_polygon("0 0 0\n1 0 0\n0 1 0")
    assert P.n == 3
    assert P.name == "unnamed"


def test_parse_reports_zero_edge_with_line_number():
    with pytest.raises(PolygonFormatError) as exc:
        parse_polygon("0 0 0\n0 0 0\n1 0 0")
    assert exc.value.line == 2
    assert "zero edge between vertices 1 and 2" in str(exc.value)


def test_parse_rejects_wrap_around_zero_edge():
    """The closing edge from the last vertex back to the first has length zero."""
    with pytest.raises(PolygonFormatError):
        parse_polygon("0 0 0\n1 0 0\n0 1 0\n0 0 0")


@pytest.mark.parametrize(
    "text,line",
    [
        ("0 0 0\n1 0.5 0\n0 1 0", 2),
        ("0 0 0\n1 0\n0 1 0", 2),
        ("# comment\n0 0 0\nx 1 0\n0 1 0", 3),
    ],
)
def test_parse_rejects_bad_tokens(text, line):
    with pytest.raises(PolygonFormatError) as exc:
        parse_polygon(text)
    assert exc.value.line == line


def test_parse_needs_three_vertices():
    with pytest.raises(PolygonFormatError):
        parse_polygon("0 0 0\n1 0 0")


def test_header_name_wins_over_file_name():
    P = parse_polygon("name: 8_10\n0 0 0\n1 0 0\n0 1 0", name="ignored")
    assert P.name == "8_10"


def test_serialize_then_parse_is_identity_on_fixtures():
    for path in sorted(DATA_DIR.glob("*.poly")):
        P = load_polygon(path)
        assert parse_polygon(serialize_polygon(P)) == P


def test_polygonal_knot_rejects_floats():
    with pytest.raises(DegeneratePolygon):
        PolygonalKnot(name="x", vertices=((0, 0, 0), (1.0, 0, 0), (0, 1, 0)))


class TestEdgeVectors:
    """e_i = v_{i+1} - v_i with the last edge wrapping to v_1."""

    def test_8_5_first_and_last_edge(self, fixture_polygon):
        E = edge_vectors(fixture_polygon("8_5"))
        assert E[0] == (1000, 0, 0)
        assert E[9] == (-182, -877, -444)

    def test_unit_square(self):
        E = edge_vectors(parse_polygon(UNIT_SQUARE))
        assert E.edges == ((1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0))

    def test_closure_on_every_fixture(self):
        for path in DATA_DIR.glob("*.poly"):
            E = edge_vectors(load_polygon(path))
            assert tuple(sum(e[k] for e in E) for k in range(3)) == (0, 0, 0)

    def test_open_chain_is_rejected(self):
        with pytest.raises(DegeneratePolygon):
            EdgeVectors(edges=((1, 0, 0), (0, 1, 0)))


class TestSignMatrix:
    def test_8_5_columns(self, fixture_polygon):
        S = sign_matrix(edge_vectors(fixture_polygon("8_5")))
        assert S.columns[0] == (1000, 0, 0)
        assert S.columns[1] == (845, -535, 0)
        assert S.n == 10
        assert S.rows[0][:2] == (1000, 845)

    def test_unit_square(self):
        S = sign_matrix(edge_vectors(parse_polygon(UNIT_SQUARE)))
        assert S.columns == ((1, 0, 0), (0, -1, 0), (-1, 0, 0), (0, 1, 0))
        assert S.edges() == edge_vectors(parse_polygon(UNIT_SQUARE)).edges

    def test_pentagon_is_rejected(self):
        P = parse_polygon("0 0 0\n2 0 0\n3 2 0\n1 3 1\n-1 2 0")
        with pytest.raises(OddEdgeCount) as exc:
            sign_matrix(edge_vectors(P))
        assert "even edge count" in str(exc.value)


class TestNormalizePose:
    def test_fixtures_are_already_posed(self):
        for path in DATA_DIR.glob("*.poly"):
            P = load_polygon(path)
            assert is_posed(P)
            assert normalize_pose(P) == P

    def test_translation_and_axis_rotation(self, fixture_polygon):
        P = fixture_polygon("8_5")
        # rotate a quarter turn about z, then shift
        moved = PolygonalKnot(
            name=P.name, vertices=tuple((-y + 7, x - 3, z + 11) for x, y, z in P.vertices)
        )
        assert not is_posed(moved)
        assert normalize_pose(moved) == P

    def test_collinear_frame(self):
        P = parse_polygon("0 0 0\n1 0 0\n2 0 0\n1 1 1")
        with pytest.raises(CollinearFrame):
            normalize_pose(P)

    def test_irrational_rotation_is_refused(self):
        """The first edge is along (1, 1, 0), so the rotation to the x axis is irrational."""
        P = parse_polygon("0 0 0\n1 1 0\n0 1 0\n0 0 1")
        with pytest.raises(UnsupportedPose):
            normalize_pose(P)
