import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.services.gordan_lp import load_certificate
from tests.conftest import DATA_DIR


@pytest.fixture
def client(monkeypatch):
    monkeypatch.setenv("GORDAN_DATA", str(DATA_DIR))
    monkeypatch.setenv("GORDAN_WITNESS_BUDGET", "500")
    return TestClient(app)


@pytest.fixture
def polygon_8_5(fixture_polygon):
    P = fixture_polygon("8_5")
    return {"name": P.name, "vertices": [list(v) for v in P.vertices]}


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


class TestCertificates:
    def test_verify(self, client, polygon_8_5):
        body = dict(polygon_8_5, certificate=list(load_certificate(DATA_DIR / "8_5.cert")))
        resp = client.post("/certificates/verify", json=body)
        assert resp.status_code == 200
        assert resp.json()["valid"] is True
        assert resp.json()["residual"] == [0, 0, 0]

    def test_verify_reports_residual(self, client, polygon_8_5):
        """A unit certificate leaves its first column as the residual."""
        body = dict(polygon_8_5, certificate=[1] + [0] * 9)
        data = client.post("/certificates/verify", json=body).json()
        assert data["valid"] is False
        assert data["residual"] == [1000, 0, 0]

    def test_verify_wrong_length(self, client, polygon_8_5):
        body = dict(polygon_8_5, certificate=[1, 1, 1])
        assert client.post("/certificates/verify", json=body).status_code == 400

    def test_find(self, client, polygon_8_5):
        data = client.post("/certificates/find", json=polygon_8_5).json()
        assert data["sb_upper"] == 4
        assert data["direction"] is None
        assert len(data["certificate"]) == 10

    def test_find_on_odd_polygon(self, client):
        body = {"vertices": [[0, 0, 0], [3, 0, 0], [3, 3, 1], [0, 4, 0], [-1, 2, 5]]}
        resp = client.post("/certificates/find", json=body)
        assert resp.status_code == 400
        assert "even edge count" in resp.json()["detail"]

    def test_gordan_direction_branch(self, client):
        resp = client.post("/gordan", json={"columns": [[1, 0, 0], [1, 2, 0], [1, -3, 5]]})
        data = resp.json()
        assert data["branch"] == "DirectionExists"
        assert data["certificate"] is None

    def test_gordan_certificate_branch(self, client):
        resp = client.post("/gordan", json={"columns": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]})
        assert resp.json()["certificate"] == [1, 1, 1, 1]

    def test_gordan_empty_matrix(self, client):
        resp = client.post("/gordan", json={"columns": []})
        assert resp.status_code == 400
        assert "no columns" in resp.json()["detail"]

    def test_gordan_short_column(self, client):
        assert client.post("/gordan", json={"columns": [[1, 0], [-1, 0]]}).status_code == 400


class TestKnots:
    def test_witness_along_x(self, client, fixture_polygon):
        P = fixture_polygon("8_10")
        body = {"name": P.name, "vertices": [list(v) for v in P.vertices], "direction": [1, 0, 0]}
        data = client.post("/knots/witness", json=body).json()
        assert data["count"] == 4
        assert len(data["signs"]) == 10

    def test_witness_orthogonal_direction(self, client):
        body = {"vertices": [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], "direction": [1, 0, 0]}
        assert client.post("/knots/witness", json=body).status_code == 400

    def test_project(self, client, fixture_polygon):
        P = fixture_polygon("8_10")
        data = client.post("/knots/project", json={"vertices": [list(v) for v in P.vertices]}).json()
        assert data["direction"] == [0, 0, 1]
        assert data["crossings"] >= 8
        assert data["determinant"] % 2 == 1

    def test_ledger(self, client):
        data = client.get("/knots/8_5/ledger").json()
        assert data["verdict"] == "4"
        assert data["citations"] == ["Cor12", "Thm4"]

    def test_ledger_bad_label(self, client):
        assert client.get("/knots/trefoil/ledger").status_code == 400

    def test_ledger_missing_fixture(self, client):
        """3_1 is a valid label, but there is no fixture for it."""
        assert client.get("/knots/3_1/ledger").status_code == 404
