import itertools
import shutil

import pytest

from app.services.errors import InconsistentLedger, MissingFixture, VerificationFailure
from app.services.superbridge import bridge_count
from app.services.poly_model import edge_vectors, parse_polygon
from app.services.verdict import (
    AT_LEAST,
    AT_MOST,
    CITATIONS,
    SB,
    SB_REALIZATION,
    TSV_HEADER,
    BoundFact,
    BoundLedger,
    KnowledgeTable,
    conclude,
    find_homomorphism,
    reproduce_theorem1,
)
from app.services.wirtinger import TranspositionLabeling, bridge_lower_bound
from tests.conftest import DATA_DIR, TREFOIL_PD

S5_LABELING = TranspositionLabeling(5, ((1, 2), (1, 3), (1, 4), (2, 5)))
TREFOIL_STICKS = "name: 3_1\n0 0 0\n4 0 0\n1 3 0\n2 -1 2\n3 2 -2\n0 2 1\n-1 1 -1"
TREFOIL_STRANDS = "(-3, 2, -1) -> (1 2)\n(-1, 3, -2) -> (1 3)\n"


class TestKnowledgeTable:
    def test_exception_list(self):
        kb = KnowledgeTable()
        assert len(kb.jeon_jin_exceptions) == 11
        assert "8_7" not in kb.jeon_jin_exceptions
        assert {"3_1", "4_1", "8_4", "8_9"} <= kb.jeon_jin_exceptions

    def test_expected_verdicts_cover_the_fixtures(self):
        kb = KnowledgeTable()
        labels = {p.stem for p in DATA_DIR.glob("*.poly")}
        assert labels == set(kb.expected_verdicts)
        assert sum(1 for v in kb.expected_verdicts.values() if v == (4, 4)) == 20
        assert sum(1 for v in kb.expected_verdicts.values() if v == (5, 5)) == 10


class TestBoundLedger:
    def test_fact_order_does_not_matter(self):
        facts = [
            BoundFact(SB, AT_MOST, 5, "Cor12"),
            BoundFact(SB, AT_LEAST, 3, "Thm3"),
            BoundFact(SB, AT_LEAST, 4, "Thm4"),
            BoundFact(SB, AT_MOST, 6, "Thm6"),
        ]
        outcomes = set()
        for order in itertools.permutations(facts):
            ledger = BoundLedger("k", order)
            outcomes.add((ledger.sb_lower, ledger.sb_upper, ledger.verdict, tuple(ledger.citations)))
        assert outcomes == {(4, 5, "4 or 5", ("Cor12", "Thm4"))}

    def test_inconsistent_facts(self):
        ledger = BoundLedger("k", [BoundFact(SB, AT_MOST, 4, "Cor12")])
        with pytest.raises(InconsistentLedger):
            ledger.add(BoundFact(SB, AT_LEAST, 5, "Thm3"))
        assert ledger.sb_lower == 1

    def test_witness_cannot_bound_the_knot(self):
        """A witness bounds this realization only, never the knot type."""
        with pytest.raises(ValueError):
            BoundFact(SB, AT_LEAST, 4, "Witness")
        fact = BoundFact(SB_REALIZATION, AT_LEAST, 4, "Witness")
        ledger = BoundLedger("k", [fact])
        assert ledger.sb_lower == 1
        assert ledger.realization_lower == 4

    def test_unknown_citation(self):
        with pytest.raises(ValueError):
            BoundFact(SB, AT_LEAST, 4, "Lemma8")
        assert len(CITATIONS) == 8

    @pytest.mark.parametrize(
        "lower,upper,verdict", [(4, 4, "4"), (3, 4, "3 or 4"), (3, 6, "3 to 6")]
    )
    def test_verdict_strings(self, lower, upper, verdict):
        ledger = BoundLedger(
            "k", [BoundFact(SB, AT_LEAST, lower, "Thm3"), BoundFact(SB, AT_MOST, upper, "Cor12")]
        )
        assert ledger.verdict == verdict


class TestConclude:
    def test_8_5_is_exactly_four(self, fixture_polygon):
        ledger = conclude(fixture_polygon("8_5"))
        assert (ledger.sb_lower, ledger.sb_upper, ledger.verdict) == (4, 4, "4")
        assert ledger.citations == ["Cor12", "Thm4"]

    def test_13n_350_with_a_homomorphism(self, fixture_polygon):
        ledger = conclude(fixture_polygon("13n_350"), homs=[S5_LABELING])
        assert ledger.sb_upper == 5
        assert ledger.b_lower == 4
        assert ledger.sb_lower == 5
        assert ledger.verdict == "5"
        assert ledger.citations == ["Cor12", "Thm3", "Lemma10"]

    def test_13n_350_without_a_homomorphism(self, fixture_polygon):
        """Without an S5 labeling only the upper bound is pinned."""
        assert conclude(fixture_polygon("13n_350")).verdict == "4 or 5"

    def test_8_4_is_open(self, fixture_polygon):
        ledger = conclude(fixture_polygon("8_4"))
        assert (ledger.sb_lower, ledger.sb_upper, ledger.verdict) == (3, 4, "3 or 4")

    def test_witness_is_a_realization_fact(self, fixture_polygon):
        P = fixture_polygon("8_10")
        w = bridge_count(edge_vectors(P), (1, 0, 0))
        ledger = conclude(P, witness=w)
        assert ledger.realization_lower == 4
        assert "Witness" not in ledger.citations

    def test_torus_knot(self):
        # odd edge count, so only the stick bound applies from above
        P = parse_polygon(TREFOIL_STICKS)
        ledger = conclude(P)
        assert ledger.verdict == "3"
        assert ledger.citations == ["Thm2", "Thm3", "Thm6"]

    def test_unknown_label_gets_no_lower_bound(self):
        """A polygon without a known knot type gets only the trivial lower bound."""
        P = parse_polygon("0 0 0\n4 0 0\n1 3 0\n2 -1 2\n3 2 -2\n0 2 1")
        ledger = conclude(P)
        assert ledger.sb_lower == 1
        assert ledger.sb_upper in (2, 3)


class TestFindHomomorphism:
    def test_replays_labels_on_a_reference_diagram(self, tmp_path):
        (tmp_path / "3_1.pd").write_text(TREFOIL_PD + "\n")
        (tmp_path / "3_1.hom").write_text(TREFOIL_STRANDS)
        hom, source = find_homomorphism(tmp_path, parse_polygon(TREFOIL_STICKS), 3)
        assert source == "replayed"
        assert bridge_lower_bound(hom) == 2

    def test_labels_that_miss_the_group(self, tmp_path):
        """Both strands sent to the same transposition only reach a copy of Z/2."""
        (tmp_path / "3_1.pd").write_text(TREFOIL_PD + "\n")
        (tmp_path / "3_1.hom").write_text("(-3, 2, -1) -> (1 2)\n(-1, 3, -2) -> (1 2)\n")
        with pytest.raises(VerificationFailure):
            find_homomorphism(tmp_path, parse_polygon(TREFOIL_STICKS), 3)

    def test_without_a_diagram_the_projection_is_searched(self, tmp_path):
        (tmp_path / "3_1.hom").write_text(TREFOIL_STRANDS)
        _, source = find_homomorphism(tmp_path, parse_polygon(TREFOIL_STICKS), 3)
        assert source == "searched"


class TestReproduce:
    """End-to-end report over a data directory"""

    def test_empty_directory(self, tmp_path):
        with pytest.raises(MissingFixture):
            reproduce_theorem1(tmp_path)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(MissingFixture):
            reproduce_theorem1(tmp_path / "nope")

    def test_missing_certificate(self, tmp_path):
        shutil.copy(DATA_DIR / "8_5.poly", tmp_path)
        with pytest.raises(MissingFixture):
            reproduce_theorem1(tmp_path)

    def test_perturbed_certificate_names_the_knot(self, tmp_path):
        shutil.copy(DATA_DIR / "8_5.poly", tmp_path)
        lines = (DATA_DIR / "8_5.cert").read_text().splitlines()
        entries = [line for line in lines if not line.startswith("#")]
        entries[2] = str(int(entries[2]) + 1)
        (tmp_path / "8_5.cert").write_text("\n".join(entries) + "\n")
        with pytest.raises(VerificationFailure) as exc:
            reproduce_theorem1(tmp_path)
        assert exc.value.knot == "8_5"
        assert "residual (-98, -991, 94)" in str(exc.value)

    def test_eight_crossing_subset(self, tmp_path):
        for label in ("8_4", "8_5", "8_10", "10_76"):
            for ext in ("poly", "cert"):
                shutil.copy(DATA_DIR / f"{label}.{ext}", tmp_path)
        report = reproduce_theorem1(tmp_path, budget=2000)
        assert [r.knot for r in report.rows] == ["8_4", "8_5", "8_10", "10_76"]
        assert report.tsv().splitlines() == [
            TSV_HEADER,
            "8_4\t3\t4\t3 or 4\tCor12,Thm3",
            "8_5\t4\t4\t4\tCor12,Thm4",
            "8_10\t4\t4\t4\tCor12,Thm4",
            "10_76\t4\t5\t4 or 5\tCor12,Thm4",
        ]
        assert "sb = 4 for 2 knots: 8_5 8_10" in report.text()

    @pytest.mark.slow
    def test_full_reproduction(self):
        report = reproduce_theorem1(DATA_DIR)
        verdicts = {r.knot: r.verdict for r in report.rows}
        assert len(verdicts) == 33
        assert sum(1 for v in verdicts.values() if v == "4") == 20
        assert sum(1 for v in verdicts.values() if v == "5") == 10
        assert verdicts["8_4"] == verdicts["8_9"] == "3 or 4"
        assert verdicts["10_76"] == "4 or 5"
        assert all(r.citations for r in report.rows)
        assert report.tsv() == reproduce_theorem1(DATA_DIR).tsv()
