"""Bound ledgers for sb[K] and b[K] and the machine-checked classification report."""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .errors import InconsistentLedger, MissingFixture, VerificationFailure
from .gordan_lp import find_certificate, load_certificate, verify_certificate
from .poly_model import PolygonalKnot, edge_vectors, load_polygon, sign_matrix
from .projection_diagram import parse_pd, project
from .superbridge import (
    DirectionWitness,
    jin_bound,
    torus_superbridge,
    upper_bound_from_certificate,
    witness_search,
)
from .utils import KNOT_LABEL, knot_sort_key
from .wirtinger import (
    COMPLETE,
    TranspositionLabeling,
    bridge_lower_bound,
    canonical_form,
    fox_determinant,
    hom_search,
    is_surjective,
    load_strand_labels,
    presentation,
    replay_labels,
)

logger = logging.getLogger(__name__)

CITATIONS = ("Cor12", "Thm2", "Thm3", "Thm4", "Thm6", "Thm7", "Lemma10", "Witness")

SB = "sb"
BRIDGE = "b"
SB_REALIZATION = "sb_realization"

AT_LEAST = ">="
AT_MOST = "<="

UNKNOT = "0_1"

JEON_JIN_EXCEPTIONS: FrozenSet[str] = frozenset(
    {"3_1", "4_1", "5_2", "6_1", "6_2", "6_3", "7_2", "7_3", "7_4", "8_4", "8_9"}
)

TORUS_PARAMETERS: Dict[str, Tuple[int, int]] = {
    "3_1": (2, 3),
    "5_1": (2, 5),
    "7_1": (2, 7),
    "8_19": (3, 4),
    "9_1": (2, 9),
    "10_124": (3, 5),
}

_EXACT_FOUR = (
    "8_1 8_2 8_3 8_5 8_6 8_7 8_8 8_10 8_11 8_12 8_13 8_14 8_15 "
    "9_7 9_16 9_20 9_26 9_28 9_32 9_33"
).split()
_EXACT_FIVE = (
    "13n_226 13n_328 13n_342 13n_343 13n_350 13n_512 13n_973 13n_2641 13n_5018 14n_1753"
).split()

THEOREM1_VERDICTS: Dict[str, Tuple[int, int]] = {
    **{k: (4, 4) for k in _EXACT_FOUR},
    **{k: (5, 5) for k in _EXACT_FIVE},
    "8_4": (3, 4),
    "8_9": (3, 4),
    "10_76": (4, 5),
}


@dataclass(frozen=True)
class KnowledgeTable:
    jeon_jin_exceptions: FrozenSet[str] = JEON_JIN_EXCEPTIONS
    torus: Dict[str, Tuple[int, int]] = field(default_factory=lambda: dict(TORUS_PARAMETERS))
    expected_verdicts: Dict[str, Tuple[int, int]] = field(default_factory=lambda: dict(THEOREM1_VERDICTS))

    def is_nontrivial(self, label: str) -> bool:
        return bool(KNOT_LABEL.match(label)) and label != UNKNOT


@dataclass(frozen=True)
class BoundFact:
    quantity: str
    relation: str
    value: int
    citation: str
    derived_from: Optional[str] = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.citation not in CITATIONS:
            raise ValueError(f"unknown citation {self.citation!r}")
        if self.quantity not in (SB, BRIDGE, SB_REALIZATION):
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.relation not in (AT_LEAST, AT_MOST):
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.citation == "Witness" and self.quantity != SB_REALIZATION:
            raise ValueError("witness counts only bound the realization, never sb[K]")

    def describe(self) -> str:
        tag = self.citation if self.derived_from is None else f"{self.derived_from}+{self.citation}"
        text = f"{self.quantity} {self.relation} {self.value} [{tag}]"
        return f"{text} {self.note}" if self.note else text


def _order(tags) -> List[str]:
    return sorted(set(tags), key=CITATIONS.index)


class BoundLedger:
    """Accumulated bounds for one knot; the result does not depend on fact order."""

    def __init__(self, knot: str, facts: Sequence[BoundFact] = ()) -> None:
        self.knot = knot
        self.facts: List[BoundFact] = []
        for fact in facts:
            self.add(fact)

    def add(self, fact: BoundFact) -> None:
        self.facts.append(fact)
        lower, upper = self.sb_lower, self.sb_upper
        if upper is not None and lower > upper:
            self.facts.pop()
            raise InconsistentLedger(
                f"{self.knot}: sb lower bound {lower} exceeds upper bound {upper} after {fact.describe()}"
            )

    def _best(self, quantity: str, relation: str) -> Tuple[Optional[int], List[BoundFact]]:
        facts = [f for f in self.facts if f.quantity == quantity and f.relation == relation]
        if not facts:
            return None, []
        pick = max if relation == AT_LEAST else min
        value = pick(f.value for f in facts)
        return value, [f for f in facts if f.value == value]

    @property
    def sb_lower(self) -> int:
        value, _ = self._best(SB, AT_LEAST)
        return 1 if value is None else value

    @property
    def sb_upper(self) -> Optional[int]:
        return self._best(SB, AT_MOST)[0]

    @property
    def b_lower(self) -> Optional[int]:
        return self._best(BRIDGE, AT_LEAST)[0]

    @property
    def realization_lower(self) -> Optional[int]:
        return self._best(SB_REALIZATION, AT_LEAST)[0]

    @property
    def exact(self) -> bool:
        return self.sb_upper is not None and self.sb_lower == self.sb_upper

    @property
    def citations(self) -> List[str]:
        tags = []
        for relation in (AT_LEAST, AT_MOST):
            for f in self._best(SB, relation)[1]:
                tags.append(f.citation)
                if f.derived_from:
                    tags.append(f.derived_from)
        return _order(tags)

    @property
    def verdict(self) -> str:
        lower, upper = self.sb_lower, self.sb_upper
        if upper is None:
            return f">= {lower}"
        if lower == upper:
            return str(lower)
        if upper == lower + 1:
            return f"{lower} or {upper}"
        return f"{lower} to {upper}"

    def summary(self) -> str:
        lines = [f"{self.knot}: sb = {self.verdict}  ({', '.join(self.citations) or 'no citation'})"]
        lines.extend(f"  {f.describe()}" for f in self.facts)
        return "\n".join(lines)


def conclude(
    P: PolygonalKnot,
    homs: Optional[Sequence[TranspositionLabeling]] = None,
    kb: Optional[KnowledgeTable] = None,
    witness: Optional[DirectionWitness] = None,
) -> BoundLedger:
    kb = kb or KnowledgeTable()
    label = P.name
    ledger = BoundLedger(label)

    upper = upper_bound_from_certificate(P) if P.n % 2 == 0 else None
    if upper is not None:
        ledger.add(BoundFact(SB, AT_MOST, upper.value, "Cor12", note=f"{P.n}-gon certificate"))
    else:
        ledger.add(BoundFact(SB, AT_MOST, jin_bound(P.n), "Thm6", note=f"{P.n}-gon"))

    if label in kb.torus:
        p, q = kb.torus[label]
        value = torus_superbridge(p, q)
        ledger.add(BoundFact(SB, AT_LEAST, value, "Thm2", note=f"T({p},{q})"))
        ledger.add(BoundFact(SB, AT_MOST, value, "Thm2", note=f"T({p},{q})"))

    if kb.is_nontrivial(label):
        # every nontrivial knot has b >= 2
        ledger.add(BoundFact(SB, AT_LEAST, 3, "Thm3"))
        if label not in kb.jeon_jin_exceptions:
            ledger.add(BoundFact(SB, AT_LEAST, 4, "Thm4"))

    if homs:
        best = max(homs, key=lambda h: h.m)
        b = bridge_lower_bound(best)
        ledger.add(BoundFact(BRIDGE, AT_LEAST, b, "Lemma10", note=f"onto S_{best.m}"))
        ledger.add(BoundFact(SB, AT_LEAST, b + 1, "Thm3", derived_from="Lemma10"))

    if witness is not None:
        ledger.add(
            BoundFact(SB_REALIZATION, AT_LEAST, witness.count, "Witness", note=f"v = {witness.direction}")
        )
    return ledger


# reproduction report


@dataclass(frozen=True)
class ReportRow:
    knot: str
    n: int
    sb_lower: int
    sb_upper: int
    verdict: str
    citations: Tuple[str, ...]
    witness_count: int
    hom_source: str = ""

    def tsv(self) -> str:
        return "\t".join(
            [self.knot, str(self.sb_lower), str(self.sb_upper), self.verdict, ",".join(self.citations)]
        )


TSV_HEADER = "knot\tsb_lower\tsb_upper\tverdict\tcitations"


@dataclass(frozen=True)
class Report:
    rows: Tuple[ReportRow, ...]

    def tsv(self) -> str:
        return "\n".join([TSV_HEADER] + [r.tsv() for r in self.rows]) + "\n"

    def text(self) -> str:
        total = len(self.rows)
        exact: Dict[int, List[str]] = {}
        open_rows = []
        for r in self.rows:
            if r.sb_lower == r.sb_upper:
                exact.setdefault(r.sb_lower, []).append(r.knot)
            else:
                open_rows.append(r)
        lines = [
            f"{total}/{total} certificates verified",
            f"{total}/{total} fresh certificates found",
            f"{total}/{total} realizations pinned by a witness of count n/2 - 1",
        ]
        for value in sorted(exact):
            knots = exact[value]
            lines.append(f"sb = {value} for {len(knots)} knots: {' '.join(knots)}")
        for r in open_rows:
            lines.append(f"sb[{r.knot}] is {r.verdict}")
        return "\n".join(lines) + "\n"


def _fixture_labels(data_dir: Path) -> List[str]:
    if not data_dir.is_dir():
        raise MissingFixture(f"data directory {data_dir} does not exist")
    labels = sorted((p.stem for p in data_dir.glob("*.poly")), key=knot_sort_key)
    if not labels:
        raise MissingFixture(f"no .poly fixtures in {data_dir}")
    return labels


def find_homomorphism(
    data_dir: Path, P: PolygonalKnot, m: int
) -> Tuple[Optional[TranspositionLabeling], str]:
    """Replay bundled strand labels on a reference diagram, else search a projection."""
    knot = P.name
    pd_path = data_dir / f"{knot}.pd"
    hom_path = data_dir / f"{knot}.hom"
    if pd_path.exists() and hom_path.exists():
        diagram = parse_pd(pd_path.read_text(encoding="utf-8"))
        result = replay_labels(diagram, load_strand_labels(hom_path), m)
        if result.status != COMPLETE:
            raise VerificationFailure(knot, f"strand labels do not propagate ({result.status})")
        seq = tuple(result.labels[k] for k in range(1, len(diagram.arcs) + 1))
        if not is_surjective(seq, m):
            raise VerificationFailure(knot, f"replayed labeling does not generate S_{m}")
        return TranspositionLabeling(m=m, labels=canonical_form(seq, m)), "replayed"

    logger.warning("%s: no reference diagram, searching a projection instead", knot)
    diagram, pose = project(P)
    pn = presentation(diagram)
    logger.info(
        "%s: projected along %s, %d crossings, determinant %d",
        knot, pose.direction, len(diagram.crossings), fox_determinant(pn),
    )
    homs = hom_search(pn, m=m, limit=1)
    return (homs[0], "searched") if homs else (None, "searched")


def reproduce_theorem1(
    data_dir: Union[str, Path],
    budget: int = 10_000,
    seed: int = 0,
    m: int = 5,
    kb: Optional[KnowledgeTable] = None,
) -> Report:
    kb = kb or KnowledgeTable()
    data_dir = Path(data_dir)
    rows = []
    for knot in _fixture_labels(data_dir):
        cert_path = data_dir / f"{knot}.cert"
        if not cert_path.exists():
            raise MissingFixture(f"{knot}: certificate file {cert_path.name} is missing")
        P = load_polygon(data_dir / f"{knot}.poly")
        E = sign_matrix(edge_vectors(P))

        check = verify_certificate(E, load_certificate(cert_path))
        if not check.valid:
            raise VerificationFailure(knot, check.describe())

        fresh = find_certificate(E)
        if fresh is None or not verify_certificate(E, fresh).valid:
            raise VerificationFailure(knot, "no certificate found for the sign matrix")

        witness = witness_search(P, budget=budget, seed=seed)
        if witness.count != P.n // 2 - 1:
            raise VerificationFailure(
                knot, f"best witness has count {witness.count}, expected {P.n // 2 - 1}"
            )

        homs: List[TranspositionLabeling] = []
        source = ""
        if (data_dir / f"{knot}.hom").exists():
            hom, source = find_homomorphism(data_dir, P, m)
            if hom is None:
                raise VerificationFailure(knot, f"no surjection onto S_{m} found")
            homs.append(hom)

        ledger = conclude(P, homs=homs, kb=kb, witness=witness)
        expected = kb.expected_verdicts.get(knot)
        got = (ledger.sb_lower, ledger.sb_upper)
        if expected is not None and got != expected:
            raise VerificationFailure(knot, f"ledger gives sb in {got}, expected {expected}")

        logger.info("%s: sb = %s", knot, ledger.verdict)
        rows.append(
            ReportRow(
                knot=knot,
                n=P.n,
                sb_lower=ledger.sb_lower,
                sb_upper=ledger.sb_upper,
                verdict=ledger.verdict,
                citations=tuple(ledger.citations),
                witness_count=witness.count,
                hom_source=source,
            )
        )
    return Report(rows=tuple(rows))
