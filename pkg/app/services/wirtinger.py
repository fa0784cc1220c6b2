"""Wirtinger presentations and transposition labelings into S_m.

Meridian images are transpositions, hence involutions, so every crossing
relation reduces to label(out) = label(over) * label(in) * label(over)
whatever the crossing sign.  Signs are kept for the Fox matrix.
"""
import itertools
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import sympy

from .errors import NotSurjective, StrandSpecError
from .projection_diagram import KnotDiagram

logger = logging.getLogger(__name__)

Transposition = Tuple[int, int]

COMPLETE = "complete"
CONFLICT = "conflict"
INCOMPLETE = "incomplete"

STRAND_LINE = re.compile(r"^\s*(\([^)]*\))\s*->\s*(\([^)]*\))\s*$")


@dataclass(frozen=True)
class Relation:
    crossing: int
    over: int
    incoming: int
    outgoing: int
    sign: int


@dataclass(frozen=True)
class StrandSpec:
    begin: int
    overs: Tuple[int, ...]
    end: int

    def __str__(self) -> str:
        return format_strand_spec(self)


@dataclass(frozen=True)
class WirtingerPresentation:
    generators: int
    relations: Tuple[Relation, ...]
    strands: Tuple[Optional[StrandSpec], ...] = ()


@dataclass(frozen=True)
class TranspositionLabeling:
    """labels[k - 1] is the image of arc k."""

    m: int
    labels: Tuple[Transposition, ...]

    def as_dict(self) -> Dict[int, Transposition]:
        return {k: t for k, t in enumerate(self.labels, start=1)}


@dataclass
class PropagationResult:
    status: str
    labels: Dict[int, Transposition] = field(default_factory=dict)
    conflict: Optional[int] = None
    unreached: Tuple[int, ...] = ()


def transposition(a: int, b: int) -> Transposition:
    if a == b:
        raise StrandSpecError(f"({a} {b}) is not a transposition")
    return (a, b) if a < b else (b, a)


def conjugate(o: Transposition, a: Transposition) -> Transposition:
    """o * a * o for transpositions o and a."""
    p, q = o

    def swap(x: int) -> int:
        return q if x == p else p if x == q else x

    return transposition(swap(a[0]), swap(a[1]))


def presentation(D: KnotDiagram) -> WirtingerPresentation:
    if not D.crossings:
        return WirtingerPresentation(generators=1, relations=(), strands=(None,))
    relations = []
    for c in D.crossings:
        relations.append(
            Relation(
                crossing=c.label,
                over=D.arc_of_edge(c.over_in).index,
                incoming=D.arc_of_edge(c.under_in).index,
                outgoing=D.arc_of_edge(c.under_out).index,
                sign=c.sign,
            )
        )
    strands = tuple(StrandSpec(a.begin, a.overs, a.end) for a in D.arcs)
    return WirtingerPresentation(generators=len(D.arcs), relations=tuple(relations), strands=strands)


# strand specs


def parse_strand_spec(text: str) -> StrandSpec:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise StrandSpecError(f"strand spec must be parenthesized: {text!r}")
    try:
        values = [int(p) for p in body[1:-1].split(",") if p.strip()]
    except ValueError as exc:
        raise StrandSpecError(f"strand spec holds a non-integer: {text!r}") from exc
    if len(values) < 2:
        raise StrandSpecError(f"strand spec needs a beginning and an end: {text!r}")
    if values[0] >= 0:
        raise StrandSpecError(f"first entry must be negative (an under crossing): {text!r}")
    if values[-1] >= 0:
        raise StrandSpecError(f"last entry must be negative (an under crossing): {text!r}")
    if any(v <= 0 for v in values[1:-1]):
        raise StrandSpecError(f"middle entries must be positive (over crossings): {text!r}")
    return StrandSpec(begin=-values[0], overs=tuple(values[1:-1]), end=-values[-1])


def format_strand_spec(spec: StrandSpec) -> str:
    values = [-spec.begin, *spec.overs, -spec.end]
    return "(" + ", ".join(str(v) for v in values) + ")"


def format_transposition(t: Transposition) -> str:
    return f"({t[0]} {t[1]})"


def parse_transposition(text: str) -> Transposition:
    parts = text.strip().strip("()").replace(",", " ").split()
    if len(parts) != 2:
        raise StrandSpecError(f"expected a transposition like (1 2), got {text!r}")
    return transposition(int(parts[0]), int(parts[1]))


def resolve_strand(D: KnotDiagram, spec: StrandSpec) -> int:
    for arc in D.arcs:
        if (arc.begin, arc.overs, arc.end) == (spec.begin, spec.overs, spec.end):
            return arc.index
    raise StrandSpecError(f"no strand {format_strand_spec(spec)} in this diagram")


def parse_strand_labels(text: str) -> List[Tuple[StrandSpec, Transposition]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = STRAND_LINE.match(line)
        if not m:
            raise StrandSpecError(f"line {lineno}: expected '<strand-spec> -> (i j)'")
        out.append((parse_strand_spec(m.group(1)), parse_transposition(m.group(2))))
    return out


def load_strand_labels(path: Union[str, Path]) -> List[Tuple[StrandSpec, Transposition]]:
    return parse_strand_labels(Path(path).read_text(encoding="utf-8"))


# propagation


def _infer_over(a: Transposition, b: Transposition) -> Optional[Transposition]:
    """The unique transposition o with o a o = b, when a and b share one point."""
    shared = set(a) & set(b)
    if len(shared) != 1:
        return None
    (x,) = shared
    y = a[0] if a[1] == x else a[1]
    z = b[0] if b[1] == x else b[1]
    return transposition(y, z)


def _propagate(relations: Sequence[Relation], labels: Dict[int, Transposition], touching) -> Optional[int]:
    """Close `labels` in place under the relations; returns a conflicting crossing or None."""
    queue = list(range(len(relations)))
    queued = set(queue)
    while queue:
        r = queue.pop()
        queued.discard(r)
        rel = relations[r]
        o, a, b = labels.get(rel.over), labels.get(rel.incoming), labels.get(rel.outgoing)
        new: List[Tuple[int, Transposition]] = []
        if o is not None and a is not None:
            want = conjugate(o, a)
            if b is None:
                new.append((rel.outgoing, want))
            elif b != want:
                return rel.crossing
        elif o is not None and b is not None:
            new.append((rel.incoming, conjugate(o, b)))
        elif a is not None and b is not None:
            if a != b:
                inferred = _infer_over(a, b)
                if inferred is None:
                    return rel.crossing
                new.append((rel.over, inferred))
        for arc, t in new:
            current = labels.get(arc)
            if current is None:
                labels[arc] = t
                for k in touching[arc]:
                    if k not in queued:
                        queue.append(k)
                        queued.add(k)
            elif current != t:
                return rel.crossing
    return None


def _touching(Pn: WirtingerPresentation) -> Dict[int, List[int]]:
    touching: Dict[int, List[int]] = {k: [] for k in range(1, Pn.generators + 1)}
    for r, rel in enumerate(Pn.relations):
        for arc in {rel.over, rel.incoming, rel.outgoing}:
            touching[arc].append(r)
    return touching


def propagate(Pn: WirtingerPresentation, partial: Mapping[int, Transposition]) -> PropagationResult:
    labels = {int(k): transposition(*v) for k, v in partial.items()}
    conflict = _propagate(Pn.relations, labels, _touching(Pn))
    if conflict is not None:
        return PropagationResult(status=CONFLICT, labels=labels, conflict=conflict)
    unreached = tuple(k for k in range(1, Pn.generators + 1) if k not in labels)
    if unreached:
        return PropagationResult(status=INCOMPLETE, labels=labels, unreached=unreached)
    return PropagationResult(status=COMPLETE, labels=labels)


def satisfies_relations(Pn: WirtingerPresentation, labels: Mapping[int, Transposition]) -> bool:
    return all(
        conjugate(labels[r.over], labels[r.incoming]) == labels[r.outgoing] for r in Pn.relations
    )


def replay_labels(
    D: KnotDiagram, labels: Sequence[Tuple[StrandSpec, Transposition]], m: int = 5
) -> PropagationResult:
    partial: Dict[int, Transposition] = {}
    for spec, t in labels:
        if not (1 <= t[0] < t[1] <= m):
            raise StrandSpecError(f"{format_transposition(t)} is not a transposition of 1..{m}")
        partial[resolve_strand(D, spec)] = t
    return propagate(presentation(D), partial)


def format_labeling(D: KnotDiagram, L: Union[TranspositionLabeling, Mapping[int, Transposition]]) -> str:
    labels = L.as_dict() if isinstance(L, TranspositionLabeling) else L
    lines = []
    for arc in D.arcs:
        spec = StrandSpec(arc.begin, arc.overs, arc.end)
        lines.append(f"{format_strand_spec(spec)} -> {format_transposition(labels[arc.index])}")
    return "\n".join(lines)


# surjectivity and search


def is_surjective(transpositions: Sequence[Transposition], m: int) -> bool:
    """Transpositions generate S_m iff their support graph connects all of 1..m."""
    graph = nx.Graph()
    graph.add_nodes_from(range(1, m + 1))
    for a, b in transpositions:
        if not (1 <= a <= m and 1 <= b <= m):
            return False
        graph.add_edge(a, b)
    return nx.is_connected(graph)


def arc_order(Pn: WirtingerPresentation) -> List[int]:
    """Breadth-first order of the arcs over the graph joining arcs that meet at a crossing."""
    graph = nx.Graph()
    graph.add_nodes_from(range(1, Pn.generators + 1))
    for rel in Pn.relations:
        graph.add_edge(rel.over, rel.incoming)
        graph.add_edge(rel.over, rel.outgoing)
        graph.add_edge(rel.incoming, rel.outgoing)
    order = [1]
    order.extend(v for _, v in nx.bfs_edges(graph, 1, sort_neighbors=sorted))
    order.extend(k for k in sorted(graph.nodes) if k not in set(order))
    return order


def canonical_form(labels: Sequence[Transposition], m: int) -> Tuple[Transposition, ...]:
    """Lexicographically least image of the labeling under relabelings of 1..m."""
    best = None
    for perm in itertools.permutations(range(1, m + 1)):
        image = tuple(transposition(perm[a - 1], perm[b - 1]) for a, b in labels)
        if best is None or image < best:
            best = image
    return best


def _branches(used: int, m: int) -> List[Transposition]:
    # points are introduced in increasing order, which fixes the relabeling symmetry
    out = [(a, b) for a in range(1, used + 1) for b in range(a + 1, used + 1)]
    if used + 1 <= m:
        out.extend((a, used + 1) for a in range(1, used + 1))
    if used + 2 <= m:
        out.append((used + 1, used + 2))
    return sorted(out)


def hom_search(
    Pn: WirtingerPresentation, m: int = 5, limit: Optional[int] = None
) -> List[TranspositionLabeling]:
    """All surjective transposition labelings onto S_m, one per relabeling orbit."""
    if m < 2:
        raise ValueError(f"symmetric group degree must be at least 2, got {m}")
    count = Pn.generators
    touching = _touching(Pn)
    order = arc_order(Pn)
    found = set()
    nodes = 0

    def search(labels: Dict[int, Transposition], used: int) -> bool:
        nonlocal nodes
        nodes += 1
        nxt = next((k for k in order if k not in labels), None)
        if nxt is None:
            seq = tuple(labels[k] for k in range(1, count + 1))
            if is_surjective(seq, m) and satisfies_relations(Pn, labels):
                found.add(canonical_form(seq, m))
                if limit is not None and len(found) >= limit:
                    return True
            return False
        for t in _branches(used, m):
            trial = dict(labels)
            trial[nxt] = t
            if _propagate(Pn.relations, trial, touching) is not None:
                continue
            if search(trial, max(used, t[1])):
                return True
        return False

    search({}, 0)
    logger.debug("hom_search visited %d nodes, %d orbits", nodes, len(found))
    return [TranspositionLabeling(m=m, labels=seq) for seq in sorted(found)]


def bridge_lower_bound(L: TranspositionLabeling, m: Optional[int] = None) -> int:
    m = L.m if m is None else m
    if not is_surjective(L.labels, m):
        raise NotSurjective(f"labeling does not generate S_{m}")
    return m - 1


def alexander_matrix_at_minus_one(Pn: WirtingerPresentation) -> sympy.Matrix:
    M = sympy.zeros(len(Pn.relations), Pn.generators)
    for r, rel in enumerate(Pn.relations):
        M[r, rel.over - 1] += 2
        M[r, rel.incoming - 1] -= 1
        M[r, rel.outgoing - 1] -= 1
    return M


def fox_determinant(Pn: WirtingerPresentation, row: int = 0, column: int = 0) -> int:
    """|det| of the Fox matrix at t = -1 with one relation and one generator removed."""
    if len(Pn.relations) <= 1:
        return 1
    M = alexander_matrix_at_minus_one(Pn)
    M.row_del(row)
    M.col_del(column)
    return abs(int(M.det()))
