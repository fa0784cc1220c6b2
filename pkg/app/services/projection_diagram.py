"""Exact planar projections of polygonal knots and the PD / Gauss codes they yield.

Edge labels follow the PD convention: walking the curve from vertex 1, the
k-th crossing passage P_k has incoming edge k and outgoing edge succ(k), so
edge 1 is the one that contains vertex 1.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DiagramFormatError, NoGenericProjection, PlanarInput, SelfIntersection
from .poly_model import PolygonalKnot
from .utils import Vec3, add, cross, dot, is_zero, scale, sub

logger = logging.getLogger(__name__)

DEFAULT_DIRECTION: Vec3 = (0, 0, 1)
SCHEDULE_STEP: Vec3 = (1, 3, 0)
SCHEDULE_CURVE: Vec3 = (0, 1, 7)
SCHEDULE_LENGTH = 64

PD_TUPLE = re.compile(r"X\s*\[([^\]]*)\]")
GAUSS_TOKEN = re.compile(r"^([OU])(\d+)([+-])$")


@dataclass(frozen=True)
class Crossing:
    label: int
    pd: Tuple[int, int, int, int]
    sign: int

    @property
    def under_in(self) -> int:
        return self.pd[0]

    @property
    def under_out(self) -> int:
        return self.pd[2]

    @property
    def over_in(self) -> int:
        return self.pd[3] if self.sign > 0 else self.pd[1]

    @property
    def over_out(self) -> int:
        return self.pd[1] if self.sign > 0 else self.pd[3]


@dataclass(frozen=True)
class Passage:
    index: int
    crossing: int
    over: bool
    sign: int


@dataclass(frozen=True)
class Arc:
    """Maximal over-strand: begins and ends at under passages."""

    index: int
    edges: Tuple[int, ...]
    begin: int
    overs: Tuple[int, ...]
    end: int

    @property
    def strand_spec(self) -> Tuple[int, ...]:
        return (-self.begin,) + self.overs + (-self.end,)


@dataclass(frozen=True)
class KnotDiagram:
    crossings: Tuple[Crossing, ...]

    def __post_init__(self) -> None:
        crossings = tuple(sorted(self.crossings, key=lambda c: c.label))
        object.__setattr__(self, "crossings", crossings)
        labels = [c.label for c in crossings]
        if len(set(labels)) != len(labels):
            raise DiagramFormatError(f"duplicate crossing labels in {labels}")
        size = 2 * len(crossings)
        counts: Dict[int, int] = {}
        for c in crossings:
            for e in c.pd:
                counts[e] = counts.get(e, 0) + 1
        if set(counts) != set(range(1, size + 1)) or any(v != 2 for v in counts.values()):
            raise DiagramFormatError(
                f"edge labels must be 1..{size}, each used exactly twice"
            )
        for c in crossings:
            i, j, k, l = c.pd
            if c.sign not in (1, -1):
                raise DiagramFormatError(f"crossing {c.label}: sign must be +1 or -1")
            if k != self.succ(i):
                raise DiagramFormatError(f"crossing {c.label}: under strand {i} -> {k} is not consecutive")
            if c.over_out != self.succ(c.over_in):
                raise DiagramFormatError(f"crossing {c.label}: over strand is not consecutive")

    @property
    def size(self) -> int:
        return 2 * len(self.crossings)

    def succ(self, edge: int) -> int:
        return edge % self.size + 1

    def crossing(self, label: int) -> Crossing:
        for c in self.crossings:
            if c.label == label:
                return c
        raise DiagramFormatError(f"no crossing labeled {label}")

    @cached_property
    def passages(self) -> Tuple[Passage, ...]:
        table: Dict[int, Passage] = {}
        for c in self.crossings:
            table[c.under_in] = Passage(c.under_in, c.label, False, c.sign)
            table[c.over_in] = Passage(c.over_in, c.label, True, c.sign)
        return tuple(table[k] for k in range(1, self.size + 1))

    @cached_property
    def arcs(self) -> Tuple[Arc, ...]:
        passages = self.passages
        unders = [p.index for p in passages if not p.over]
        raw = []
        for start in unders:
            edges = []
            e = self.succ(start)
            while True:
                edges.append(e)
                if not passages[e - 1].over:
                    break
                e = self.succ(e)
            raw.append(
                (
                    tuple(edges),
                    passages[start - 1].crossing,
                    tuple(passages[x - 1].crossing for x in edges[:-1]),
                    passages[edges[-1] - 1].crossing,
                )
            )
        raw.sort(key=lambda a: min(a[0]))
        return tuple(
            Arc(index=k, edges=edges, begin=begin, overs=overs, end=end)
            for k, (edges, begin, overs, end) in enumerate(raw, start=1)
        )

    def arc_of_edge(self, edge: int) -> Arc:
        for arc in self.arcs:
            if edge in arc.edges:
                return arc
        raise DiagramFormatError(f"edge {edge} is not in the diagram")


@dataclass(frozen=True)
class ProjectionPose:
    direction: Vec3
    checks: Tuple[Tuple[str, bool], ...]
    attempts: int = 1


def writhe(D: KnotDiagram) -> int:
    return sum(c.sign for c in D.crossings)


def diagram_from_passages(passages: Sequence[Tuple[int, bool, int]]) -> KnotDiagram:
    """Build PD crossings from (crossing label, is over, sign) in curve order."""
    size = len(passages)
    if size % 2:
        raise DiagramFormatError("a knot diagram has an even number of passages")
    succ = lambda e: e % size + 1  # noqa: E731
    seen: Dict[int, Dict[str, Tuple[int, int]]] = {}
    for index, (label, over, sign) in enumerate(passages, start=1):
        slot = seen.setdefault(label, {})
        role = "over" if over else "under"
        if role in slot:
            raise DiagramFormatError(f"crossing {label} has two {role} passages")
        slot[role] = (index, sign)
    crossings = []
    for label, slot in seen.items():
        if set(slot) != {"over", "under"}:
            raise DiagramFormatError(f"crossing {label} needs one over and one under passage")
        (iu, su), (io, so) = slot["under"], slot["over"]
        if su != so:
            raise DiagramFormatError(f"crossing {label} has inconsistent signs")
        if su > 0:
            pd = (iu, succ(io), succ(iu), io)
        else:
            pd = (iu, io, succ(iu), succ(io))
        crossings.append(Crossing(label=label, pd=pd, sign=su))
    return KnotDiagram(crossings=tuple(crossings))


def gauss_code(D: KnotDiagram) -> str:
    return " ".join(
        f"{'O' if p.over else 'U'}{p.crossing}{'+' if p.sign > 0 else '-'}" for p in D.passages
    )


def parse_gauss_code(text: str) -> KnotDiagram:
    passages = []
    for tok in text.replace(",", " ").split():
        m = GAUSS_TOKEN.match(tok)
        if not m:
            raise DiagramFormatError(f"malformed Gauss token {tok!r}")
        passages.append((int(m.group(2)), m.group(1) == "O", 1 if m.group(3) == "+" else -1))
    return diagram_from_passages(passages)


def parse_pd(text: str) -> KnotDiagram:
    body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#")).strip()
    if body.startswith("PD[") and body.endswith("]"):
        body = body[3:-1]
    leftover = PD_TUPLE.sub("", body)
    if leftover.replace(",", "").strip():
        raise DiagramFormatError(f"unexpected text outside X[...] tuples: {leftover.strip()!r}")
    tuples = []
    for match in PD_TUPLE.finditer(body):
        parts = [p.strip() for p in match.group(1).split(",")]
        if len(parts) != 4 or not all(re.fullmatch(r"\d+", p) for p in parts):
            raise DiagramFormatError(f"X[{match.group(1)}] must hold exactly 4 positive integers")
        tuples.append(tuple(int(p) for p in parts))
    size = 2 * len(tuples)
    crossings = []
    for label, (i, j, k, l) in enumerate(tuples, start=1):
        if size and j == l % size + 1:
            sign = 1
        elif size and l == j % size + 1:
            sign = -1
        else:
            raise DiagramFormatError(f"X[{i},{j},{k},{l}]: over strand labels are not consecutive")
        crossings.append(Crossing(label=label, pd=(i, j, k, l), sign=sign))
    return KnotDiagram(crossings=tuple(crossings))


def format_pd(D: KnotDiagram) -> str:
    return " ".join(f"X[{i},{j},{k},{l}]" for i, j, k, l in (c.pd for c in D.crossings))


# geometry


def _frame(d: Vec3) -> Tuple[Vec3, Vec3]:
    a = (-d[1], d[0], 0) if (d[0] or d[1]) else (1, 0, 0)
    return a, cross(d, a)


def _cross2(a: Sequence, b: Sequence):
    return a[0] * b[1] - a[1] * b[0]


def _orient(p, q, r) -> int:
    return _cross2((q[0] - p[0], q[1] - p[1]), (r[0] - p[0], r[1] - p[1]))


def _on_segment(p, q, r) -> bool:
    return (
        _orient(p, q, r) == 0
        and min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
        and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
    )


def is_planar(P: PolygonalKnot) -> bool:
    v = P.vertices
    base = v[0]
    normal = None
    for k in range(1, len(v)):
        for m in range(k + 1, len(v)):
            c = cross(sub(v[k], base), sub(v[m], base))
            if not is_zero(c):
                normal = c
                break
        if normal is not None:
            break
    if normal is None:
        return True
    return all(dot(sub(p, base), normal) == 0 for p in v)


def _transverse_pairs(n: int):
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            yield i, j


def _genericity(q: List[Tuple[int, int]]) -> List[Tuple[str, bool]]:
    n = len(q)
    edges_ok = all(q[i] != q[(i + 1) % n] for i in range(n))
    distinct = len(set(q)) == n
    off_edges = True
    for i in range(n):
        a, b = q[i], q[(i + 1) % n]
        for k in range(n):
            if k in (i, (i + 1) % n):
                continue
            if _on_segment(a, b, q[k]):
                off_edges = False
    unfolded = True
    for i in range(n):
        p0, p1, p2 = q[i - 1], q[i], q[(i + 1) % n]
        u = (p1[0] - p0[0], p1[1] - p0[1])
        w = (p2[0] - p1[0], p2[1] - p1[1])
        if _cross2(u, w) == 0 and u[0] * w[0] + u[1] * w[1] < 0:
            unfolded = False
    return [
        ("edges transverse to direction", edges_ok),
        ("distinct vertex images", distinct),
        ("vertices off non-incident edges", off_edges),
        ("no folded adjacent edges", unfolded),
    ]


def _crossings(q: List[Tuple[int, int]]):
    """All transverse crossings as (edge i, t, edge j, u, point)."""
    n = len(q)
    found = []
    for i, j in _transverse_pairs(n):
        pi, pi2 = q[i], q[(i + 1) % n]
        pj, pj2 = q[j], q[(j + 1) % n]
        r = (pi2[0] - pi[0], pi2[1] - pi[1])
        s = (pj2[0] - pj[0], pj2[1] - pj[1])
        denom = _cross2(r, s)
        if denom == 0:
            continue
        w = (pj[0] - pi[0], pj[1] - pi[1])
        t = Fraction(_cross2(w, s), denom)
        u = Fraction(_cross2(w, r), denom)
        if 0 < t < 1 and 0 < u < 1:
            point = (pi[0] + t * r[0], pi[1] + t * r[1])
            found.append((i, t, j, u, point, r, s))
    return found


def schedule(hint: Optional[Sequence[int]] = None):
    base = tuple(hint) if hint is not None else DEFAULT_DIRECTION
    for k in range(SCHEDULE_LENGTH):
        d = add(add(base, scale(k, SCHEDULE_STEP)), scale(k * k, SCHEDULE_CURVE))
        if not is_zero(d):
            yield k, d


def project(P: PolygonalKnot, hint: Optional[Sequence[int]] = None) -> Tuple[KnotDiagram, ProjectionPose]:
    if is_planar(P):
        raise PlanarInput(f"{P.name}: all vertices lie in one plane")
    n = P.n
    if len(set(P.vertices)) != n:
        raise SelfIntersection(f"{P.name}: two non-consecutive vertices coincide")

    for attempt, d in schedule(hint):
        a, b = _frame(d)
        q = [(dot(v, a), dot(v, b)) for v in P.vertices]
        checks = _genericity(q)
        found = _crossings(q) if all(ok for _, ok in checks) else []
        points = [c[4] for c in found]
        checks.append(("crossings at distinct points", len(set(points)) == len(points)))
        if not all(ok for _, ok in checks):
            logger.warning("%s: direction %s is not generic, perturbing", P.name, d)
            continue

        events = []
        for i, t, j, u, _point, r, s in found:
            vi, ei = P.vertices[i], sub(P.vertices[(i + 1) % n], P.vertices[i])
            vj, ej = P.vertices[j], sub(P.vertices[(j + 1) % n], P.vertices[j])
            depth_i = dot(vi, d) + t * dot(ei, d)
            depth_j = dot(vj, d) + u * dot(ej, d)
            if depth_i == depth_j:
                raise SelfIntersection(f"{P.name}: edges {i + 1} and {j + 1} intersect")
            if depth_i > depth_j:
                sign = 1 if _cross2(r, s) > 0 else -1
            else:
                sign = 1 if _cross2(s, r) > 0 else -1
            key = len(events) // 2
            events.append(((i, t), key, depth_i > depth_j, sign))
            events.append(((j, u), key, depth_j > depth_i, sign))
        events.sort(key=lambda e: e[0])

        labels: Dict[int, int] = {}
        passages = []
        for _pos, key, over, sign in events:
            label = labels.setdefault(key, len(labels) + 1)
            passages.append((label, over, sign))
        diagram = diagram_from_passages(passages)
        pose = ProjectionPose(direction=d, checks=tuple(checks), attempts=attempt + 1)
        logger.info("%s: %d crossings viewed along %s", P.name, len(diagram.crossings), d)
        return diagram, pose

    raise NoGenericProjection(f"{P.name}: no generic direction in the perturbation schedule")
