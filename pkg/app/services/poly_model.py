"""Polygonal knots with exact integer vertices, their edge vectors and the
alternating sign matrix whose columns are (-1)^(i+1) e_i."""
import itertools
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .errors import (
    CollinearFrame,
    DegeneratePolygon,
    OddEdgeCount,
    PolygonFormatError,
    UnsupportedPose,
)
from .utils import Vec3, cross, is_zero, sub

logger = logging.getLogger(__name__)

INTEGER = re.compile(r"^[+-]?\d+$")


def _as_vec3(v: Sequence[int]) -> Vec3:
    if len(v) != 3:
        raise DegeneratePolygon(f"expected a 3-vector, got {tuple(v)}")
    for c in v:
        if isinstance(c, bool) or not isinstance(c, int):
            raise DegeneratePolygon(f"non-integer coordinate {c!r}")
    return (v[0], v[1], v[2])


@dataclass(frozen=True)
class PolygonalKnot:
    name: str
    vertices: Tuple[Vec3, ...]

    def __post_init__(self) -> None:
        verts = tuple(_as_vec3(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 3:
            raise DegeneratePolygon(f"a polygon needs at least 3 vertices, got {n}")
        for i in range(n):
            if verts[i] == verts[(i + 1) % n]:
                raise DegeneratePolygon(
                    f"zero edge between vertices {i + 1} and {(i + 1) % n + 1}"
                )

    @property
    def n(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class EdgeVectors:
    edges: Tuple[Vec3, ...]

    def __post_init__(self) -> None:
        edges = tuple(_as_vec3(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if any(is_zero(e) for e in edges):
            raise DegeneratePolygon("zero edge vector")
        total = (sum(e[0] for e in edges), sum(e[1] for e in edges), sum(e[2] for e in edges))
        if not is_zero(total):
            raise DegeneratePolygon(f"edges do not close up, sum is {total}")

    @property
    def n(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __getitem__(self, i: int) -> Vec3:
        return self.edges[i]


@dataclass(frozen=True)
class SignMatrix:
    """3 x n integer matrix stored column-wise; column i is (-1)^(i+1) e_i (1-indexed)."""

    columns: Tuple[Vec3, ...]

    def __post_init__(self) -> None:
        cols = tuple(_as_vec3(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if len(cols) % 2:
            raise OddEdgeCount(len(cols))

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(c[r] for c in self.columns) for r in range(3))

    def edges(self) -> Tuple[Vec3, ...]:
        """Undo the alternating signs."""
        return tuple(c if i % 2 == 0 else (-c[0], -c[1], -c[2]) for i, c in enumerate(self.columns))


def parse_polygon(text: str, name: Optional[str] = None) -> PolygonalKnot:
    header: Optional[str] = None
    vertices: List[Vec3] = []
    lines: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("name:"):
            if vertices:
                raise PolygonFormatError("name: header must precede the vertices", lineno)
            header = line.split(":", 1)[1].strip()
            continue
        tokens = line.split()
        for tok in tokens:
            if not INTEGER.match(tok):
                raise PolygonFormatError(f"non-integer token {tok!r}", lineno)
        if len(tokens) != 3:
            raise PolygonFormatError(f"expected 3 coordinates, got {len(tokens)}", lineno)
        v = (int(tokens[0]), int(tokens[1]), int(tokens[2]))
        if vertices and vertices[-1] == v:
            raise PolygonFormatError(
                f"zero edge between vertices {len(vertices)} and {len(vertices) + 1}", lineno
            )
        vertices.append(v)
        lines.append(lineno)

    if len(vertices) < 3:
        raise PolygonFormatError(f"fewer than 3 vertices ({len(vertices)})")
    if vertices[0] == vertices[-1]:
        raise PolygonFormatError(
            f"zero edge between vertices {len(vertices)} and 1", lines[-1]
        )
    return PolygonalKnot(name=header or name or "unnamed", vertices=tuple(vertices))


def serialize_polygon(P: PolygonalKnot) -> str:
    out = [f"name: {P.name}"]
    out.extend(f"{x} {y} {z}" for x, y, z in P.vertices)
    return "\n".join(out) + "\n"


def load_polygon(path: Union[str, Path]) -> PolygonalKnot:
    path = Path(path)
    return parse_polygon(path.read_text(encoding="utf-8"), name=path.stem)


def edge_vectors(P: PolygonalKnot) -> EdgeVectors:
    v = P.vertices
    n = len(v)
    return EdgeVectors(edges=tuple(sub(v[(i + 1) % n], v[i]) for i in range(n)))


def sign_matrix(E: EdgeVectors) -> SignMatrix:
    if E.n % 2:
        raise OddEdgeCount(E.n)
    cols = tuple(e if i % 2 == 0 else (-e[0], -e[1], -e[2]) for i, e in enumerate(E.edges))
    return SignMatrix(columns=cols)


def is_posed(P: PolygonalKnot) -> bool:
    v1, v2, v3 = P.vertices[0], P.vertices[1], P.vertices[2]
    return (
        is_zero(v1)
        and v2[0] > 0 and v2[1] == 0 and v2[2] == 0
        and v3[2] == 0 and v3[1] > 0
    )


def _proper_signed_permutations():
    # the 24 rotations of the cube as (axis order, signs)
    for perm in itertools.permutations(range(3)):
        parity = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j]) % 2
        for signs in itertools.product((1, -1), repeat=3):
            det = (-1) ** parity * signs[0] * signs[1] * signs[2]
            if det == 1:
                yield perm, signs


def _apply(perm, signs, v: Vec3) -> Vec3:
    return (signs[0] * v[perm[0]], signs[1] * v[perm[1]], signs[2] * v[perm[2]])


def normalize_pose(P: PolygonalKnot) -> PolygonalKnot:
    """Move P into the reference pose using exact integer motions only.

    Translation plus one of the 24 axis rotations; anything needing an
    irrational rotation raises UnsupportedPose rather than rounding.
    """
    origin = P.vertices[0]
    moved = tuple(sub(v, origin) for v in P.vertices)
    if is_zero(cross(moved[1], moved[2])):
        raise CollinearFrame(f"{P.name}: first three vertices are collinear")

    candidate = PolygonalKnot(name=P.name, vertices=moved)
    if is_posed(candidate):
        return candidate
    for perm, signs in _proper_signed_permutations():
        rotated = PolygonalKnot(name=P.name, vertices=tuple(_apply(perm, signs, v) for v in moved))
        if is_posed(rotated):
            logger.debug("%s posed by axis rotation %s %s", P.name, perm, signs)
            return rotated
    raise UnsupportedPose(
        f"{P.name}: reaching the reference pose needs a rotation off the coordinate axes"
    )

