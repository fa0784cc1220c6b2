"""Exact Gordan alternative for 3-row integer matrices.

Either some v has v.c_j > 0 for every column c_j, or some nonzero u >= 0 has
E u = 0. Both branches are decided by a small dense two-phase simplex over
Fractions with Bland's rule, so no floating point enters any decision.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .errors import (
    CertificateFormatError,
    DimensionMismatch,
    InternalContradiction,
    NegativeEntry,
    ZeroVector,
)
from .poly_model import INTEGER, SignMatrix
from .utils import Vec3, content, dot

logger = logging.getLogger(__name__)

Columns = Union[SignMatrix, Sequence[Sequence[int]]]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class GordanCertificate:
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(u) for u in self.entries)
        object.__setattr__(self, "entries", entries)
        if any(u < 0 for u in entries):
            raise NegativeEntry(f"certificate has a negative entry: {entries}")
        if not any(entries):
            raise ZeroVector("certificate is the zero vector")
        if content(entries) != 1:
            raise ValueError(f"certificate entries share a factor: {entries}")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DirectionVector:
    entries: Vec3

    def __post_init__(self) -> None:
        entries = tuple(int(v) for v in self.entries)
        if len(entries) != 3 or not any(entries):
            raise ZeroVector(f"direction must be a nonzero 3-vector, got {entries}")
        if content(entries) != 1:
            raise ValueError(f"direction entries share a factor: {entries}")
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class GordanVerdict:
    direction: Optional[DirectionVector] = None
    certificate: Optional[GordanCertificate] = None

    def __post_init__(self) -> None:
        if (self.direction is None) == (self.certificate is None):
            raise InternalContradiction("a Gordan verdict holds exactly one witness")

    @property
    def branch(self) -> str:
        return "DirectionExists" if self.direction is not None else "CertificateExists"


@dataclass(frozen=True)
class CertificateReport:
    valid: bool
    residual: Vec3
    nonnegative: bool
    nonzero: bool

    def describe(self) -> str:
        if self.valid:
            return "certificate verified: E u = 0, u >= 0, u != 0"
        problems = []
        if any(self.residual):
            problems.append(f"residual {self.residual}")
        if not self.nonnegative:
            problems.append("negative entry")
        if not self.nonzero:
            problems.append("zero vector")
        return "certificate rejected: " + ", ".join(problems)


@dataclass
class LpResult:
    status: str
    x: List[Fraction] = field(default_factory=list)
    objective: Optional[Fraction] = None


def _columns(E: Columns) -> Tuple[Vec3, ...]:
    cols = E.columns if isinstance(E, SignMatrix) else E
    if not len(cols):
        raise DimensionMismatch("the matrix has no columns")
    out = []
    for c in cols:
        if len(c) != 3:
            raise DimensionMismatch(f"column {tuple(c)} is not a 3-vector")
        out.append((int(c[0]), int(c[1]), int(c[2])))
    return tuple(out)


def _reduced(cols: Tuple[Vec3, ...]) -> Tuple[Vec3, ...]:
    # dividing by the content of the whole matrix keeps both searches scale invariant
    g = content(x for c in cols for x in c)
    if g <= 1:
        return cols
    return tuple((c[0] // g, c[1] // g, c[2] // g) for c in cols)


class RationalSimplex:
    """Dense tableau for  max c.x  s.t. rows x = rhs, x >= 0  (rhs >= 0)."""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]) -> None:
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        piv = row[j]
        self.rows[r] = [a / piv for a in row]
        self.rhs[r] = self.rhs[r] / piv
        row = self.rows[r]
        for k in range(len(self.rows)):
            if k == r:
                continue
            f = self.rows[k][j]
            if f:
                self.rows[k] = [a - f * b for a, b in zip(self.rows[k], row)]
                self.rhs[k] -= f * self.rhs[r]
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, cost: List[Fraction]) -> List[Fraction]:
        reduced = list(cost)
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                reduced = [rc - cb * a for rc, a in zip(reduced, self.rows[r])]
        return reduced

    def objective(self, cost: List[Fraction]) -> Fraction:
        return sum((cost[b] * self.rhs[r] for r, b in enumerate(self.basis)), Fraction(0))

    def optimize(self, cost: List[Fraction], allowed: int) -> str:
        """Bland's rule: smallest improving column enters, smallest basic index leaves on ties."""
        while True:
            reduced = self.reduced_costs(cost)
            entering = next((j for j in range(allowed) if reduced[j] > 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[r] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)

    def values(self, count: int) -> List[Fraction]:
        x = [Fraction(0)] * count
        for r, b in enumerate(self.basis):
            if b < count:
                x[b] = self.rhs[r]
        return x


def solve_lp(
    c: Sequence[int],
    A_ub: Sequence[Sequence[int]] = (),
    b_ub: Sequence[int] = (),
    A_eq: Sequence[Sequence[int]] = (),
    b_eq: Sequence[int] = (),
) -> LpResult:
    """Maximize c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0, exactly."""
    n = len(c)
    n_ub = len(A_ub)
    if len(b_ub) != n_ub or len(b_eq) != len(A_eq):
        raise DimensionMismatch("constraint rows and right-hand sides differ in length")
    for row in list(A_ub) + list(A_eq):
        if len(row) != n:
            raise DimensionMismatch(f"constraint row of length {len(row)}, expected {n}")

    total = n + n_ub
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    needs_artificial: List[bool] = []
    for k, (row, b) in enumerate(zip(A_ub, b_ub)):
        full = [Fraction(a) for a in row] + [Fraction(0)] * n_ub
        full[n + k] = Fraction(1)
        sign = -1 if b < 0 else 1
        rows.append([sign * a for a in full])
        rhs.append(Fraction(sign * b))
        needs_artificial.append(sign < 0)
    for row, b in zip(A_eq, b_eq):
        sign = -1 if b < 0 else 1
        rows.append([Fraction(sign * a) for a in row] + [Fraction(0)] * n_ub)
        rhs.append(Fraction(sign * b))
        needs_artificial.append(True)

    artificial_rows = [r for r, need in enumerate(needs_artificial) if need]
    width = total + len(artificial_rows)
    basis: List[int] = []
    for r, row in enumerate(rows):
        row.extend([Fraction(0)] * len(artificial_rows))
        if needs_artificial[r]:
            col = total + artificial_rows.index(r)
            row[col] = Fraction(1)
            basis.append(col)
        else:
            basis.append(n + r)

    tableau = RationalSimplex(rows, rhs, basis)

    if artificial_rows:
        phase1 = [Fraction(0)] * total + [Fraction(-1)] * len(artificial_rows)
        tableau.optimize(phase1, width)
        if tableau.objective(phase1) < 0:
            logger.debug("phase 1 infeasible after %d pivots", tableau.pivots)
            return LpResult(status=INFEASIBLE)
        # drive zero-level artificials out of the basis; drop redundant rows
        r = 0
        while r < len(tableau.rows):
            if tableau.basis[r] >= total:
                j = next((j for j in range(total) if tableau.rows[r][j] != 0), None)
                if j is None:
                    del tableau.rows[r]
                    del tableau.rhs[r]
                    del tableau.basis[r]
                    continue
                tableau.pivot(r, j)
            r += 1

    cost = [Fraction(v) for v in c] + [Fraction(0)] * (width - n)
    status = tableau.optimize(cost, total)
    if status == UNBOUNDED:
        return LpResult(status=UNBOUNDED)
    x = tableau.values(n)
    logger.debug("simplex finished after %d pivots", tableau.pivots)
    return LpResult(status=OPTIMAL, x=x, objective=tableau.objective(cost))


def canonicalize(u: Sequence[Union[int, Fraction]]) -> GordanCertificate:
    """Clear denominators by their lcm, then divide by the gcd."""
    values = [Fraction(x) for x in u]
    if any(x < 0 for x in values):
        raise NegativeEntry(f"negative entry in {tuple(str(x) for x in values)}")
    if not any(values):
        raise ZeroVector("cannot canonicalize the zero vector")
    denom = reduce(lcm, (x.denominator for x in values), 1)
    ints = [int(x * denom) for x in values]
    g = reduce(gcd, ints, 0)
    return GordanCertificate(entries=tuple(v // g for v in ints))


def residual(E: Columns, u: Sequence[int]) -> Vec3:
    cols = _columns(E)
    if len(u) != len(cols):
        raise DimensionMismatch(f"certificate has {len(u)} entries, matrix has {len(cols)} columns")
    return (
        sum(c[0] * x for c, x in zip(cols, u)),
        sum(c[1] * x for c, x in zip(cols, u)),
        sum(c[2] * x for c, x in zip(cols, u)),
    )


def verify_certificate(E: Columns, u: Union[GordanCertificate, Sequence[int]]) -> CertificateReport:
    entries = u.entries if isinstance(u, GordanCertificate) else tuple(int(x) for x in u)
    res = residual(E, entries)
    nonnegative = all(x >= 0 for x in entries)
    nonzero = any(entries)
    return CertificateReport(
        valid=nonnegative and nonzero and not any(res),
        residual=res,
        nonnegative=nonnegative,
        nonzero=nonzero,
    )


def find_certificate(E: Columns) -> Optional[GordanCertificate]:
    """Certificate of maximal support.

    For every column j not yet covered, phase 1 on {E u = 0, u_j = 1, u >= 0}
    finds a certificate through j when one exists; the sum of those basic
    solutions is positive on every column that any certificate can use.
    """
    cols = _reduced(_columns(E))
    n = len(cols)
    rows = [[c[r] for c in cols] for r in range(3)]
    total = [Fraction(0)] * n
    solves = 0
    for j in range(n):
        if total[j] > 0:
            continue
        pin = [0] * n
        pin[j] = 1
        result = solve_lp([0] * n, A_eq=rows + [pin], b_eq=[0, 0, 0, 1])
        solves += 1
        if result.status == OPTIMAL:
            total = [a + b for a, b in zip(total, result.x)]
    logger.debug("certificate search: %d phase-1 solves for %d columns", solves, n)
    if not any(total):
        return None
    cert = canonicalize(total)
    if not verify_certificate(cols, cert).valid:
        raise InternalContradiction(f"simplex returned a non-certificate {cert.entries}")
    return cert


def find_direction(E: Columns) -> Optional[DirectionVector]:
    """Maximize t subject to v.c_j >= t for all j and |v|_1 <= 1; feasible iff t* > 0.

    v is split as v+ - v- so every variable is nonnegative and the origin is
    a feasible starting basis.
    """
    cols = _reduced(_columns(E))
    # variables: p1 p2 p3 m1 m2 m3 t
    A_ub = [[-c[0], -c[1], -c[2], c[0], c[1], c[2], 1] for c in cols]
    b_ub = [0] * len(cols)
    A_ub.append([1, 1, 1, 1, 1, 1, 0])
    b_ub.append(1)
    result = solve_lp([0, 0, 0, 0, 0, 0, 1], A_ub=A_ub, b_ub=b_ub)
    if result.status != OPTIMAL or result.objective is None or result.objective <= 0:
        return None
    x = result.x
    v = [x[k] - x[k + 3] for k in range(3)]
    denom = reduce(lcm, (f.denominator for f in v), 1)
    ints = [int(f * denom) for f in v]
    g = reduce(gcd, (abs(a) for a in ints), 0)
    direction = DirectionVector(entries=tuple(a // g for a in ints))
    if min(dot(direction.entries, c) for c in cols) <= 0:
        raise InternalContradiction(f"direction {direction.entries} is not strictly positive")
    return direction


def gordan_check(E: Columns) -> GordanVerdict:
    certificate = find_certificate(E)
    direction = find_direction(E)
    if (certificate is None) == (direction is None):
        raise InternalContradiction(
            f"Gordan alternative violated: certificate={certificate}, direction={direction}"
        )
    return GordanVerdict(direction=direction, certificate=certificate)


def parse_certificate(text: str) -> Tuple[int, ...]:
    entries: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not INTEGER.match(line):
            raise CertificateFormatError(f"non-integer entry {line!r}", lineno)
        entries.append(int(line))
    if not entries:
        raise CertificateFormatError("certificate file holds no entries")
    return tuple(entries)


def serialize_certificate(u: Union[GordanCertificate, Sequence[int]], name: Optional[str] = None) -> str:
    entries = u.entries if isinstance(u, GordanCertificate) else tuple(u)
    head = [f"# certificate for {name}"] if name else []
    return "\n".join(head + [str(x) for x in entries]) + "\n"


def load_certificate(path: Union[str, Path]) -> Tuple[int, ...]:
    return parse_certificate(Path(path).read_text(encoding="utf-8"))
