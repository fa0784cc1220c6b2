import re
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Tuple

Vec3 = Tuple[int, int, int]

KNOT_LABEL = re.compile(r"^(\d+)([an]?)_(\d+)$")


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Sequence[int], b: Sequence[int]) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def sub(a: Sequence[int], b: Sequence[int]) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add(a: Sequence[int], b: Sequence[int]) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def scale(k: int, a: Sequence[int]) -> Vec3:
    return (k * a[0], k * a[1], k * a[2])


def is_zero(a: Sequence[int]) -> bool:
    return not any(a)


def content(values: Iterable[int]) -> int:
    """gcd of the absolute values; 0 for an all-zero input."""
    return reduce(gcd, (abs(v) for v in values), 0)


def primitive(a: Sequence[int]) -> Tuple[int, ...]:
    g = content(a)
    if g <= 1:
        return tuple(a)
    return tuple(v // g for v in a)


def parse_vector(text: str) -> Vec3:
    """'1,0,0' or '1 0 0' -> (1, 0, 0)."""
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if len(parts) != 3:
        raise ValueError(f"expected three integers, got {text!r}")
    return (int(parts[0]), int(parts[1]), int(parts[2]))


def knot_sort_key(label: str) -> Tuple[int, str, int, str]:
    """Natural order of knot labels: 8_2 < 8_10 < 9_7 < 10_76 < 13n_226."""
    m = KNOT_LABEL.match(label)
    if not m:
        return (10**9, "", 0, label)
    return (int(m.group(1)), m.group(2), int(m.group(3)), label)
