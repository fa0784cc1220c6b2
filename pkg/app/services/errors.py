from typing import Optional, Sequence


class SuperbridgeError(ValueError):
    """Base class for every input or verification problem the pipeline reports."""


# polygons

class PolygonFormatError(SuperbridgeError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class DegeneratePolygon(SuperbridgeError):
    pass


class SelfIntersection(DegeneratePolygon):
    pass


class OddEdgeCount(SuperbridgeError):
    def __init__(self, n: int) -> None:
        self.n = n
        super().__init__(
            f"polygon has {n} edges; the certificate method needs an even edge count"
        )


class CollinearFrame(SuperbridgeError):
    pass


class UnsupportedPose(SuperbridgeError):
    pass


# certificates

class DimensionMismatch(SuperbridgeError):
    pass


class NegativeEntry(SuperbridgeError):
    pass


class ZeroVector(SuperbridgeError):
    pass


class CertificateFormatError(SuperbridgeError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class InternalContradiction(RuntimeError):
    """Both or neither Gordan alternative was found: a solver bug, never bad input."""


# directions and bounds

class NonGenericDirection(SuperbridgeError):
    def __init__(self, index: int, direction: Sequence[int]) -> None:
        self.index = index
        self.direction = tuple(direction)
        super().__init__(f"direction {self.direction} is orthogonal to edge {index}")


class NoGenericDirectionFound(SuperbridgeError):
    pass


class NotCoprime(SuperbridgeError):
    pass


class BadRange(SuperbridgeError):
    pass


# diagrams

class PlanarInput(SuperbridgeError):
    pass


class NoGenericProjection(SuperbridgeError):
    pass


class DiagramFormatError(SuperbridgeError):
    pass


class StrandSpecError(SuperbridgeError):
    pass


class NotSurjective(SuperbridgeError):
    pass


# verdicts

class InconsistentLedger(SuperbridgeError):
    pass


class MissingFixture(SuperbridgeError):
    pass


class VerificationFailure(SuperbridgeError):
    def __init__(self, knot: str, detail: str) -> None:
        self.knot = knot
        self.detail = detail
        super().__init__(f"{knot}: {detail}")
