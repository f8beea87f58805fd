"""Error types raised by curvtype.

Every error is a ValueError so callers that only care about "bad input" can
catch that. Check operations never raise for a violated inequality; they
return a failing CheckReport instead.
"""

from typing import Tuple


class CurvTypeError(ValueError):
    """Base class for all curvtype input errors."""


# Metric spaces

class InvalidMatrix(CurvTypeError):
    """Distance matrix is not square, not finite, or otherwise malformed."""


class NonzeroDiagonal(CurvTypeError):
    def __init__(self, i: int, value: float):
        self.i = i
        self.value = value
        super().__init__(f"NonzeroDiagonal: dist[{i}][{i}] = {value!r}")


class NegativeEntry(CurvTypeError):
    def __init__(self, i: int, j: int, value: float):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"NegativeEntry: dist[{i}][{j}] = {value!r}")


class Asymmetric(CurvTypeError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"Asymmetric: entries ({i},{j}) and ({j},{i}) differ")


class TriangleViolation(CurvTypeError):
    """dist[i][j] > dist[i][k] + dist[k][j] beyond tolerance; k is the detour point."""

    def __init__(self, i: int, j: int, k: int, excess: float):
        self.i, self.j, self.k = i, j, k
        self.excess = excess
        super().__init__(f"TriangleViolation({i},{j},{k}): excess {excess!r}")

    @property
    def witness(self) -> Tuple[int, int, int]:
        return (self.i, self.j, self.k)


class DisconnectedGraph(CurvTypeError):
    pass


class DimensionMismatch(CurvTypeError):
    pass


class InvalidP(CurvTypeError):
    pass


class SizeOverflow(CurvTypeError):
    pass


class AntipodalPoints(CurvTypeError):
    """Sphere midpoint of antipodal points is not unique."""


class UnsupportedModel(CurvTypeError):
    pass


class DegenerateSpace(CurvTypeError):
    pass


# Chains

class ZeroRow(CurvTypeError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"ZeroRow: weight row {i} sums to zero")


class SingularSystem(CurvTypeError):
    pass


class SizeMismatch(CurvTypeError):
    pass


class DegenerateChain(CurvTypeError):
    """E(1) = 0: the chain never moves between distinct points."""


# Estimators

class DegenerateLabeling(CurvTypeError):
    pass


class CapExceeded(CurvTypeError):
    pass


class AllZeroVectors(CurvTypeError):
    pass


class TooManyVectors(CurvTypeError):
    pass


class NonuniformPi(CurvTypeError):
    pass


class DegenerateVectors(CurvTypeError):
    pass


# Curvature checks

class InvalidWeights(CurvTypeError):
    pass


# Plumbing

class InvalidArgument(CurvTypeError):
    """A count, horizon, budget or alpha outside its allowed range."""


class InvalidInput(CurvTypeError):
    """An input file is missing, is not JSON, or lacks a required field."""


class ConfigError(CurvTypeError):
    pass


class MalformedReport(CurvTypeError):
    pass


class UsageError(CurvTypeError):
    pass
