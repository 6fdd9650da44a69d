"""
Error hierarchy.

Every failure the lab can signal derives from GffLabError and carries the process exit code the
CLI reports for it: 2 for configuration problems, 3 for runtime failures.
"""

from __future__ import annotations


class GffLabError(Exception):
    exit_code: int = 3


class ConfigError(GffLabError):
    exit_code = 2

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class IoError(GffLabError):
    pass


# lattice
class EmptyDomain(GffLabError):
    pass


class InvariantViolation(GffLabError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


# green
class FactorizationFailure(GffLabError):
    pass


class PointTooCloseToBoundary(GffLabError):
    pass


class CoincidentPoints(GffLabError):
    pass


# dgff
class NotASubdomain(GffLabError):
    pass


# walk
class StepLimitExceeded(GffLabError):
    pass


# isomorphism
class ContractionViolated(GffLabError):
    def __init__(self, radius: float):
        self.radius = radius
        super().__init__(f"spectral radius of G M_f is {radius:.6g} >= 1; shrink f")


# measures
class BadParameterRange(GffLabError):
    pass


class KindMismatch(GffLabError):
    pass


# stats
class TooFewSamples(GffLabError):
    def __init__(self, needed: int, got: int):
        self.needed = needed
        self.got = got
        super().__init__(f"need at least {needed} samples, got {got}")
