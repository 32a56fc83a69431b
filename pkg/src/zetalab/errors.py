"""Exception types and structured findings shared across the package."""

from __future__ import annotations

from dataclasses import dataclass, field


class ZetaLabError(Exception):
    """Base class for all package-specific errors."""


class PreconditionError(ZetaLabError):
    """An operation was called outside its stated domain of validity."""


class PoleError(PreconditionError):
    """Evaluation requested at (or too close to) a pole."""


class PrecisionExhausted(ZetaLabError):
    """The requested error target cannot be met at working precision.

    Carries the best achievable bound so callers can decide whether to
    proceed with a degraded target.
    """

    def __init__(self, message: str, best_error: float | None = None):
        super().__init__(message)
        self.best_error = best_error


class BranchObstruction(ZetaLabError):
    """A zero of the underlying function blocks analytic branch tracking."""

    def __init__(self, message: str, location: complex, modulus: float):
        super().__init__(message)
        self.location = location
        self.modulus = modulus


class BoundaryObstruction(ZetaLabError):
    """A target point lies too close to an integration contour."""

    def __init__(self, message: str, min_modulus: float, node: complex | None = None):
        super().__init__(message)
        self.min_modulus = min_modulus
        self.node = node


class DivisorOnCircle(PreconditionError):
    """A zero or pole sits on (or within tolerance of) the Jensen circle."""


class ConvergenceError(ZetaLabError):
    """An iterative scheme hit its budget without meeting its target."""

    def __init__(self, message: str, best_value=None, achieved_error: float | None = None):
        super().__init__(message)
        self.best_value = best_value
        self.achieved_error = achieved_error


@dataclass
class Finding:
    """A structured non-fatal observation emitted by an audit.

    kind: one of "rh-obstruction", "boundary-obstruction",
          "branch-obstruction", "precision-exhaustion".
    """

    kind: str
    t: float
    detail: str
    location: complex | None = None
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "t": self.t, "detail": self.detail}
        if self.location is not None:
            out["location"] = [self.location.real, self.location.imag]
        if self.data:
            out["data"] = {k: self.data[k] for k in sorted(self.data)}
        return out
