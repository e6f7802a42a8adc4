"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One violated domain constraint: which field, its value, and the constraint text."""

    field: str
    value: float
    constraint: str

    def __str__(self) -> str:
        return f"{self.field}={self.value!r} violates: {self.constraint}"


class DcclscError(Exception):
    """Base class for all package errors."""


class OutOfDomain(DcclscError):
    """One or more inputs violate their domain constraints.

    All violations found in a single validation pass are collected and
    reported together rather than failing on the first one.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @classmethod
    def single(cls, field: str, value: float, constraint: str) -> "OutOfDomain":
        return cls([Violation(field, value, constraint)])


class Singularity(DcclscError):
    """Evaluation requested too close to a denominator root."""

    def __init__(self, what: str, alpha: float, distance: float, guard: float):
        self.what = what
        self.alpha = alpha
        self.distance = distance
        self.guard = guard
        super().__init__(
            f"singular evaluation: {what} at alpha={alpha!r} "
            f"(distance {distance:.3e} < guard {guard:.3e})"
        )


class NonConcave(DcclscError):
    """A profit objective is not strictly concave where a maximizer was requested."""


class BoxBoundary(DcclscError):
    """A numeric optimum lies on the search box after final refinement.

    Signals an ill-posed instance: the caller should widen the box rather
    than accept a silently truncated solution.
    """

    def __init__(self, variable: str, value: float, box: tuple):
        self.variable = variable
        self.value = value
        self.box = box
        super().__init__(
            f"optimum for {variable} lies on the search box {box} (value {value!r}); "
            "widen the box"
        )
