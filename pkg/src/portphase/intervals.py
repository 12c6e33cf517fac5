"""Phase intervals with mod-2*pi arithmetic.

An interval [lo, hi] describes a closed cone of angles with width hi - lo
in [0, pi].  The canonical representative has its midpoint in (-pi, pi]
(ties at exactly pi go to +pi), which matches how phase plots are drawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._errors import HullTooWideError, InvalidIntervalError

TWO_PI = 2.0 * math.pi

#: Nudge used when deciding canonical branch / width admissibility.
_EPS = 1e-12


def wrap_angle(theta: float) -> float:
    """Map an angle to the canonical branch (-pi, pi]."""
    t = math.fmod(theta + math.pi, TWO_PI)
    if t <= 0.0:
        t += TWO_PI
    return t - math.pi


@dataclass(frozen=True)
class PhaseInterval:
    """Closed angular interval [lo, hi] with 0 <= hi - lo <= pi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidIntervalError("interval endpoints must be finite")
        w = self.hi - self.lo
        if w < -_EPS or w > math.pi + 1e-9:
            raise InvalidIntervalError(
                f"interval width {w!r} outside [0, pi]: [{self.lo}, {self.hi}]"
            )

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def canonical(self) -> "PhaseInterval":
        """Shift by a multiple of 2*pi so the midpoint lies in (-pi, pi]."""
        mid = self.midpoint
        shift = 0.0
        while mid + shift > math.pi + _EPS:
            shift -= TWO_PI
        while mid + shift <= -math.pi + _EPS * (-1.0):
            shift += TWO_PI
        # exact tie at -pi maps to +pi
        if abs(mid + shift + math.pi) <= _EPS:
            shift += TWO_PI
        return PhaseInterval(self.lo + shift, self.hi + shift)

    def shifted(self, delta: float) -> "PhaseInterval":
        return PhaseInterval(self.lo + delta, self.hi + delta)

    def contains_angle(self, theta: float, tol: float = 1e-9) -> bool:
        """Membership of a single angle, mod 2*pi."""
        for k in (-1, 0, 1):
            t = theta + k * TWO_PI
            if self.lo - tol <= t <= self.hi + tol:
                return True
        return False

    def contains(self, other: "PhaseInterval", tol: float = 1e-9) -> bool:
        """Whether `other` is a sub-interval of self, mod 2*pi."""
        for k in (-1, 0, 1):
            lo = other.lo + k * TWO_PI
            hi = other.hi + k * TWO_PI
            if self.lo - tol <= lo and hi <= self.hi + tol:
                return True
        return False

    def intersects(self, other: "PhaseInterval", tol: float = 0.0) -> bool:
        """Whether the two arcs share an angle, mod 2*pi."""
        for k in (-2, -1, 0, 1, 2):
            lo = other.lo + k * TWO_PI
            hi = other.hi + k * TWO_PI
            if max(self.lo, lo) <= min(self.hi, hi) + tol:
                return True
        return False


def hull(a: PhaseInterval, b: PhaseInterval, tol: float = 1e-9) -> PhaseInterval:
    """Smallest interval of width <= pi containing both arcs, mod 2*pi.

    Raises HullTooWideError when no half-plane cone covers the union.
    """
    best = None
    for k in (-1, 0, 1):
        lo = min(a.lo, b.lo + k * TWO_PI)
        hi = max(a.hi, b.hi + k * TWO_PI)
        w = hi - lo
        if w <= math.pi + tol and (best is None or w < best[0]):
            best = (w, lo, hi)
    if best is None:
        raise HullTooWideError(
            f"hull of [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] exceeds pi"
        )
    _, lo, hi = best
    return PhaseInterval(lo, min(hi, lo + math.pi)).canonical()


def from_phases(phases) -> PhaseInterval:
    """Interval [min(phases), max(phases)] (phases already share one branch)."""
    if len(phases) == 0:
        raise InvalidIntervalError("no phases: zero-rank matrix has no phase interval")
    return PhaseInterval(float(min(phases)), float(max(phases))).canonical()
