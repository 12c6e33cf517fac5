"""Rational impedance-matrix models and frequency sweeps.

An n-port model is an n x n matrix of real-coefficient rational functions
of s, evaluated along the imaginary axis.  Imaginary-axis poles are skirted
by small right-half-plane semicircular detours so that every grid point has
a finite frequency response.  Sweeps classify each point and aggregate
per-point phase bounds into global ones (grid suprema, not certified
continuous suprema).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._errors import (
    DimensionMismatchError,
    InvalidRangeError,
    NotSemiSectorialError,
    PoleHitError,
)
from .intervals import PhaseInterval
from .phase_core import DEFAULT_TOL, Sectoriality, classify, phases_semi

#: Arc samples on each pole detour.
_ARC_POINTS = 16


def _trim(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficient list must be a nonempty 1-D sequence")
    tol = 1e-14 * max(1.0, float(np.max(np.abs(c))))
    nz = np.nonzero(np.abs(c) > tol)[0]
    if nz.size == 0:
        return np.zeros(1)
    return c[: nz[-1] + 1].copy()


@dataclass(frozen=True)
class RationalFunction:
    """num(s)/den(s) with real coefficients in ascending powers of s."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "num", _trim(self.num))
        object.__setattr__(self, "den", _trim(self.den))
        if np.all(self.den == 0.0):
            raise ValueError("denominator must not be identically zero")

    @staticmethod
    def const(value: float) -> "RationalFunction":
        return RationalFunction([float(value)], [1.0])

    @property
    def num_degree(self) -> int:
        return 0 if np.all(self.num == 0.0) else len(self.num) - 1

    @property
    def den_degree(self) -> int:
        return len(self.den) - 1

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            npoly.polyadd(npoly.polymul(self.num, other.den),
                          npoly.polymul(other.num, self.den)),
            npoly.polymul(self.den, other.den),
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(npoly.polymul(self.num, other.num),
                                npoly.polymul(self.den, other.den))

    def __call__(self, s: complex) -> complex:
        dv = npoly.polyval(s, self.den)
        if dv == 0 or not np.isfinite(dv):
            raise PoleHitError(f"denominator vanishes at s = {s}")
        value = npoly.polyval(s, self.num) / dv
        if not np.isfinite(value):
            raise PoleHitError(f"rational function overflows at s = {s}")
        return complex(value)

    def imaginary_axis_poles(self, rtol: float = 1e-9) -> list[float]:
        """Nonnegative frequencies w with den(jw) = 0 (up to rtol)."""
        if self.den_degree == 0:
            return []
        roots = npoly.polyroots(self.den)
        out = []
        for r in roots:
            if abs(r.real) <= rtol * max(1.0, abs(r)):
                out.append(abs(r.imag))
        return sorted(out)


def zero_rf() -> RationalFunction:
    return RationalFunction.const(0.0)


@dataclass(frozen=True)
class InfinityLimit:
    """Entrywise limit of Z(jw) as w -> inf.

    `value` holds the finite limit where the entry is proper; `improper`
    marks entries growing without bound, whose leading ratio (coefficient
    of the jw growth) is stored in `growth`.
    """

    value: np.ndarray
    improper: np.ndarray
    growth: np.ndarray

    @property
    def is_proper(self) -> bool:
        return not bool(np.any(self.improper))


class RationalMatrix:
    """Square matrix of rational functions; the n-port impedance model."""

    def __init__(self, entries):
        rows = [list(r) for r in entries]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatchError("entries must form a square grid")
        for r in rows:
            for e in r:
                if not isinstance(e, RationalFunction):
                    raise TypeError("entries must be RationalFunction instances")
        self.entries = rows
        self.n = n

    @staticmethod
    def from_constant(mat) -> "RationalMatrix":
        a = np.asarray(mat, dtype=float)
        return RationalMatrix(
            [[RationalFunction.const(a[i, j]) for j in range(a.shape[1])]
             for i in range(a.shape[0])]
        )

    def eval(self, s: complex) -> np.ndarray:
        """Frequency response Z(s); raises PoleHitError on a pole."""
        out = np.empty((self.n, self.n), dtype=complex)
        for i in range(self.n):
            for j in range(self.n):
                out[i, j] = self.entries[i][j](s)
        return out

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.n:
            raise DimensionMismatchError(
                f"port counts differ: {self.n} vs {other.n}"
            )
        return RationalMatrix(
            [[self.entries[i][j] + other.entries[i][j] for j in range(self.n)]
             for i in range(self.n)]
        )

    def imaginary_axis_poles(self, eps: float = 1e-9) -> list[float]:
        """Union of entrywise jw-axis pole frequencies, deduplicated within eps."""
        raw = sorted(
            w for row in self.entries for e in row
            for w in e.imaginary_axis_poles()
        )
        out = []
        for w in raw:
            if not out or w - out[-1] > eps:
                out.append(w)
        return out

    def limit_at_infinity(self) -> InfinityLimit:
        """Entrywise degree analysis of the behavior as w -> inf."""
        value = np.zeros((self.n, self.n), dtype=complex)
        improper = np.zeros((self.n, self.n), dtype=bool)
        growth = np.zeros((self.n, self.n), dtype=float)
        for i in range(self.n):
            for j in range(self.n):
                e = self.entries[i][j]
                dn, dd = e.num_degree, e.den_degree
                if np.all(e.num == 0.0):
                    continue
                if dn < dd:
                    continue
                ratio = e.num[-1] / e.den[-1]
                if dn == dd:
                    value[i, j] = ratio
                else:
                    improper[i, j] = True
                    growth[i, j] = ratio
        return InfinityLimit(value, improper, growth)


@dataclass(frozen=True)
class FrequencyGrid:
    """Evaluation points along the indented imaginary axis."""

    points: np.ndarray          # complex s values
    omega_labels: np.ndarray    # real labels, nondecreasing
    detour: np.ndarray          # bool, True on semicircular detours
    indent_radius: float


def build_grid(z: RationalMatrix, w_lo: float, w_hi: float,
               points_per_decade: int = 100,
               eps: float | None = None) -> FrequencyGrid:
    """Log-spaced jw samples with pole detours.

    Samples within `eps` of a jw-axis pole w_p are replaced by a
    right-half-plane semicircle s = j*w_p + eps*exp(j*phi) with 16 arc
    samples; a pole at w = 0 gets the upper quarter arc only.
    """
    if not (0.0 <= w_lo < w_hi) or points_per_decade < 1:
        raise InvalidRangeError(
            f"need 0 <= w_lo < w_hi and ppd >= 1, got [{w_lo}, {w_hi}] @ {points_per_decade}"
        )
    lo_pos = w_lo if w_lo > 0.0 else w_hi * 1e-6
    decades = math.log10(w_hi / lo_pos)
    count = max(2, int(round(points_per_decade * decades)) + 1)
    omegas = np.logspace(math.log10(lo_pos), math.log10(w_hi), count)
    if w_lo == 0.0:
        omegas = np.concatenate(([0.0], omegas))

    poles = z.imaginary_axis_poles()
    poles = [p for p in poles if w_lo - 1.0 <= p <= w_hi + 1.0 or p < max(w_lo, 1e-12)]

    pts, labels, det = [], [], []

    def emit(s, w, is_detour):
        pts.append(s)
        labels.append(w)
        det.append(is_detour)

    def detour_radius(wp):
        return eps if eps is not None else 1e-6 * max(1.0, wp)

    consumed = np.zeros(len(omegas), dtype=bool)
    events = []  # (position, pole)
    for wp in poles:
        r = detour_radius(wp)
        consumed |= np.abs(omegas - wp) < r
        if w_lo - r <= wp <= w_hi + r:
            events.append((wp, r))

    merged = sorted(set(zip([e[0] for e in events], [e[1] for e in events])))
    idx = 0
    for wp, r in merged:
        while idx < len(omegas) and omegas[idx] < wp:
            if not consumed[idx]:
                emit(1j * omegas[idx], omegas[idx], False)
            idx += 1
        if wp <= r:  # pole at (or straddling) the origin: upper quarter arc
            phis = np.linspace(0.0, math.pi / 2.0, _ARC_POINTS + 1)[:-1]
        else:
            phis = np.linspace(-math.pi / 2.0, math.pi / 2.0, _ARC_POINTS + 2)[1:-1]
        for phi in phis:
            s = 1j * wp + r * np.exp(1j * phi)
            emit(s, max(s.imag, 0.0), True)
    while idx < len(omegas):
        if not consumed[idx]:
            emit(1j * omegas[idx], omegas[idx], False)
        idx += 1

    radius = eps if eps is not None else (detour_radius(merged[0][0]) if merged else 1e-6)
    return FrequencyGrid(np.asarray(pts, dtype=complex),
                         np.asarray(labels, dtype=float),
                         np.asarray(det, dtype=bool),
                         float(radius))


@dataclass
class SweepResult:
    """Per-point classification and phase bounds plus global aggregates."""

    omegas: np.ndarray
    phi_lo: np.ndarray          # nan where not (semi-)sectorial or rank 0
    phi_hi: np.ndarray
    classes: list               # Sectoriality per point
    detour: np.ndarray
    nonsectorial_count: int = 0

    @property
    def global_interval(self) -> PhaseInterval:
        lo = np.nanmin(self.phi_lo)
        hi = np.nanmax(self.phi_hi)
        return PhaseInterval(float(lo), float(min(hi, lo + math.pi)))

    @property
    def global_bounds(self) -> tuple[float, float]:
        return float(np.nanmin(self.phi_lo)), float(np.nanmax(self.phi_hi))

    def band_bounds(self, w_lo: float, w_hi: float) -> tuple[float, float]:
        """Phase bounds restricted to omega in [w_lo, w_hi]."""
        m = (self.omegas >= w_lo) & (self.omegas <= w_hi)
        if not np.any(m):
            raise InvalidRangeError(f"no grid points in [{w_lo}, {w_hi}]")
        return float(np.nanmin(self.phi_lo[m])), float(np.nanmax(self.phi_hi[m]))

    def rows(self):
        for i in range(len(self.omegas)):
            yield (self.omegas[i], self.phi_lo[i], self.phi_hi[i],
                   self.classes[i].value, int(self.detour[i]))


def _threads() -> int:
    import os

    try:
        return max(1, int(os.environ.get("PORTPHASE_THREADS", "1")))
    except ValueError:
        return 1


def sweep_matrix_fn(fn, grid: FrequencyGrid, tol: float = DEFAULT_TOL) -> SweepResult:
    """Sweep an arbitrary matrix-valued function of s over a grid.

    Points where the matrix is NonSectorial (or the function raises
    PoleHitError / IllDefined conditions) are flagged and excluded from the
    bounds; aggregation is order-independent, so parallel evaluation via
    PORTPHASE_THREADS does not change the result.
    """
    m = len(grid.points)
    phi_lo = np.full(m, np.nan)
    phi_hi = np.full(m, np.nan)
    classes = [Sectoriality.NON_SECTORIAL] * m

    def work(i):
        c = fn(grid.points[i])
        cls = classify(c, tol)
        if cls.tag is Sectoriality.NON_SECTORIAL:
            return cls.tag, np.nan, np.nan
        phis = phases_semi(c, tol, cls=cls)
        if len(phis) == 0:
            return cls.tag, np.nan, np.nan
        return cls.tag, float(np.min(phis)), float(np.max(phis))

    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(work, range(m)))
    else:
        results = [work(i) for i in range(m)]
    ns = 0
    for i, (tag, lo, hi) in enumerate(results):
        classes[i] = tag
        phi_lo[i] = lo
        phi_hi[i] = hi
        if tag is Sectoriality.NON_SECTORIAL:
            ns += 1
    return SweepResult(grid.omega_labels.copy(), phi_lo, phi_hi, classes,
                       grid.detour.copy(), ns)


def sweep(z: RationalMatrix, grid: FrequencyGrid, tol: float = DEFAULT_TOL) -> SweepResult:
    """Classify Z(s) at every grid point and aggregate phase bounds."""
    return sweep_matrix_fn(z.eval, grid, tol)


# -- worked fixture networks -------------------------------------------------

def fig4_network(r: float, l: float, c: float, gamma: float) -> RationalMatrix:
    """Two-port RLC network with a V1-dependent current source (gain gamma).

    Z(s) = 1/(1 + gamma*L*s) * [[L*s, L*s],
                                [(1-gamma*R)*L*s, (1+gamma*L*s)/(C*s) + L*s + R]]
    """
    den = np.array([1.0, gamma * l])
    z11 = RationalFunction([0.0, l], den)
    z12 = RationalFunction([0.0, l], den)
    z21 = RationalFunction([0.0, (1.0 - gamma * r) * l], den)
    # ((1 + gamma L s) + (L s + R) C s) / (C s (1 + gamma L s))
    num22 = npoly.polyadd(np.array([1.0, gamma * l]),
                          npoly.polymul(np.array([r, l]), np.array([0.0, c])))
    den22 = npoly.polymul(np.array([0.0, c]), den)
    z22 = RationalFunction(num22, den22)
    return RationalMatrix([[z11, z12], [z21, z22]])


def fig14_network(r: float, l: float, c: float, kappa: float,
                  lam: float) -> RationalMatrix:
    """Two-port RLC network with dependent sources (gains kappa, lambda).

    Z(s) = 1/(C*s) * [[1 + R*C*s, 1 + kappa*C*s],
                      [1 - lambda*L*s, 1 - lambda*L*s + L*C*s^2]]
    """
    den = np.array([0.0, c])
    z11 = RationalFunction([1.0, r * c], den)
    z12 = RationalFunction([1.0, kappa * c], den)
    z21 = RationalFunction([1.0, -lam * l], den)
    z22 = RationalFunction([1.0, -lam * l, l * c], den)
    return RationalMatrix([[z11, z12], [z21, z22]])


def fig13_resistive(r1: float, r2: float, r3: float, r4: float):
    """Resistive two-port bridge and the negative load that defeats cascading.

    Returns (Z, R_N) with
    Z = [[(R1+R3+R4)R2, R2 R4], [R2 R4, (R1+R2+R3)R4]] / (R1+R2+R3+R4)
    and R_N = -(R1+R2+R3) R4 / (R1+R2+R3+R4), chosen so Z22 + R_N = 0.
    """
    total = r1 + r2 + r3 + r4
    z = np.array(
        [[(r1 + r3 + r4) * r2, r2 * r4],
         [r2 * r4, (r1 + r2 + r3) * r4]], dtype=complex
    ) / total
    rn = -(r1 + r2 + r3) * r4 / total
    return z, rn
