"""Inverse operations of the network connections.

Given the connected result Zc and one operand Zb, each subtraction
recovers the other operand Zx so that connecting Zx with Zb returns Zc.
Pivots use the plain inverse (guarded by a condition-number cap), matching
the subtraction formulas, which are stated with inverses rather than
generalized inverses.
"""

from __future__ import annotations

import numpy as np

from ._errors import (
    DimensionMismatchError,
    NoValidSignError,
    OverlapError,
    SingularPivotError,
)
from .intervals import TWO_PI, PhaseInterval
from .phase_core import DEFAULT_TOL, _as_square, _check_split, _split_blocks

SUBTRACTION_KINDS = ("series", "parallel", "hybrid", "cascade", "hybrid-cascade")

#: Pivot blocks with condition number beyond this are rejected.
COND_LIMIT = 1e12


def _inv_pivot(p) -> np.ndarray:
    if p.shape[0] == 0:
        return p.copy()
    try:
        cond = np.linalg.cond(p)
    except np.linalg.LinAlgError:
        raise SingularPivotError("pivot block condition estimate failed")
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularPivotError(
            f"pivot block singular or too ill-conditioned (cond ~ {cond:.2e})"
        )
    return np.linalg.inv(p)


def series_sub(zc, zb) -> np.ndarray:
    c, b = _as_square(zc), _as_square(zb)
    if c.shape != b.shape:
        raise DimensionMismatchError(f"series_sub needs equal sizes, {c.shape} vs {b.shape}")
    return c - b


def parallel_sub(zc, zb, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Zx = -Zb (Zc - Zb)^{-1} Zc; round-trips parallel(Zx, Zb) = Zc."""
    c, b = _as_square(zc), _as_square(zb)
    if c.shape != b.shape:
        raise DimensionMismatchError(f"parallel_sub needs equal sizes, {c.shape} vs {b.shape}")
    return -b @ _inv_pivot(c - b) @ c


def hybrid_sub(zc, zb, r: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Undo a hybrid connection; pivot is Zc22 - Zb22.

    Degenerates to series_sub at r = n and to parallel_sub at r = 0.
    """
    c, b = _as_square(zc), _as_square(zb)
    if c.shape != b.shape:
        raise DimensionMismatchError(f"hybrid_sub needs equal sizes, {c.shape} vs {b.shape}")
    _check_split(c, r, allow_zero=True)
    c11, c12, c21, c22 = _split_blocks(c, r)
    b11, b12, b21, b22 = _split_blocks(b, r)
    piv = _inv_pivot(c22 - b22)
    return np.block([
        [c11 - b11 - (c12 - b12) @ piv @ (c21 - b21),
         b12 - (c12 - b12) @ piv @ b22],
        [b21 - b22 @ piv @ (c21 - b21),
         -b22 @ piv @ c22],
    ])


def cascade_sub(zc, zb, r: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Undo a cascade: Zc is (r+t)-port, Zb is (s+t)-port, Zx is (r+s)-port."""
    c, b = _as_square(zc), _as_square(zb)
    t = c.shape[0] - r
    s = b.shape[0] - t
    if r < 0 or t < 0 or s < 0:
        raise DimensionMismatchError(
            f"cascade_sub split invalid: Zc is {c.shape[0]}-port with r={r}, Zb is {b.shape[0]}-port"
        )
    c11, c12, c21, c22 = _split_blocks(c, r)
    b11, b12, b21, b22 = _split_blocks(b, s)
    piv = _inv_pivot(c22 - b22)
    return np.block([
        [c11 - c12 @ piv @ c21, -c12 @ piv @ b21],
        [-b12 @ piv @ c21, -b11 - b12 @ piv @ b21],
    ])


def hybrid_cascade_sub(zc, zb, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Undo a hybrid-cascade: Zc is 2r-port, Zb is (s+r)-port, Zx is (r+s)-port."""
    c, b = _as_square(zc), _as_square(zb)
    if c.shape[0] % 2:
        raise DimensionMismatchError("hybrid_cascade_sub needs an even-port Zc")
    r = c.shape[0] // 2
    s = b.shape[0] - r
    if s < 0:
        raise DimensionMismatchError(
            f"Zb must be at least {r}-port for a {c.shape[0]}-port Zc"
        )
    c11, c12, c21, c22 = _split_blocks(c, r)
    b11, b12, b21, b22 = _split_blocks(b, s)
    piv = _inv_pivot(c22 - b22)
    return np.block([
        [c11 - b22 - (c12 - b22) @ piv @ (c21 - b22),
         b21 - (c12 - b22) @ piv @ b21],
        [b12 - b12 @ piv @ (c21 - b22),
         -b11 - b12 @ piv @ b21],
    ])


def subtract(kind: str, zc, zb, r: int | None = None,
             tol: float = DEFAULT_TOL) -> np.ndarray:
    """Dispatch a subtraction by name (see SUBTRACTION_KINDS)."""
    if kind == "series":
        return series_sub(zc, zb)
    if kind == "parallel":
        return parallel_sub(zc, zb, tol)
    if kind == "hybrid":
        return hybrid_sub(zc, zb, r, tol)
    if kind == "cascade":
        return cascade_sub(zc, zb, r, tol)
    if kind == "hybrid-cascade":
        return hybrid_cascade_sub(zc, zb, tol)
    raise ValueError(f"unknown subtraction kind {kind!r}")


def predict_subtraction_interval(jc: PhaseInterval, jb: PhaseInterval) -> PhaseInterval:
    """Maximal phase range of Zx for any subtraction kind.

    Requires the operand intervals disjoint mod 2*pi; the result is the
    hull of Jc with Jb shifted by +pi or -pi, whichever sign makes the
    hull narrower than pi (the narrower hull on a tie, +pi on an exact tie).
    """
    if jb.intersects(jc):
        raise OverlapError("operand phase intervals overlap mod 2*pi")
    best = None
    best_m = None
    for m in (1, -1, 3, -3):
        lo = min(jc.lo, jb.lo + m * np.pi)
        hi = max(jc.hi, jb.hi + m * np.pi)
        w = hi - lo
        if w < np.pi - 1e-15:
            better = best is None or w < best.width - 1e-15
            tie = best is not None and abs(w - best.width) <= 1e-15
            if better or (tie and best_m % 4 != 1 and m % 4 == 1):
                best = PhaseInterval(lo, hi)
                best_m = m
    if best is None:
        raise NoValidSignError(
            "no +/- pi shift yields a subtraction interval narrower than pi"
        )
    return best.canonical()
