"""Connection operations on per-frequency impedance matrices.

Seven kinds: shorted and open (unary, on a port split), series, parallel,
hybrid, cascade (including cascade-load) and hybrid-cascade.  Everything
operates on complex matrices at a single frequency; `connect_sweep` lifts
any kind across a shared frequency grid for two rational networks.

Well-posedness of each kind reduces to well-definedness of the Schur
complement of an augmented three-block matrix built from the operands; the
same construction doubles as an independent oracle for the block formulas.
"""

from __future__ import annotations

import numpy as np

from ._errors import DimensionMismatchError, IllDefinedError
from .intervals import PhaseInterval, hull
from .network import FrequencyGrid, RationalMatrix, SweepResult, sweep_matrix_fn
from .phase_core import (
    DEFAULT_TOL,
    _as_square,
    _check_split,
    _split_blocks,
    pseudo_inverse,
    schur_complement,
    well_defined_schur,
)

CONNECTION_KINDS = (
    "shorted", "open", "series", "parallel", "hybrid", "cascade",
    "cascade-load", "hybrid-cascade",
)


def shorted(za, r: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Short the trailing ports: the Schur complement wrt the 22 block."""
    return schur_complement(za, r, tol)


def open_ports(za, r: int) -> np.ndarray:
    """Leave the trailing ports open: the leading r x r principal block."""
    a = _as_square(za)
    _check_split(a, r)
    return a[:r, :r].copy()


def series(za, zb) -> np.ndarray:
    a, b = _as_square(za), _as_square(zb)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"series needs equal sizes, {a.shape} vs {b.shape}")
    return a + b


def parallel(za, zb, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Za (Za+Zb)^+ Zb, guarded by the bordered-matrix well-posedness.

    Requires R(Za) in R(Za+Zb) and N(Za+Zb) in N(Za); under those the
    formula is independent of the generalized inverse and symmetric in the
    operands.
    """
    a, b = _as_square(za), _as_square(zb)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"parallel needs equal sizes, {a.shape} vs {b.shape}")
    s = a + b
    border = np.block([[a, a], [a, s]])
    if not well_defined_schur(border, a.shape[0], tol):
        raise IllDefinedError("parallel ill-defined: R(Za) not within R(Za+Zb)")
    return a @ pseudo_inverse(s) @ b


def _augmented_hybrid(a, b, r):
    """Three-block congruence sum whose Schur complement is the hybrid."""
    a11, a12, a21, a22 = _split_blocks(a, r)
    b11, b12, b21, b22 = _split_blocks(b, r)
    return np.block([
        [a11 + b11, a12, a12 - b12],
        [a21, a22, a22],
        [a21 - b21, a22, a22 + b22],
    ])


def hybrid(za, zb, r: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Series on the first r ports, parallel on the rest.

    Degenerates to plain series at r = n and to parallel at r = 0.
    """
    a, b = _as_square(za), _as_square(zb)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"hybrid needs equal sizes, {a.shape} vs {b.shape}")
    _check_split(a, r, allow_zero=True)
    n = a.shape[0]
    aug = _augmented_hybrid(a, b, r)
    if not well_defined_schur(aug, n, tol):
        raise IllDefinedError("hybrid ill-defined: pivot Za22+Zb22 incompatible")
    a11, a12, a21, a22 = _split_blocks(a, r)
    b11, b12, b21, b22 = _split_blocks(b, r)
    piv = pseudo_inverse(a22 + b22)
    return np.block([
        [a11 + b11 - (a12 - b12) @ piv @ (a21 - b21),
         a12 - (a12 - b12) @ piv @ a22],
        [a21 - a22 @ piv @ (a21 - b21),
         a22 @ piv @ b22],
    ])


def _augmented_cascade(a, b, r, s):
    a11, a12, a21, a22 = _split_blocks(a, r)
    b11, b12, b21, b22 = _split_blocks(b, s)
    t = b.shape[0] - s
    return np.block([
        [a11, np.zeros((r, t), complex), -a12],
        [np.zeros((t, r), complex), b22, b21],
        [-a21, b12, a22 + b11],
    ])


def cascade(za, zb, r: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Chain an (r+s)-port into an (s+t)-port through the shared s ports."""
    a, b = _as_square(za), _as_square(zb)
    s = a.shape[0] - r
    t = b.shape[0] - s
    if r < 0 or s < 0 or t < 0:
        raise DimensionMismatchError(
            f"cascade split invalid: Za is {a.shape[0]}-port with r={r}, Zb is {b.shape[0]}-port"
        )
    aug = _augmented_cascade(a, b, r, s)
    if not well_defined_schur(aug, r + t, tol):
        raise IllDefinedError("cascade ill-defined: pivot Za22+Zb11 incompatible")
    a11, a12, a21, a22 = _split_blocks(a, r)
    b11, b12, b21, b22 = _split_blocks(b, s)
    piv = pseudo_inverse(a22 + b11)
    return np.block([
        [a11 - a12 @ piv @ a21, a12 @ piv @ b12],
        [b21 @ piv @ a21, b22 - b21 @ piv @ b12],
    ])


def cascade_load(za, r: int, zload, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Terminate the trailing ports with a load network (cascade with t = 0)."""
    a = _as_square(za)
    zl = _as_square(zload)
    s = a.shape[0] - r
    if zl.shape[0] != s:
        raise DimensionMismatchError(
            f"load must be {s}x{s} for an {a.shape[0]}-port with r={r}"
        )
    return cascade(a, zl, r, tol)


def hybrid_cascade(za, zb, r: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Cascade through shared ports with the outputs super/imposed in series.

    Za is (r+s)x(r+s), Zb is (s+r)x(s+r); the result is 2r x 2r.
    """
    a, b = _as_square(za), _as_square(zb)
    s = a.shape[0] - r
    if s < 0 or b.shape[0] != s + r:
        raise DimensionMismatchError(
            f"hybrid-cascade needs Zb of size {s + r}, got {b.shape[0]}"
        )
    a11, a12, a21, a22 = _split_blocks(a, r)
    b11, b12, b21, b22 = _split_blocks(b, s)
    aug = np.block([
        [a11 + b22, b22, a12 - b21],
        [b22, b22, -b21],
        [a21 - b12, -b12, a22 + b11],
    ])
    if not well_defined_schur(aug, 2 * r, tol):
        raise IllDefinedError("hybrid-cascade ill-defined: pivot Za22+Zb11 incompatible")
    piv = pseudo_inverse(a22 + b11)
    return np.block([
        [a11 + b22 - (a12 - b21) @ piv @ (a21 - b12),
         b22 + (a12 - b21) @ piv @ b12],
        [b22 + b21 @ piv @ (a21 - b12),
         b22 - b21 @ piv @ b12],
    ])


def predict_interval(ja: PhaseInterval, jb: PhaseInterval,
                     tol: float = 1e-9) -> PhaseInterval:
    """Phase interval guaranteed for every connection of cone-bounded operands.

    The hull [min(lo), max(hi)] of the operand intervals, provided it fits
    in a half-plane; raises HullTooWideError otherwise.
    """
    return hull(ja, jb, tol)


def connect(kind: str, za, zb=None, r: int | None = None,
            tol: float = DEFAULT_TOL) -> np.ndarray:
    """Dispatch a connection by name (see CONNECTION_KINDS)."""
    if kind == "shorted":
        return shorted(za, r, tol)
    if kind == "open":
        return open_ports(za, r)
    if kind == "series":
        return series(za, zb)
    if kind == "parallel":
        return parallel(za, zb, tol)
    if kind == "hybrid":
        return hybrid(za, zb, r, tol)
    if kind == "cascade":
        return cascade(za, zb, r, tol)
    if kind == "cascade-load":
        return cascade_load(za, r, zb, tol)
    if kind == "hybrid-cascade":
        return hybrid_cascade(za, zb, r, tol)
    raise ValueError(f"unknown connection kind {kind!r}")


def series_network(za: RationalMatrix, zb: RationalMatrix) -> RationalMatrix:
    """Exact rational-coefficient series connection of two networks."""
    return za + zb


def connect_sweep(kind: str, za: RationalMatrix, zb: RationalMatrix | None,
                  r: int | None, grid: FrequencyGrid,
                  tol: float = DEFAULT_TOL) -> SweepResult:
    """Apply a connection per frequency point and sweep the result's phases."""

    def fn(s):
        ca = za.eval(s)
        cb = zb.eval(s) if zb is not None else None
        return connect(kind, ca, cb, r, tol)

    return sweep_matrix_fn(fn, grid, tol)
