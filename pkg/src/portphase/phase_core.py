"""Phases, sectoriality and generalized Schur complements of complex matrices.

A square complex matrix whose numerical range W(C) = {x*Cx : ||x|| = 1}
excludes the origin factors as C = T* D T with T nonsingular and D diagonal
unitary; the arguments of diag(D) are the matrix phases.  When the origin
sits on the boundary of W(C) the factorization generalizes with a zero
block and Jordan-type boundary blocks; the phase multiset then contains
rank(C) entries, the boundary ones at the supporting angle +/- pi/2.

All routines take dense numpy arrays and are pure functions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._errors import (
    DimensionMismatchError,
    IllDefinedError,
    NotSectorialError,
    NotSemiSectorialError,
)
from .intervals import TWO_PI, PhaseInterval, from_phases

#: Default relative sectoriality tolerance (scaled by the Frobenius norm).
DEFAULT_TOL = 1e-9

#: Default relative rank cutoff for the Moore-Penrose inverse.
PINV_TOL = 1e-12

#: Number of coarse rotation angles scanned over [0, 2*pi).
_SCAN_POINTS = 720

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Sectoriality(enum.Enum):
    SECTORIAL = "S"
    SEMI_SECTORIAL = "SS"
    NON_SECTORIAL = "NS"


@dataclass(frozen=True)
class SectorialClass:
    """Classification result: tag plus the certifying eigenvalue level.

    `margin` is max over rotations of the smallest eigenvalue of the
    Hermitian part; `support_angle` is the maximizing rotation.
    """

    tag: Sectoriality
    margin: float
    support_angle: float

    @property
    def is_sectorial(self) -> bool:
        return self.tag is Sectoriality.SECTORIAL

    @property
    def is_semi_sectorial(self) -> bool:
        return self.tag in (Sectoriality.SECTORIAL, Sectoriality.SEMI_SECTORIAL)


@dataclass(frozen=True)
class SectorialDecomposition:
    """Witness of C = T* D T with D = diag(exp(1j * phases))."""

    t: np.ndarray
    d: np.ndarray
    center_angle: float
    phases: np.ndarray = field(default=None)

    def reconstruct(self) -> np.ndarray:
        return self.t.conj().T @ self.d @ self.t

    @property
    def interval(self) -> PhaseInterval:
        return from_phases(self.phases)


def _as_square(c) -> np.ndarray:
    a = np.asarray(c, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def hermitian_split(c):
    """Split C = H + 1j*K into Hermitian H and K.

    Both returned matrices are Hermitian.
    """
    a = _as_square(c)
    h = 0.5 * (a + a.conj().T)
    k = (a - a.conj().T) / 2j
    return h, k


def numerical_range_support(c, theta: float):
    """Support value of W(C) in direction theta.

    Returns (lam_min, x): the smallest eigenvalue of the Hermitian part of
    exp(-1j*theta)*C together with a unit witness vector attaining it.
    W(C) lies in the half-plane {Re(exp(-1j*theta) z) >= lam_min}.
    """
    a = _as_square(c)
    h = 0.5 * (np.exp(-1j * theta) * a + np.exp(1j * theta) * a.conj().T)
    w, v = np.linalg.eigh(h)
    return float(w[0]), v[:, 0]


def _support_values(h, k, thetas):
    """lam_min of cos(t)*H + sin(t)*K for a vector of angles (batched)."""
    ct, st = np.cos(thetas), np.sin(thetas)
    n = h.shape[0]
    if n == 1:
        return ct * h[0, 0].real + st * k[0, 0].real
    if n == 2:
        # closed-form smallest eigenvalue of a 2x2 Hermitian matrix
        a = ct * h[0, 0].real + st * k[0, 0].real
        c = ct * h[1, 1].real + st * k[1, 1].real
        b = ct * h[0, 1] + st * k[0, 1]
        half = 0.5 * (a + c)
        return half - np.sqrt((0.5 * (a - c)) ** 2 + np.abs(b) ** 2)
    stack = ct[:, None, None] * h + st[:, None, None] * k
    return np.linalg.eigvalsh(stack)[:, 0]


def _support_value(h, k, theta):
    if h.shape[0] <= 2:
        return float(_support_values(h, k, np.array([theta]))[0])
    m = math.cos(theta) * h + math.sin(theta) * k
    return np.linalg.eigvalsh(m)[0]


def _golden_max(fun, lo, hi, iters=60):
    """Golden-section maximization of a unimodal-enough bracket."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fun(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fun(x1)
        if b - a < 1e-13:
            break
    return (a + b) / 2.0


def _support_maximum(c):
    """(theta*, margin): rotation maximizing lam_min of the Hermitian part.

    Coarse 720-point scan over [0, 2*pi) followed by golden-section
    refinement of the best bracket.
    """
    h, k = hermitian_split(c)
    thetas = np.linspace(0.0, TWO_PI, _SCAN_POINTS, endpoint=False)
    vals = _support_values(h, k, thetas)
    i = int(np.argmax(vals))
    step = TWO_PI / _SCAN_POINTS
    fun = lambda t: _support_value(h, k, t)
    theta = _golden_max(fun, thetas[i] - step, thetas[i] + step)
    margin = _support_value(h, k, theta)
    # keep the coarse candidate if refinement slid off the true peak
    if margin < vals[i]:
        theta, margin = float(thetas[i]), float(vals[i])
    return float(theta), float(margin)


def classify(c, tol: float = DEFAULT_TOL) -> SectorialClass:
    """Classify C as Sectorial / SemiSectorial / NonSectorial.

    `tol` is relative; the decision threshold is tol * ||C||_F.
    Classification is total: the zero matrix is SemiSectorial.
    """
    a = _as_square(c)
    scale = float(np.linalg.norm(a))
    if a.shape[0] == 0 or scale == 0.0:
        return SectorialClass(Sectoriality.SEMI_SECTORIAL, 0.0, 0.0)
    theta, margin = _support_maximum(a)
    cut = tol * scale
    if margin > cut:
        tag = Sectoriality.SECTORIAL
    elif margin >= -cut:
        tag = Sectoriality.SEMI_SECTORIAL
    else:
        tag = Sectoriality.NON_SECTORIAL
    return SectorialClass(tag, margin, theta)


def _canonical_shift(phases):
    """2*pi multiple putting the interval midpoint in (-pi, pi]."""
    mid = 0.5 * (float(np.max(phases)) + float(np.min(phases)))
    shift = -TWO_PI * math.floor((mid + math.pi) / TWO_PI)
    if mid + shift <= -math.pi + 1e-15:
        shift += TWO_PI
    return shift


def _pencil_phases(cp):
    """Phases of an already-rotated matrix with positive definite Hermitian part.

    Solves the Hermitian pencil K x = lam H x; phases are atan(lam).
    Returns (phis ascending, T, used) where C' = T* diag(exp(1j*phis)) T.
    """
    h, k = hermitian_split(cp)
    lam, v = scipy.linalg.eigh(k, h)  # v* H v = I
    phis = np.arctan(lam)
    # C' = H v (I + j diag(lam)) v* H  and  I + j*lam = sqrt(1+lam^2) e^{j atan lam}
    t = np.diag((1.0 + lam**2) ** 0.25) @ v.conj().T @ h
    return phis, t


def phases(c, tol: float = DEFAULT_TOL,
           cls: SectorialClass | None = None) -> SectorialDecomposition:
    """Sectorial decomposition C = T* D T and the sorted phase list.

    Rotates the matrix so its Hermitian part is positive definite, solves
    the Hermitian pencil of the skew part against it, and reports
    phases = rotation + atan(pencil eigenvalues), sorted descending, on the
    branch whose interval midpoint lies in (-pi, pi].

    Raises NotSectorialError when classify(c, tol) is not Sectorial.
    A precomputed classification may be passed through `cls`.
    """
    a = _as_square(c)
    if cls is None:
        cls = classify(a, tol)
    if cls.tag is not Sectoriality.SECTORIAL:
        raise NotSectorialError(
            f"matrix is {cls.tag.value}, margin {cls.margin:.3e}; phases undefined"
        )
    theta = cls.support_angle
    cp = np.exp(-1j * theta) * a
    phis, t = _pencil_phases(cp)
    full = theta + phis
    shift = _canonical_shift(full)
    full = full + shift
    order = np.argsort(full)[::-1]
    full = full[order]
    t = t[order, :]
    d = np.diag(np.exp(1j * full))
    return SectorialDecomposition(t=t, d=d, center_angle=theta + shift, phases=full)


def _kernel_compress(a, tol):
    """Compress away the joint kernel N(C) = N(C*) of a semi-sectorial matrix.

    Returns (compressed, rank).  Raises NotSemiSectorialError when the
    left/right null spaces disagree (no generalized decomposition exists).
    """
    n = a.shape[0]
    scale = np.linalg.norm(a, 2) if n else 0.0
    if n == 0 or scale == 0.0:
        return a[:0, :0], 0
    u, s, vh = np.linalg.svd(a)
    r = int(np.sum(s > tol * scale * max(1, n)))
    if r == n:
        return a, n
    vr = vh[:r, :].conj().T  # basis of N(C)^perp
    # for a semi-sectorial matrix the kernel reduces: C maps N(C)^perp into itself
    resid = np.linalg.norm(u[:, r:].conj().T @ a @ vr, 2)
    if resid > 1e3 * tol * scale * max(1, n):
        raise NotSemiSectorialError(
            "left and right null spaces differ: no generalized decomposition"
        )
    return vr.conj().T @ a @ vr, r


def _boundary_signature(kn, tol_abs):
    """Signature (p, q, z) of the skew form restricted to the H-null space."""
    if kn.shape[0] == 0:
        return 0, 0, 0, None
    w, vecs = np.linalg.eigh(kn)
    p = int(np.sum(w > tol_abs))
    q = int(np.sum(w < -tol_abs))
    z = kn.shape[0] - p - q
    return p, q, z, (w, vecs)


def phases_semi(c, tol: float = DEFAULT_TOL,
                cls: SectorialClass | None = None) -> np.ndarray:
    """Phases of a (semi-)sectorial matrix; list length equals rank(C).

    The joint kernel is compressed away first.  If the compression is
    sectorial its phases are returned directly.  Otherwise the matrix is
    rotated to the supporting angle theta0; null directions of the
    Hermitian part contribute boundary phases theta0 +/- pi/2 (sign from
    the signature of the restricted skew form, zero-signature directions
    in +/- pairs), and the remaining interior phases come from the
    deflated Hermitian pencil.

    Raises NotSemiSectorialError when the matrix is NonSectorial.
    A precomputed classification of the *full* matrix may be passed via
    `cls`; it is reused whenever the kernel compression is trivial.
    """
    a = _as_square(c)
    ar, rank = _kernel_compress(a, max(tol, PINV_TOL))
    if rank == 0:
        return np.empty(0)
    if cls is None or rank != a.shape[0]:
        cls = classify(ar, tol)
    if cls.tag is Sectoriality.NON_SECTORIAL:
        raise NotSemiSectorialError(
            f"matrix is NonSectorial (margin {cls.margin:.3e})"
        )
    if cls.tag is Sectoriality.SECTORIAL:
        return phases(ar, tol, cls=cls).phases
    theta0 = cls.support_angle
    scale = float(np.linalg.norm(ar, 2))
    tol_abs = max(tol * np.linalg.norm(ar), 64.0 * np.finfo(float).eps * scale)
    cp = np.exp(-1j * theta0) * ar
    h, k = hermitian_split(cp)
    w, v = np.linalg.eigh(h)
    null_mask = w <= 4.0 * tol_abs
    nn = v[:, null_mask]
    rr = v[:, ~null_mask]
    kn = nn.conj().T @ k @ nn
    p, q, z, eig_n = _boundary_signature(kn, 4.0 * tol_abs)
    rho = rr.shape[1]
    m_interior = rho - z
    out = [theta0 + math.pi / 2.0] * (p + z) + [theta0 - math.pi / 2.0] * (q + z)
    if m_interior > 0:
        if z == 0 and p + q > 0:
            # deflate infinite pencil eigenvalues exactly through the
            # invertible part of the restricted skew form
            wn, vn = eig_n
            k_rn = rr.conj().T @ k @ nn @ vn
            k_rr = rr.conj().T @ k @ rr
            h_rr = rr.conj().T @ h @ rr
            k_def = k_rr - k_rn @ np.diag(1.0 / wn) @ k_rn.conj().T
            lam = scipy.linalg.eigh(k_def, h_rr, eigvals_only=True)
            out.extend(theta0 + np.arctan(lam))
        elif z == 0:
            lam = scipy.linalg.eigh(
                rr.conj().T @ k @ rr, rr.conj().T @ h @ rr, eigvals_only=True
            )
            out.extend(theta0 + np.arctan(lam))
        else:
            # Jordan-type boundary blocks present: regularize the singular
            # Hermitian part and keep the m smallest pencil eigenvalues
            # (the count is an exact congruence invariant).
            delta = max(1e-10 * scale, 4.0 * tol_abs)
            lam = scipy.linalg.eigh(k, h + delta * np.eye(h.shape[0]),
                                    eigvals_only=True)
            lam = lam[np.argsort(np.abs(lam))][:m_interior]
            out.extend(theta0 + np.arctan(lam))
    out = np.sort(np.asarray(out))[::-1]
    return out + _canonical_shift(out)


def pseudo_inverse(c, tol: float = PINV_TOL) -> np.ndarray:
    """Moore-Penrose inverse with singular values below
    tol * sigma_max * max(rows, cols) treated as zero."""
    a = np.asarray(c, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got shape {a.shape}")
    if a.size == 0:
        return a.conj().T.copy()
    return np.linalg.pinv(a, rcond=tol * max(a.shape))


def _split_blocks(a, r):
    return a[:r, :r], a[:r, r:], a[r:, :r], a[r:, r:]


def _check_split(a, r, allow_zero=False):
    n = a.shape[0]
    lo = 0 if allow_zero else 1
    if not (lo <= r <= n):
        raise DimensionMismatchError(f"split {r} invalid for {n}x{n} matrix")


def well_defined_schur(c, r: int, tol: float = DEFAULT_TOL) -> bool:
    """Whether the Schur complement wrt the trailing block is well-defined.

    Tests the range inclusion R(C21) in R(C22) and the kernel inclusion
    N(C12) contains N(C22) through projector residuals, which makes the
    complement independent of the choice of generalized inverse.
    """
    a = _as_square(c)
    _check_split(a, r, allow_zero=True)
    c11, c12, c21, c22 = _split_blocks(a, r)
    if c22.shape[0] == 0 or r == 0:
        return True
    pinv22 = pseudo_inverse(c22)
    eye = np.eye(c22.shape[0])
    res_range = np.linalg.norm((eye - c22 @ pinv22) @ c21, 2)
    res_kernel = np.linalg.norm(c12 @ (eye - pinv22 @ c22), 2)
    ok_r = res_range <= tol * max(1.0, np.linalg.norm(c21, 2))
    ok_k = res_kernel <= tol * max(1.0, np.linalg.norm(c12, 2))
    return bool(ok_r and ok_k)


def schur_complement(c, r: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Generalized Schur complement C11 - C12 C22^+ C21 (r x r).

    Raises IllDefinedError unless well_defined_schur holds.
    """
    a = _as_square(c)
    _check_split(a, r, allow_zero=True)
    if not well_defined_schur(a, r, tol):
        raise IllDefinedError(
            "Schur complement ill-defined: range/kernel inclusion fails"
        )
    c11, c12, c21, c22 = _split_blocks(a, r)
    if c22.shape[0] == 0:
        return c11.copy()
    return c11 - c12 @ pseudo_inverse(c22) @ c21


def phase_interval(c, tol: float = DEFAULT_TOL) -> PhaseInterval:
    """Interval [min phase, max phase] of a (semi-)sectorial matrix."""
    return from_phases(phases_semi(c, tol))


def in_phase_set(c, interval: PhaseInterval, tol: float = DEFAULT_TOL,
                 angle_tol: float = 1e-9) -> bool:
    """Whether C is (semi-)sectorial with all phases inside `interval`.

    The zero matrix belongs to every phase set (it has no phases).
    """
    try:
        phis = phases_semi(c, tol)
    except NotSemiSectorialError:
        return False
    if len(phis) == 0:
        return True
    return interval.contains(from_phases(phis), tol=angle_tol)
