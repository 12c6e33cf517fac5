"""General network connections through current/voltage subspaces.

A connection of an na-port A and an nb-port B into an nc-port C is encoded
by a subspace G of R^na x R^nb x R^nc holding every admissible current
triple (Ia, Ib, Ic).  Matrix quadruples represent it as

    G = {(a, b, c) : U a + W b = 0,  c = S a + T b},

and the admissible voltage triples form the orthogonal complement of G
under the indefinite inner product <a1,a2> + <b1,b2> - <c1,c2>, carried by
a second quadruple (Phi, Psi, Xi, Omega).  The connected impedance matrix
is the Schur complement of

    M = [Phi Psi; Xi Omega] diag(Za, Zb) [Phi Psi; Xi Omega]*

with respect to its trailing block.

The reference treatment fixes all blocks n x n; rectangular blocks are
supported so cascade-type connections (different port counts) fit the same
machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import (
    DimensionMismatchError,
    InvalidConfluenceError,
    NotExistsError,
    RankDeficientParameterError,
)
from .phase_core import (
    DEFAULT_TOL,
    _as_square,
    pseudo_inverse,
    schur_complement,
    well_defined_schur,
)


def indefinite_inner(x, y) -> float:
    """[(a1,b1,c1), (a2,b2,c2)] = <a1,a2> + <b1,b2> - <c1,c2>."""
    a1, b1, c1 = (np.asarray(v).ravel() for v in x)
    a2, b2, c2 = (np.asarray(v).ravel() for v in y)
    if a1.shape != a2.shape or b1.shape != b2.shape or c1.shape != c2.shape:
        raise DimensionMismatchError("indefinite inner product needs matching parts")
    val = np.vdot(a1, a2) + np.vdot(b1, b2) - np.vdot(c1, c2)
    return val.real if np.isrealobj(a1) and np.isrealobj(b1) else val


def _null_basis(m, rtol=1e-11):
    """Orthonormal basis of the kernel of m (columns)."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape[0] == 0:
        return np.eye(m.shape[1])
    u, s, vh = np.linalg.svd(m)
    cut = rtol * max(m.shape) * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cut))
    return vh[rank:].T


def _range_basis(m, rtol=1e-11):
    m = np.atleast_2d(np.asarray(m, dtype=float))
    u, s, vh = np.linalg.svd(m)
    cut = rtol * max(m.shape) * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cut))
    return u[:, :rank]


@dataclass(frozen=True)
class ConfluenceRep:
    """Current-side quadruple (S, T, U, W)."""

    s: np.ndarray
    t: np.ndarray
    u: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        s, t, u, w = (np.atleast_2d(np.asarray(m, dtype=float))
                      for m in (self.s, self.t, self.u, self.w))
        if s.shape[0] != t.shape[0] or u.shape[0] != w.shape[0]:
            raise DimensionMismatchError("row counts of (S,T) and of (U,W) must agree")
        if s.shape[1] != u.shape[1] or t.shape[1] != w.shape[1]:
            raise DimensionMismatchError("column counts of (S,U) and of (T,W) must agree")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    @property
    def na(self) -> int:
        return self.s.shape[1]

    @property
    def nb(self) -> int:
        return self.t.shape[1]

    @property
    def nc(self) -> int:
        return self.s.shape[0]

    def top(self) -> np.ndarray:
        return np.hstack([self.s, self.t])

    def bottom(self) -> np.ndarray:
        return np.hstack([self.u, self.w])

    def subspace_basis(self) -> np.ndarray:
        """Orthonormal columns spanning {(a, b, c)} in R^(na+nb+nc)."""
        ker = _null_basis(self.bottom())  # (a, b) freedom
        ab = ker
        c = self.top() @ ker
        raw = np.vstack([ab, c])
        q, _ = np.linalg.qr(raw)
        return q

    def dim(self) -> int:
        return self.subspace_basis().shape[1]


# The voltage-side quadruple has the same constraint/fiber semantics, so it
# shares the implementation; separate name keeps call sites readable.
@dataclass(frozen=True)
class DualRep(ConfluenceRep):
    """Voltage-side quadruple (Phi, Psi, Xi, Omega)."""

    @property
    def phi(self) -> np.ndarray:
        return self.s

    @property
    def psi(self) -> np.ndarray:
        return self.t

    @property
    def xi(self) -> np.ndarray:
        return self.u

    @property
    def omega(self) -> np.ndarray:
        return self.w


@dataclass(frozen=True)
class ConfluenceDiagnostics:
    axiom_i: bool
    axiom_ii: bool
    dim: int
    residual_i: float
    c_rank: int

    @property
    def ok(self) -> bool:
        return self.axiom_i and self.axiom_ii


def validate(rep: ConfluenceRep, tol: float = 1e-9) -> ConfluenceDiagnostics:
    """Check the confluence axioms on the represented subspace.

    Axiom (i): no (0, 0, c) with c != 0 lies in the subspace (automatic for
    quadruple representations; tested on the actual basis as a certificate).
    Axiom (ii): every c is reachable, i.e. [S T] restricted to the kernel of
    [U W] has full row rank nc.
    """
    basis = rep.subspace_basis()
    nab = rep.na + rep.nb
    ab_part = basis[:nab, :]
    c_part = basis[nab:, :]
    ghost = _null_basis(ab_part)
    res_i = float(np.linalg.norm(c_part @ ghost, 2)) if ghost.shape[1] else 0.0
    axiom_i = res_i <= tol
    ker = _null_basis(rep.bottom())
    reach = rep.top() @ ker
    c_rank = int(np.linalg.matrix_rank(reach, tol=tol * max(1.0, float(np.linalg.norm(reach, 2)))))
    return ConfluenceDiagnostics(axiom_i, c_rank == rep.nc, basis.shape[1], res_i, c_rank)


def dual(rep: ConfluenceRep, tol: float = 1e-9) -> DualRep:
    """Voltage-side quadruple of the orthogonal complement under the
    indefinite inner product.

    Construction: the (alpha, beta)-projection of the complement is
    Pi = range([S* U*; T* W*]); the fiber map recovers gamma from the
    parametrization (alpha, beta) = (S* g + U* l, T* g + W* l).  [Xi Omega]
    is an orthonormal basis of the complement of Pi and [Phi Psi] the
    minimum-norm extension of the fiber map.  The duality normalization
    [S T; U W] [Phi* Xi*; Psi* Omega*] = [I 0; 0 0] then holds and is
    verified as a certificate.
    """
    diag = validate(rep, tol)
    if not diag.ok:
        raise InvalidConfluenceError(
            f"not a confluence: axiom_i={diag.axiom_i} axiom_ii={diag.axiom_ii}"
        )
    na, nb, nc = rep.na, rep.nb, rep.nc
    k = rep.u.shape[0]
    gen = np.vstack([rep.top(), rep.bottom()]).T  # (na+nb) x (nc+k), cols = generators
    p = _range_basis(gen)
    d = p.shape[1]
    # fiber: for each basis column solve [S* U*; T* W*](g; l) = p_col, read g
    sol, *_ = np.linalg.lstsq(gen, p, rcond=None)
    gammas = sol[:nc, :]
    # uniqueness of the gamma-part (axiom i for the complement)
    ghost = _null_basis(gen.T @ gen)
    if ghost.shape[1] and np.linalg.norm(ghost[:nc, :], 2) > tol:
        raise InvalidConfluenceError("degenerate representation: gamma fiber not unique")
    phi_psi = gammas @ p.T  # minimum-norm extension, nc x (na+nb)
    perp = _null_basis(p.T).T  # (na+nb-d) x (na+nb), orthonormal rows
    xi_omega = perp
    d_rep = DualRep(phi_psi[:, :na], phi_psi[:, na:],
                    xi_omega[:, :na], xi_omega[:, na:])
    # duality certificate
    prod_top = rep.top() @ np.vstack([d_rep.phi.T, d_rep.psi.T])
    prod_mixed = rep.top() @ np.vstack([d_rep.xi.T, d_rep.omega.T])
    prod_bot = rep.bottom() @ np.vstack([d_rep.phi.T, d_rep.psi.T])
    prod_bot2 = rep.bottom() @ np.vstack([d_rep.xi.T, d_rep.omega.T])
    scale = max(1.0, float(np.linalg.norm(rep.top(), 2)))
    err = max(
        float(np.linalg.norm(prod_top - np.eye(nc), 2)),
        float(np.linalg.norm(prod_mixed, 2)) if prod_mixed.size else 0.0,
        float(np.linalg.norm(prod_bot, 2)) if prod_bot.size else 0.0,
        float(np.linalg.norm(prod_bot2, 2)) if prod_bot2.size else 0.0,
    )
    if err > 1e-8 * scale * max(1, na + nb):
        raise InvalidConfluenceError(f"duality normalization failed, residual {err:.2e}")
    return d_rep


def parametrize(rep: ConfluenceRep, p, q) -> ConfluenceRep:
    """Equivalent representation [S+PU, T+PW; QU, QW]; Q must be nonsingular."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    q = np.atleast_2d(np.asarray(q, dtype=float))
    k = rep.u.shape[0]
    if q.shape != (k, k) or (k and np.linalg.matrix_rank(q) < k):
        raise RankDeficientParameterError("Q must be square nonsingular on the constraint rows")
    if p.shape != (rep.nc, k):
        raise DimensionMismatchError(f"P must be {rep.nc}x{k}")
    return ConfluenceRep(rep.s + p @ rep.u, rep.t + p @ rep.w,
                         q @ rep.u, q @ rep.w)


def parametrize_dual(d: DualRep, gamma, lam) -> DualRep:
    """Equivalent dual representation [Phi+G Xi, Psi+G Omega; L Xi, L Omega]."""
    rep = parametrize(d, gamma, lam)
    return DualRep(rep.s, rep.t, rep.u, rep.w)


def same_subspace(a: ConfluenceRep, b: ConfluenceRep, tol: float = 1e-8) -> bool:
    """Whether two representations describe the same current subspace."""
    if (a.na, a.nb, a.nc) != (b.na, b.nb, b.nc):
        return False
    ba = a.subspace_basis()
    bb = b.subspace_basis()
    if ba.shape[1] != bb.shape[1]:
        return False
    resid = ba - bb @ (bb.T @ ba)
    return float(np.linalg.norm(resid, 2)) <= tol


def assemble_m(d: DualRep, za, zb) -> np.ndarray:
    """M = [Phi Psi; Xi Omega] diag(Za, Zb) [Phi Psi; Xi Omega]*."""
    a = _as_square(za)
    b = _as_square(zb)
    if a.shape[0] != d.na or b.shape[0] != d.nb:
        raise DimensionMismatchError(
            f"dual expects Za {d.na}x{d.na} and Zb {d.nb}x{d.nb}"
        )
    x = np.block([[d.phi, d.psi], [d.xi, d.omega]])
    zz = np.zeros((d.na + d.nb, d.na + d.nb), dtype=complex)
    zz[: d.na, : d.na] = a
    zz[d.na:, d.na:] = b
    return x @ zz @ x.conj().T


def exists(d: DualRep, za, zb, tol: float = DEFAULT_TOL) -> bool:
    """Existence of the connected impedance matrix.

    Equivalent to well-definedness of the trailing-block Schur complement
    of M: R(Xi Za Phi* + Omega Zb Psi*) within R(Xi Za Xi* + Omega Zb Omega*)
    plus the transposed kernel inclusion.
    """
    m = assemble_m(d, za, zb)
    return well_defined_schur(m, d.nc, tol)


def general_connect(d: DualRep, za, zb, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Connected impedance matrix M/22 for an arbitrary connection."""
    m = assemble_m(d, za, zb)
    if not well_defined_schur(m, d.nc, tol):
        raise NotExistsError("connection result does not exist for these operands")
    return schur_complement(m, d.nc, tol)


# -- built-in representations -------------------------------------------------

def series_rep(n: int) -> ConfluenceRep:
    """All three currents equal: c = a, a - b = 0."""
    i = np.eye(n)
    return ConfluenceRep(i, 0 * i, i, -i)


def parallel_rep(n: int) -> ConfluenceRep:
    """Currents add: c = a + b, no constraint."""
    i = np.eye(n)
    z = np.zeros((n, n))
    return ConfluenceRep(i, i, z, z)


def new_connection_rep() -> ConfluenceRep:
    """The worked 2-port example: a1 = a2 = b1 = c1 and b2 = c2."""
    s = np.array([[1.0, 0.0], [0.0, 0.0]])
    t = np.array([[0.0, 0.0], [0.0, 1.0]])
    u = np.array([[1.0, -1.0], [1.0, 0.0]])
    w = np.array([[0.0, 0.0], [-1.0, 0.0]])
    return ConfluenceRep(s, t, u, w)


def hybrid_rep(n: int, r: int) -> ConfluenceRep:
    """Series on the first r ports, parallel on the remaining n-r."""
    if not 0 <= r <= n:
        raise DimensionMismatchError(f"hybrid split {r} invalid for n={n}")
    p = n - r
    s = np.eye(n)
    t = np.zeros((n, n))
    t[r:, r:] = np.eye(p)
    u = np.zeros((r, n))
    u[:, :r] = np.eye(r)
    w = np.zeros((r, n))
    w[:, :r] = -np.eye(r)
    return ConfluenceRep(s, t, u, w)


def cascade_rep(r: int, s: int, t: int) -> ConfluenceRep:
    """(r+s)-port chained into an (s+t)-port: c = (a_L, b_R), a_S + b_S = 0."""
    na, nb, nc = r + s, s + t, r + t
    sm = np.zeros((nc, na))
    sm[:r, :r] = np.eye(r)
    tm = np.zeros((nc, nb))
    tm[r:, s:] = np.eye(t)
    um = np.zeros((s, na))
    um[:, r:] = np.eye(s)
    wm = np.zeros((s, nb))
    wm[:, :s] = np.eye(s)
    return ConfluenceRep(sm, tm, um, wm)


def hybrid_cascade_rep(r: int, s: int) -> ConfluenceRep:
    """(r+s)-port against an (s+r)-port: c = (a_1, b_2 - a_1), a_2 + b_1 = 0."""
    na, nb, nc = r + s, s + r, 2 * r
    sm = np.zeros((nc, na))
    sm[:r, :r] = np.eye(r)
    sm[r:, :r] = -np.eye(r)
    tm = np.zeros((nc, nb))
    tm[r:, s:] = np.eye(r)
    um = np.zeros((s, na))
    um[:, r:] = np.eye(s)
    wm = np.zeros((s, nb))
    wm[:, :s] = np.eye(s)
    return ConfluenceRep(sm, tm, um, wm)


BUILTIN_REPS = {
    "series": series_rep,
    "parallel": parallel_rep,
    "new-connection": new_connection_rep,
    "hybrid": hybrid_rep,
    "cascade": cascade_rep,
    "hybrid-cascade": hybrid_cascade_rep,
}


def random_confluence(n: int, rng: np.random.Generator,
                      dim: int | None = None) -> ConfluenceRep:
    """Random confluence on R^n x R^n x R^n for property fuzzing.

    Samples a subspace K of (a, b)-space with dim in [n, 2n] and a random
    surjective map K -> R^n for the c-component; (S, T) is the minimum-norm
    extension and (U, W) an orthonormal basis of the complement of K.
    """
    if dim is None:
        dim = int(rng.integers(n, 2 * n + 1))
    if not n <= dim <= 2 * n:
        raise DimensionMismatchError(f"dim must lie in [{n}, {2 * n}]")
    kb = np.linalg.qr(rng.normal(size=(2 * n, dim)))[0]
    while True:
        lmap = rng.normal(size=(n, dim))
        if np.linalg.matrix_rank(lmap) == n:
            break
    st = lmap @ kb.T
    uw = _null_basis(kb.T).T
    if uw.shape[0] < n:
        uw = np.vstack([uw, np.zeros((n - uw.shape[0], 2 * n))])
    return ConfluenceRep(st[:, :n], st[:, n:], uw[:, :n], uw[:, n:])
