"""Discrete-orthonormal approximation on lifted meshes.

The pipeline, applied to a mesh X on the set E:

  1. bounding box of X, then the shifted tensorial Chebyshev basis of total
     degree n evaluated on X (Chebyshev-Vandermonde matrix U_X);
  2. column-pivoted QR keeps the eta numerically independent columns and a
     second QR pass polishes them into a discrete-orthonormal basis
     (Q_X columns = basis values on X);
  3. node extraction: Approximate Fekete Points by pivoted QR on the
     transpose, Discrete Leja Points by row-pivoted LU;
  4. interpolation at the extracted nodes or least squares on all of X,
     errors and Lebesgue constants measured on a finer control mesh.

Real meshes run in real arithmetic; complex ones use the same code paths
with conjugate transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (
    DegenerateMesh,
    InterpSingular,
    NoPoints,
    RankDeficient,
    ZeroFunction,
)

_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class Box:
    """Per-coordinate real intervals [lo_i, hi_i]."""

    lo: np.ndarray
    hi: np.ndarray

    @property
    def dim(self):
        return len(self.lo)

    def widths(self):
        return self.hi - self.lo


def _as_real_or_complex(points):
    pts = np.asarray(points)
    if np.iscomplexobj(pts):
        scale = 1.0 + np.abs(pts).max(initial=0.0)
        if pts.size and np.abs(pts.imag).max() <= _IMAG_TOL * scale:
            return pts.real.astype(float), False
        return pts.astype(complex), True
    return pts.astype(float), False


def bounding_box(points, pad=0.0) -> Box:
    """Coordinatewise bounding box of a point set.

    Real sets use the real parts; sets with genuinely complex coordinates
    take each interval over real and imaginary parts jointly (the affine
    Chebyshev shift stays real).  Each axis is widened by pad*(width+1);
    an axis of zero width gets half-width 2*pad, or 1 when pad is zero, so
    the affine map is always invertible.
    """
    pts = np.asarray(points)
    if pts.size == 0:
        raise NoPoints("cannot bound an empty point set")
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    vals, is_complex = _as_real_or_complex(pts)
    if is_complex:
        stacked = np.concatenate([vals.real, vals.imag], axis=0)
        lo, hi = stacked.min(axis=0), stacked.max(axis=0)
    else:
        lo, hi = vals.min(axis=0), vals.max(axis=0)
    w = hi - lo
    margin = np.where(w > 0, pad * (w + 1.0), 2.0 * pad if pad > 0 else 1.0)
    return Box(lo - margin, hi + margin)


def total_degree_indices(dim, n):
    """Multi-indices with |alpha| <= n in graded-lexicographic order."""
    out = []

    def rec(prefix, budget, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], budget - e, slots - 1)

    rec([], n, dim)
    out.sort(key=lambda t: (sum(t), t))
    return out


def chebyshev_vandermonde(box: Box, n, Y, indices=None) -> np.ndarray:
    """Shifted tensorial Chebyshev basis of total degree n evaluated on Y.

    Columns follow graded-lexicographic multi-index order (or the explicit
    ``indices``, used to evaluate only the pivot columns of a factorized
    basis).  The three-term recurrence is valid for arguments outside
    [-1, 1] too, so points slightly off the box are fine.
    """
    pts = np.asarray(Y)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    vals, is_complex = _as_real_or_complex(pts)
    dim = box.dim
    if vals.shape[1] != dim:
        raise ValueError(f"points have {vals.shape[1]} coordinates, box has {dim}")
    if indices is None:
        indices = total_degree_indices(dim, n)
    maxdeg = max((max(ix) for ix in indices), default=0)
    m = vals.shape[0]
    dtype = complex if is_complex else float
    T = np.empty((dim, maxdeg + 1, m), dtype=dtype)
    for d in range(dim):
        t = (2.0 * vals[:, d] - box.lo[d] - box.hi[d]) / (box.hi[d] - box.lo[d])
        T[d, 0] = 1.0
        if maxdeg >= 1:
            T[d, 1] = t
        for j in range(2, maxdeg + 1):
            T[d, j] = 2.0 * t * T[d, j - 1] - T[d, j - 2]
    U = np.empty((m, len(indices)), dtype=dtype)
    for c, ix in enumerate(indices):
        col = T[0, ix[0]].copy()
        for d in range(1, dim):
            if ix[d]:
                col *= T[d, ix[d]]
        U[:, c] = col
    return U


@dataclass(frozen=True)
class OrthoBasisHandle:
    """Factorized discrete-orthonormal basis attached to a sample set X.

    ``Q_X`` holds the basis values on X (Q_X^H diag(w) Q_X = I) and ``R`` the
    upper-triangular factor with ``U_X[:, pivot[:eta]] = Q_X @ R``.  The two
    internal triangular factors realize evaluation at new points as two
    back-substitutions, which keeps the basis values accurate even when the
    raw Chebyshev columns are nearly dependent.
    """

    box: Box
    n: int
    ambient_dim: int
    eta: int
    pivot: np.ndarray
    R: np.ndarray
    Q_X: np.ndarray
    X: np.ndarray
    weights: np.ndarray
    indices: tuple
    t1: np.ndarray = field(repr=False, default=None)
    r2: np.ndarray = field(repr=False, default=None)
    rank_diag: np.ndarray = field(repr=False, default=None)
    numeric_rank: int = 0

    @property
    def card(self):
        return self.X.shape[0]

    @property
    def is_complex(self):
        return np.iscomplexobj(self.Q_X)

    def pivot_indices(self):
        return tuple(self.indices[p] for p in self.pivot[: self.eta])


def orthonormalize(
    U_X,
    eta_hint=None,
    rank_tol=1e-10,
    *,
    box=None,
    n=0,
    X=None,
    indices=None,
    weights=None,
) -> OrthoBasisHandle:
    """Column-pivoted QR of the Chebyshev-Vandermonde matrix, twice.

    eta is ``eta_hint`` when supplied (from the dimension formulas), else the
    count of pivoted-R diagonal entries above rank_tol relative to the first.
    A second, pivot-free QR pass on the selected columns restores
    orthonormality lost to the conditioning of the raw basis.
    """
    U = np.asarray(U_X)
    m, ncols = U.shape
    w = np.ones(m) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (m,) or (w <= 0).any():
        raise ValueError("weights must be positive, one per sample row")
    sw = np.sqrt(w)
    Uw = U * sw[:, None]
    Q1, R1, piv = sla.qr(Uw, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R1))
    scale = diag[0] if diag.size else 0.0
    numeric_rank = int((diag > rank_tol * scale).sum()) if scale > 0 else 0
    eta = int(eta_hint) if eta_hint is not None else numeric_rank
    if eta < 1:
        raise RankDeficient("no numerically independent columns", diag=diag)
    if eta > numeric_rank:
        raise RankDeficient(
            f"requested eta={eta} exceeds numerical rank {numeric_rank} "
            f"(|R_ii|/|R_11| floor {diag[min(eta, len(diag)) - 1] / scale:.3e})",
            diag=diag,
        )
    T1 = R1[:eta, :eta]
    A = U[:, piv[:eta]]
    B = _right_tri_solve(A, T1)
    Q2, R2 = sla.qr(B * sw[:, None], mode="economic")
    Q = Q2 / sw[:, None]
    R = R2 @ T1
    if X is None:
        X = np.empty((m, 0))
    if indices is None:
        indices = tuple(total_degree_indices(box.dim if box else 1, n))[:ncols]
    return OrthoBasisHandle(
        box=box,
        n=n,
        ambient_dim=(box.dim if box is not None else np.asarray(X).shape[1]),
        eta=eta,
        pivot=piv,
        R=R,
        Q_X=Q,
        X=np.asarray(X),
        weights=w,
        indices=tuple(indices),
        t1=T1,
        r2=R2,
        rank_diag=diag,
        numeric_rank=numeric_rank,
    )


def _right_tri_solve(A, T):
    # solve B @ T = A for B with T upper triangular (transpose, not conjugate)
    return sla.solve_triangular(T, A.T, trans="T", lower=False).T


def basis_for_mesh(points, n, eta_hint=None, rank_tol=1e-10, pad=0.0, weights=None) -> OrthoBasisHandle:
    """Convenience wrapper: box, Chebyshev-Vandermonde and orthonormalize."""
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    box = bounding_box(pts, pad=pad)
    indices = total_degree_indices(box.dim, n)
    U = chebyshev_vandermonde(box, n, pts, indices)
    vals, _ = _as_real_or_complex(pts)
    return orthonormalize(
        U, eta_hint, rank_tol, box=box, n=n, X=vals, indices=indices, weights=weights
    )


def ortho_eval(handle: OrthoBasisHandle, Y) -> np.ndarray:
    """Basis values on a new point set: permuted Chebyshev columns divided by R."""
    piv_idx = handle.pivot_indices()
    U = chebyshev_vandermonde(handle.box, handle.n, Y, piv_idx)
    if handle.is_complex and not np.iscomplexobj(U):
        U = U.astype(complex)
    B = _right_tri_solve(U, handle.t1)
    return _right_tri_solve(B, handle.r2)


def afp_select(handle: OrthoBasisHandle) -> np.ndarray:
    """Approximate Fekete rows: pivoted QR on the transposed basis matrix.

    Returns eta distinct row indices (ascending; the greedy order is a QR
    implementation detail, the selection is a set).
    """
    Qw = handle.Q_X * np.sqrt(handle.weights)[:, None]
    _, R, piv = sla.qr(Qw.conj().T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size < handle.eta or diag[handle.eta - 1] <= 1e-12 * diag[0]:
        raise DegenerateMesh("fewer independent sample rows than basis functions")
    return np.sort(piv[: handle.eta])


def dlp_select(handle: OrthoBasisHandle) -> np.ndarray:
    """Discrete Leja rows: partial-pivoting LU row order on the basis matrix."""
    Qw = handle.Q_X * np.sqrt(handle.weights)[:, None]
    lu, ipiv = sla.lu_factor(Qw)
    d = np.abs(np.diag(lu))[: handle.eta]
    if d.size < handle.eta or d.min() <= 1e-14 * max(d.max(), 1.0):
        raise DegenerateMesh("fewer independent sample rows than basis functions")
    order = np.arange(handle.card)
    for k, p in enumerate(ipiv):
        order[[k, p]] = order[[p, k]]
    return order[: handle.eta]


INTERP_AFP = "interp_afp"
INTERP_DLP = "interp_dlp"
LEAST_SQUARES = "least_squares"

OPERATOR_KINDS = (INTERP_AFP, INTERP_DLP, LEAST_SQUARES)


@dataclass(frozen=True)
class Operator:
    """A fitted projection: interpolation at extracted nodes or least squares."""

    kind: str
    handle: OrthoBasisHandle
    coeffs: np.ndarray
    node_indices: np.ndarray | None = None

    @property
    def card_nodes(self):
        return self.handle.card if self.node_indices is None else len(self.node_indices)


def select_nodes(kind, handle: OrthoBasisHandle):
    if kind == INTERP_AFP:
        return afp_select(handle)
    if kind == INTERP_DLP:
        return dlp_select(handle)
    if kind == LEAST_SQUARES:
        return None
    raise ValueError(f"unknown operator kind {kind!r}")


def fit(kind, handle: OrthoBasisHandle, samples, node_indices=None) -> Operator:
    """Fit an operator to function samples taken on the handle's point set X."""
    f = np.asarray(samples)
    if f.shape != (handle.card,):
        raise ValueError(f"expected {handle.card} samples, got {f.shape}")
    if kind == LEAST_SQUARES:
        c = handle.Q_X.conj().T @ (handle.weights * f)
        return Operator(LEAST_SQUARES, handle, c)
    if node_indices is None:
        node_indices = select_nodes(kind, handle)
    V = handle.Q_X[node_indices]
    try:
        c = np.linalg.solve(V, f[node_indices])
    except np.linalg.LinAlgError as exc:
        raise InterpSingular(f"node system is singular: {exc}") from exc
    return Operator(kind, handle, c, np.asarray(node_indices))


def evaluate(op: Operator, Y=None, V_Y=None) -> np.ndarray:
    """Apply the fitted operator on points Y (or a precomputed basis matrix)."""
    if V_Y is None:
        if Y is None:
            raise ValueError("need evaluation points Y or a precomputed basis matrix")
        V_Y = ortho_eval(op.handle, Y)
    return V_Y @ op.coeffs


def rel_error(op: Operator, f, control, V_control=None) -> float:
    """Euclidean relative error of the operator against f on a control set.

    ``f`` may be a callable on point rows or an array of control values.
    """
    control = np.asarray(control)
    fvals = np.asarray(f(control) if callable(f) else f)
    denom = np.linalg.norm(fvals)
    if denom == 0:
        raise ZeroFunction("control samples are identically zero")
    approx = evaluate(op, control, V_Y=V_control)
    return float(np.linalg.norm(fvals - approx) / denom)


_LEB_BLOCK = 4_000_000  # ~entries per kernel block


def lebesgue_constant(op: Operator, handle: OrthoBasisHandle = None, control=None,
                      V_control=None) -> float:
    """Uniform operator norm estimated as a max of absolute sums on control points.

    Interpolation: max over control points of the cardinal-function l1 norm.
    Least squares: max row sum of the absolute reproducing kernel against the
    weighted sample set.
    """
    handle = handle or op.handle
    if V_control is None:
        V_control = ortho_eval(handle, control)
    if op.kind == LEAST_SQUARES:
        QwH = (handle.Q_X * handle.weights[:, None]).conj().T
        best = 0.0
        step = max(1, _LEB_BLOCK // max(1, handle.card))
        for i in range(0, V_control.shape[0], step):
            G = V_control[i : i + step] @ QwH
            best = max(best, float(np.abs(G).sum(axis=1).max()))
        return best
    V_nodes = handle.Q_X[op.node_indices]
    try:
        L = np.linalg.solve(V_nodes.T, V_control.T).T
    except np.linalg.LinAlgError as exc:
        raise InterpSingular(f"node system is singular: {exc}") from exc
    return float(np.abs(L).sum(axis=1).max())


# ---------------------------------------------------------------------------
# Test functions
# ---------------------------------------------------------------------------


def _xyz(points):
    pts = np.asarray(points)
    if np.iscomplexobj(pts):
        pts = pts.real
    pts = np.atleast_2d(pts)
    if pts.shape[1] != 3:
        raise ValueError("test functions expect real 3-d points")
    return pts[:, 0], pts[:, 1], pts[:, 2]


def _f1(points):
    x, y, z = _xyz(points)
    return (x + 0.5 * y + 2.0 * z + 1.0) ** 14


def _f2(points):
    x, y, z = _xyz(points)
    return np.exp(-(x**2 + 0.5 * y**2 + 2.0 * z**2))


def _f3(points):
    x, y, z = _xyz(points)
    return np.sin(4.0 * x + 5.0 * y + 3.0 * z)


def _f4(points):
    x, y, z = _xyz(points)
    return np.sqrt((x - 1.0) ** 2 + y**2 + (z - 1.0) ** 2) + np.sqrt(
        (x - 1.0) ** 2 + y**2 + (z + 1.0) ** 2
    )


def _f4_viviani(points):
    x, y, z = _xyz(points)
    return np.sqrt(x**2 + y**2 + (z - 2.0) ** 2) + np.sqrt(x**2 + y**2 + (z + 2.0) ** 2)


TEST_FUNCTIONS = {
    "f1": _f1,
    "f2": _f2,
    "f3": _f3,
    "f4": _f4,
    "f4_viviani": _f4_viviani,
}


def test_functions(tag, points):
    """Evaluate one of the benchmark functions f1..f4 (plus the window's f4)."""
    try:
        fn = TEST_FUNCTIONS[tag]
    except KeyError:
        raise KeyError(f"unknown test function {tag!r}; choose from {sorted(TEST_FUNCTIONS)}") from None
    vals = fn(points)
    if np.asarray(points).ndim == 1:
        return float(vals[0])
    return vals
