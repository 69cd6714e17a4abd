"""Lifting base meshes onto algebraic sets: index maps, constants, dimensions.

A mesh that norms degree-ell polynomials on the projection K becomes, after
taking all fiber roots over every mesh point, a norming mesh for degree-n
polynomials on the compact piece E of the variety.  The whole game is the
index map n -> ell(n) and the certified constant, which depend on the shape
of the equations:

  hyper_specific   one equation y^k + c0(z), constant k*C^(1/k)
  hyper_general    one general monic equation, constant not computable
  codim2_specific  two pure-power equations, constant k2*k1^(1/k2)*C^(1/(k1*k2))
  codim2_general   two general equations, constant not computable

The general constructions additionally require a point outside the
discriminant set (two points, one per equation, in codimension 2); their
norming constants exist but involve division-inequality constants with no
computable recipe, so the mesh is emitted with ``constant=None`` and callers
may attach an empirical ratio instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .basemesh import BaseMesh
from .errors import (
    BaseTooCoarse,
    DiscriminantEverywhere,
    NoPoints,
    NotMonicNormalized,
    NotOptimal,
)
from .polycore import (
    MonicInY,
    SurfaceSpec,
    discriminant_tol,
    fiber_roots,
    sylvester_resultant_at,
)

HYPER_SPECIFIC = "hyper_specific"
HYPER_GENERAL = "hyper_general"
CODIM2_SPECIFIC = "codim2_specific"
CODIM2_GENERAL = "codim2_general"

CONSTRUCTIONS = (HYPER_SPECIFIC, HYPER_GENERAL, CODIM2_SPECIFIC, CODIM2_GENERAL)


# ---------------------------------------------------------------------------
# Index maps n -> ell(n)
# ---------------------------------------------------------------------------


def _check_dk(d, k):
    if k < 1:
        raise NotMonicNormalized(f"k must be >= 1, got {k}")
    if d < k:
        raise NotMonicNormalized(f"total degree d={d} below distinguished degree k={k}")


def ell_hyper_specific(d, k, n):
    """Base index for one pure-power equation: min(ceil(d^2 n/k), dn+(k-1)(d-k))."""
    _check_dk(d, k)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return min(-(-d * d * n // k), d * n + (k - 1) * (d - k))


def ell_hyper_general(d, k, n):
    """Base index for one general equation: 2(n+k^2-k) when d=k, else 2dn."""
    _check_dk(d, k)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if d == k:
        return 2 * (n + k * k - k)
    return 2 * d * n


def _nested_step(d, k, n):
    # one pure-power lift step: d*n + min(ceil(d(d-k)n/k), (k-1)(d-k))
    return d * n + min(-(-d * (d - k) * n // k), (k - 1) * (d - k))


def ell_codim2_specific(d1, k1, d2, k2, n):
    """Exact nested base index j(t(n)) for two pure-power equations.

    The inner map t uses (d2, k2), the outer j uses (d1, k1); for
    d1=k1, d2=k2 this collapses to k1*k2*n.  The coarser closed bound is
    available as :func:`ell_codim2_headline`.
    """
    _check_dk(d1, k1)
    _check_dk(d2, k2)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _nested_step(d1, k1, _nested_step(d2, k2, n))


def ell_codim2_headline(d1, k1, d2, k2, n):
    """Closed upper bound d1*d2*n + d1*d2*k2 + d1*k1 for the nested index."""
    _check_dk(d1, k1)
    _check_dk(d2, k2)
    return d1 * d2 * n + d1 * d2 * k2 + d1 * k1


def ell_codim2_general(d1, k1, d2, k2, n):
    """Base index for two general equations (four-case table)."""
    _check_dk(d1, k1)
    _check_dk(d2, k2)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if d1 == k1 and d2 == k2:
        return 4 * n + 4 * (k2 * k2 - k2) + 2 * (k1 * k1 - k1)
    if d1 > k1 and d2 == k2:
        return 4 * d1 * n + 4 * d1 * (k2 * k2 - k2)
    if d1 == k1 and d2 > k2:
        return 4 * d2 * n + 2 * (k1 * k1 - k1)
    return 4 * d1 * d2 * n


def ell_index(surface: SurfaceSpec, n, construction):
    """Dispatch the index map for a surface and construction kind."""
    (d1, k1) = surface.degrees[0]
    if construction == HYPER_SPECIFIC:
        return ell_hyper_specific(d1, k1, n)
    if construction == HYPER_GENERAL:
        return ell_hyper_general(d1, k1, n)
    d2, k2 = surface.degrees[1]
    if construction == CODIM2_SPECIFIC:
        return ell_codim2_specific(d1, k1, d2, k2, n)
    if construction == CODIM2_GENERAL:
        return ell_codim2_general(d1, k1, d2, k2, n)
    raise ValueError(f"unknown construction {construction!r}")


def default_construction(surface: SurfaceSpec):
    """Specific (certified) construction when every equation is a pure power."""
    pure = all(eq.pure_power_flag for eq in surface.equations)
    if surface.codim == 1:
        return HYPER_SPECIFIC if pure else HYPER_GENERAL
    return CODIM2_SPECIFIC if pure else CODIM2_GENERAL


# ---------------------------------------------------------------------------
# Dimension of the restricted polynomial space
# ---------------------------------------------------------------------------


def dim_Pn_hypersurface(N, k, n):
    """dim of degree-<=n restrictions for one k-monic equation over C^N.

    Binomial difference C(N+1+n, N+1) - C(N+1+n-k, N+1); the subtracted term
    vanishes for n < k.  Exact as the dimension of the restricted space when
    the equation's total degree equals k.
    """
    if N < 1 or k < 1 or n < 0:
        raise ValueError("require N >= 1, k >= 1, n >= 0")
    first = comb(N + 1 + n, N + 1)
    second = comb(N + 1 + n - k, N + 1) if n - k >= 0 else 0
    return first - second


def dim_Pn_codim2(N, k, kbar, n):
    """dim for two monic equations over C^N: sliding sum of hypersurface dims."""
    if N < 1 or k < 1 or kbar < 1 or n < 0:
        raise ValueError("require N >= 1, k >= 1, kbar >= 1, n >= 0")
    lo = max(0, n - kbar + 1)
    return sum(dim_Pn_hypersurface(N, k, m) for m in range(lo, n + 1))


def dim_Pn(surface: SurfaceSpec, n):
    """Restricted-space dimension from the closed formulas for this surface."""
    N = surface.n_base
    if surface.codim == 1:
        return dim_Pn_hypersurface(N, surface.equations[0].k, n)
    return dim_Pn_codim2(N, surface.equations[0].k, surface.equations[1].k, n)


# ---------------------------------------------------------------------------
# Discriminant avoidance and the lift itself
# ---------------------------------------------------------------------------


def find_point_outside_discriminant(eq: MonicInY, candidates, tol=None):
    """First candidate whose fiber has k distinct roots (nonzero resultant)."""
    candidates = list(candidates)
    if not candidates:
        raise NoPoints("no candidate points supplied")
    for z in candidates:
        z = tuple(np.atleast_1d(np.asarray(z, dtype=complex)))
        t = discriminant_tol(eq, z) if tol is None else tol
        if abs(sylvester_resultant_at(eq, z)) > t:
            return z
    raise DiscriminantEverywhere(
        f"all {len(candidates)} candidates lie in the discriminant set"
    )


_REAL_SNAP = 1e-9


@dataclass(frozen=True)
class NormedMesh:
    """A lifted mesh on E with its certificate and bookkeeping.

    ``constant`` is None for the general constructions (no computable value);
    ``ell`` is the base index actually used, ``extra_points`` the
    discriminant-avoiding additions that were not already base points.
    """

    surface: SurfaceSpec
    n: int
    ell: int
    base: BaseMesh
    points: np.ndarray
    constant: float | None
    construction: str
    surface_id: str = "custom"
    extra_points: tuple = ()
    degenerate_fibers: int = 0
    complex_fibers: int = 0
    max_residual: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def card(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def lift_constant(surface: SurfaceSpec, base_constant, construction):
    """Certified norming constant, or None for the general constructions."""
    if construction == HYPER_SPECIFIC:
        k = surface.equations[0].k
        return k * base_constant ** (1.0 / k)
    if construction == CODIM2_SPECIFIC:
        k1 = surface.equations[0].k
        k2 = surface.equations[1].k
        return k2 * k1 ** (1.0 / k2) * base_constant ** (1.0 / (k1 * k2))
    return None


def _fiber_stack(surface: SurfaceSpec, zs):
    """All fiber points over base rows ``zs``, plus the count of all-zero fibers."""
    pts = []
    degenerate = 0
    for z in zs:
        z = tuple(z)
        roots1 = fiber_roots(surface.equations[0], z)
        if all(r == 0 for r in roots1):
            degenerate += 1
        if surface.codim == 1:
            pts.extend(z + (r,) for r in roots1)
        else:
            for y1 in roots1:
                roots2 = fiber_roots(surface.equations[1], z + (y1,))
                if all(r == 0 for r in roots2):
                    degenerate += 1
                pts.extend(z + (y1, r) for r in roots2)
    return pts, degenerate


def lift_mesh(
    surface: SurfaceSpec,
    base: BaseMesh,
    n,
    construction=None,
    extra_points=None,
    surface_id="custom",
    tol=None,
) -> NormedMesh:
    """Lift a base mesh through all fibers into a norming mesh for degree n.

    The base must certify a degree >= ell(n) for the chosen construction.
    For the general constructions the required discriminant-avoiding points
    are scanned from the base mesh itself unless ``extra_points`` is given;
    points already in the base contribute no extra fibers.  The general
    routes also assume the first equation is irreducible and the projection
    of E is determining for base-variable polynomials; neither is checkable
    numerically, so they are trusted and the mesh carries the uncertified
    marker regardless.
    """
    if construction is None:
        construction = default_construction(surface)
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {construction!r}")
    if construction.startswith("codim2") != (surface.codim == 2):
        raise ValueError(f"construction {construction} does not match codimension {surface.codim}")
    ell = ell_index(surface, n, construction)
    if base.n < ell:
        raise BaseTooCoarse(f"base certifies degree {base.n}, lift needs ell(n)={ell}")

    zs = [tuple(row) for row in np.asarray(base.points, dtype=complex)]
    extras = []
    if construction == HYPER_GENERAL:
        z0 = _resolve_extra(surface.equations[0], extra_points, zs, 1, tol)
        extras = [z for z in z0 if z not in zs]
    elif construction == CODIM2_GENERAL:
        if extra_points is not None:
            chosen = [tuple(np.atleast_1d(np.asarray(p, dtype=complex))) for p in extra_points]
        else:
            a = find_point_outside_discriminant(surface.equations[0], zs, tol)
            b = _point_under_nondiscriminant_fiber(surface, zs, tol)
            chosen = [a, b]
        extras = []
        for z in chosen:
            if z not in zs and z not in extras:
                extras.append(z)

    pts, degenerate = _fiber_stack(surface, zs + extras)
    arr = np.array(pts, dtype=complex)

    complex_fibers = 0
    if surface.real_flag:
        im = np.abs(arr.imag)
        snap = im <= _REAL_SNAP * (1.0 + np.abs(arr))
        complex_fibers = int((~snap.all(axis=1)).sum())
        arr.imag[snap] = 0.0

    resid = surface.residuals(arr)
    max_residual = float(resid.max()) if resid.size else 0.0

    constant = lift_constant(surface, base.constant, construction)
    meta = {}
    if construction == CODIM2_SPECIFIC:
        d1, k1 = surface.degrees[0]
        d2, k2 = surface.degrees[1]
        meta["ell_headline"] = ell_codim2_headline(d1, k1, d2, k2, n)
    return NormedMesh(
        surface=surface,
        n=n,
        ell=ell,
        base=base,
        points=arr,
        constant=constant,
        construction=construction,
        surface_id=surface_id,
        extra_points=tuple(extras),
        degenerate_fibers=degenerate,
        complex_fibers=complex_fibers,
        max_residual=max_residual,
        meta=meta,
    )


def _resolve_extra(eq, extra_points, zs, count, tol):
    if extra_points is not None:
        pts = [tuple(np.atleast_1d(np.asarray(p, dtype=complex))) for p in extra_points]
        if len(pts) < count:
            raise NoPoints(f"need {count} extra point(s), got {len(pts)}")
        return pts[:count]
    return [find_point_outside_discriminant(eq, zs, tol)]


def _point_under_nondiscriminant_fiber(surface, zs, tol):
    """Base point z such that some (z, y1) avoids the second discriminant set."""
    eq1, eq2 = surface.equations
    for z in zs:
        for y1 in fiber_roots(eq1, z):
            p = z + (y1,)
            t = discriminant_tol(eq2, p) if tol is None else tol
            if abs(sylvester_resultant_at(eq2, p)) > t:
                return z
    raise DiscriminantEverywhere(
        "no base point has a fiber avoiding the second discriminant set"
    )


# ---------------------------------------------------------------------------
# n-independent constant bound for a lambda rule
# ---------------------------------------------------------------------------


def mesh_constant_bound(
    construction,
    degrees,
    lambda_rule,
    base_kind,
    n_range=2000,
):
    """Supremum over n of the certified constant under a lambda selection rule.

    ``degrees`` is (d, k) or (d1, k1, d2, k2); ``lambda_rule`` maps the base
    index ell to lambda; ``base_kind`` decides the cosine power (2 for the
    real disk).  Raises ``NotOptimal`` if ell(n)/lambda(ell(n)) is not
    bounded away from 1.
    """
    if construction == HYPER_SPECIFIC:
        d, k = degrees
        ell_fun = lambda n: ell_hyper_specific(d, k, n)
        lift = lambda C: k * C ** (1.0 / k)
    elif construction == CODIM2_SPECIFIC:
        d1, k1, d2, k2 = degrees
        ell_fun = lambda n: ell_codim2_specific(d1, k1, d2, k2, n)
        lift = lambda C: k2 * k1 ** (1.0 / k2) * C ** (1.0 / (k1 * k2))
    else:
        raise ValueError("constant bounds exist only for the specific constructions")

    power = 2 if base_kind == "rdisk" else 1
    best = 0.0
    # probe small n exhaustively plus a geometric tail to catch the limit ratio
    ns = list(range(1, min(n_range, 512) + 1)) + [2**j for j in range(10, 40)]
    for n in ns:
        ell = ell_fun(n)
        lam = lambda_rule(ell)
        if lam <= ell:
            raise NotOptimal(
                f"lambda rule gives lambda={lam} <= ell={ell} at n={n}; mesh constant unbounded"
            )
        ratio = ell / lam
        if ratio >= 1.0 - 1e-6:
            raise NotOptimal(
                f"ratio ell/lambda approaches 1 (={ratio:.9f} at n={n}); constant unbounded in n"
            )
        best = max(best, lift(1.0 / math.cos(ratio * math.pi / 2) ** power))
    return best


# ---------------------------------------------------------------------------
# Restricted polynomial space sampling and the empirical norming check
# ---------------------------------------------------------------------------


def restricted_monomials(surface: SurfaceSpec, n):
    """Exponent tuples of the restricted product basis up to total degree n.

    Base exponents are unrestricted, each lifted variable is capped at
    k_i - 1, and the total is capped at n; this spans the space the norming
    certificates quantify over.
    """
    caps = [eq.k - 1 for eq in surface.equations]
    N = surface.n_base
    out = []

    def rec(prefix, budget, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        cap = budget if len(prefix) < N else min(budget, caps[len(prefix) - N])
        for e in range(cap + 1):
            rec(prefix + [e], budget - e, slots - 1)

    rec([], n, surface.ambient_dim)
    out.sort(key=lambda t: (sum(t), t))
    return out


def monomial_matrix(exponents, pts: np.ndarray) -> np.ndarray:
    """Evaluate monomials columnwise on point rows: (card, len(exponents))."""
    pts = np.asarray(pts, dtype=complex)
    maxe = [max(e[d] for e in exponents) for d in range(pts.shape[1])]
    pows = [
        np.vander(pts[:, d], maxe[d] + 1, increasing=True) if maxe[d] else np.ones((pts.shape[0], 1), complex)
        for d in range(pts.shape[1])
    ]
    cols = [
        np.prod([pows[d][:, e[d]] for d in range(pts.shape[1])], axis=0)
        for e in exponents
    ]
    return np.stack(cols, axis=1)


def empirical_norming_ratio(
    surface: SurfaceSpec, n, mesh_points, control_points, trials=200, rng=None
):
    """Max over random restricted polynomials of sup(control)/sup(mesh).

    Coefficients are uniform complex in the square [-1,1]+[-1,1]i per basis
    monomial.  Whenever the control points lie on the set, the certified
    constant is a hard upper bound for this ratio.
    """
    rng = np.random.default_rng(rng)
    exps = restricted_monomials(surface, n)
    M_mesh = monomial_matrix(exps, mesh_points)
    M_ctrl = monomial_matrix(exps, control_points)
    coeffs = rng.uniform(-1, 1, (len(exps), trials)) + 1j * rng.uniform(-1, 1, (len(exps), trials))
    sup_mesh = np.abs(M_mesh @ coeffs).max(axis=0)
    sup_ctrl = np.abs(M_ctrl @ coeffs).max(axis=0)
    return float((sup_ctrl / sup_mesh).max())


# ---------------------------------------------------------------------------
# Mesh CSV serialization
# ---------------------------------------------------------------------------


def mesh_header(mesh: NormedMesh):
    c = "uncertified" if mesh.constant is None else f"{mesh.constant:.12g}"
    return (
        f"# surface={mesh.surface_id} n={mesh.n} ell={mesh.ell} "
        f"lambda={mesh.base.lam} constant={c} card={mesh.card}"
    )


def write_mesh_csv(mesh: NormedMesh, path):
    write_points_csv(path, mesh.points, mesh_header(mesh))


def write_points_csv(path, points, header_line):
    points = np.asarray(points, dtype=complex)
    dim = points.shape[1]
    cols = ",".join(f"re_{d+1},im_{d+1}" for d in range(dim))
    with open(path, "w") as fh:
        fh.write(header_line + "\n")
        fh.write(cols + "\n")
        for row in points:
            fh.write(",".join(f"{v.real:.17e},{v.imag:.17e}" for v in row) + "\n")


def read_points_csv(path):
    """Parse a mesh CSV back into (metadata dict, complex point array)."""
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for item in line.lstrip("# ").split():
                    if "=" in item:
                        k, v = item.split("=", 1)
                        meta[k] = v
                continue
            if line.startswith("re_"):
                continue
            vals = [float(x) for x in line.split(",")]
            rows.append([complex(vals[2 * i], vals[2 * i + 1]) for i in range(len(vals) // 2)])
    return meta, np.array(rows, dtype=complex)
