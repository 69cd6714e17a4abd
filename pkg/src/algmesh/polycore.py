"""Sparse multivariate polynomials over C, fiber root solving and resultants.

This is the algebraic substrate for everything else: the variety is cut out
by one or two equations that are monic in a distinguished variable, with
coefficient polynomials in the remaining (base) variables.  Lifting a base
point means solving the resulting monic univariate equation, and the
discriminant test is a numeric Sylvester determinant.

All functions here are pure; the value types are frozen dataclasses and can
be shared freely between threads.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArityError, NotMonicNormalized, RootsDiverged, SurfaceFormatError

MINUS_INF = float("-inf")


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial: map from exponent multi-index to complex coefficient.

    Terms with zero coefficient are dropped on construction, so equality of
    the ``terms`` dicts is equality of polynomials.
    """

    nvars: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, c in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ArityError(f"exponent tuple {exps} has length {len(exps)}, expected {self.nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = complex(c)
            if c != 0:
                clean[exps] = clean.get(exps, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    @property
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if self.nvars != other.nvars:
            raise ArityError("cannot add polynomials in different variable counts")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.nvars, terms)

    def __mul__(self, scalar):
        return MultiPoly(self.nvars, {e: scalar * c for e, c in self.terms.items()})

    __rmul__ = __mul__


def poly_from_terms(nvars, *term_pairs):
    """Build a MultiPoly from (coefficient, exponent-tuple) pairs."""
    return MultiPoly(nvars, {tuple(e): c for c, e in term_pairs})


def zero_poly(nvars):
    return MultiPoly(nvars, {})


def constant_poly(nvars, c):
    return MultiPoly(nvars, {tuple([0] * nvars): c})


def total_degree(p: MultiPoly):
    """Total degree; the zero polynomial gets the -inf marker."""
    if p.is_zero:
        return MINUS_INF
    return max(sum(e) for e in p.terms)


def eval_poly(p: MultiPoly, z) -> complex:
    """Evaluate ``p`` at a point given as a sequence of complex numbers."""
    z = tuple(z)
    if len(z) != p.nvars:
        raise ArityError(f"point has {len(z)} coordinates, polynomial expects {p.nvars}")
    acc = 0j
    for exps, c in p.terms.items():
        m = c
        for zi, e in zip(z, exps):
            if e:
                m *= zi**e
        acc += m
    return acc


def eval_poly_many(p: MultiPoly, pts: np.ndarray) -> np.ndarray:
    """Vectorized evaluation on an (m, nvars) complex array."""
    pts = np.asarray(pts, dtype=complex)
    if pts.ndim == 1:
        pts = pts.reshape(-1, p.nvars if p.nvars else 1)
    if p.nvars and pts.shape[1] != p.nvars:
        raise ArityError(f"points have {pts.shape[1]} coordinates, polynomial expects {p.nvars}")
    out = np.zeros(pts.shape[0], dtype=complex)
    for exps, c in p.terms.items():
        m = np.full(pts.shape[0], c, dtype=complex)
        for d, e in enumerate(exps):
            if e:
                m *= pts[:, d] ** e
        out += m
    return out


@dataclass(frozen=True)
class MonicInY:
    """One equation y^k + sum_j coeffs[j](z) * y^j, monic in the lifted variable.

    ``coeffs`` lists the k lower-order coefficient polynomials (index j is the
    coefficient of y^j), all in the base variables.  ``pure_power_flag`` marks
    the special shape y^k + coeffs[0], which has closed-form fibers.
    """

    k: int
    coeffs: tuple

    def __post_init__(self):
        if self.k < 1:
            raise NotMonicNormalized(f"k must be >= 1, got {self.k}")
        coeffs = tuple(self.coeffs)
        if len(coeffs) != self.k:
            raise SurfaceFormatError(f"expected {self.k} coefficient polynomials, got {len(coeffs)}")
        nv = {c.nvars for c in coeffs}
        if len(nv) > 1:
            raise SurfaceFormatError("coefficient polynomials disagree on variable count")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def base_nvars(self):
        return self.coeffs[0].nvars

    @property
    def pure_power_flag(self):
        return all(c.is_zero for c in self.coeffs[1:])

    @property
    def total_deg(self):
        """Total degree d of the full equation (>= k by monicity)."""
        d = self.k
        for j, c in enumerate(self.coeffs):
            if not c.is_zero:
                d = max(d, j + int(total_degree(c)))
        return d

    def univariate_at(self, base) -> np.ndarray:
        """Coefficients [1, c_{k-1}, ..., c_0] (descending powers) of y -> s(base, y)."""
        vals = [eval_poly(c, base) for c in self.coeffs]
        return np.array([1.0 + 0j] + vals[::-1], dtype=complex)


@dataclass(frozen=True)
class SurfaceSpec:
    """One or two triangular monic equations cutting out the variety.

    With one equation the ambient space is (base, y); with two it is
    (base, y1, y2) and the second equation's coefficients may involve y1.
    """

    ambient_dim: int
    equations: tuple
    real_flag: bool = True
    name: str = "custom"

    def __post_init__(self):
        eqs = tuple(self.equations)
        if len(eqs) not in (1, 2):
            raise SurfaceFormatError(f"expected 1 or 2 equations, got {len(eqs)}")
        nbase = self.ambient_dim - len(eqs)
        if nbase < 1:
            raise SurfaceFormatError("ambient dimension leaves no base variables")
        for i, eq in enumerate(eqs):
            want = nbase + i
            if eq.base_nvars != want:
                raise SurfaceFormatError(
                    f"equation {i + 1} has coefficients in {eq.base_nvars} variables, expected {want}"
                )
        object.__setattr__(self, "equations", eqs)

    @property
    def n_base(self):
        return self.ambient_dim - len(self.equations)

    @property
    def codim(self):
        return len(self.equations)

    @property
    def degrees(self):
        """Pairs (d_i, k_i) of total and distinguished degrees."""
        return tuple((eq.total_deg, eq.k) for eq in self.equations)

    @property
    def dim_formula_exact(self):
        """True when every equation has total degree equal to its y-degree.

        That is the hypothesis under which the closed dimension formulas give
        the exact dimension of the restricted polynomial space.
        """
        return all(d == k for d, k in self.degrees)

    def residuals(self, pts: np.ndarray) -> np.ndarray:
        """|s_i(p)| for every point row, shape (npoints, n_equations)."""
        pts = np.asarray(pts, dtype=complex)
        out = np.empty((pts.shape[0], len(self.equations)))
        for i, eq in enumerate(self.equations):
            nb = eq.base_nvars
            y = pts[:, nb]
            val = y**eq.k
            for j, c in enumerate(eq.coeffs):
                cv = eval_poly_many(c, pts[:, :nb])
                val += cv * y**j
            out[:, i] = np.abs(val)
        return out

    def coefficient_scale(self):
        """Max coefficient magnitude across all equations (>= 1)."""
        s = 1.0
        for eq in self.equations:
            for c in eq.coeffs:
                for v in c.terms.values():
                    s = max(s, abs(v))
        return s


def kth_roots(c: complex, k: int):
    """All k-th roots of c, sorted by argument in [0, 2*pi); k zeros for c = 0."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    c = complex(c)
    if c == 0:
        return [0j] * k
    r = abs(c) ** (1.0 / k)
    theta = cmath.phase(c)  # in (-pi, pi]
    roots = []
    for j in range(k):
        ang = (theta + 2 * math.pi * j) / k
        ang %= 2 * math.pi
        roots.append((ang, r * cmath.exp(1j * ang)))
    roots.sort(key=lambda t: t[0])
    return [w for _, w in roots]


# Aberth-Ehrlich settings: dependency-free and robust for the small k used here.
_ABERTH_MAX_ITER = 200
_ABERTH_STEP_TOL = 1e-13
_ABERTH_RESID_TOL = 1e-10


def monic_roots(coeffs_desc) -> list:
    """Roots of a monic univariate polynomial via Aberth-Ehrlich iteration.

    ``coeffs_desc`` holds descending-power coefficients with leading 1.
    Repeated roots are returned repeatedly; the iteration is accepted either
    on small simultaneous steps or, past the iteration cap, on a small
    backward residual (multiple roots plateau at ~sqrt(eps) step size).
    """
    coeffs = np.asarray(coeffs_desc, dtype=complex)
    k = len(coeffs) - 1
    if k == 0:
        return []
    if k == 1:
        return [-coeffs[1]]
    scale = 1.0 + max(abs(c) for c in coeffs[1:])
    # distinct start angles, deliberately not roots of unity to break symmetry
    ang = 2 * math.pi * (np.arange(k) + 0.375) / k + 0.1
    z = scale * np.exp(1j * ang)
    dcoeffs = coeffs[:-1] * np.arange(k, 0, -1)
    for _ in range(_ABERTH_MAX_ITER):
        pv = np.polyval(coeffs, z)
        dv = np.polyval(dcoeffs, z)
        newton = np.where(dv != 0, pv / np.where(dv == 0, 1, dv), 0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        sums = (1.0 / diff).sum(axis=1) - 1.0  # remove the fill-in diagonal
        denom = 1.0 - newton * sums
        step = np.where(denom != 0, newton / np.where(denom == 0, 1, denom), newton)
        z = z - step
        if np.all(np.abs(step) <= _ABERTH_STEP_TOL * (1.0 + np.abs(z))):
            return sorted(z.tolist(), key=_root_key)
    resid = np.abs(np.polyval(coeffs, z))
    if np.all(resid <= _ABERTH_RESID_TOL * scale):
        return sorted(z.tolist(), key=_root_key)
    raise RootsDiverged(
        f"root iteration did not converge; residuals {resid.tolist()}", residuals=resid
    )


def _root_key(w):
    # deterministic fiber ordering: (argument in [0, 2pi), modulus)
    a = cmath.phase(w)
    if a < 0:
        a += 2 * math.pi
    return (a, abs(w))


def fiber_roots(eq: MonicInY, base):
    """The k values of the lifted variable over a base point (with multiplicity)."""
    base = tuple(base)
    if len(base) != eq.base_nvars:
        raise ArityError(f"base point has {len(base)} coordinates, equation expects {eq.base_nvars}")
    if eq.pure_power_flag:
        c0 = eval_poly(eq.coeffs[0], base)
        return kth_roots(-c0, eq.k)
    return monic_roots(eq.univariate_at(base))


def sylvester_resultant_at(eq: MonicInY, base) -> complex:
    """det of the Sylvester matrix of (s(base, .), ds/dy(base, .)).

    The matrix is (2k-1) x (2k-1): k-1 shifted copies of the degree-k
    polynomial and k shifted copies of its degree-(k-1) derivative.  For
    k = 1 the determinant is 1 (a linear polynomial never has a repeated
    root).
    """
    f = eq.univariate_at(tuple(base))
    k = eq.k
    g = f[:-1] * np.arange(k, 0, -1)  # derivative, descending powers
    m = 2 * k - 1
    S = np.zeros((m, m), dtype=complex)
    for i in range(k - 1):
        S[i, i : i + k + 1] = f
    for i in range(k):
        S[k - 1 + i, i : i + k] = g
    if m == 1:
        return complex(S[0, 0])
    return complex(np.linalg.det(S))


def discriminant_tol(eq: MonicInY, base) -> float:
    """Default membership tolerance: 1e-10 scaled by the local coefficient size."""
    f = eq.univariate_at(tuple(base))
    return 1e-10 * (1.0 + float(np.abs(f).max()))


def in_discriminant_set(eq: MonicInY, base, tol=None) -> bool:
    """True when the fiber over ``base`` has a repeated root (|resultant| <= tol)."""
    if tol is None:
        tol = discriminant_tol(eq, base)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return abs(sylvester_resultant_at(eq, base)) <= tol


# ---------------------------------------------------------------------------
# Surface description files (JSON)
#
# {
#   "ambient_dim": 3,
#   "real_flag": true,
#   "equations": [
#     {"k": 2, "vars": 2,
#      "coeffs": [{"terms": [{"exps": [2, 0], "re": 1.0, "im": 0.0}, ...]}, ...]}
#   ]
# }
#
# equations[i] lists its k coefficient polynomials for y^0 ... y^(k-1); each
# polynomial is a list of terms with integer exponents and a complex value.
# ---------------------------------------------------------------------------


def _poly_to_json(p: MultiPoly):
    terms = [
        {"exps": list(e), "re": c.real, "im": c.imag}
        for e, c in sorted(p.terms.items())
    ]
    return {"terms": terms}


def _poly_from_json(obj, nvars):
    terms = {}
    for t in obj.get("terms", []):
        exps = tuple(int(e) for e in t["exps"])
        if len(exps) != nvars:
            raise SurfaceFormatError(
                f"term exponents {list(exps)} do not match declared vars={nvars}"
            )
        terms[exps] = terms.get(exps, 0) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
    return MultiPoly(nvars, terms)


def surface_to_json(surface: SurfaceSpec) -> dict:
    return {
        "ambient_dim": surface.ambient_dim,
        "real_flag": surface.real_flag,
        "equations": [
            {
                "k": eq.k,
                "vars": eq.base_nvars,
                "coeffs": [_poly_to_json(c) for c in eq.coeffs],
            }
            for eq in surface.equations
        ],
    }


def surface_from_json(obj: dict, name="custom") -> SurfaceSpec:
    try:
        ambient = int(obj["ambient_dim"])
        eqs = []
        for e in obj["equations"]:
            k = int(e["k"])
            nvars = int(e["vars"])
            coeffs = [_poly_from_json(c, nvars) for c in e["coeffs"]]
            eqs.append(MonicInY(k, tuple(coeffs)))
        real_flag = bool(obj.get("real_flag", True))
    except (KeyError, TypeError, ValueError) as exc:
        raise SurfaceFormatError(f"malformed surface description: {exc}") from exc
    return SurfaceSpec(ambient, tuple(eqs), real_flag, name=name)


def load_surface(path, name=None) -> SurfaceSpec:
    with open(path) as fh:
        obj = json.load(fh)
    return surface_from_json(obj, name=name or str(path))


def save_surface(surface: SurfaceSpec, path):
    with open(path, "w") as fh:
        json.dump(surface_to_json(surface), fh, indent=2)
        fh.write("\n")
