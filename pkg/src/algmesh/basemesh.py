"""Classical norming meshes on a segment, a complex disk and a real disk.

These are the three base families that get lifted onto algebraic sets.  Each
generator certifies a degree n with lambda > n and carries its closed-form
norming constant:

  segment [a,b] : lambda Chebyshev points,        constant 1/cos(n*pi/(2*lambda))
  cdisk D(a,r)  : 2*lambda equidistributed points, constant 1/cos(n*pi/(2*lambda))
  rdisk B(a,r)  : lambda^2 polar grid,            constant 1/cos^2(n*pi/(2*lambda))

The point sets depend only on lambda; the certified degree enters the
constant alone.  Duplicate points from the polar grid (odd lambda hits the
center lambda times) are kept, so the cardinality formulas hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LambdaTooSmall

SEGMENT = "segment"
CDISK = "cdisk"
RDISK = "rdisk"


@dataclass(frozen=True)
class BaseDomain:
    """Domain descriptor: segment(a, b), cdisk(center, radius) or rdisk(center, radius)."""

    kind: str
    a: complex = 0j
    b: complex = 0j
    center: tuple = (0.0, 0.0)
    radius: float = 1.0

    def describe(self):
        if self.kind == SEGMENT:
            return f"segment[{self.a}, {self.b}]"
        if self.kind == CDISK:
            return f"cdisk(center={self.a}, r={self.radius})"
        return f"rdisk(center={self.center}, r={self.radius})"


@dataclass(frozen=True)
class BaseMesh:
    """A generated base mesh: points (card, dim) with its certified constant."""

    domain: BaseDomain
    lam: int
    n: int
    points: np.ndarray
    constant: float

    @property
    def card(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def _check_lambda(lam, n):
    if lam <= n:
        raise LambdaTooSmall(f"lambda={lam} must exceed the certified degree n={n}")
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")


def segment_mesh(a, b, lam, n) -> BaseMesh:
    """Scaled lambda-system of Chebyshev points on the segment [a, b]."""
    _check_lambda(lam, n)
    a, b = complex(a), complex(b)
    if a == b:
        raise ValueError("segment endpoints must differ")
    j = np.arange(1, lam + 1)
    pts = (a + b) / 2 + (a - b) / 2 * np.cos((2 * j - 1) * np.pi / (2 * lam))
    constant = 1.0 / math.cos(n * math.pi / (2 * lam))
    dom = BaseDomain(SEGMENT, a=a, b=b)
    return BaseMesh(dom, lam, n, pts.reshape(-1, 1), constant)


def cdisk_mesh(center, radius, lam, n) -> BaseMesh:
    """2*lambda equidistributed points on the circle bounding D(center, radius)."""
    _check_lambda(lam, n)
    if radius <= 0:
        raise ValueError("radius must be positive")
    j = np.arange(1, 2 * lam + 1)
    pts = complex(center) + radius * np.exp(1j * j * np.pi / lam)
    constant = 1.0 / math.cos(n * math.pi / (2 * lam))
    dom = BaseDomain(CDISK, a=complex(center), radius=float(radius))
    return BaseMesh(dom, lam, n, pts.reshape(-1, 1), constant)


def rdisk_mesh(center, radius, lam, n) -> BaseMesh:
    """lambda^2 polar grid on the real disk B(center, radius) in R^2.

    Radii r_j = radius*cos((2j-1)*pi/(2*lambda)) take both signs while the
    angle sweeps half a turn, which covers the full disk.
    """
    _check_lambda(lam, n)
    if radius <= 0:
        raise ValueError("radius must be positive")
    cx, cy = float(center[0]), float(center[1])
    j = np.arange(1, lam + 1)
    r = radius * np.cos((2 * j - 1) * np.pi / (2 * lam))
    theta = np.arange(1, lam + 1) * np.pi / lam
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    pts = np.empty((lam * lam, 2), dtype=complex)
    pts[:, 0] = (cx + rr * np.cos(tt)).ravel()
    pts[:, 1] = (cy + rr * np.sin(tt)).ravel()
    constant = 1.0 / math.cos(n * math.pi / (2 * lam)) ** 2
    dom = BaseDomain(RDISK, center=(cx, cy), radius=float(radius))
    return BaseMesh(dom, lam, n, pts, constant)


def default_lambda(kind, n):
    """Default lambda selector: ceil(3n/2) on a segment, ceil(4n/3) on disks.

    These keep the constant bounded uniformly in n (2 on the segment,
    1/cos(3*pi/8) and its square on the disks); always at least n+1.
    """
    if kind == SEGMENT:
        lam = -(-3 * n // 2)
    elif kind in (CDISK, RDISK):
        lam = -(-4 * n // 3)
    else:
        raise ValueError(f"unknown domain kind {kind!r}")
    return max(lam, n + 1)


def generate(domain: BaseDomain, lam, n) -> BaseMesh:
    """Generate the mesh for a domain descriptor at (lambda, n)."""
    if domain.kind == SEGMENT:
        return segment_mesh(domain.a, domain.b, lam, n)
    if domain.kind == CDISK:
        return cdisk_mesh(domain.a, domain.radius, lam, n)
    if domain.kind == RDISK:
        return rdisk_mesh(domain.center, domain.radius, lam, n)
    raise ValueError(f"unknown domain kind {domain.kind!r}")
