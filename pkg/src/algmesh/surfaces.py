"""Builtin example surfaces with their base domains and lambda rules.

Four compact pieces of algebraic sets ship with the package:

  sphere        unit sphere x^2+y^2+z^2 = 1 over the closed unit disk
  cubic_surface z^2 = x^3+y^2 over the disk of radius 1 centered at (1,0)
  cubic_curve   y^3 = x^2-1 in C^2 over the closed complex unit disk
  viviani       Viviani's window {x^2+y^2+z^2=4} intersected with
                {x^2+y^2=2x} over the segment [0,2]

Each entry records how to pick lambda from the base index ell so the lifted
meshes have an n-independent constant, making them optimal (cardinality
proportional to the restricted-space dimension).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .basemesh import CDISK, RDISK, SEGMENT, BaseDomain, generate
from .errors import LambdaTooSmall
from .lift import (
    CODIM2_SPECIFIC,
    HYPER_SPECIFIC,
    NormedMesh,
    ell_index,
    lift_mesh,
    mesh_constant_bound,
)
from .polycore import MonicInY, MultiPoly, SurfaceSpec, zero_poly


def _p2(terms):
    return MultiPoly(2, terms)


def _p1(terms):
    return MultiPoly(1, terms)


@dataclass(frozen=True)
class BuiltinExample:
    name: str
    title: str
    surface: SurfaceSpec
    domain: BaseDomain
    lambda_rule: Callable[[int], int]
    construction: str
    f4_tag: str
    supports_test_functions: bool

    def ell(self, n):
        return ell_index(self.surface, n, self.construction)

    def lam_for(self, ell):
        return max(self.lambda_rule(ell), ell + 1)


def _sphere():
    # z^2 + (x^2 + y^2 - 1) = 0, fibers z = +-sqrt(1 - x^2 - y^2)
    c0 = _p2({(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})
    eq = MonicInY(2, (c0, zero_poly(2)))
    surface = SurfaceSpec(3, (eq,), real_flag=True, name="sphere")
    return BuiltinExample(
        name="sphere",
        title="unit sphere in R^3",
        surface=surface,
        domain=BaseDomain(RDISK, center=(0.0, 0.0), radius=1.0),
        lambda_rule=lambda ell: 2 * ell,
        construction=HYPER_SPECIFIC,
        f4_tag="f4",
        supports_test_functions=True,
    )


def _cubic_surface():
    # z^2 - x^3 - y^2 = 0 over the disk (x-1)^2 + y^2 <= 1
    c0 = _p2({(3, 0): -1.0, (0, 2): -1.0})
    eq = MonicInY(2, (c0, zero_poly(2)))
    surface = SurfaceSpec(3, (eq,), real_flag=True, name="cubic_surface")
    return BuiltinExample(
        name="cubic_surface",
        title="cubic surface z^2 = x^3 + y^2",
        surface=surface,
        domain=BaseDomain(RDISK, center=(1.0, 0.0), radius=1.0),
        lambda_rule=lambda ell: -(-4 * ell // 3),
        construction=HYPER_SPECIFIC,
        f4_tag="f4",
        supports_test_functions=True,
    )


def _cubic_curve():
    # y^3 - x^2 + 1 = 0 over the closed complex unit disk
    c0 = _p1({(0,): 1.0, (2,): -1.0})
    eq = MonicInY(3, (c0, zero_poly(1), zero_poly(1)))
    surface = SurfaceSpec(2, (eq,), real_flag=False, name="cubic_curve")
    return BuiltinExample(
        name="cubic_curve",
        title="complex cubic curve y^3 = x^2 - 1",
        surface=surface,
        domain=BaseDomain(CDISK, a=0j, radius=1.0),
        lambda_rule=lambda ell: -(-4 * ell // 3),
        construction=HYPER_SPECIFIC,
        f4_tag="f4",
        supports_test_functions=False,
    )


def _viviani():
    # y^2 + (x^2 - 2x) = 0 and z^2 + (x^2 + y^2 - 4) = 0 over [0, 2]
    c1 = _p1({(2,): 1.0, (1,): -2.0})
    eq1 = MonicInY(2, (c1, zero_poly(1)))
    c2 = _p2({(2, 0): 1.0, (0, 2): 1.0, (0, 0): -4.0})
    eq2 = MonicInY(2, (c2, zero_poly(2)))
    surface = SurfaceSpec(3, (eq1, eq2), real_flag=True, name="viviani")
    return BuiltinExample(
        name="viviani",
        title="Viviani's window",
        surface=surface,
        domain=BaseDomain(SEGMENT, a=0 + 0j, b=2 + 0j),
        lambda_rule=lambda ell: -(-5 * ell // 4),
        construction=CODIM2_SPECIFIC,
        f4_tag="f4_viviani",
        supports_test_functions=True,
    )


_BUILTINS = {ex.name: ex for ex in (_sphere(), _cubic_surface(), _cubic_curve(), _viviani())}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_example(name) -> BuiltinExample:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin surface {name!r}; choose from {BUILTIN_NAMES}") from None


def build_mesh(example: BuiltinExample, n, lam=None) -> NormedMesh:
    """Norming mesh for degree n on a builtin example (lambda overridable)."""
    ell = example.ell(n)
    lam = example.lam_for(ell) if lam is None else int(lam)
    if lam <= ell:
        raise LambdaTooSmall(f"lambda={lam} must exceed the base index ell={ell}")
    base = generate(example.domain, lam, ell)
    return lift_mesh(
        example.surface,
        base,
        n,
        construction=example.construction,
        surface_id=example.name,
    )


def build_control_mesh(example: BuiltinExample, n, factor=3) -> NormedMesh:
    """Finer mesh on the same set, lifted from the base index factor*ell(n)."""
    ell = max(1, factor * example.ell(n))
    base = generate(example.domain, example.lam_for(ell), ell)
    return lift_mesh(
        example.surface,
        base,
        n,
        construction=example.construction,
        surface_id=example.name,
    )


def constant_bound(example: BuiltinExample) -> float:
    """n-independent bound on the certified constant under the default rule."""
    degs = example.surface.degrees
    flat = degs[0] if len(degs) == 1 else degs[0] + degs[1]
    return mesh_constant_bound(
        example.construction, flat, example.lam_for, example.domain.kind
    )


def custom_example(surface: SurfaceSpec, domain: BaseDomain, lambda_rule=None,
                   construction=None, name="custom") -> BuiltinExample:
    """Wrap a user surface + base domain in the same driver interface."""
    from .lift import default_construction

    if construction is None:
        construction = default_construction(surface)
    if lambda_rule is None:
        lambda_rule = lambda ell: 2 * ell
    real3d = surface.real_flag and surface.ambient_dim == 3
    return BuiltinExample(
        name=name,
        title=name,
        surface=surface,
        domain=domain,
        lambda_rule=lambda_rule,
        construction=construction,
        f4_tag="f4",
        supports_test_functions=real3d,
    )
