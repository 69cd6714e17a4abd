import math

import numpy as np
import pytest

from algmesh.basemesh import CDISK, RDISK, SEGMENT
from algmesh.lift import CODIM2_SPECIFIC
from algmesh.surfaces import (
    BUILTIN_NAMES,
    build_control_mesh,
    build_mesh,
    builtin_example,
    constant_bound,
)


def test_builtin_names():
    assert set(BUILTIN_NAMES) == {"sphere", "cubic_surface", "cubic_curve", "viviani"}


def test_sphere_equation_coefficients():
    eq = builtin_example("sphere").surface.equations[0]
    assert eq.k == 2
    # z^2 + (x^2 + y^2 - 1)
    assert eq.coeffs[0].terms == {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0}
    assert eq.coeffs[1].is_zero
    assert eq.total_deg == 2
    assert eq.pure_power_flag


def test_cubic_surface_equation_coefficients():
    ex = builtin_example("cubic_surface")
    eq = ex.surface.equations[0]
    # z^2 - x^3 - y^2
    assert eq.coeffs[0].terms == {(3, 0): -1.0, (0, 2): -1.0}
    assert (eq.total_deg, eq.k) == (3, 2)
    assert ex.domain.kind == RDISK and ex.domain.center == (1.0, 0.0)


def test_cubic_curve_equation_coefficients():
    ex = builtin_example("cubic_curve")
    eq = ex.surface.equations[0]
    # y^3 - x^2 + 1
    assert eq.coeffs[0].terms == {(0,): 1.0, (2,): -1.0}
    assert (eq.total_deg, eq.k) == (3, 3)
    assert not ex.surface.real_flag
    assert ex.domain.kind == CDISK


def test_viviani_equation_coefficients():
    ex = builtin_example("viviani")
    eq1, eq2 = ex.surface.equations
    # y^2 + x^2 - 2x and z^2 + x^2 + y^2 - 4
    assert eq1.coeffs[0].terms == {(2,): 1.0, (1,): -2.0}
    assert eq2.coeffs[0].terms == {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -4.0}
    assert ex.domain.kind == SEGMENT and ex.domain.a == 0 and ex.domain.b == 2
    assert ex.construction == CODIM2_SPECIFIC
    assert ex.surface.dim_formula_exact


def test_lambda_rules():
    assert builtin_example("sphere").lam_for(6) == 12
    assert builtin_example("cubic_surface").lam_for(7) == 10
    assert builtin_example("cubic_curve").lam_for(3) == 4
    assert builtin_example("viviani").lam_for(16) == 20


def test_cardinality_formulas():
    for n in range(1, 6):
        assert build_mesh(builtin_example("sphere"), n).card == 32 * n * n
        assert build_mesh(builtin_example("cubic_surface"), n).card == 2 * (4 * n + 2) ** 2
        assert build_mesh(builtin_example("cubic_curve"), n).card == 24 * n
        assert build_mesh(builtin_example("viviani"), n).card == 20 * n


def test_constant_bounds():
    assert constant_bound(builtin_example("sphere")) == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert constant_bound(builtin_example("cubic_surface")) == pytest.approx(
        2 / math.cos(3 * math.pi / 8), abs=1e-3
    )
    assert constant_bound(builtin_example("cubic_curve")) == pytest.approx(
        3 / math.cos(3 * math.pi / 8) ** (1 / 3), abs=1e-3
    )
    assert constant_bound(builtin_example("viviani")) == pytest.approx(
        2 * math.sqrt(2) / math.cos(2 * math.pi / 5) ** 0.25, abs=1e-3
    )


def test_cubic_curve_points_satisfy_equation():
    mesh = build_mesh(builtin_example("cubic_curve"), 2)
    x, y = mesh.points[:, 0], mesh.points[:, 1]
    assert np.abs(y**3 - x**2 + 1).max() < 1e-12
    assert np.allclose(np.abs(x), 1.0)  # base points on the unit circle


def test_viviani_points_real_and_on_both_equations():
    mesh = build_mesh(builtin_example("viviani"), 3)
    assert np.abs(mesh.points.imag).max() == 0.0
    x, y, z = (mesh.points[:, i].real for i in range(3))
    assert np.abs(x**2 + y**2 + z**2 - 4).max() < 1e-12
    assert np.abs(x**2 + y**2 - 2 * x).max() < 1e-12
    assert ((x >= 0) & (x <= 2)).all()


def test_control_mesh_refines():
    ex = builtin_example("sphere")
    n = 2
    ctrl = build_control_mesh(ex, n, factor=3)
    assert ctrl.base.n == 3 * ex.ell(n)
    assert ctrl.card > build_mesh(ex, n).card


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin_example("torus")
