import json

import numpy as np
import pytest

from algmesh.errors import ArityError, SurfaceFormatError
from algmesh.polycore import (
    MINUS_INF,
    MonicInY,
    MultiPoly,
    SurfaceSpec,
    constant_poly,
    eval_poly,
    fiber_roots,
    in_discriminant_set,
    kth_roots,
    load_surface,
    monic_roots,
    surface_from_json,
    surface_to_json,
    sylvester_resultant_at,
    total_degree,
    zero_poly,
)


def test_eval_zero_poly():
    assert eval_poly(zero_poly(2), (3.0, 4.0)) == 0


def test_eval_simple():
    p = MultiPoly(2, {(3, 0): 1.0, (0, 2): 1.0})  # x^3 + y^2
    assert eval_poly(p, (1.0, 2.0)) == pytest.approx(5.0)


def test_eval_root_at_endpoint():
    p = MultiPoly(1, {(2,): 1.0, (1,): -2.0})  # x^2 - 2x
    assert eval_poly(p, (2.0,)) == 0


def test_eval_arity_error():
    p = MultiPoly(2, {(1, 0): 1.0})
    with pytest.raises(ArityError):
        eval_poly(p, (1.0,))


def test_eval_linearity_random():
    rng = np.random.default_rng(42)
    for _ in range(50):
        nv = rng.integers(1, 4)
        def rand_poly():
            terms = {}
            for _ in range(rng.integers(1, 6)):
                e = tuple(int(v) for v in rng.integers(0, 4, nv))
                terms[e] = complex(*rng.uniform(-1, 1, 2))
            return MultiPoly(int(nv), terms)
        p, q = rand_poly(), rand_poly()
        z = tuple(complex(*c) for c in rng.uniform(-1, 1, (nv, 2)))
        lhs = eval_poly(p + q, z)
        rhs = eval_poly(p, z) + eval_poly(q, z)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


def test_total_degree():
    assert total_degree(MultiPoly(2, {(2, 1): 1.0, (0, 0): 1.0})) == 3
    assert total_degree(constant_poly(3, 5.0)) == 0
    assert total_degree(zero_poly(2)) == MINUS_INF


def test_kth_roots_cube():
    roots = kth_roots(8, 3)
    expect = [2.0, 2 * np.exp(2j * np.pi / 3), 2 * np.exp(4j * np.pi / 3)]
    assert np.allclose(roots, expect)


def test_kth_roots_negative():
    assert np.allclose(kth_roots(-4, 2), [2j, -2j])


def test_kth_roots_zero():
    assert kth_roots(0, 5) == [0j] * 5


def test_kth_roots_residual_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        c = complex(*rng.uniform(-5, 5, 2))
        k = int(rng.integers(1, 7))
        for r in kth_roots(c, k):
            assert abs(r**k - c) <= 1e-12 * max(1.0, abs(c))


def _sphere_eq():
    c0 = MultiPoly(2, {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})
    return MonicInY(2, (c0, zero_poly(2)))


def _cubic_eq():
    c0 = MultiPoly(2, {(3, 0): -1.0, (0, 2): -1.0})
    return MonicInY(2, (c0, zero_poly(2)))


def test_fiber_roots_sphere_origin():
    assert np.allclose(fiber_roots(_sphere_eq(), (0.0, 0.0)), [1.0, -1.0])


def test_fiber_roots_cubic_surface():
    # over (1, 0): z^2 = 1^3 + 0 = 1
    assert np.allclose(fiber_roots(_cubic_eq(), (1.0, 0.0)), [1.0, -1.0])


def test_fiber_roots_double_root():
    # (y+1)^2 = y^2 + 2y + 1, not a pure power so the iterative path runs;
    # oracle: expanding (y-r1)(y-r2) must return the original coefficients
    eq = MonicInY(2, (constant_poly(0, 1.0), constant_poly(0, 2.0)))
    roots = fiber_roots(eq, ())
    expanded = np.array([1.0, -(roots[0] + roots[1]), roots[0] * roots[1]])
    assert np.allclose(expanded, [1.0, 2.0, 1.0], atol=1e-7)
    assert all(abs(r + 1) < 1e-6 for r in roots)


def test_root_coefficient_consistency_random():
    rng = np.random.default_rng(11)
    for _ in range(60):
        k = int(rng.integers(2, 5))
        coeffs = [constant_poly(0, complex(*rng.uniform(-2, 2, 2))) for _ in range(k)]
        eq = MonicInY(k, tuple(coeffs))
        roots = fiber_roots(eq, ())
        poly = np.poly(np.array(roots))  # leading-one coefficients from the roots
        target = eq.univariate_at(())
        assert np.allclose(poly, target, atol=1e-9)


def test_monic_roots_pure_quartic():
    roots = monic_roots([1.0, 0.0, 0.0, 0.0, -16.0])  # y^4 = 16
    assert sorted(abs(r) for r in roots) == pytest.approx([2.0] * 4)


def test_sylvester_quadratic():
    # y^2 - z at z=1: Res(y^2-1, 2y) = -4
    eq = MonicInY(2, (MultiPoly(1, {(1,): -1.0}), zero_poly(1)))
    assert sylvester_resultant_at(eq, (1.0,)) == pytest.approx(-4.0)
    assert sylvester_resultant_at(eq, (0.0,)) == pytest.approx(0.0)


def test_sylvester_viviani_second_equation():
    c0 = MultiPoly(2, {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -4.0})
    eq = MonicInY(2, (c0, zero_poly(2)))
    assert sylvester_resultant_at(eq, (0.0, 0.0)) == pytest.approx(-16.0)


def test_sylvester_k1_never_vanishes():
    eq = MonicInY(1, (MultiPoly(1, {(1,): 3.0}),))
    assert sylvester_resultant_at(eq, (2.0,)) == pytest.approx(1.0)


def test_discriminant_membership_flips_with_tol():
    eq = MonicInY(2, (MultiPoly(1, {(1,): -1.0}), zero_poly(1)))
    assert not in_discriminant_set(eq, (1.0,), tol=1e-10)
    assert in_discriminant_set(eq, (0.0,), tol=1e-10)
    # resultant -4e-12 sits below the tolerance
    assert in_discriminant_set(eq, (1e-12,), tol=1e-10)


def test_resultant_vanishes_on_repeated_roots_random():
    rng = np.random.default_rng(5)
    for _ in range(40):
        k = int(rng.integers(2, 4))
        double = complex(*rng.uniform(-1.5, 1.5, 2))
        extra = [complex(*rng.uniform(-1.5, 1.5, 2)) for _ in range(k - 2)]
        all_roots = [double, double] + extra
        coeffs_desc = np.poly(np.array(all_roots))
        eq = MonicInY(k, tuple(constant_poly(0, c) for c in coeffs_desc[1:][::-1]))
        roots = fiber_roots(eq, ())
        # the solver must see the collision (double roots split at ~1e-8)
        dists = [abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]]
        assert min(dists) <= 1e-6
        scale = 1.0 + float(np.abs(coeffs_desc).max())
        assert abs(sylvester_resultant_at(eq, ())) <= 1e-9 * scale**(2 * k - 1)


def test_monic_in_y_validation():
    with pytest.raises(SurfaceFormatError):
        MonicInY(2, (zero_poly(1),))  # needs exactly k coefficient polys


def test_pure_power_flag():
    assert _sphere_eq().pure_power_flag
    eq = MonicInY(2, (constant_poly(1, 1.0), constant_poly(1, 2.0)))
    assert not eq.pure_power_flag


def test_total_deg_of_equation():
    assert _sphere_eq().total_deg == 2
    assert _cubic_eq().total_deg == 3


def test_surface_spec_validation():
    with pytest.raises(SurfaceFormatError):
        SurfaceSpec(3, (_sphere_eq(), _sphere_eq()))  # eq1 must use 1 base var


def test_surface_json_round_trip():
    surf = SurfaceSpec(3, (_cubic_eq(),), real_flag=True, name="cubic")
    obj = surface_to_json(surf)
    back = surface_from_json(json.loads(json.dumps(obj)), name="cubic")
    assert back.ambient_dim == 3
    assert back.equations[0].k == 2
    assert back.equations[0].coeffs[0].terms == _cubic_eq().coeffs[0].terms
    assert back.real_flag


def test_original_viviani_file_rejected():
    from pathlib import Path

    import algmesh

    data = Path(algmesh.__file__).parent / "data" / "viviani_original.json"
    with pytest.raises(SurfaceFormatError):
        load_surface(data)


def test_surface_residuals_on_exact_points():
    surf = SurfaceSpec(3, (_sphere_eq(),), real_flag=True)
    pts = np.array([[0.6, 0.8, 0.0], [0.0, 0.0, 1.0]], dtype=complex)
    assert surf.residuals(pts).max() < 1e-14
