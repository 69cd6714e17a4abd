"""Acceptance suite: one test per criterion, one PASS line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  The heavy sweeps (discrete-orthonormal bases through degree 16 on
the two benchmark surfaces, against the degree-30 control mesh) run once in
a module-scoped cache; Lebesgue values are also written to ``out/`` as CSV
for visual comparison.
"""

import itertools
import math
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from algmesh import approx
from algmesh.basemesh import segment_mesh
from algmesh.lift import (
    dim_Pn,
    dim_Pn_codim2,
    dim_Pn_hypersurface,
    empirical_norming_ratio,
)
from algmesh.pipeline import build_mesh_at_index
from algmesh.polycore import MonicInY, MultiPoly, in_discriminant_set, sylvester_resultant_at, zero_poly
from algmesh.surfaces import build_mesh, builtin_example, constant_bound

OUT = Path(__file__).resolve().parent.parent / "out"

_METHOD_OF = {"afp": approx.INTERP_AFP, "dlp": approx.INTERP_DLP, "ls": approx.LEAST_SQUARES}


def _ok(num, name, detail=""):
    print(f"ACCEPTANCE {num} {name}: PASS  {detail}")


# --------------------------------------------------------------------------
# shared heavy sweep: handles through n=16 against the degree-30 control
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _sweep(surface_name):
    ex = builtin_example(surface_name)
    control = build_mesh(ex, 30)
    rng = np.random.default_rng(2024)
    res = {
        "orth": {}, "evalX": {}, "reproduce": {}, "errors": {}, "lebesgue": {},
        "control_card": control.card,
    }
    err_degrees = {4, 14, 16}
    for n in range(1, 17):
        mesh = build_mesh(ex, n)
        hint = dim_Pn(ex.surface, n) if ex.surface.dim_formula_exact else None
        h = approx.basis_for_mesh(mesh.points, n, eta_hint=hint)
        gram = h.Q_X.conj().T @ (h.Q_X * h.weights[:, None])
        res["orth"][n] = float(np.abs(gram - np.eye(h.eta)).max())
        res["evalX"][n] = float(np.abs(approx.ortho_eval(h, mesh.points) - h.Q_X).max())
        V_ctrl = approx.ortho_eval(h, control.points)
        ops = {}
        for m, kind in _METHOD_OF.items():
            nodes = approx.select_nodes(kind, h)
            ops[m] = (kind, nodes)
        if n <= 10:
            c = rng.standard_normal(h.eta)
            fX, fC = h.Q_X @ c, V_ctrl @ c
            rep = {}
            for m, (kind, nodes) in ops.items():
                op = approx.fit(kind, h, fX, node_indices=nodes)
                rep[m] = approx.rel_error(op, fC, control.points, V_control=V_ctrl)
            res["reproduce"][n] = rep
        if n in err_degrees:
            errs = {}
            for m, (kind, nodes) in ops.items():
                per_f = {}
                for tag in ("f1", "f2", "f3", "f4"):
                    real_tag = ex.f4_tag if tag == "f4" else tag
                    fX = approx.test_functions(real_tag, h.X)
                    op = approx.fit(kind, h, fX, node_indices=nodes)
                    fC = approx.test_functions(real_tag, control.points)
                    per_f[tag] = approx.rel_error(op, fC, control.points, V_control=V_ctrl)
                errs[m] = per_f
            res["errors"][n] = errs
        leb = {}
        for m, (kind, nodes) in ops.items():
            op = approx.fit(kind, h, np.ones(h.card), node_indices=nodes)
            leb[m] = approx.lebesgue_constant(op, h, V_control=V_ctrl)
        res["lebesgue"][n] = leb
    return res


# --------------------------------------------------------------------------
# 1. cardinality reproduction
# --------------------------------------------------------------------------


def test_criterion_1_cardinalities():
    sphere = builtin_example("sphere")
    for n in range(1, 11):
        assert build_mesh(sphere, n).card == 32 * n * n
    cubic = builtin_example("cubic_surface")
    for n in range(1, 11):
        assert build_mesh(cubic, n).card == 2 * (4 * n + 2) ** 2
    m2 = build_mesh(cubic, 2)
    assert m2.card == 200
    assert m2.base.card == 100 and m2.base.lam == 10 and m2.ell == 7
    curve = builtin_example("cubic_curve")
    for n in range(1, 11):
        assert build_mesh(curve, n).card == 24 * n
    viv = builtin_example("viviani")
    for n in range(1, 11):
        assert build_mesh(viv, n).card == 20 * n
    assert build_mesh(viv, 4).card == 80
    assert build_mesh(viv, 4).base.lam == 20
    assert build_mesh(viv, 4, lam=17).card == 68
    _ok(1, "cardinalities", "32n^2 / 2(4n+2)^2 / 24n / 20n, n=1..10")


# --------------------------------------------------------------------------
# 2. constant reproduction
# --------------------------------------------------------------------------


def test_criterion_2_constants():
    tol = 1e-3
    sphere_c = build_mesh(builtin_example("sphere"), 3).constant
    assert abs(sphere_c - 2 * math.sqrt(2)) <= tol
    cubic_b = constant_bound(builtin_example("cubic_surface"))
    assert abs(cubic_b - 2 / math.cos(3 * math.pi / 8)) <= tol
    assert abs(cubic_b - 5.2263) <= 1e-3
    curve_b = constant_bound(builtin_example("cubic_curve"))
    assert abs(curve_b - 3 / math.cos(3 * math.pi / 8) ** (1 / 3)) <= tol
    viv_b = constant_bound(builtin_example("viviani"))
    assert abs(viv_b - 2 * math.sqrt(2) / math.cos(2 * math.pi / 5) ** 0.25) <= tol
    assert viv_b <= 3.8
    viv17 = build_mesh(builtin_example("viviani"), 4, lam=17).constant
    assert abs(viv17 - 2 * math.sqrt(2) / math.cos(8 * math.pi / 17) ** 0.25) <= tol
    assert abs(viv17 - 5.2) <= 0.1
    seg = segment_mesh(0, 2, 5, 4)
    assert abs(seg.constant - 3.2361) <= tol
    _ok(2, "constants", f"2.8284 / 5.2263 / {curve_b:.4f} / {viv_b:.4f} / {viv17:.4f} / 3.2361")


# --------------------------------------------------------------------------
# 3. norming property suite
# --------------------------------------------------------------------------


def test_criterion_3_norming_suite():
    rng = np.random.default_rng(97531)
    worst = 0.0
    for name in ("sphere", "cubic_surface", "cubic_curve", "viviani"):
        ex = builtin_example(name)
        for n in range(1, 9):
            mesh = build_mesh(ex, n)
            control = build_mesh_at_index(ex, 3 * ex.ell(n), n)
            ratio = empirical_norming_ratio(
                ex.surface, n, mesh.points, control.points, trials=200, rng=rng
            )
            assert ratio <= mesh.constant + 1e-9, (name, n, ratio, mesh.constant)
            worst = max(worst, ratio / mesh.constant)
    _ok(3, "norming suite", f"4 surfaces x n=1..8 x 200 trials, worst ratio/constant {worst:.3f}")


# --------------------------------------------------------------------------
# 4. dimension oracle equivalence
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _count_base_monomials(N, budget):
    return sum(
        1 for e in itertools.product(range(budget + 1), repeat=N) if sum(e) <= budget
    )


def test_criterion_4_dimension_oracle():
    for N in (1, 2, 3):
        for k in range(1, 5):
            for n in range(0, 13):
                brute = sum(
                    _count_base_monomials(N, n - j) for j in range(min(k - 1, n) + 1)
                )
                assert dim_Pn_hypersurface(N, k, n) == brute
    for N in (1, 2, 3):
        for k in range(1, 5):
            for kbar in range(1, 5):
                for n in range(0, 13):
                    brute = sum(
                        _count_base_monomials(N, n - j1 - j2)
                        for j1 in range(min(k - 1, n) + 1)
                        for j2 in range(min(kbar - 1, n - j1) + 1)
                    )
                    assert dim_Pn_codim2(N, k, kbar, n) == brute
    assert dim_Pn_hypersurface(2, 2, 16) == 289
    _ok(4, "dimension formulas", "match enumeration for N<=3, k,kbar<=4, n<=12; dim_16 = 289")


# --------------------------------------------------------------------------
# 5. pipeline fidelity
# --------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["cubic_surface", "viviani"])
def test_criterion_5_pipeline_fidelity(name):
    res = _sweep(name)
    worst_orth = max(res["orth"].values())
    worst_eval = max(res["evalX"].values())
    assert worst_orth <= 1e-10
    assert worst_eval <= 1e-10
    worst_rep = max(v for rep in res["reproduce"].values() for v in rep.values())
    assert worst_rep <= 1e-8
    _ok(5, f"pipeline fidelity [{name}]",
        f"orth {worst_orth:.1e}, eval {worst_eval:.1e}, reproduction {worst_rep:.1e} (n<=10, B30)")


# --------------------------------------------------------------------------
# 6. benchmark functions: f1 exact by degree 14, f2-f4 decay
# --------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["cubic_surface", "viviani"])
def test_criterion_6_function_errors(name):
    res = _sweep(name)
    for n in (14, 16):
        for m in ("afp", "dlp", "ls"):
            assert res["errors"][n][m]["f1"] <= 1e-8, (name, n, m)
    for tag in ("f2", "f3", "f4"):
        for m in ("afp", "dlp", "ls"):
            assert res["errors"][16][m][tag] < res["errors"][4][m][tag], (name, tag, m)
    worst_f1 = max(res["errors"][n][m]["f1"] for n in (14, 16) for m in ("afp", "dlp", "ls"))
    _ok(6, f"benchmark errors [{name}]", f"f1 worst {worst_f1:.1e} at n in {{14,16}}; f2-f4 decay 16<4")


# --------------------------------------------------------------------------
# 7. Lebesgue estimator
# --------------------------------------------------------------------------


def test_criterion_7_lebesgue():
    nodes = np.array([[math.sqrt(2) / 2], [-math.sqrt(2) / 2]])
    h1 = approx.basis_for_mesh(nodes, 1)
    op1 = approx.fit(approx.INTERP_AFP, h1, np.zeros(2))
    grid = np.linspace(-1, 1, 10_001).reshape(-1, 1)
    lam_1d = approx.lebesgue_constant(op1, h1, grid)
    assert abs(lam_1d - math.sqrt(2)) <= 1e-3

    mesh0 = build_mesh(builtin_example("viviani"), 2)
    h0 = approx.basis_for_mesh(mesh0.points, 0)
    op0 = approx.fit(approx.LEAST_SQUARES, h0, np.ones(h0.card))
    lam_const = approx.lebesgue_constant(op0, h0, mesh0.points)
    assert lam_const == pytest.approx(1.0, abs=1e-12)

    OUT.mkdir(exist_ok=True)
    for name in ("cubic_surface", "viviani"):
        res = _sweep(name)
        rows = []
        for n in range(1, 17):
            for m in ("afp", "dlp", "ls"):
                lam = res["lebesgue"][n][m]
                assert np.isfinite(lam), (name, n, m)
                assert lam >= 1 - 1e-9, (name, n, m)
                rows.append(f"{n},{m},{lam:.16e}")
        csv = OUT / f"acceptance_lebesgue_{name}.csv"
        csv.write_text("n,method,lebesgue\n" + "\n".join(rows) + "\n")
    _ok(7, "lebesgue estimator",
        f"1-d {lam_1d:.6f}~sqrt2, constant-basis {lam_const:.1f}, all finite and >=1 for n<=16; CSV in out/")


# --------------------------------------------------------------------------
# 8. resultant / discriminant unit suite
# --------------------------------------------------------------------------


def test_criterion_8_resultants():
    eq = MonicInY(2, (MultiPoly(1, {(1,): -1.0}), zero_poly(1)))  # y^2 - z
    assert abs(sylvester_resultant_at(eq, (1.0,)) + 4.0) <= 1e-9
    viv2 = builtin_example("viviani").surface.equations[1]
    assert abs(sylvester_resultant_at(viv2, (0.0, 0.0)) + 16.0) <= 1e-9
    assert not in_discriminant_set(eq, (1.0,), tol=1e-10)
    assert in_discriminant_set(eq, (0.0,), tol=1e-10)
    assert in_discriminant_set(eq, (1e-12,), tol=1e-10)
    assert not in_discriminant_set(eq, (1e-12,), tol=1e-13)
    _ok(8, "resultant suite", "Res(y^2-1, 2y) = -4, window base (0,0) -> -16, tol flips membership")
