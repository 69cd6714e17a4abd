"""Experiment driver: configuration, degree sweeps and CSV reports.

Everything the CLI does is implemented here as plain functions returning row
lists, so the same sweeps are usable from Python and in tests.  CSV bodies
are byte-deterministic for a fixed configuration and seed; wall-clock
seconds go in the last column and are excluded from that guarantee.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import approx
from .basemesh import CDISK, RDISK, SEGMENT, BaseDomain, generate
from .errors import LambdaTooSmall
from .lift import NormedMesh, dim_Pn, empirical_norming_ratio, lift_mesh
from .polycore import load_surface
from .surfaces import BuiltinExample, builtin_example, custom_example, BUILTIN_NAMES

METHOD_KINDS = {
    "afp": approx.INTERP_AFP,
    "dlp": approx.INTERP_DLP,
    "ls": approx.LEAST_SQUARES,
}

DEFAULT_FUNCTIONS = ("f1", "f2", "f3", "f4")


@dataclass(frozen=True)
class ExperimentConfig:
    """One reproducible run: surface, degrees, methods, functions, seed."""

    surface: str = "cubic_surface"
    degrees: tuple = (2, 4, 6, 8, 10, 12, 14, 16)
    lam: int | None = None
    methods: tuple = ("afp", "dlp", "ls")
    functions: tuple = DEFAULT_FUNCTIONS
    control_degree: int = 30
    trials: int = 200
    seed: int = 0
    out: str = "out"
    plots: bool = True
    ell_offset: int = 0
    base_domain: dict | None = None
    lambda_factor: float = 2.0

    def validate(self):
        if not self.degrees:
            raise ValueError("degree range is empty")
        if not self.methods:
            raise ValueError("no methods selected")
        if not self.functions:
            raise ValueError("no test functions selected")
        bad = [m for m in self.methods if m not in METHOD_KINDS]
        if bad:
            raise ValueError(f"unknown methods {bad}; choose from {sorted(METHOD_KINDS)}")
        bad = [f for f in self.functions if f not in DEFAULT_FUNCTIONS]
        if bad:
            raise ValueError(f"unknown functions {bad}; choose from {list(DEFAULT_FUNCTIONS)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.control_degree < 0:
            raise ValueError("control degree must be nonnegative")


def parse_range(text):
    """Parse 'start:step:stop', 'start:stop' (step 1) or a single integer."""
    parts = str(text).split(":")
    if len(parts) == 1:
        return (int(parts[0]),)
    if len(parts) == 2:
        start, stop = int(parts[0]), int(parts[1])
        step = 1
    elif len(parts) == 3:
        start, step, stop = (int(p) for p in parts)
    else:
        raise ValueError(f"bad degree range {text!r}; use start:step:stop")
    if step <= 0 or stop < start:
        raise ValueError(f"bad degree range {text!r}")
    return tuple(range(start, stop + 1, step))


def config_from_json(path) -> ExperimentConfig:
    with open(path) as fh:
        obj = json.load(fh)
    cfg = ExperimentConfig()
    fields = {}
    for key in (
        "surface", "lam", "control_degree", "trials", "seed", "out",
        "plots", "ell_offset", "base_domain", "lambda_factor",
    ):
        if key in obj:
            fields[key] = obj[key]
    if "degrees" in obj:
        d = obj["degrees"]
        fields["degrees"] = tuple(int(x) for x in d) if isinstance(d, list) else parse_range(d)
    for key in ("methods", "functions"):
        if key in obj:
            fields[key] = tuple(obj[key])
    return replace(cfg, **fields)


def _domain_from_dict(obj) -> BaseDomain:
    kind = obj["kind"]
    if kind == SEGMENT:
        return BaseDomain(SEGMENT, a=complex(obj["a"]), b=complex(obj["b"]))
    if kind == CDISK:
        return BaseDomain(CDISK, a=complex(obj.get("center", 0)), radius=float(obj["radius"]))
    if kind == RDISK:
        cx, cy = obj.get("center", (0.0, 0.0))
        return BaseDomain(RDISK, center=(float(cx), float(cy)), radius=float(obj["radius"]))
    raise ValueError(f"unknown base domain kind {kind!r}")


def resolve_example(cfg: ExperimentConfig) -> BuiltinExample:
    """Builtin example by id, or a custom surface file plus base domain."""
    if cfg.surface in BUILTIN_NAMES:
        return builtin_example(cfg.surface)
    surface = load_surface(cfg.surface)
    if cfg.base_domain is None:
        raise ValueError("custom surfaces need base_domain in the configuration")
    domain = _domain_from_dict(cfg.base_domain)
    factor = cfg.lambda_factor
    rule = lambda ell: max(int(math.ceil(factor * ell)), ell + 1)
    from pathlib import Path

    return custom_example(surface, domain, rule, name=Path(cfg.surface).stem)


# ---------------------------------------------------------------------------
# Mesh building with overrides
# ---------------------------------------------------------------------------


def build_mesh_for(example: BuiltinExample, n, lam=None, ell_offset=0) -> NormedMesh:
    ell = example.ell(n) + ell_offset
    if ell < 0:
        raise ValueError(f"ell offset pushes the base index below zero at n={n}")
    lam = example.lam_for(ell) if lam is None else int(lam)
    if lam <= ell:
        raise LambdaTooSmall(f"lambda={lam} must exceed the base index ell={ell}")
    base = generate(example.domain, lam, ell)
    mesh = lift_mesh(
        example.surface, base, n if ell_offset >= 0 else 0,
        construction=example.construction, surface_id=example.name,
    )
    if ell_offset:
        return replace(mesh, n=n, meta=dict(mesh.meta, ell_offset=ell_offset))
    return mesh


def build_mesh_at_index(example: BuiltinExample, index, n_label=0) -> NormedMesh:
    """Lift the base mesh generated at an explicit degree index (control meshes)."""
    index = max(1, index)
    base = generate(example.domain, example.lam_for(index), index)
    mesh = lift_mesh(
        example.surface, base, 0,
        construction=example.construction, surface_id=example.name,
    )
    return replace(mesh, n=n_label)


def _handle_for(example, mesh, n, rank_tol=1e-10):
    hint = dim_Pn(example.surface, n) if example.surface.dim_formula_exact else None
    return approx.basis_for_mesh(mesh.points, n, eta_hint=hint, rank_tol=rank_tol)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def run_dims(cfg: ExperimentConfig):
    """Rows (n, dim, note); note flags surfaces outside the formula hypotheses."""
    example = resolve_example(cfg)
    exact = example.surface.dim_formula_exact
    rows = []
    for n in cfg.degrees:
        note = "" if exact else "use numeric rank"
        rows.append({"n": n, "dim": dim_Pn(example.surface, n), "note": note})
    return rows


def run_verify_norming(cfg: ExperimentConfig):
    """Empirical norming ratios against the certified constant, per degree."""
    example = resolve_example(cfg)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n in cfg.degrees:
        mesh = build_mesh_for(example, n, cfg.lam, cfg.ell_offset)
        control = build_mesh_at_index(example, 3 * example.ell(n), n)
        ratio = empirical_norming_ratio(
            example.surface, n, mesh.points, control.points, trials=cfg.trials, rng=rng
        )
        if mesh.constant is None:
            status = "advisory"
        else:
            status = "pass" if ratio <= mesh.constant + 1e-9 else "fail"
        rows.append(
            {
                "n": n,
                "ell": mesh.ell,
                "lambda": mesh.base.lam,
                "card": mesh.card,
                "constant": mesh.constant,
                "empirical": ratio,
                "status": status,
            }
        )
    return rows


def _control_for(example, cfg):
    control = build_mesh_for(example, cfg.control_degree, None, 0)
    return control


def run_approx(cfg: ExperimentConfig):
    """Errors and Lebesgue constants for every (degree, method, function)."""
    example = resolve_example(cfg)
    if not example.supports_test_functions:
        raise ValueError(
            f"surface {example.name!r} is not a real 3-d set; the benchmark functions do not apply"
        )
    control = _control_for(example, cfg)
    rows = []
    for n in cfg.degrees:
        mesh = build_mesh_for(example, n, cfg.lam, 0)
        handle = _handle_for(example, mesh, n)
        V_ctrl = approx.ortho_eval(handle, control.points)
        for m in cfg.methods:
            kind = METHOD_KINDS[m]
            nodes = approx.select_nodes(kind, handle)
            op_last = None
            for tag in cfg.functions:
                real_tag = example.f4_tag if tag == "f4" else tag
                fX = approx.test_functions(real_tag, handle.X)
                t0 = time.perf_counter()
                op = approx.fit(kind, handle, fX, node_indices=nodes)
                fC = approx.test_functions(real_tag, control.points)
                err = approx.rel_error(op, fC, control.points, V_control=V_ctrl)
                op_last = op
                rows.append(
                    {
                        "n": n,
                        "method": m,
                        "f_tag": tag,
                        "rel_error": err,
                        "lebesgue": None,
                        "card_nodes": op.card_nodes,
                        "seconds": time.perf_counter() - t0,
                    }
                )
            leb = approx.lebesgue_constant(op_last, handle, V_control=V_ctrl)
            for r in rows[-len(cfg.functions):]:
                r["lebesgue"] = leb
    return rows


def run_lebesgue(cfg: ExperimentConfig):
    """Lebesgue constants per (degree, method) on the control mesh."""
    example = resolve_example(cfg)
    control = _control_for(example, cfg)
    rows = []
    for n in cfg.degrees:
        mesh = build_mesh_for(example, n, cfg.lam, 0)
        handle = _handle_for(example, mesh, n)
        V_ctrl = approx.ortho_eval(handle, control.points)
        ones = np.ones(handle.card)
        for m in cfg.methods:
            t0 = time.perf_counter()
            kind = METHOD_KINDS[m]
            op = approx.fit(kind, handle, ones)
            leb = approx.lebesgue_constant(op, handle, V_control=V_ctrl)
            rows.append(
                {
                    "n": n,
                    "method": m,
                    "lebesgue": leb,
                    "card_nodes": op.card_nodes,
                    "seconds": time.perf_counter() - t0,
                }
            )
    return rows


def run_nodes(cfg: ExperimentConfig, method="afp"):
    """Extracted node sets per degree, as (n, node point array) pairs."""
    example = resolve_example(cfg)
    kind = METHOD_KINDS[method]
    out = []
    for n in cfg.degrees:
        mesh = build_mesh_for(example, n, cfg.lam, 0)
        handle = _handle_for(example, mesh, n)
        idx = approx.select_nodes(kind, handle)
        out.append((n, mesh, handle.X[idx]))
    return out


# ---------------------------------------------------------------------------
# CSV writers
# ---------------------------------------------------------------------------


def _fmt(v):
    if v is None:
        return "uncertified"
    if isinstance(v, float):
        return f"{v:.16e}"
    return str(v)


def write_rows_csv(path, rows, columns):
    with open(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for r in rows:
            fh.write(",".join(_fmt(r[c]) for c in columns) + "\n")


DIMS_COLUMNS = ("n", "dim", "note")
VERIFY_COLUMNS = ("n", "ell", "lambda", "card", "constant", "empirical", "status")
APPROX_COLUMNS = ("n", "method", "f_tag", "rel_error", "lebesgue", "card_nodes", "seconds")
LEBESGUE_COLUMNS = ("n", "method", "lebesgue", "card_nodes", "seconds")
