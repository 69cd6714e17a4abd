"""Norming polynomial meshes on compact pieces of algebraic sets.

Base meshes on a segment or disk are lifted through the fibers of one or two
monic polynomial equations, producing certified norming meshes that feed a
discrete-orthonormal approximation pipeline (Approximate Fekete and Discrete
Leja interpolation, least squares, Lebesgue constants).
"""

from .basemesh import BaseDomain, BaseMesh, cdisk_mesh, generate, rdisk_mesh, segment_mesh
from .errors import AlgmeshError
from .lift import (
    CODIM2_GENERAL,
    CODIM2_SPECIFIC,
    HYPER_GENERAL,
    HYPER_SPECIFIC,
    NormedMesh,
    dim_Pn,
    dim_Pn_codim2,
    dim_Pn_hypersurface,
    ell_codim2_general,
    ell_codim2_headline,
    ell_codim2_specific,
    ell_hyper_general,
    ell_hyper_specific,
    empirical_norming_ratio,
    find_point_outside_discriminant,
    lift_mesh,
    mesh_constant_bound,
    read_points_csv,
    write_mesh_csv,
)
from .polycore import (
    MonicInY,
    MultiPoly,
    SurfaceSpec,
    eval_poly,
    fiber_roots,
    in_discriminant_set,
    kth_roots,
    load_surface,
    surface_from_json,
    sylvester_resultant_at,
    total_degree,
)
from .surfaces import (
    BUILTIN_NAMES,
    BuiltinExample,
    build_control_mesh,
    build_mesh,
    builtin_example,
    constant_bound,
    custom_example,
)

__version__ = "0.1.0"
