"""Singly periodic maximal graphs with cone-like singularities.

Constructs the surfaces from explicit square-root Weierstrass data on the
punctured plane, verifies their defining properties numerically (periods,
conformality, singular set, cone apexes and directions, graph property),
enumerates the discrete configuration catalog, evaluates the doubly
periodic minimal-surface data sharing the same curve, and exports
triangulated meshes.
"""

from .catalog import ConeConfig, build_catalog, canonicalize, classes_for_type, enumerate_types, instantiate
from .core import (
    BranchedValue,
    FormTriple,
    GaussValue,
    branch_w,
    end_value_w0,
    gauss,
    hopf,
    metric_factor,
    normalize_horizontal_end,
    phi,
    w_squared,
)
from .errors import MaxconeError
from .integrate import (
    ImmersionSample,
    PathSpec,
    PeriodVector,
    apex,
    immersion,
    integrate_path,
    loop_period,
)
from .mesh import GraphMesh, GridSpec, assemble, build_mesh, export_obj, export_ply, graph_check, sample_fundamental
from .minimal import MinimalData, PeriodLattice, b2n_normalize, measure_period, standard_loops
from .params import SurfaceParams, validate_params
from .report import ToleranceLadder, run_checks
from .singular import ConeReport, SingularComponent, classify_cone, nondegeneracy, singular_set, stereographic
from .version import __version__

__all__ = [
    "BranchedValue",
    "ConeConfig",
    "ConeReport",
    "FormTriple",
    "GaussValue",
    "GraphMesh",
    "GridSpec",
    "ImmersionSample",
    "MaxconeError",
    "MinimalData",
    "PathSpec",
    "PeriodLattice",
    "PeriodVector",
    "SingularComponent",
    "SurfaceParams",
    "ToleranceLadder",
    "apex",
    "assemble",
    "b2n_normalize",
    "branch_w",
    "build_mesh",
    "canonicalize",
    "build_catalog",
    "classes_for_type",
    "classify_cone",
    "end_value_w0",
    "enumerate_types",
    "export_obj",
    "export_ply",
    "gauss",
    "graph_check",
    "hopf",
    "immersion",
    "instantiate",
    "integrate_path",
    "loop_period",
    "measure_period",
    "metric_factor",
    "nondegeneracy",
    "normalize_horizontal_end",
    "phi",
    "run_checks",
    "sample_fundamental",
    "singular_set",
    "standard_loops",
    "stereographic",
    "validate_params",
    "w_squared",
]
