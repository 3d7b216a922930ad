"""Weak-penalty Calderon boundary element method for exterior Helmholtz problems."""

from ._core import (
    CapacityError,
    ConfigError,
    ContractError,
    DofSpace,
    Error,
    HypothesisError,
    IoError,
    Mesh,
    SolveReport,
    TraceSolution,
    assemble_boundary_operator,
    assemble_mass,
    build_icosphere,
    classify_pair,
    evaluate_representation,
    gauss_triangle,
    green_kernel,
    icosphere_level_for_h,
    mesh_stats,
    point_source_field,
    point_source_neumann_trace,
    read_mesh,
    robin_wavenumber_oracle,
    run_experiment,
    singular_rule,
    solve_point_source,
    sphere_symbol_oracle,
    write_mesh,
)

__all__ = [name for name in dir() if not name.startswith("_")]
