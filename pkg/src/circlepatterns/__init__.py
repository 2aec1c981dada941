"""Generalized hyperbolic circle patterns with prescribed curvature.

Compute circle-pattern data (coordinates, angles, edge lengths, curvature)
on cellularly decomposed surfaces for the pattern types (1,1,0), (0,0,1),
(0,0,0) and (0,0,-1): feasibility of a curvature target, a convex Newton
solver, and the combinatorial Ricci and Calabi flows.

The per-edge kernels run on a compiled extension when available and fall
back to pure numpy otherwise; see :mod:`circlepatterns.kernels`.
"""

__version__ = "0.1.0"

from .cellcomplex import PatternComplex, edge_neighborhood, torus_grid
from .curvature import (
    CurvatureReport,
    calabi_energy,
    curvature,
    curvature_vector,
    laplacian,
    ricci_energy_gradient,
    ricci_energy_value,
)
from .feasibility import (
    FeasibilityReport,
    SubsetWitness,
    check_exhaustive,
    check_maxflow,
    check_positivity,
    check_target,
)
from .files import (
    Problem,
    ProblemFormatError,
    build_result,
    format_problem,
    load_problem,
    load_result,
    parse_problem,
    problem_hash,
    save_problem,
    save_result,
    verify_result,
)
from .geometry import (
    DomainError,
    PatternType,
    angles_00d,
    angles_110,
    edge_length_00d,
    edge_length_110,
    partials_00d,
    partials_110,
    s_factor,
)
from .solve import (
    FlowOptions,
    NonconvergenceError,
    SolveOptions,
    SolveResult,
    Trajectory,
    calabi_flow,
    closed_form_solve_00d,
    ricci_flow,
    solve_newton,
)

__all__ = [
    "__version__",
    "PatternComplex",
    "edge_neighborhood",
    "torus_grid",
    "CurvatureReport",
    "calabi_energy",
    "curvature",
    "curvature_vector",
    "laplacian",
    "ricci_energy_gradient",
    "ricci_energy_value",
    "FeasibilityReport",
    "SubsetWitness",
    "check_exhaustive",
    "check_maxflow",
    "check_positivity",
    "check_target",
    "Problem",
    "ProblemFormatError",
    "build_result",
    "format_problem",
    "load_problem",
    "load_result",
    "parse_problem",
    "problem_hash",
    "save_problem",
    "save_result",
    "verify_result",
    "DomainError",
    "PatternType",
    "angles_00d",
    "angles_110",
    "edge_length_00d",
    "edge_length_110",
    "partials_00d",
    "partials_110",
    "s_factor",
    "FlowOptions",
    "NonconvergenceError",
    "SolveOptions",
    "SolveResult",
    "Trajectory",
    "calabi_flow",
    "closed_form_solve_00d",
    "ricci_flow",
    "solve_newton",
]
