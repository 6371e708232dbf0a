"""Sparse least squares over the probability simplex.

A sphere-constrained proximal gradient solver (substituting x = y (.) y turns
the simplex into the image of the unit sphere, where an l1 penalty on y is a
genuine sparsity penalty), its stochastic-matrix extensions, convex baseline
methods, and a reproducible benchmark harness.
"""

from .baselines import AdmmParams, PgParams, admm_solve, pg_solve, project_simplex
from .core import (LipschitzBound, ProblemInstance, gradient_f, hadamard,
                   lipschitz_bound, objective_F, objective_f, spectral_norm_sym)
from .manifold import (MatrixInstance, Orientation, check_oblique, gpg_solve_matrix,
                       gradient_p, lipschitz_bound_matrix, objective_p)
from .prox import Branch, ProxInput, ProxSolution, check_sign_compatibility, prox_sphere_l1
from .solver import (GpgParams, SolveResult, Termination, gpg_solve, kkt_residual,
                     nnz)

__version__ = "0.1.0"

__all__ = [
    "AdmmParams", "Branch", "GpgParams", "LipschitzBound", "MatrixInstance",
    "Orientation", "PgParams", "ProblemInstance", "ProxInput", "ProxSolution",
    "SolveResult", "Termination", "admm_solve", "check_oblique",
    "check_sign_compatibility", "gpg_solve", "gpg_solve_matrix", "gradient_f",
    "gradient_p", "hadamard", "kkt_residual", "lipschitz_bound",
    "lipschitz_bound_matrix", "nnz", "objective_F", "objective_f",
    "objective_p", "pg_solve", "project_simplex", "prox_sphere_l1",
    "spectral_norm_sym",
]
