"""Solvers and convergence harness for Caputo-fractional subdiffusion and
diffusion-wave equations on the unit square.

Space: piecewise-linear Galerkin finite elements on a uniform criss-cross
triangulation. Time: convolution quadrature generated by backward Euler
(first order) or the second-order backward difference with initial
correction, plus the common comparison schemes. Reference solutions come
from Mittag-Leffler eigenfunction expansions, either continuous or built on
the discrete eigenpairs of the FEM matrices.
"""

from .cq import BE, SBD, CqRule, CqWeights, cq_apply, cq_weights, cq_weights_fft
from .meshfem import (
    FemSystem,
    Mesh,
    assemble,
    build_mesh,
    error_norms,
    fem_system,
    h1_seminorm,
    l2_norm,
    l2_project,
    load_vector,
    ritz_project,
)
from .mlf import MlfAccuracyError, MlfParams, mlf, mlf_neg, mlf_scaled_t
from .numkit import (
    CgError,
    NotPositiveDefiniteError,
    SparseMatrix,
    cg_solve,
    cholesky_solve,
    gen_sym_eig,
)
from .reference import (
    CaseSpec,
    ModalExpansion,
    discrete_reference,
    exact_solution,
    get_case,
    modal_coefficients,
)
from .schemes import SchemeConfig, SolutionHistory, TimeGrid, solve
from .baselines import solve_baseline
from .harness import ConvergenceReport, StudyConfig, emit, run_study

__version__ = "0.1.0"
