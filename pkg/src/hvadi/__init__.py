"""ADI solver library for 2D convection-diffusion equations with mixed
derivative terms: six-stage Hundsdorfer-Verwer time splitting combined with
second-order (CDS) and fourth-order (HO5, HOC) spatial discretizations."""

from .exceptions import (
    BoundaryClosureError,
    ConfigError,
    DivergenceError,
    FieldMismatchError,
    GridError,
    HvadiError,
    InvalidCoefficientsError,
    SamplingError,
    ShapeError,
    SingularMatrixError,
    UnsupportedSchemeError,
)
from .grid import (
    BoundaryKind,
    Grid,
    ScalarField,
    build_grid,
    error_norms,
    restrict,
    sample,
    write_field_csv,
)
from .harness import (
    ConvergenceReport,
    SpaceStudyConfig,
    TimeStudyConfig,
    fit_rate,
    grid_for,
    space_convergence_study,
    time_convergence_study,
)
from .linsolve import BandKind, BandedLineMatrix, LineFactorization, factorize, solve_batch, solve_line
from .problems import (
    ProblemSpec,
    available_problems,
    builtin_dirichlet_manufactured,
    builtin_periodic,
    get_problem,
    pde_residual,
)
from .schemes import (
    DiffusionTensor,
    SchemeContext,
    SchemeKind,
    build_scheme_context,
    eval_F0,
    eval_F1_explicit,
    eval_F2_explicit,
    implicit_stage_solve,
)
from .splitting import SplittingConfig, StageTrace, hv_step, hv_step_traced, integrate
from .stencils import (
    Axis,
    ExtendedField,
    d1_central2,
    d1_five,
    d2_central2,
    d2_five,
    dxy_five,
    extend_ghosts,
)

__version__ = "0.1.0"
