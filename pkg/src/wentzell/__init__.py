"""Numerical laboratory for the half-line heat equation u_t = mu u_x + u_xx/2
with the dynamic boundary condition u_t(t,0) = nu u_x(t,0).

Three mutually independent evaluation routes (closed-form kernel
quadrature, exact Monte Carlo of the probabilistic representation, and a
finite-difference marching solve) plus a brute-force density oracle, all
cross-validated against each other.
"""

from .errors import (
    InvalidPointError,
    NoConvergenceError,
    NotSmoothError,
    OutOfDomainError,
    SingularSystemError,
    StabilityError,
    WentzellError,
)
from .field import ENGINES, Field
from .gaussian import exp_phi, exp_psi, phi, psi, scaled_psi
from .initialdata import (
    ExpDecay,
    GaussianBump,
    InitialDatum,
    TableDatum,
    parse_datum,
)
from .kernels import (
    NU_EQ_MU_RTOL,
    Problem,
    joint_density_g,
    kernel_G,
    kernel_G_plus_Hy,
    kernel_H,
    kernel_H0,
    local_time_integral,
)
from .montecarlo import (
    BLOCK_SIZE,
    MaxEndpointSample,
    McEstimate,
    PathFunctionals,
    estimate_u,
    estimate_v,
    path_functionals,
    sample_max_endpoint,
)
from .pde import PdeGrid, solve_pde, suggested_x_max
from .quadrature import QuadratureSpec, integrate_interval, integrate_semiinf
from .solution import (
    eval_field,
    eval_u_components,
    eval_u_density_oracle,
    eval_u_nonsmooth,
    eval_u_smooth,
)

__all__ = [
    "BLOCK_SIZE",
    "ENGINES",
    "ExpDecay",
    "Field",
    "GaussianBump",
    "InitialDatum",
    "InvalidPointError",
    "MaxEndpointSample",
    "McEstimate",
    "NU_EQ_MU_RTOL",
    "NoConvergenceError",
    "NotSmoothError",
    "OutOfDomainError",
    "PathFunctionals",
    "PdeGrid",
    "Problem",
    "QuadratureSpec",
    "SingularSystemError",
    "StabilityError",
    "TableDatum",
    "WentzellError",
    "estimate_u",
    "estimate_v",
    "eval_field",
    "eval_u_components",
    "eval_u_density_oracle",
    "eval_u_nonsmooth",
    "eval_u_smooth",
    "exp_phi",
    "exp_psi",
    "integrate_interval",
    "integrate_semiinf",
    "joint_density_g",
    "kernel_G",
    "kernel_G_plus_Hy",
    "kernel_H",
    "kernel_H0",
    "local_time_integral",
    "parse_datum",
    "path_functionals",
    "phi",
    "psi",
    "sample_max_endpoint",
    "scaled_psi",
    "solve_pde",
    "suggested_x_max",
    "__version__",
]

__version__ = "0.1.0"
