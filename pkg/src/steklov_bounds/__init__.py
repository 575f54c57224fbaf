"""Lower bounds for the first Steklov eigenvalue from collar curvature data,
with a numerical oracle on rotationally symmetric model balls."""
from .errors import (ConvergenceError, DomainError, InapplicableError, InvalidInputError,
                     OracleError)
from .kernels import (Kernel, delta_sup, e_kernel, fixed_point_epsilon, fixed_point_epsilon_mean,
                      iterate_epsilon, iterate_epsilon_mean, kernel_E, kernel_F, kernel_P, kernel_Q,
                      kernel_T, optimize_delta, p_kernel)
from .models import WarpedProfile, curvature_data, parallel_mean_curvature_exact
from .oracle import SteklovEstimate, mode_sigma, steklov_spectrum
from .riccati import RiccatiSolution, integrate_riccati, parallel_H_upper, phi_closed, psi_closed
from .theorems import (BoundReport, GeometricData, Theorem, all_bounds, best_bound,
                       corollary_B_rolling_lower, escobar_baselines, spectral_gap,
                       theorem_A_bound, theorem_C_bound, theorem_corB_bound, theorem_E_bound,
                       theorem_F_bound)
from .verification import SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "ConvergenceError", "DomainError", "GeometricData", "InapplicableError",
    "InvalidInputError", "Kernel", "OracleError", "RiccatiSolution", "SteklovEstimate",
    "SuiteReport", "Theorem", "WarpedProfile", "all_bounds", "best_bound",
    "corollary_B_rolling_lower", "curvature_data", "delta_sup", "e_kernel", "escobar_baselines",
    "fixed_point_epsilon", "fixed_point_epsilon_mean", "integrate_riccati", "iterate_epsilon",
    "iterate_epsilon_mean", "kernel_E", "kernel_F", "kernel_P", "kernel_Q", "kernel_T",
    "mode_sigma", "optimize_delta", "p_kernel", "parallel_H_upper",
    "parallel_mean_curvature_exact", "phi_closed", "psi_closed", "run_suite", "spectral_gap",
    "steklov_spectrum", "theorem_A_bound", "theorem_C_bound", "theorem_corB_bound",
    "theorem_E_bound", "theorem_F_bound",
]
