"""Scattering Calogero states: symbolic ``h_g[x, z]`` and the two-body Bessel form."""

from .bessel import (
    ConvergenceError,
    bessel_h,
    bessel_h_with_derivative,
    irregular_h,
    series_coefficient,
    switchover_discrepancy,
)
from .symbolic import (
    EigenReport,
    ScatteringState,
    SwapReport,
    asymptotic_phases,
    bessel_state,
    build_scattering_symbolic,
    check_eigen,
    check_swap_symmetry,
    eigen_residual,
    sij_decomposition,
    two_body_factorized,
)

__all__ = [name for name in dir() if not name.startswith("_")]
