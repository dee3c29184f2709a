"""Quadrature engines and the kernel-map verifications."""

from .intertwining import (
    IntertwinerConstantReport,
    IntertwiningReport,
    default_test_expressions,
    intertwiner_constant_check,
    intertwining_relation_check,
)
from .quadrature import (
    QuadratureGrid,
    gauss_hermite_tensor,
    gauss_legendre_panels,
    generalized_laguerre,
    integrate,
    thread_count,
    wedge_filtered,
)
from .two_body import (
    BoundaryReport,
    QuadratureError,
    boundary_term_check,
    free_target,
    gauss_integral_2body_free,
    kernel_integral_2body,
    kernel_target,
)
from .wedge import (
    Integrand,
    MappingReport,
    VandermondeReport,
    both_strategies,
    choose_radius,
    sample_z,
    vandermonde_integral,
    vandermonde_rhs,
    verify_mapping,
    wedge_integrate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
