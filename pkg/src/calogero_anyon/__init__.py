"""Calogero eigenstates, scattering states and their kernel map onto LLL anyon states."""

__version__ = "0.1.0"

from .anyon_states import SpectrumParams, count_degeneracy, energy, lll_state
from .calogero_states import build_state, deformed_hermite, ground_state
from .exchange_algebra import Expression, apply_dunkl, apply_exchange, apply_vandermonde_bar
from .kernel_map import (
    boundary_term_check,
    gauss_integral_2body_free,
    kernel_integral_2body,
    vandermonde_integral,
    verify_mapping,
)
from .scattering import bessel_h, build_scattering_symbolic, check_eigen, check_swap_symmetry

__all__ = [name for name in dir() if not name.startswith("_")]
