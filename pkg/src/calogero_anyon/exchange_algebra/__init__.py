"""Exact symbolic engine: expressions, exchanges, Dunkl and Vandermonde operators."""

from .numbers import ComplexRational, Permutation, I_UNIT, ONE
from .expression import (
    BudgetExceeded,
    Expression,
    Gaussian,
    NO_TAG,
    NoTag,
    NumericExpression,
    PlaneWave,
    Term,
    eval_numeric,
    make_gaussian,
)
from .operators import (
    NotDivisible,
    SymmetryError,
    antisymmetrize,
    apply_dunkl,
    apply_exchange,
    apply_permutation,
    apply_scattering_calogero,
    apply_vandermonde_bar,
    apply_vandermonde_hat,
    derivative,
    divide_by_difference,
    divide_by_pair,
    divide_by_vandermonde,
    dunkl_commutator,
    exchange_parity,
    laplacian,
    sum_of_squares,
    swap_xz,
    symmetrize,
    vandermonde_bar_chain,
    vandermonde_constant,
)

__all__ = [name for name in dir() if not name.startswith("_")]
