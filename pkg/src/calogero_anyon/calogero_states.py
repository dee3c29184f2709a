"""Harmonic Calogero eigenstates built with Dunkl ladder operators.

Stored bodies are wedge representatives: for integer ``g`` the body is
``Delta^g * P(x) * exp(-[x^2]/2)`` with ``Delta = prod_{i<j}(x_i - x_j)`` and
``P`` symmetric, so the representative is symmetric for even ``g`` and
antisymmetric for odd ``g``. The physical bosonic state is its symmetric
extension ``|Delta|^g P exp(-[x^2]/2)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import List, Sequence, Tuple

from .exchange_algebra import (
    BudgetExceeded,
    ComplexRational,
    Expression,
    apply_dunkl,
    apply_scattering_calogero,
    sum_of_squares,
)
from .exchange_algebra.expression import Gaussian

DEFAULT_BUDGET = 10**6


def _as_int_coupling(g) -> int:
    gf = Fraction(g)
    if gf.denominator != 1 or gf < 0:
        raise ValueError(f"symbolic states need a non-negative integer coupling, got {g}")
    return int(gf)


def check_ell(ell: Sequence[int], n: int | None = None) -> Tuple[int, ...]:
    ell = tuple(int(v) for v in ell)
    if n is not None and len(ell) != n:
        raise ValueError(f"ell must have {n} entries, got {len(ell)}")
    if any(v < 0 for v in ell):
        raise ValueError("ell entries must be non-negative")
    if any(a > b for a, b in zip(ell, ell[1:])):
        raise ValueError("ell must be nondecreasing")
    return ell


def calogero_energy(n: int, g, ell: Sequence[int]) -> Fraction:
    """``sum(ell) + g n(n-1)/2 + n/2`` at unit trap frequency."""
    return sum(ell) + Fraction(g) * n * (n - 1) / 2 + Fraction(n, 2)


def representative_coupling(g) -> Fraction:
    """Literal Dunkl coupling acting on a wedge representative.

    The representative of a bosonic state at integer ``g`` carries exchange
    parity ``(-1)^g``; moving the sign of ``Delta`` through ``M_ij`` turns the
    physical ``d_i - g sum M_ij/(x_i - x_j)`` into the literal operator with
    coupling ``(-1)^(g+1) g``. Non-integer ``g`` keeps ``-g``.
    """
    g = Fraction(g)
    if g.denominator == 1:
        return g if int(g) % 2 else -g
    return -g


@dataclass
class CalogeroState:
    n: int
    g: Fraction
    ell: Tuple[int, ...]
    body: Expression
    energy: Fraction
    # the physical state is body * pi**pi_power
    pi_power: Fraction = field(default=Fraction(0))

    def header(self) -> dict:
        return {
            "n": self.n,
            "g": _frac_str(self.g),
            "ell": list(self.ell),
            "energy": _frac_str(self.energy),
            "piPower": _frac_str(self.pi_power),
        }

    def to_dict(self) -> dict:
        d = self.header()
        d["body"] = self.body.to_dict()
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "CalogeroState":
        return cls(int(d["n"]), Fraction(d["g"]), tuple(d["ell"]), Expression.from_dict(d["body"]),
                   Fraction(d["energy"]), Fraction(d.get("piPower", "0")))

    def evaluate(self, x_values) -> complex:
        return self.body.evaluate(x_values) * float(_pi_power(self.pi_power))


def _frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pi_power(p: Fraction) -> float:
    from math import pi
    return pi ** float(p)


def ground_state(n: int, g) -> CalogeroState:
    """``Delta^g exp(-[x^2]/2)`` with energy ``g n(n-1)/2 + n/2``."""
    gi = _as_int_coupling(g)
    body = Expression.vandermonde(n, "x", gi) * Expression.gaussian(n, Fraction(1, 2))
    return CalogeroState(n, Fraction(gi), (0,) * n, body, calogero_energy(n, gi, (0,) * n))


def raise_(e: Expression, i: int, g, coupling=None) -> Expression:
    """``a_i^+ e = exp([x^2]/2) Pi_i exp(-[x^2]/2) e``."""
    _require_gaussian(e)
    c = representative_coupling(g) if coupling is None else Fraction(coupling)
    out = apply_dunkl(e.with_gaussian_shift(Fraction(1, 2)), i, c)
    return out.with_gaussian_shift(Fraction(-1, 2))


def lower(e: Expression, i: int, g, coupling=None) -> Expression:
    """``a_i e = exp(-[x^2]/2) Pi_i exp([x^2]/2) e``."""
    _require_gaussian(e)
    c = representative_coupling(g) if coupling is None else Fraction(coupling)
    out = apply_dunkl(e.with_gaussian_shift(Fraction(-1, 2)), i, c)
    return out.with_gaussian_shift(Fraction(1, 2))


def _require_gaussian(e: Expression) -> None:
    if not any(isinstance(t, Gaussian) for t in e.tags()):
        raise ValueError("ladder operators need an input carrying a Gaussian factor")


def _arrangements(ell: Tuple[int, ...]) -> List[Tuple[Tuple[int, ...], int]]:
    """Distinct assignments of the ``ell`` values to particles, with multiplicity."""
    n = len(ell)
    distinct = sorted(set(permutations(ell)))
    stab = factorial(n) // len(distinct)
    return [(a, stab) for a in distinct]


def build_state(n: int, g, ell: Sequence[int], budget: int | None = DEFAULT_BUDGET) -> CalogeroState:
    """Rescaled eigenstate ``2^(g n(n-1)/2) pi^(-n/2) sum_pi prod_i (i a^+_pi(i))^ell_i psi_0``.

    The ``pi^(-n/2)`` factor is kept in :attr:`CalogeroState.pi_power`.
    """
    ell = check_ell(ell, n)
    gi = _as_int_coupling(g)
    c = representative_coupling(gi)
    # work at Gaussian rate 1 so each a^+ is a bare Dunkl operator
    base = Expression.vandermonde(n, "x", gi) * Expression.gaussian(n, 1)
    cache = {(): base}

    def apply_powers(powers: Tuple[int, ...]) -> Expression:
        if powers in cache:
            return cache[powers]
        prev = apply_powers(powers[:-1])
        k = len(powers)
        out = prev
        for _ in range(powers[-1]):
            out = apply_dunkl(out, k, c).check_budget(budget)
        cache[powers] = out
        return out

    total = Expression.zero(n)
    for arrangement, mult in _arrangements(ell):
        term = apply_powers(arrangement)
        total = (total + term.scale(mult)).check_budget(budget)
    scale = ComplexRational(0, 1) ** sum(ell) * 2 ** (gi * n * (n - 1) // 2)
    body = total.scale(scale).with_gaussian_shift(Fraction(-1, 2))
    return CalogeroState(n, Fraction(gi), ell, body, calogero_energy(n, gi, ell), Fraction(-n, 2))


def apply_harmonic_calogero(e: Expression, g) -> Expression:
    """``-1/2 sum d_i^2 + sum_{i<j} g(g-1)/(x_i - x_j)^2 + 1/2 sum x_i^2``."""
    return apply_scattering_calogero(e, g) + e * sum_of_squares(e.n, "x").scale(Fraction(1, 2))


def eigen_residual(state: CalogeroState) -> Expression:
    return apply_harmonic_calogero(state.body, state.g) - state.body.scale(state.energy)


# -- two-body deformed Hermite polynomials ------------------------------------


@dataclass
class DeformedHermite:
    """``H_{2l,g}(x/sqrt 2)`` as exact coefficients of ``x^0, x^1, ...``."""

    ell: int
    g: Fraction
    coefficients: List[Fraction]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        out = 0
        for c in reversed(self.coefficients):
            out = out * x + float(c)
        return out

    def derivative_coefficients(self) -> List[Fraction]:
        return [k * c for k, c in enumerate(self.coefficients)][1:] or [Fraction(0)]

    def derivative(self, x):
        out = 0
        for c in reversed(self.derivative_coefficients()):
            out = out * x + float(c)
        return out


def _hermite_step(p: List[Fraction], g: Fraction) -> List[Fraction]:
    """``2 x^-g e^{x^2/2} (d^2 - g(g-1)/x^2)(x^g e^{-x^2/2} p)`` on coefficient lists.

    Equals ``2 [p'' + 2(g/x - x) p' + (x^2 - 2g - 1) p]``; ``p`` is even so
    ``p'/x`` stays polynomial.
    """
    deg = len(p) - 1
    out = [Fraction(0)] * (deg + 3)
    for k, c in enumerate(p):
        if not c:
            continue
        if k >= 2:
            out[k - 2] += c * (k * (k - 1) + 2 * g * k)
        elif k == 1:
            raise ValueError("odd coefficient in an even polynomial")
        out[k] += c * (-2 * k - 2 * g - 1)
        out[k + 2] += c
    out = [2 * c for c in out]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def deformed_hermite(ell: int, g) -> DeformedHermite:
    if ell < 0:
        raise ValueError("ell must be non-negative")
    g = Fraction(g)
    p = [Fraction(1)]
    for _ in range(ell):
        p = _hermite_step(p, g)
    return DeformedHermite(ell, g, p)


__all__ = [
    "BudgetExceeded",
    "CalogeroState",
    "DEFAULT_BUDGET",
    "DeformedHermite",
    "apply_harmonic_calogero",
    "build_state",
    "calogero_energy",
    "check_ell",
    "deformed_hermite",
    "eigen_residual",
    "ground_state",
    "lower",
    "raise_",
    "representative_coupling",
]
