"""Symbolic scattering states ``h_g[x, z]`` for integer coupling."""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..exchange_algebra import (
    ComplexRational,
    Expression,
    Permutation,
    apply_scattering_calogero,
    divide_by_pair,
    sum_of_squares,
    swap_xz,
    symmetrize,
    vandermonde_bar_chain,
)
from ..exchange_algebra import polynomial as P
from ..exchange_algebra.expression import PlaneWave, difference_power, pairs
from .bessel import bessel_h

DEFAULT_BUDGET = 10**6
MAX_SYMBOLIC_N = 4


@dataclass
class ScatteringState:
    n: int
    g: Fraction
    form: str  # "symbolic" or "bessel"
    expression: Optional[Expression] = None

    def to_dict(self) -> dict:
        d = {"n": self.n, "g": _frac_str(self.g), "form": self.form}
        if self.expression is not None:
            d["expression"] = self.expression.to_dict()
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "ScatteringState":
        expr = Expression.from_dict(d["expression"]) if "expression" in d else None
        return cls(int(d["n"]), Fraction(d["g"]), d["form"], expr)

    def phases(self):
        return asymptotic_phases(self.n, self.g)

    def evaluate(self, x_values, z_values) -> complex:
        if self.form == "symbolic":
            return self.expression.evaluate(x_values, z_values)
        if self.n != 2:
            raise ValueError("the Bessel form exists for two particles only")
        (x1, x2), (z1, z2) = x_values, z_values
        return two_body_factorized(float(self.g), x1, x2, z1, z2)


def _frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def build_scattering_symbolic(n: int, g, budget: int | None = DEFAULT_BUDGET) -> ScatteringState:
    """``(-1)^(g n(n-1)/2) Delta_z^-g bar Delta_{g-1} ... bar Delta_0 S exp(i sum x_i z_i)``."""
    g = Fraction(g)
    if g.denominator != 1 or g < 0:
        raise ValueError("symbolic scattering states need a non-negative integer coupling")
    if n > MAX_SYMBOLIC_N:
        raise ValueError(f"symbolic scattering states are capped at n={MAX_SYMBOLIC_N}")
    gi = int(g)
    e = symmetrize(Expression.plane_wave(n))
    e = vandermonde_bar_chain(e, gi, budget=budget)
    e = e.scale((-1) ** (gi * n * (n - 1) // 2))
    if gi:
        for a, b in pairs(n):
            e = divide_by_pair(e, a + 1, b + 1, gi, family="z")
    e.check_budget(budget)
    return ScatteringState(n, g, "symbolic", e)


def bessel_state(g) -> ScatteringState:
    return ScatteringState(2, Fraction(g), "bessel")


def two_body_factorized(g: float, x1, x2, z1, z2):
    """``h_g((x1-x2)(z1-z2)/2) exp(i (x1+x2)(z1+z2)/2)``."""
    s = (x1 - x2) * (z1 - z2) / 2
    return bessel_h(g, s) * np.exp(1j * (x1 + x2) * (z1 + z2) / 2)


# -- checks -------------------------------------------------------------------


@dataclass
class EigenReport:
    passed: bool
    residual: Expression

    def to_dict(self) -> dict:
        return {"pass": self.passed, "residualTerms": self.residual.term_count()}


def eigen_residual(h: Expression, g) -> Expression:
    """``bar H_g h - 1/2 [z^2] h``."""
    return apply_scattering_calogero(h, g) - h * sum_of_squares(h.n, "z").scale(Fraction(1, 2))


def check_eigen(state: ScatteringState) -> EigenReport:
    if state.form != "symbolic":
        raise ValueError("eigen check needs a symbolic state")
    res = eigen_residual(state.expression, state.g)
    return EigenReport(res.is_zero(), res)


@dataclass
class SwapReport:
    swap_symmetric: bool
    sij_structure: bool
    # per plane-wave permutation: {exponents of s_ij: coefficient}
    decompositions: Dict[Tuple[int, ...], Dict[Tuple[int, ...], ComplexRational]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.swap_symmetric and self.sij_structure

    def to_dict(self) -> dict:
        return {"pass": self.passed, "swapSymmetric": self.swap_symmetric, "sijStructure": self.sij_structure}


def check_swap_symmetry(state: ScatteringState) -> SwapReport:
    if state.form != "symbolic":
        raise ValueError("swap check needs a symbolic state")
    h = state.expression
    swap_ok = swap_xz(h) == h
    decomps = {}
    sij_ok = True
    for tag, (d, poly) in h.parts().items():
        if not isinstance(tag, PlaneWave):
            sij_ok = False
            continue
        dec = sij_decomposition(h.n, tag.perm, d, poly)
        if dec is None:
            sij_ok = False
        else:
            decomps[tag.perm.images] = dec
    return SwapReport(swap_ok, sij_ok, decomps)


@lru_cache(maxsize=None)
def _u_power(n: int, images: Tuple[int, ...], q: int, k: int) -> Tuple:
    """``u_q^k`` with ``u_ij = (x_pi(i) - x_pi(j)) (z_i - z_j)``."""
    a, b = pairs(n)[q]
    pa, pb = images[a] - 1, images[b] - 1
    u = P.mul(P.linear_difference(2 * n, pa, pb), P.linear_difference(2 * n, n + a, n + b))
    return tuple(P.power(u, k, 2 * n).items())


def _u_monomial(n: int, images, expo) -> P.Poly:
    out = P.const(2 * n)
    for q, k in enumerate(expo):
        if k:
            out = P.mul(out, dict(_u_power(n, images, q, k)))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def sij_decomposition(n: int, perm: Permutation, d, poly) -> Optional[Dict[Tuple[int, ...], ComplexRational]]:
    """Write a plane-wave prefactor as ``sum c_a prod u_ij^a_ij`` (integer ``a``).

    ``u_ij = (x_pi(i) - x_pi(j))(z_i - z_j)`` are the dimensionless pair
    variables seen by the plane wave ``pi``. Returns ``None`` when the
    prefactor is not a Laurent polynomial in the ``u_ij``.
    """
    npairs = len(pairs(n))
    m = max(d) if d else 0
    # bring every difference up to power m, giving prefactor = T / (prod_pairs dx dz)^m
    target = dict(poly)
    slots = [(a, b) for a, b in pairs(n)] + [(a + n, b + n) for a, b in pairs(n)]
    for q, (a, b) in enumerate(slots):
        k = m - d[q]
        if k:
            target = P.mul(target, difference_power(n, a, b, k))
    # prod_{i<j} u_ij = sign(pi) * prod (x_i - x_j)(z_i - z_j)
    sign = perm.parity() ** m
    by_degree: Dict[int, P.Poly] = {}
    for k, c in target.items():
        dx, dz = sum(k[:n]), sum(k[n:])
        if dx != dz:
            return None
        by_degree.setdefault(dx, {})[k] = c
    out: Dict[Tuple[int, ...], ComplexRational] = {}
    for deg, part in sorted(by_degree.items()):
        candidates = list(_compositions(deg, npairs))
        columns = [_u_monomial(n, perm.images, a) for a in candidates]
        coeffs = solve_exact(columns, part)
        if coeffs is None:
            return None
        for a, c in zip(candidates, coeffs):
            if c:
                out[tuple(k - m for k in a)] = c * sign
    return out


def solve_exact(columns: List[P.Poly], target: P.Poly) -> Optional[List[ComplexRational]]:
    """Exact coefficients ``c`` with ``sum c_k columns[k] == target``, or ``None``."""
    keys = sorted(set().union(target, *columns))
    row_of = {k: r for r, k in enumerate(keys)}
    ncol = len(columns)
    zero = ComplexRational(0)
    rows = [[zero] * (ncol + 1) for _ in keys]
    for j, col in enumerate(columns):
        for k, c in col.items():
            rows[row_of[k]][j] = c
    for k, c in target.items():
        rows[row_of[k]][ncol] = c
    pivots = []
    r = 0
    for j in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ComplexRational(1) / rows[r][j]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
    if any(row[ncol] for row in rows[r:]):
        return None
    sol = [zero] * ncol
    for i, j in enumerate(pivots):
        sol[j] = rows[i][ncol]
    return sol


# -- asymptotics --------------------------------------------------------------


def asymptotic_phases(n: int, g) -> List[Tuple[Permutation, object]]:
    """``exp(-i pi n(n-1) g/4) exp(i pi g c(pi))`` with ``c`` the inversion count.

    Integer ``g`` gives exact powers of ``i``; otherwise complex floats.
    """
    g = Fraction(g)
    out = []
    for perm in Permutation.all(n):
        quarter_turns = -g * n * (n - 1) / 2 + 2 * g * perm.inversions()
        if quarter_turns.denominator == 1:
            phase = ComplexRational(0, 1) ** (int(quarter_turns) % 4)
        else:
            phase = cmath.exp(1j * math.pi * float(quarter_turns) / 2)
        out.append((perm, phase))
    return out
