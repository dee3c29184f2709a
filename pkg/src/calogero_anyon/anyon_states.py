"""Linear (lowest-Landau-level) anyon states and their spectra."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import isqrt, sqrt
from typing import Iterator, List, Sequence, Tuple, Union

from .calogero_states import check_ell
from .exchange_algebra import ComplexRational, Expression
from .exchange_algebra.expression import NO_TAG, den_size

Number = Union[int, Fraction, float]


def _exact(value) -> Union[Fraction, float]:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    return float(value)


def _exact_sqrt(q):
    if isinstance(q, Fraction) and q >= 0:
        rn, rd = isqrt(q.numerator), isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return Fraction(rn, rd)
    return sqrt(float(q))


@dataclass(frozen=True)
class SpectrumParams:
    """Trap frequency ``omega`` and half cyclotron frequency ``omega_c``."""

    omega: Number = 1
    omega_c: Number = 0

    def __post_init__(self):
        object.__setattr__(self, "omega", _exact(self.omega))
        object.__setattr__(self, "omega_c", _exact(self.omega_c))
        if self.omega < 0 or self.omega_c < 0:
            raise ValueError("frequencies must be non-negative")
        if self.omega == 0 and self.omega_c == 0:
            raise ValueError("at least one of omega, omega_c must be positive")

    @property
    def omega_t(self):
        """``sqrt(omega_c^2 + omega^2)``; exact whenever it is rational."""
        if self.omega_c == 0:
            return self.omega
        if self.omega == 0:
            return self.omega_c
        return _exact_sqrt(self.omega_c ** 2 + self.omega ** 2)

    @property
    def omega_eff(self):
        """Level spacing ``omega_t - omega_c`` of the linear states."""
        return self.omega_t - self.omega_c


def angular_momentum(n: int, alpha, ell: Sequence[int]):
    return sum(ell) + _exact(alpha) * n * (n - 1) / 2


def energy(n: int, alpha, ell: Sequence[int], params: SpectrumParams | None = None):
    """``(omega_t - omega_c) [sum ell + alpha n(n-1)/2] + n omega_t``.

    With ``omega_c = 0`` this is ``omega [sum ell + alpha n(n-1)/2] + n omega``;
    with ``omega = 0`` it collapses to ``n omega_c``.
    """
    params = params or SpectrumParams()
    ell = check_ell(ell, n)
    return params.omega_eff * angular_momentum(n, alpha, ell) + n * params.omega_t


@dataclass
class AnyonState:
    """``Delta_z^alpha * sum_pi prod_i z_pi(i)^ell_i``.

    ``body`` holds the full product when ``alpha`` is an integer; otherwise it
    holds only the symmetric sum and ``alpha`` labels the monodromy factor.
    """

    n: int
    alpha: Union[Fraction, float]
    ell: Tuple[int, ...]
    body: Expression

    @property
    def expanded(self) -> bool:
        return _is_integer(self.alpha)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": _num_str(self.alpha),
            "ell": list(self.ell),
            "expanded": self.expanded,
            "body": self.body.to_dict(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def evaluate(self, z_values) -> complex:
        z = [complex(v) for v in z_values]
        value = self.body.evaluate([0.0] * self.n, z)
        if not self.expanded:
            value *= vandermonde_power(z, float(self.alpha))
        return value


def _is_integer(a) -> bool:
    return float(a).is_integer() and float(a) >= 0


def _num_str(a) -> str:
    if isinstance(a, Fraction):
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
    return repr(float(a))


def vandermonde_power(z, alpha: float) -> complex:
    """``prod_{i<j} (z_i - z_j)^alpha`` with the principal branch per factor."""
    out = 1 + 0j
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            out *= complex(z[i] - z[j]) ** alpha
    return out


def symmetric_monomial_sum(n: int, ell: Sequence[int]) -> Expression:
    """``sum over all n! permutations of prod_i z_pi(i)^ell_i``."""
    poly = {}
    for perm in permutations(range(n)):
        z = [0] * n
        for i, p in enumerate(perm):
            z[p] += ell[i]
        key = (0,) * n + tuple(z)
        poly[key] = poly.get(key, 0) + 1
    terms = {k: ComplexRational(v) for k, v in poly.items()}
    return Expression(n, {NO_TAG: ((0,) * den_size(n), terms)})


def lll_state(n: int, alpha, ell: Sequence[int]) -> AnyonState:
    ell = check_ell(ell, n)
    alpha = _exact(alpha)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    body = symmetric_monomial_sum(n, ell)
    if _is_integer(alpha):
        body = Expression.vandermonde(n, "z", int(alpha)) * body
    return AnyonState(n, alpha, ell, body)


def euler_z(e: Expression) -> Expression:
    """``sum_i z_i d/dz_i`` on a holomorphic polynomial."""
    _require_holomorphic(e)
    n = e.n
    if e.is_zero():
        return e
    d, poly = e.parts()[NO_TAG]
    out = {k: c * sum(k[n:]) for k, c in poly.items() if sum(k[n:])}
    return Expression(n, {NO_TAG: (d, out)})


def _require_holomorphic(e: Expression) -> None:
    n = e.n
    if set(e.parts()) - {NO_TAG} or e.has_denominators():
        raise ValueError("input is not a holomorphic polynomial in z")
    for k in (e.parts().get(NO_TAG, (None, {}))[1]):
        if any(k[:n]):
            raise ValueError("input depends on x; only holomorphic z data is accepted")


def apply_anyon_hamiltonian(state: AnyonState, params: SpectrumParams | None = None) -> Expression:
    """Holomorphic-sector action ``omega_eff (E + alpha n(n-1)/2) + n omega_t``.

    ``E`` is the Euler operator. For integer ``alpha`` the expanded
    ``Delta_z^alpha`` is counted by ``E`` itself; otherwise its degree enters
    analytically and the result multiplies the stored symmetric sum.
    """
    params = params or SpectrumParams()
    body = state.body
    _require_holomorphic(body)
    w_eff = Fraction(params.omega_eff)
    w_t = Fraction(params.omega_t)
    n = state.n
    shift = n * w_t
    if not state.expanded:
        shift += w_eff * Fraction(state.alpha) * n * (n - 1) / 2
    return euler_z(body).scale(w_eff) + body.scale(shift)


# -- degeneracies and tables --------------------------------------------------


@lru_cache(maxsize=None)
def count_degeneracy(n: int, total: int) -> int:
    """Partitions of ``total`` into at most ``n`` parts."""
    if total < 0 or n < 0:
        raise ValueError("arguments must be non-negative")
    if total == 0:
        return 1
    if n == 0:
        return 0
    # either fewer than n parts, or n parts each at least one
    return count_degeneracy(n - 1, total) + (count_degeneracy(n, total - n) if total >= n else 0)


def excitations(n: int, total: int) -> Iterator[Tuple[int, ...]]:
    """Nondecreasing ``n``-tuples of non-negative integers summing to ``total``."""

    def rec(k, remaining, lo):
        if k == 1:
            if remaining >= lo:
                yield (remaining,)
            return
        for first in range(lo, remaining // k + 1):
            for rest in rec(k - 1, remaining - first, first):
                yield (first,) + rest

    yield from rec(n, total, 0)


def spectrum_rows(n: int, alphas: Sequence, max_excitation: int,
                  params: SpectrumParams | None = None) -> List[dict]:
    params = params or SpectrumParams()
    rows = []
    for alpha in alphas:
        alpha = _exact(alpha)
        for total in range(max_excitation + 1):
            for ell in excitations(n, total):
                e = energy(n, alpha, ell, params)
                rows.append({
                    "n": n,
                    "alpha": _num_str(alpha),
                    "ell": list(ell),
                    "omega": _num_str(params.omega),
                    "omegaC": _num_str(params.omega_c),
                    "energy": float(e),
                })
                if isinstance(e, Fraction):
                    rows[-1]["energyExact"] = _num_str(e)
    return rows


# -- spectrum checks ----------------------------------------------------------


@dataclass
class SpectrumCheckReport:
    affine: bool
    staircase: bool
    lll_degenerate: bool
    degeneracy_counts: bool
    checked: dict

    @property
    def passed(self) -> bool:
        return self.affine and self.staircase and self.lll_degenerate and self.degeneracy_counts

    def to_dict(self) -> dict:
        return {"pass": self.passed, "affineInAlpha": self.affine, "boseFermiStaircase": self.staircase,
                "lllDegenerate": self.lll_degenerate, "degeneracyCounts": self.degeneracy_counts,
                "checked": self.checked}


def staircase(ell: Sequence[int]) -> Tuple[int, ...]:
    """``ell_i + i``: the bosonic labels equivalent to fermionic ``ell``."""
    return tuple(v + i for i, v in enumerate(ell))


def spectrum_checks(max_n: int = 5, max_total: int = 10,
                    params: SpectrumParams | None = None) -> SpectrumCheckReport:
    """Exact structural checks on the linear-state spectrum.

    Energies are affine in ``alpha``; ``alpha = 1`` at ``ell`` equals ``alpha = 0``
    at the staircase-shifted labels; with ``omega = 0`` every level sits at
    ``n omega_c``; and partition counts match explicit enumeration.
    """
    params = params or SpectrumParams(4, 3)  # omega_t = 5 keeps everything rational
    alphas = [Fraction(k, 4) for k in range(5)]
    affine = staircase_ok = lll_ok = counts_ok = True
    states = 0
    lll = SpectrumParams(0, 3)
    for n in range(1, max_n + 1):
        for total in range(max_total + 1):
            labels = list(excitations(n, total))
            counts_ok &= len(labels) == count_degeneracy(n, total)
            for ell in labels:
                states += 1
                es = [energy(n, a, ell, params) for a in alphas]
                slope = es[1] - es[0]
                affine &= all(es[k] - es[0] == slope * k for k in range(len(es)))
                staircase_ok &= energy(n, 1, ell, params) == energy(n, 0, staircase(ell), params)
                lll_ok &= all(energy(n, a, ell, lll) == n * lll.omega_c for a in alphas)
    checked = {"maxN": max_n, "maxTotal": max_total, "states": states,
               "alphas": [_num_str(a) for a in alphas]}
    return SpectrumCheckReport(affine, staircase_ok, lll_ok, counts_ok, checked)
