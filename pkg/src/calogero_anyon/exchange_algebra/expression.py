"""The exact expression ring used for every state and operator image.

An :class:`Expression` is a finite sum of terms

    coeff * prod x_i^a_i * prod z_i^b_i * prod_{i<j} (x_i - x_j)^(-p_ij)
          * prod_{i<j} (z_i - z_j)^(-q_ij) * tag

where ``coeff`` is a Gaussian rational and ``tag`` is one of no factor, a
Gaussian ``exp(-c [x^2])`` or a plane wave ``exp(i sum_k x_pi(k) z_k)``.
The ``(z_i - z_j)`` denominators are needed by the scattering states.

Internally each tag carries one numerator polynomial over a common
difference denominator, reduced so that no difference factor present in
the denominator divides the numerator. This makes the representation
unique: two expressions are equal exactly when their stored data are equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from . import polynomial as P
from .numbers import ComplexRational, Permutation

MAX_N = 8


class BudgetExceeded(RuntimeError):
    """Raised when an expression outgrows the configured term budget."""


# -- tags ---------------------------------------------------------------------


@dataclass(frozen=True)
class NoTag:
    kind = "none"

    def sort_key(self):
        return (0,)

    def to_dict(self):
        return {"kind": "none"}


@dataclass(frozen=True)
class Gaussian:
    """``exp(-rate * sum_k x_k^2)``."""

    rate: Fraction
    kind = "gaussian"

    def sort_key(self):
        return (1, self.rate)

    def to_dict(self):
        return {"kind": "gaussian", "c": f"{self.rate.numerator}/{self.rate.denominator}"}


@dataclass(frozen=True)
class PlaneWave:
    """``exp(i * sum_k x_perm(k) z_k)``."""

    perm: Permutation
    kind = "planewave"

    def sort_key(self):
        return (2, self.perm.images)

    def to_dict(self):
        return {"kind": "planewave", "perm": list(self.perm.images)}


NO_TAG = NoTag()
Tag = object


def make_gaussian(rate) -> object:
    rate = Fraction(rate)
    return NO_TAG if rate == 0 else Gaussian(rate)


def tag_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "none":
        return NO_TAG
    if kind == "gaussian":
        return make_gaussian(Fraction(d["c"]))
    if kind == "planewave":
        return PlaneWave(Permutation(d["perm"]))
    raise ValueError(f"unknown tag kind {kind!r}")


# -- pair bookkeeping -------------------------------------------------------


@lru_cache(maxsize=None)
def pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    """Zero-based ordered pairs ``(a, b)`` with ``a < b``."""
    return tuple((a, b) for a in range(n) for b in range(a + 1, n))


@lru_cache(maxsize=None)
def pair_index(n: int) -> Dict[Tuple[int, int], int]:
    return {p: q for q, p in enumerate(pairs(n))}


@lru_cache(maxsize=None)
def den_slots(n: int) -> Tuple[Tuple[int, int], ...]:
    """Variable slots of every denominator factor: ``x`` pairs, then ``z`` pairs."""
    return pairs(n) + tuple((a + n, b + n) for a, b in pairs(n))


def den_size(n: int) -> int:
    return 2 * len(pairs(n))


@lru_cache(maxsize=4096)
def _difference_power(n: int, a: int, b: int, k: int) -> Tuple[Tuple[Tuple[int, ...], ComplexRational], ...]:
    poly = P.power(P.linear_difference(2 * n, a, b), k, 2 * n)
    return tuple(poly.items())


def difference_power(n: int, a: int, b: int, k: int) -> P.Poly:
    """``(v_a - v_b)^k`` over the ``2n`` variable slots."""
    return dict(_difference_power(n, a, b, k))


def denominator_polynomial(n: int, denom: Sequence[int]) -> P.Poly:
    out = P.const(2 * n)
    for q, p in enumerate(denom):
        if p:
            a, b = den_slots(n)[q]
            out = P.mul(out, difference_power(n, a, b, p))
    return out


def reduce_part(n: int, denom: Tuple[int, ...], poly: P.Poly) -> Tuple[Tuple[int, ...], P.Poly]:
    """Cancel every difference factor shared by numerator and denominator."""
    if not poly:
        return (0,) * den_size(n), {}
    if not any(denom):
        return denom, poly
    d = list(denom)
    for q, (a, b) in enumerate(den_slots(n)):
        while d[q] > 0:
            quotient = P.divide_difference(poly, a, b)
            if quotient is None:
                break
            poly = quotient
            d[q] -= 1
    return tuple(d), poly


def combine_parts(n: int, items: Iterable[Tuple[Tuple[int, ...], P.Poly]]) -> Tuple[Tuple[int, ...], P.Poly]:
    """Sum numerator/denominator pairs over their least common denominator."""
    items = [(d, p) for d, p in items if p]
    if not items:
        return (0,) * den_size(n), {}
    if len(items) == 1:
        return reduce_part(n, *items[0])
    npairs = den_size(n)
    common = tuple(max(d[q] for d, _ in items) for q in range(npairs))
    total: P.Poly = {}
    for d, p in items:
        lift = p
        for q in range(npairs):
            k = common[q] - d[q]
            if k:
                a, b = den_slots(n)[q]
                lift = P.mul(lift, difference_power(n, a, b, k))
        P.add_into(total, lift)
    return reduce_part(n, common, total)


# -- terms ------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    coeff: ComplexRational
    x: Tuple[int, ...]
    z: Tuple[int, ...]
    denom: Tuple[Tuple[int, int, int], ...]
    tag: object
    zdenom: Tuple[Tuple[int, int, int], ...] = ()

    def sort_key(self):
        return (self.tag.sort_key(), self.x, self.z, self.denom, self.zdenom)

    def to_dict(self):
        d = {
            "coeff": self.coeff.to_strings(),
            "x": list(self.x),
            "z": list(self.z),
            "denom": [list(t) for t in self.denom],
        }
        if self.zdenom:
            d["zdenom"] = [list(t) for t in self.zdenom]
        d["tag"] = self.tag.to_dict()
        return d


# -- the expression ---------------------------------------------------------


class Expression:
    """Immutable element of the exact expression ring for ``n`` particles."""

    __slots__ = ("n", "_parts", "_hash")

    def __init__(self, n: int, parts: Dict[object, Tuple[Tuple[int, ...], P.Poly]] | None = None):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"particle count must be in 1..{MAX_N}, got {n}")
        self.n = n
        self._parts = {t: v for t, v in (parts or {}).items() if v[1]}
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def _from_items(cls, n: int, items: Iterable[Tuple[object, Tuple[int, ...], P.Poly]]) -> "Expression":
        grouped: Dict[object, list] = {}
        for tag, d, p in items:
            if p:
                grouped.setdefault(tag, []).append((d, p))
        parts = {}
        for tag, lst in grouped.items():
            d, p = combine_parts(n, lst)
            if p:
                parts[tag] = (d, p)
        return cls(n, parts)

    @classmethod
    def zero(cls, n: int) -> "Expression":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c=1) -> "Expression":
        return cls.monomial(n, coeff=c)

    @classmethod
    def monomial(cls, n: int, x: Sequence[int] | None = None, z: Sequence[int] | None = None,
                 coeff=1, tag=NO_TAG) -> "Expression":
        x = tuple(x) if x is not None else (0,) * n
        z = tuple(z) if z is not None else (0,) * n
        if len(x) != n or len(z) != n:
            raise ValueError("exponent lists must have length n")
        if any(a < 0 for a in x):
            raise ValueError("negative x exponents are not allowed; use difference denominators")
        c = ComplexRational.coerce(coeff)
        if not c:
            return cls(n)
        return cls(n, {tag: ((0,) * den_size(n), {x + z: c})})

    @classmethod
    def x(cls, n: int, i: int) -> "Expression":
        _check_index(n, i)
        e = [0] * n
        e[i - 1] = 1
        return cls.monomial(n, x=e)

    @classmethod
    def z(cls, n: int, i: int) -> "Expression":
        _check_index(n, i)
        e = [0] * n
        e[i - 1] = 1
        return cls.monomial(n, z=e)

    @classmethod
    def plane_wave(cls, n: int, perm: Permutation | Sequence[int] | None = None) -> "Expression":
        if perm is None:
            perm = Permutation.identity(n)
        elif not isinstance(perm, Permutation):
            perm = Permutation(perm)
        if perm.n != n:
            raise ValueError("permutation size does not match n")
        return cls.monomial(n, tag=PlaneWave(perm))

    @classmethod
    def gaussian(cls, n: int, rate=1) -> "Expression":
        return cls.monomial(n, tag=make_gaussian(rate))

    @classmethod
    def vandermonde(cls, n: int, family: str = "x", power: int = 1) -> "Expression":
        """``prod_{i<j} (v_i - v_j)^power`` for ``v`` in ``{'x', 'z'}``."""
        if power < 0:
            raise ValueError("use divide_by_difference for negative powers")
        off = _family_offset(n, family)
        poly = P.const(2 * n)
        for a, b in pairs(n):
            poly = P.mul(poly, difference_power(n, a + off, b + off, power))
        return cls(n, {NO_TAG: ((0,) * den_size(n), poly)})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Term]) -> "Expression":
        items = []
        idx = pair_index(n)
        npairs = len(pairs(n))
        for t in terms:
            if len(t.x) != n or len(t.z) != n:
                raise ValueError("term exponent lists must have length n")
            if any(a < 0 for a in t.x):
                raise ValueError("negative x exponents are not allowed")
            d = [0] * (2 * npairs)
            for offset, entries in ((0, t.denom), (npairs, t.zdenom)):
                for i, j, p in entries:
                    if not (1 <= i < j <= n) or p < 0:
                        raise ValueError(f"bad denominator entry {(i, j, p)}")
                    d[offset + idx[(i - 1, j - 1)]] += p
            c = ComplexRational.coerce(t.coeff)
            if c:
                items.append((t.tag, tuple(d), {tuple(t.x) + tuple(t.z): c}))
        return cls._from_items(n, items)

    # inspection -----------------------------------------------------------

    def parts(self) -> Dict[object, Tuple[Tuple[int, ...], P.Poly]]:
        """Read-only view ``{tag: (denominator powers, numerator)}``."""
        return self._parts

    def tags(self) -> List[object]:
        return sorted(self._parts, key=lambda t: t.sort_key())

    @property
    def terms(self) -> List[Term]:
        n = self.n
        out = []
        npairs = len(pairs(n))
        for tag, (d, poly) in self._parts.items():
            denom = tuple((a + 1, b + 1, p) for (a, b), p in zip(pairs(n), d[:npairs]) if p)
            zdenom = tuple((a + 1, b + 1, p) for (a, b), p in zip(pairs(n), d[npairs:]) if p)
            for k, c in poly.items():
                out.append(Term(c, k[:n], k[n:], denom, tag, zdenom))
        out.sort(key=Term.sort_key)
        return out

    def term_count(self) -> int:
        return sum(len(p) for _, p in self._parts.values())

    def is_zero(self) -> bool:
        return not self._parts

    def has_denominators(self, family: str | None = None) -> bool:
        npairs = len(pairs(self.n))
        window = {None: slice(None), "x": slice(0, npairs), "z": slice(npairs, None)}[family]
        return any(any(d[window]) for d, _ in self._parts.values())

    def is_polynomial(self) -> bool:
        return set(self._parts) <= {NO_TAG} and not self.has_denominators()

    def check_budget(self, budget: int | None) -> "Expression":
        if budget is not None and self.term_count() > budget:
            raise BudgetExceeded(f"expression has {self.term_count()} terms, budget is {budget}")
        return self

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Expression":
        if isinstance(other, Expression):
            if other.n != self.n:
                raise ValueError("particle counts differ")
            return other
        return Expression.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        items = [(t, d, p) for t, (d, p) in self._parts.items()]
        items += [(t, d, p) for t, (d, p) in other._parts.items()]
        return Expression._from_items(self.n, items)

    __radd__ = __add__

    def __neg__(self):
        return Expression(self.n, {t: (d, P.neg(p)) for t, (d, p) in self._parts.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Expression":
        c = ComplexRational.coerce(c)
        if not c:
            return Expression(self.n)
        return Expression(self.n, {t: (d, P.scale(p, c)) for t, (d, p) in self._parts.items()})

    def __mul__(self, other):
        if not isinstance(other, Expression):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if other.n != self.n:
            raise ValueError("particle counts differ")
        items = []
        for t1, (d1, p1) in self._parts.items():
            for t2, (d2, p2) in other._parts.items():
                tag = _multiply_tags(t1, t2)
                d = tuple(a + b for a, b in zip(d1, d2))
                items.append((tag, d, P.mul(p1, p2)))
        return Expression._from_items(self.n, items)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Expression.constant(self.n)
        for _ in range(k):
            out = out * self
        return out

    def strip_tag(self, tag) -> "Expression":
        """The coefficient of ``tag`` as a tag-free expression."""
        if tag not in self._parts:
            return Expression(self.n)
        return Expression(self.n, {NO_TAG: self._parts[tag]})

    def with_gaussian_shift(self, delta) -> "Expression":
        """Multiply by ``exp(-delta [x^2])``."""
        return self * Expression.gaussian(self.n, delta) if Fraction(delta) else self

    def __eq__(self, other):
        if not isinstance(other, Expression):
            if isinstance(other, (int, Fraction, ComplexRational)):
                return self == Expression.constant(self.n, other)
            return NotImplemented
        return self.n == other.n and self._parts == other._parts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(
                (t, d, frozenset(p.items())) for t, (d, p) in self._parts.items())))
        return self._hash

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "terms": [t.to_dict() for t in self.terms]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "Expression":
        n = int(d["n"])
        terms = []
        for td in d["terms"]:
            terms.append(Term(
                ComplexRational.parse(td["coeff"]),
                tuple(td["x"]), tuple(td["z"]),
                tuple(tuple(e) for e in td.get("denom", [])),
                tag_from_dict(td["tag"]),
                tuple(tuple(e) for e in td.get("zdenom", [])),
            ))
        return cls.from_terms(n, terms)

    @classmethod
    def from_json(cls, s: str) -> "Expression":
        return cls.from_dict(json.loads(s))

    def __repr__(self):
        return f"Expression(n={self.n}, terms={self.term_count()})"

    def __str__(self):
        if self.is_zero():
            return "0"
        return " + ".join(_term_str(t, self.n) for t in self.terms)

    # numerics -------------------------------------------------------------

    def evaluate(self, x_values: Sequence[float], z_values: Sequence[complex] | None = None) -> complex:
        return eval_numeric(self, x_values, z_values)

    def numeric(self, z_values: Sequence[complex] | None = None) -> "NumericExpression":
        return NumericExpression(self, z_values)


def _check_index(n: int, i: int) -> None:
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= n:
        raise IndexError(f"particle index {i} out of range 1..{n}")


def _family_offset(n: int, family: str) -> int:
    if family == "x":
        return 0
    if family == "z":
        return n
    raise ValueError(f"variable family must be 'x' or 'z', got {family!r}")


def _multiply_tags(t1, t2):
    if t1 is NO_TAG or t1 == NO_TAG:
        return t2
    if t2 is NO_TAG or t2 == NO_TAG:
        return t1
    if isinstance(t1, Gaussian) and isinstance(t2, Gaussian):
        return make_gaussian(t1.rate + t2.rate)
    raise ValueError(f"product of {t1.kind} and {t2.kind} factors is outside the expression ring")


def _term_str(t: Term, n: int) -> str:
    parts = [str(t.coeff)]
    for name, exps in (("x", t.x), ("z", t.z)):
        for k, a in enumerate(exps, start=1):
            if a == 1:
                parts.append(f"{name}{k}")
            elif a:
                parts.append(f"{name}{k}^{a}")
    for i, j, p in t.denom:
        parts.append(f"(x{i}-x{j})^-{p}")
    for i, j, p in t.zdenom:
        parts.append(f"(z{i}-z{j})^-{p}")
    if isinstance(t.tag, Gaussian):
        parts.append(f"exp(-{t.tag.rate}[x^2])")
    elif isinstance(t.tag, PlaneWave):
        parts.append("exp(i(" + "+".join(f"x{p}z{k}" for k, p in enumerate(t.tag.perm.images, 1)) + "))")
    return "*".join(parts)


# -- floating point evaluation ------------------------------------------------


def eval_numeric(e: Expression, x_values: Sequence[float], z_values: Sequence[complex] | None = None) -> complex:
    """Evaluate ``e`` at one point, summing terms in canonical order."""
    n = e.n
    x = [float(v) for v in x_values]
    z = [complex(v) for v in (z_values if z_values is not None else [0.0] * n)]
    if len(x) != n or len(z) != n:
        raise ValueError("xValues and zValues must have length n")
    total = 0j
    for t in e.terms:
        value = complex(t.coeff)
        for k in range(n):
            if t.x[k]:
                value *= x[k] ** t.x[k]
            if t.z[k]:
                value *= z[k] ** t.z[k]
        for family, vals, entries in (("x", x, t.denom), ("z", z, t.zdenom)):
            for i, j, p in entries:
                diff = vals[i - 1] - vals[j - 1]
                if diff == 0:
                    raise ZeroDivisionError(f"{family}{i} and {family}{j} coincide at a denominator singularity")
                value /= diff ** p
        value *= _tag_value(t.tag, x, z)
        total += value
    return total


def _tag_value(tag, x, z) -> complex:
    if isinstance(tag, Gaussian):
        return np.exp(-float(tag.rate) * sum(v * v for v in x))
    if isinstance(tag, PlaneWave):
        return complex(np.exp(1j * sum(x[p - 1] * z[k] for k, p in enumerate(tag.perm.images))))
    return 1.0


class NumericExpression:
    """Vectorised evaluator of an expression at fixed ``z``.

    The ``z`` dependence is folded into complex coefficients once; calls then
    evaluate on an ``(m, n)`` array of ``x`` points.
    """

    def __init__(self, e: Expression, z_values: Sequence[complex] | None = None):
        n = e.n
        self.n = n
        z = np.asarray(z_values if z_values is not None else np.zeros(n), dtype=complex)
        if z.shape != (n,):
            raise ValueError("zValues must have length n")
        self.z = z
        self._blocks = []
        for tag in e.tags():
            d, poly = e.parts()[tag]
            folded: Dict[Tuple[int, ...], complex] = {}
            for k in sorted(poly):
                c = complex(poly[k])
                for s in range(n):
                    if k[n + s]:
                        c *= z[s] ** k[n + s]
                folded[k[:n]] = folded.get(k[:n], 0j) + c
            npairs = len(pairs(n))
            zscale = 1.0 + 0j
            for (a, b), p in zip(pairs(n), d[npairs:]):
                if p:
                    if z[a] == z[b]:
                        raise ZeroDivisionError(f"z{a + 1} and z{b + 1} coincide at a denominator singularity")
                    zscale /= (z[a] - z[b]) ** p
            exps = np.array(sorted(folded), dtype=int).reshape(-1, n)
            coeffs = np.array([folded[tuple(r)] for r in exps], dtype=complex) * zscale
            dpairs = [(a, b, p) for (a, b), p in zip(pairs(n), d[:npairs]) if p]
            if isinstance(tag, PlaneWave):
                kind, data = "planewave", np.array(tag.perm.images) - 1
            elif isinstance(tag, Gaussian):
                kind, data = "gaussian", float(tag.rate)
            else:
                kind, data = "none", None
            self._blocks.append((kind, data, exps, coeffs, dpairs))

    def envelope(self, radius: float) -> float:
        """Bound on ``|value|`` over the box ``|x_k| <= radius`` (no ``x`` denominators)."""
        total = 0.0
        for kind, data, exps, coeffs, dpairs in self._blocks:
            if dpairs:
                raise ValueError("envelope bound needs an expression without x denominators")
            deg = exps.sum(axis=1)
            block = float(np.sum(np.abs(coeffs) * radius ** deg))
            if kind == "planewave":
                block *= float(np.exp(radius * np.sum(np.abs(self.z.imag))))
            total += block
        return total

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.n:
            raise ValueError("points must have n columns")
        total = np.zeros(x.shape[0], dtype=complex)
        for kind, data, exps, coeffs, dpairs in self._blocks:
            maxdeg = exps.max(axis=0) if len(exps) else np.zeros(self.n, dtype=int)
            powers = [np.vander(x[:, s], int(maxdeg[s]) + 1, increasing=True) for s in range(self.n)]
            value = np.zeros(x.shape[0], dtype=complex)
            for row, c in zip(exps, coeffs):
                mono = powers[0][:, row[0]].copy()
                for s in range(1, self.n):
                    if row[s]:
                        mono *= powers[s][:, row[s]]
                value += c * mono
            for a, b, p in dpairs:
                diff = x[:, a] - x[:, b]
                if np.any(diff == 0.0):
                    raise ZeroDivisionError("evaluation point on a denominator singularity")
                value /= diff ** p
            if kind == "planewave":
                value *= np.exp(1j * (x[:, data] @ self.z))
            elif kind == "gaussian":
                value *= np.exp(-data * np.sum(x * x, axis=1))
            total += value
        return total
