"""Exchange, Dunkl and Vandermonde operators acting on :class:`Expression`.

Conventions
-----------
* Particle indices are one-based, ``1..n``.
* ``apply_dunkl(e, i, c)`` is the literal operator
  ``d/dx_i + sum_{j != i} c/(x_i - x_j) M_ij``.
  The Dunkl operator that annihilates ``Delta^g exp(-[x^2]/2)`` (up to the
  ``x_i`` shift of the ladder operators) is ``apply_dunkl`` with ``c = -g``;
  the physics modules pass that coupling explicitly.
* The Vandermonde product is ``Delta = prod_{i<j} (v_i - v_j)`` and its
  operator analogue is ``prod_{i<j} (Pi_i - Pi_j)``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import polynomial as P
from .expression import (
    NO_TAG,
    Expression,
    Gaussian,
    PlaneWave,
    _check_index,
    _family_offset,
    den_size,
    pair_index,
    pairs,
    reduce_part,
)
from .numbers import I_UNIT, ONE, ComplexRational, Permutation

MAX_SYMMETRIZE_N = 6
MAX_VANDERMONDE_N = 4


class NotDivisible(ArithmeticError):
    pass


class SymmetryError(ValueError):
    pass


# -- exchange -----------------------------------------------------------------


def _exchange_part(n, tag, d, poly, i, j):
    """``M_ij`` on one numerator/denominator block (zero-based ``i``, ``j``)."""
    slots = list(range(2 * n))
    slots[i], slots[j] = j, i
    new_poly = P.permute_slots(poly, slots)
    idx = pair_index(n)
    npairs = len(pairs(n))
    new_d = [0] * npairs + list(d[npairs:])
    sign = 1
    for (a, b), p in zip(pairs(n), d[:npairs]):
        if not p:
            continue
        a2 = j if a == i else i if a == j else a
        b2 = j if b == i else i if b == j else b
        if a2 > b2:
            a2, b2 = b2, a2
            if p % 2:
                sign = -sign
        new_d[idx[(a2, b2)]] = p
    if sign < 0:
        new_poly = P.neg(new_poly)
    if isinstance(tag, PlaneWave):
        tau = Permutation.transposition(n, i + 1, j + 1)
        tag = PlaneWave(tau.compose(tag.perm))
    return tag, tuple(new_d), new_poly


def apply_exchange(e: Expression, i: int, j: int) -> Expression:
    """``M_ij e``: swap ``x_i`` and ``x_j`` everywhere (``z`` untouched)."""
    n = e.n
    _check_index(n, i)
    _check_index(n, j)
    if i == j:
        raise IndexError("exchange needs two distinct particles")
    parts = {}
    for tag, (d, poly) in e.parts().items():
        t2, d2, p2 = _exchange_part(n, tag, d, poly, i - 1, j - 1)
        parts[t2] = (d2, p2)
    return Expression(n, parts)


def apply_permutation(e: Expression, perm: Permutation) -> Expression:
    """``M_perm e`` built from adjacent transpositions."""
    out = e
    images = list(perm.images)
    # bubble sort records a word of transpositions whose product is perm
    word = []
    for a in range(len(images)):
        for b in range(len(images) - 1 - a):
            if images[b] > images[b + 1]:
                images[b], images[b + 1] = images[b + 1], images[b]
                word.append((b + 1, b + 2))
    for i, j in word:
        out = apply_exchange(out, i, j)
    return out


def symmetrize(e: Expression) -> Expression:
    """``S e = sum over all permutations of M_perm e``."""
    n = e.n
    if n > MAX_SYMMETRIZE_N:
        raise ValueError(f"symmetrization is capped at n={MAX_SYMMETRIZE_N}")
    orbit = [e]
    # S_n = S_{n-1} * {coset representatives (k n)}; build incrementally
    for m in range(2, n + 1):
        new = []
        for f in orbit:
            new.append(f)
            for k in range(1, m):
                new.append(apply_exchange(f, k, m))
        orbit = new
    items = [(t, d, p) for f in orbit for t, (d, p) in f.parts().items()]
    return Expression._from_items(n, items)


def antisymmetrize(e: Expression) -> Expression:
    n = e.n
    if n > MAX_SYMMETRIZE_N:
        raise ValueError(f"antisymmetrization is capped at n={MAX_SYMMETRIZE_N}")
    orbit = [(1, e)]
    for m in range(2, n + 1):
        new = []
        for s, f in orbit:
            new.append((s, f))
            for k in range(1, m):
                new.append((-s, apply_exchange(f, k, m)))
        orbit = new
    items = []
    for s, f in orbit:
        for t, (d, p) in f.parts().items():
            items.append((t, d, p if s > 0 else P.neg(p)))
    return Expression._from_items(n, items)


def exchange_parity(e: Expression) -> int | None:
    """``+1`` if symmetric, ``-1`` if antisymmetric, ``None`` otherwise.

    Adjacent transpositions generate the group, so they suffice. The zero
    expression reports ``+1``.
    """
    n = e.n
    if e.is_zero() or n == 1:
        return 1
    first = apply_exchange(e, 1, 2)
    if first == e:
        sign = 1
    elif first == -e:
        sign = -1
    else:
        return None
    for k in range(2, n):
        image = apply_exchange(e, k, k + 1)
        if image != (e if sign > 0 else -e):
            return None
    return sign


# -- derivatives ------------------------------------------------------------


def _tag_derivative_factor(n, tag, i):
    """Monomial factor produced by differentiating the tag in ``x_i`` (zero-based)."""
    if isinstance(tag, PlaneWave):
        k = tag.perm.inverse()(i + 1) - 1
        e = [0] * (2 * n)
        e[n + k] = 1
        return tuple(e), I_UNIT
    if isinstance(tag, Gaussian):
        e = [0] * (2 * n)
        e[i] = 1
        return tuple(e), ComplexRational(-2 * tag.rate)
    return None


def _derivative_part(n, tag, d, poly, i):
    """``d/dx_i`` of ``poly * tag / denominator`` (zero-based ``i``); unreduced."""
    numer = P.deriv(poly, i)
    factor = _tag_derivative_factor(n, tag, i)
    if factor is not None:
        P.add_into(numer, P.mul_monomial(poly, factor[0], factor[1]))
    involved = [q for q, (a, b) in enumerate(pairs(n)) if d[q] and (a == i or b == i)]
    if not involved:
        return d, numer
    lins = {q: P.linear_difference(2 * n, *pairs(n)[q]) for q in involved}
    prod_all = P.const(2 * n)
    for q in involved:
        prod_all = P.mul(prod_all, lins[q])
    out = P.mul(numer, prod_all)
    for q in involved:
        a, b = pairs(n)[q]
        sigma = 1 if a == i else -1
        rest = P.const(2 * n)
        for r in involved:
            if r != q:
                rest = P.mul(rest, lins[r])
        P.add_into(out, P.mul(poly, rest), ComplexRational(-d[q] * sigma))
    new_d = list(d)
    for q in involved:
        new_d[q] += 1
    return tuple(new_d), out


def derivative(e: Expression, i: int) -> Expression:
    """``d e / d x_i``."""
    n = e.n
    _check_index(n, i)
    items = []
    for tag, (d, poly) in e.parts().items():
        d2, p2 = _derivative_part(n, tag, d, poly, i - 1)
        items.append((tag, d2, p2))
    return Expression._from_items(n, items)


def laplacian(e: Expression) -> Expression:
    out = Expression.zero(e.n)
    for i in range(1, e.n + 1):
        out = out + derivative(derivative(e, i), i)
    return out


def divide_by_pair(e: Expression, i: int, j: int, power: int = 1, family: str = "x") -> Expression:
    """Multiply by ``(v_i - v_j)^(-power)``; the denominator absorbs it."""
    n = e.n
    _check_index(n, i)
    _check_index(n, j)
    if i == j:
        raise IndexError("need two distinct particles")
    a, b = (i - 1, j - 1) if i < j else (j - 1, i - 1)
    sign = -1 if (i > j and power % 2) else 1
    q = pair_index(n)[(a, b)] + (0 if _family_offset(n, family) == 0 else len(pairs(n)))
    items = []
    for tag, (d, poly) in e.parts().items():
        d2 = list(d)
        d2[q] += power
        items.append((tag, tuple(d2), poly if sign > 0 else P.neg(poly)))
    return Expression._from_items(n, items)


def multiply_sum_x_squared(e: Expression) -> Expression:
    return e * sum_of_squares(e.n, "x")


def sum_of_squares(n: int, family: str = "x") -> Expression:
    off = _family_offset(n, family)
    poly = {}
    for k in range(n):
        ex = [0] * (2 * n)
        ex[off + k] = 2
        poly[tuple(ex)] = ONE
    return Expression(n, {NO_TAG: ((0,) * den_size(n), poly)})


# -- Dunkl ------------------------------------------------------------------


def apply_dunkl(e: Expression, i: int, g) -> Expression:
    """``Pi_i e = d e/dx_i + sum_{j != i} g/(x_i - x_j) M_ij e`` (literal coupling ``g``)."""
    n = e.n
    _check_index(n, i)
    g = Fraction(g)
    a = i - 1
    items = []
    for tag, (d, poly) in e.parts().items():
        d2, p2 = _derivative_part(n, tag, d, poly, a)
        items.append((tag, d2, p2))
    if g:
        cg = ComplexRational(g)
        idx = pair_index(n)
        for b in range(n):
            if b == a:
                continue
            lo, hi = (a, b) if a < b else (b, a)
            q = idx[(lo, hi)]
            sign = cg if a < b else -cg
            for tag, (d, poly) in e.parts().items():
                t2, d2, p2 = _exchange_part(n, tag, d, poly, a, b)
                d3 = list(d2)
                d3[q] += 1
                items.append((t2, tuple(d3), P.scale(p2, sign)))
    return Expression._from_items(n, items)


def dunkl_commutator(e: Expression, i: int, j: int, g) -> Expression:
    return apply_dunkl(apply_dunkl(e, j, g), i, g) - apply_dunkl(apply_dunkl(e, i, g), j, g)


def apply_vandermonde_hat(e: Expression, g, budget: int | None = None) -> Expression:
    """``prod_{i<j} (Pi_i - Pi_j) e`` with literal exchange action and coupling ``g``."""
    n = e.n
    if n > MAX_VANDERMONDE_N:
        raise ValueError(f"Vandermonde operator products are capped at n={MAX_VANDERMONDE_N}")
    out = e
    for i, j in pairs(n):
        out = apply_dunkl(out, i + 1, g) - apply_dunkl(out, j + 1, g)
        out.check_budget(budget)
    return out


def apply_vandermonde_bar(e: Expression, g, budget: int | None = None) -> Expression:
    """Bosonic-projected Vandermonde operator ``bar Delta_g`` acting on ``e``.

    ``bar Delta_g`` is ``prod_{i<j}(Pi_i - Pi_j)`` for the Dunkl operators
    ``d_i - g sum_j M_ij/(x_i - x_j)`` with every exchange moved to the right
    and replaced by one. On a symmetric ``e`` this equals the literal product
    with coupling ``-g``; on an antisymmetric ``e`` flipping every exchange
    sign gives the literal product with coupling ``+g``. Inputs of mixed
    symmetry are rejected.
    """
    parity = exchange_parity(e)
    if parity is None:
        raise SymmetryError("Vandermonde projection needs a symmetric or antisymmetric input")
    return apply_vandermonde_hat(e, -parity * Fraction(g), budget=budget)


def vandermonde_bar_chain(e: Expression, g: int, budget: int | None = None) -> Expression:
    """``bar Delta_{g-1} ... bar Delta_0 e`` for integer ``g >= 0``."""
    for k in range(g):
        e = apply_vandermonde_bar(e, k, budget=budget)
    return e


# -- Hamiltonians -----------------------------------------------------------


def apply_scattering_calogero(e: Expression, g) -> Expression:
    """``-1/2 sum d_i^2 + sum_{i<j} g(g-1)/(x_i - x_j)^2`` (trap-free)."""
    g = Fraction(g)
    out = laplacian(e).scale(Fraction(-1, 2))
    coupling = g * (g - 1)
    if coupling:
        items = [(t, d, p) for t, (d, p) in out.parts().items()]
        for q in range(len(pairs(e.n))):
            for t, (d, p) in e.parts().items():
                d2 = list(d)
                d2[q] += 2
                items.append((t, tuple(d2), P.scale(p, coupling)))
        out = Expression._from_items(e.n, items)
    return out


# -- division ---------------------------------------------------------------


def divide_by_difference(p: Expression, i: int, j: int, family: str = "x") -> Expression:
    """Exact quotient ``p / (v_i - v_j)`` with ``v`` the ``x`` or ``z`` family.

    Each tag's numerator must be divisible on its own; plain polynomials are
    the common case. Raises :class:`NotDivisible` otherwise.
    """
    n = p.n
    _check_index(n, i)
    _check_index(n, j)
    if i == j:
        raise IndexError("need two distinct indices")
    off = _family_offset(n, family)
    parts = {}
    for tag, (d, poly) in p.parts().items():
        q = P.divide_difference(poly, off + i - 1, off + j - 1)
        if q is None:
            raise NotDivisible(f"expression is not divisible by ({family}{i} - {family}{j})")
        d2, q2 = reduce_part(n, d, q) if family == "z" else (d, q)
        parts[tag] = (d2, q2)
    if family == "x":
        return Expression._from_items(n, [(t, d, q) for t, (d, q) in parts.items()])
    return Expression(n, parts)


def divide_by_vandermonde(p: Expression, family: str = "z", power: int = 1) -> Expression:
    for _ in range(power):
        for a, b in pairs(p.n):
            p = divide_by_difference(p, a + 1, b + 1, family)
    return p


# -- x <-> z swap -------------------------------------------------------------


def swap_xz(e: Expression) -> Expression:
    """``e[z, x]``: exchange the roles of the ``x`` and ``z`` variables.

    The plane wave of permutation ``pi`` becomes that of ``pi^-1`` and the
    ``x`` and ``z`` difference denominators trade places. Gaussian factors
    have no ``z`` counterpart and are rejected.
    """
    n = e.n
    npairs = len(pairs(n))
    swap = list(range(n, 2 * n)) + list(range(n))
    parts = {}
    for tag, (d, poly) in e.parts().items():
        if isinstance(tag, Gaussian):
            raise ValueError("x<->z swap is undefined for Gaussian factors")
        if isinstance(tag, PlaneWave):
            tag = PlaneWave(tag.perm.inverse())
        parts[tag] = (tuple(d[npairs:]) + tuple(d[:npairs]), P.permute_slots(poly, swap))
    return Expression(n, parts)


def vandermonde_constant(n: int) -> int:
    """``(-2)^(n(n-1)/2)``."""
    return (-2) ** (n * (n - 1) // 2)


def factorial(n: int) -> int:
    return math.factorial(n)
