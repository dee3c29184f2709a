"""Sparse Laurent polynomials as ``{exponent tuple: ComplexRational}`` dicts.

Variable slots are positional: for ``n`` particles, slots ``0..n-1`` hold
``x_1..x_n`` and slots ``n..2n-1`` hold ``z_1..z_n``. All helpers return new
dicts and never store zero coefficients.
"""

from __future__ import annotations

from typing import Dict, Tuple

from .numbers import ONE, ComplexRational

Exponents = Tuple[int, ...]
Poly = Dict[Exponents, ComplexRational]


def const(nvars: int, c=ONE) -> Poly:
    c = ComplexRational.coerce(c)
    return {(0,) * nvars: c} if c else {}


def monomial(exps: Exponents, c=ONE) -> Poly:
    c = ComplexRational.coerce(c)
    return {tuple(exps): c} if c else {}


def variable(nvars: int, slot: int) -> Poly:
    e = [0] * nvars
    e[slot] = 1
    return {tuple(e): ONE}


def linear_difference(nvars: int, a: int, b: int) -> Poly:
    """``v_a - v_b``."""
    ea = [0] * nvars
    eb = [0] * nvars
    ea[a] = 1
    eb[b] = 1
    return {tuple(ea): ONE, tuple(eb): -ONE}


def add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = dict(p)
    for k, c in q.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def add_into(out: Poly, q: Poly, scale: ComplexRational | None = None) -> None:
    for k, c in q.items():
        if scale is not None:
            c = c * scale
        s = out.get(k)
        if s is None:
            if c:
                out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]


def scale(p: Poly, c) -> Poly:
    c = ComplexRational.coerce(c)
    if not c:
        return {}
    if c == ONE:
        return dict(p)
    return {k: v * c for k, v in p.items()}


def neg(p: Poly) -> Poly:
    return {k: -v for k, v in p.items()}


def mul(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out: Poly = {}
    for kq, cq in q.items():
        for kp, cp in p.items():
            k = tuple(a + b for a, b in zip(kp, kq))
            c = cp * cq
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
    return out


def mul_monomial(p: Poly, exps: Exponents, c=ONE) -> Poly:
    c = ComplexRational.coerce(c)
    if not c:
        return {}
    unit = c == ONE
    out = {}
    for k, v in p.items():
        out[tuple(a + b for a, b in zip(k, exps))] = v if unit else v * c
    return out


def power(p: Poly, k: int, nvars: int) -> Poly:
    result = const(nvars)
    base = p
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def deriv(p: Poly, slot: int) -> Poly:
    out: Poly = {}
    for k, v in p.items():
        a = k[slot]
        if a:
            e = list(k)
            e[slot] = a - 1
            out[tuple(e)] = v * a
    return out


def permute_slots(p: Poly, perm) -> Poly:
    """Rename variables: the exponent at slot ``s`` moves to slot ``perm[s]``."""
    out = {}
    size = len(perm)
    for k, v in p.items():
        e = [0] * size
        for s, a in enumerate(k):
            e[perm[s]] = a
        out[tuple(e)] = v
    return out


def substitute_equal(p: Poly, a: int, b: int) -> Poly:
    """Set ``v_a = v_b`` (the exponent of slot ``a`` is merged into ``b``)."""
    out: Poly = {}
    for k, v in p.items():
        e = list(k)
        e[b] += e[a]
        e[a] = 0
        key = tuple(e)
        s = out.get(key)
        if s is None:
            out[key] = v
        else:
            s = s + v
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def divide_difference(p: Poly, a: int, b: int) -> Poly | None:
    """Exact quotient of ``p`` by ``v_a - v_b``, or ``None`` if not divisible.

    Uses ``v_a^m = (v_a - v_b) * sum_{k<m} v_a^k v_b^(m-1-k) + v_b^m``; the
    remainder is ``p`` with ``v_a`` set to ``v_b``. Negative powers of ``v_a``
    are not supported.
    """
    if substitute_equal(p, a, b):
        return None
    out: Poly = {}
    for k, v in p.items():
        m = k[a]
        if m < 0:
            raise ValueError("cannot divide a Laurent term in the divided variable")
        if m == 0:
            continue
        e = list(k)
        base_b = e[b]
        for j in range(m):
            e[a] = j
            e[b] = base_b + m - 1 - j
            key = tuple(e)
            s = out.get(key)
            if s is None:
                out[key] = v
            else:
                s = s + v
                if s:
                    out[key] = s
                else:
                    del out[key]
    return out


def total_degree(p: Poly, slots) -> int:
    return max((sum(k[s] for s in slots) for k in p), default=0)
