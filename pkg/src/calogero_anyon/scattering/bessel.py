"""Two-body scattering functions ``h_g(s) = sqrt(2 pi) sqrt(s) J_{g-1/2}(s)``.

Small ``|s|`` uses the power series

    h_g(s) = sqrt(2 pi) s^g sum_k (-s^2/4)^k / (2^(g-1/2) k! Gamma(k+g+1/2)),

large ``|s|`` uses the Hankel expansion ``2 (P cos w - Q sin w)`` with
``w = s - g pi/2``. For integer ``g`` the expansion terminates and is exact;
otherwise it is truncated at its smallest term. ``s^g`` is the principal
branch, which keeps ``h_g(x z) = x^g (...)`` for ``x > 0``.
"""

from __future__ import annotations

import math

import numpy as np

SERIES_RADIUS_INTEGER = 6.0
SERIES_RADIUS = 12.0
_MAX_SERIES_TERMS = 400


class ConvergenceError(ArithmeticError):
    pass


def _is_integer(g: float) -> bool:
    return float(g).is_integer()


def _power(s: np.ndarray, g: float) -> np.ndarray:
    if _is_integer(g) and g >= 0:
        return s ** int(g)
    return np.power(s.astype(complex), g)


def series_coefficient(g: float) -> float:
    """Leading small-``s`` coefficient: ``h_g(s) ~ a s^g``."""
    return math.sqrt(2 * math.pi) / (2 ** (g - 0.5) * math.gamma(g + 0.5))


def _series(g: float, s: np.ndarray, derivative: bool = False):
    s = np.asarray(s, dtype=complex)
    w = -(s * s) / 4.0
    term = np.full(s.shape, series_coefficient(g), dtype=complex)
    value = term.copy()
    dvalue = term * g
    for k in range(1, _MAX_SERIES_TERMS):
        term = term * w / (k * (k + g - 0.5))
        value += term
        if derivative:
            dvalue += term * (2 * k + g)
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(value), 1e-300)):
            break
    else:
        raise ConvergenceError("power series did not converge")
    sg = _power(s, g)
    if not derivative:
        return value * sg
    # d/ds of s^g * sum c_k s^2k = sum (2k+g) c_k s^(2k+g-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ds = dvalue * sg / s
    if g == 0:
        ds = np.where(s == 0, 0, ds)
    return value * sg, ds


def _hankel_coefficients(g: float, s_abs_min: float) -> list:
    """``a_k(nu)`` for ``nu = g - 1/2``; terminating or truncated at the smallest term."""
    mu = 4 * (g - 0.5) ** 2
    terminating = _is_integer(g)
    coeffs = [1.0]
    k = 1
    while True:
        factor = (mu - (2 * k - 1) ** 2) / (k * 8.0)
        nxt = coeffs[-1] * factor
        if nxt == 0.0:
            return coeffs
        if not terminating and abs(nxt) / s_abs_min ** k > abs(coeffs[-1]) / s_abs_min ** (k - 1):
            return coeffs
        coeffs.append(nxt)
        k += 1
        if k > 200:
            return coeffs


def _hankel(g: float, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    if s.size == 0:
        return s
    coeffs = _hankel_coefficients(g, float(np.min(np.abs(s))))
    p = np.zeros(s.shape, dtype=complex)
    q = np.zeros(s.shape, dtype=complex)
    inv = 1.0 / s
    power = np.ones(s.shape, dtype=complex)
    for k, a in enumerate(coeffs):
        sign = -1 if (k // 2) % 2 else 1
        if k % 2 == 0:
            p += sign * a * power
        else:
            q += sign * a * power
        power = power * inv
    w = s - g * math.pi / 2
    return 2 * (p * np.cos(w) - q * np.sin(w))


def bessel_h(g: float, s) -> np.ndarray | complex:
    """``h_g(s)`` for real ``g`` with ``g + 1/2`` not a non-positive integer."""
    g = float(g)
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.empty(s.shape, dtype=complex)
    radius = SERIES_RADIUS_INTEGER if _is_integer(g) else SERIES_RADIUS
    small = np.abs(s) < radius
    if np.any(small):
        out[small] = _series(g, s[small])
    if np.any(~small):
        out[~small] = _hankel(g, s[~small])
    return complex(out[0]) if scalar else out


def bessel_h_with_derivative(g: float, s):
    """``(h_g(s), h_g'(s))`` by the power series (small ``|s|`` only)."""
    s = np.asarray(s, dtype=complex)
    if np.any(np.abs(s) >= SERIES_RADIUS):
        raise ValueError("derivative evaluation is limited to the series region")
    return _series(float(g), s, derivative=True)


def irregular_h(g: float, s):
    """Second solution of the same radial equation, ``~ s^(1-g)`` at the origin."""
    return bessel_h(1.0 - float(g), s)


def switchover_discrepancy(g: float, radius: float | None = None, samples: int = 16) -> float:
    """Largest relative gap between series and Hankel forms on ``|s| = radius``."""
    g = float(g)
    if radius is None:
        radius = SERIES_RADIUS_INTEGER if _is_integer(g) else SERIES_RADIUS
    angles = np.linspace(-0.3, 0.3, samples)
    s = radius * np.exp(1j * angles)
    a = _series(g, s)
    b = _hankel(g, s)
    return float(np.max(np.abs(a - b) / np.abs(b)))

