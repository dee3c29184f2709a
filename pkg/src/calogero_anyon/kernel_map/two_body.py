"""One-dimensional kernel integrals of the relative two-body problem."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from ..calogero_states import deformed_hermite
from ..scattering.bessel import (
    bessel_h,
    bessel_h_with_derivative,
    series_coefficient,
)
from .quadrature import gauss_hermite_tensor, generalized_laguerre, integrate

SQRT_2PI = math.sqrt(2 * math.pi)


class QuadratureError(ArithmeticError):
    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (estimated error {estimate:.3g})")
        self.estimate = estimate


def free_target(n: int, z: complex) -> complex:
    """``sqrt(2 pi) (i sqrt(2) z)^n``."""
    return SQRT_2PI * (1j * math.sqrt(2) * complex(z)) ** n


def gauss_integral_2body_free(n: int, z: complex, points: int = 80) -> complex:
    """``int exp(-(x - i z)^2 / 2) H_n(x/sqrt 2) dx`` by Gauss-Hermite."""
    if n < 0 or n % 2:
        raise ValueError("n must be an even non-negative integer")
    z = complex(z)
    herm = deformed_hermite(n // 2, 0)
    grid = gauss_hermite_tensor(1, points, rate=0.5)

    def f(x):
        x = x[:, 0]
        return np.exp(1j * x * z + z * z / 2) * herm(x)

    return integrate(f, grid.nodes, grid.weights)


def kernel_target(g: float, ell: int, z: complex) -> complex:
    """``(-2)^ell sqrt(2 pi) z^(g + 2 ell)`` on the principal branch."""
    z = complex(z)
    return (-2) ** ell * SQRT_2PI * z ** (2 * ell) * _principal_power(z, g)


def _principal_power(z: complex, g: float) -> complex:
    if float(g).is_integer():
        return z ** int(g)
    return complex(np.power(complex(z), float(g)))


def _kernel_sum(g: float, ell: int, z: complex, points: int) -> complex:
    # t = x^2/2 turns the integral into int t^(g-1/2) e^-t f(t) dt with f entire in t
    herm = deformed_hermite(ell, g)
    grid = generalized_laguerre(points, g - 0.5)

    def f(t):
        x = np.sqrt(2 * t[:, 0])
        reduced = bessel_h(g, x * z) / (x ** g)  # = z^g * (entire function of x^2 z^2)
        return 2 ** (g - 0.5) * reduced * herm(x)

    total = integrate(f, grid.nodes, grid.weights)
    return np.exp(z * z / 2) * total


def kernel_integral_2body(g: float, ell: int, z: complex, points: int = 160,
                          check_points: int | None = 200, tol: float = 1e-9) -> complex:
    """``int_0^inf e^{z^2/2} h_g(x z) e^{-x^2/2} x^g H_{2 ell, g}(x/sqrt 2) dx``.

    Evaluated with a generalized Gauss-Laguerre rule; when ``check_points``
    is set a second rule estimates the error and :class:`QuadratureError`
    is raised if the two disagree beyond ``tol`` (relative).
    """
    g = float(g)
    if g < 0 or ell < 0:
        raise ValueError("need g >= 0 and ell >= 0")
    z = complex(z)
    value = _kernel_sum(g, ell, z, points)
    if check_points:
        other = _kernel_sum(g, ell, z, check_points)
        est = abs(value - other) / max(abs(other), 1e-300)
        if est > tol:
            raise QuadratureError("kernel quadrature did not converge", est)
    return value


# -- boundary terms -----------------------------------------------------------


@dataclass
class BoundaryReport:
    g: float
    ell: int
    z: complex
    irregular: bool
    eps: List[float]
    term_h_dF: List[complex]
    term_F_dh: List[complex]
    combined: List[complex]
    fitted: dict
    expected: dict
    limit: complex | None = None
    predicted_limit: complex | None = None
    passed: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "g": self.g, "ell": self.ell, "z": [self.z.real, self.z.imag], "irregular": self.irregular,
            "eps": self.eps, "fittedExponents": self.fitted, "expectedExponents": self.expected,
            "pass": self.passed,
        }
        if self.limit is not None:
            out["limit"] = [self.limit.real, self.limit.imag]
            out["predictedLimit"] = [self.predicted_limit.real, self.predicted_limit.imag]
        return out


def _fit_exponent(eps: Sequence[float], values: Sequence[complex]) -> float:
    slope, _ = np.polyfit(np.log(eps), np.log(np.abs(values)), 1)
    return float(slope)


def boundary_term_check(g: float, ell: int, z: complex = 0.8 + 0.3j, eps: Sequence[float] | None = None,
                        irregular: bool = False, rel_tol: float = 0.05) -> BoundaryReport:
    """Boundary terms of one integration-by-parts step at ``x = eps -> 0``.

    With ``F = x^g e^{-x^2/2} H_{2 ell - 2, g}`` the two terms are
    ``-2 h(x z) F'(x)`` and ``2 F(x) d/dx h(x z)``. For the regular ``h_g`` each
    scales like ``eps^(2g-1)`` and their sum like ``eps^(2g+1)``. With the
    irregular solution ``h_{1-g}`` (``g - 1/2`` not an integer) the sum tends to
    ``2 (1 - 2g) a z^(1-g) H_{2 ell - 2, g}(0)`` where ``h_{1-g}(s) ~ a s^(1-g)``.
    """
    g = float(g)
    if g <= 0:
        raise ValueError("boundary check needs g > 0")
    if ell < 1:
        raise ValueError("boundary check needs ell >= 1")
    if irregular and float(g - 0.5).is_integer():
        # J_{1/2-g} is then +-J_{g-1/2}: there is no independent irregular solution
        raise ValueError("irregular control needs g - 1/2 outside the integers")
    z = complex(z)
    eps = np.asarray(eps if eps is not None else np.geomspace(1e-2, 1e-4, 9), dtype=float)
    herm = deformed_hermite(ell - 1, g)
    hg = 1.0 - g if irregular else g
    h, dh = bessel_h_with_derivative(hg, eps * z)
    dh = dh * z
    H, dH = herm(eps), herm.derivative(eps)
    F = eps ** g * np.exp(-eps ** 2 / 2) * H
    dF = eps ** (g - 1) * np.exp(-eps ** 2 / 2) * (g * H + eps * dH - eps ** 2 * H)
    t1 = -2 * h * dF
    t2 = 2 * F * dh
    comb = t1 + t2
    fitted = {"hdF": _fit_exponent(eps, t1), "Fdh": _fit_exponent(eps, t2), "combined": _fit_exponent(eps, comb)}
    if irregular:
        # only the sum is asserted: at g = 1 the leading term of h_0 is constant and F dh drops an order
        expected = {"combined": 0.0}
    else:
        expected = {"hdF": 2 * g - 1, "Fdh": 2 * g - 1, "combined": 2 * g + 1}
    ok = all(abs(fitted[k] - expected[k]) <= rel_tol * max(abs(expected[k]), 1.0) for k in expected)
    report = BoundaryReport(g, ell, z, irregular, eps.tolist(), t1.tolist(), t2.tolist(), comb.tolist(),
                            fitted, expected)
    if irregular:
        a = series_coefficient(hg)
        predicted = 2 * (1 - 2 * g) * a * complex(np.power(z, hg)) * float(herm(0.0))
        limit = complex(comb[-1])
        report.limit, report.predicted_limit = limit, predicted
        ok = ok and abs(limit - predicted) <= rel_tol * abs(predicted)
    report.passed = bool(ok)
    return report


__all__ = [
    "BoundaryReport",
    "QuadratureError",
    "boundary_term_check",
    "free_target",
    "gauss_integral_2body_free",
    "kernel_integral_2body",
    "kernel_target",
]
