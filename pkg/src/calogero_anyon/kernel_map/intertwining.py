"""Exact intertwining checks for the bosonic Vandermonde operators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence

from ..exchange_algebra import (
    Expression,
    apply_scattering_calogero,
    apply_vandermonde_bar,
    sum_of_squares,
    symmetrize,
    vandermonde_constant,
)


@dataclass
class IntertwinerConstantReport:
    n: int
    g: int
    constant: int
    rate_one: bool
    rate_quarter: bool

    @property
    def passed(self) -> bool:
        return self.rate_one and self.rate_quarter

    def to_dict(self) -> dict:
        return {"n": self.n, "g": self.g, "constant": self.constant, "rateOne": self.rate_one,
                "rateQuarter": self.rate_quarter, "pass": self.passed}


def intertwiner_constant_check(n: int, g: int) -> IntertwinerConstantReport:
    """``bar Delta_g (Delta^g e^{-c[x^2]}) = (-2c)^(n(n-1)/2) Delta^(g+1) e^{-c[x^2]}`` for ``c = 1, 1/4``.

    ``c = 1`` gives the constant ``(-2)^(n(n-1)/2)``; ``c = 1/4`` gives its inverse.
    """
    npairs = n * (n - 1) // 2
    const = vandermonde_constant(n)
    results = []
    for rate, expected in ((Fraction(1), Fraction(const)), (Fraction(1, 4), Fraction(1, const))):
        gauss = Expression.gaussian(n, rate)
        lhs = apply_vandermonde_bar(Expression.vandermonde(n, "x", g) * gauss, g)
        rhs = (Expression.vandermonde(n, "x", g + 1) * gauss).scale(expected)
        results.append(lhs == rhs)
        assert expected == (-2 * rate) ** npairs
    return IntertwinerConstantReport(n, g, const, results[0], results[1])


@dataclass
class IntertwiningReport:
    n: int
    g: int
    results: List[bool] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(self.results)

    def to_dict(self) -> dict:
        return {"n": self.n, "g": self.g, "pass": self.passed,
                "cases": [{"input": l, "pass": r} for l, r in zip(self.labels, self.results)]}


def default_test_expressions(n: int) -> List[tuple]:
    gauss = Expression.gaussian(n, 1)
    return [
        ("exp(-[x^2])", gauss),
        ("[x^2] exp(-[x^2])", sum_of_squares(n, "x") * gauss),
        ("S exp(i sum x_k z_k)", symmetrize(Expression.plane_wave(n))),
    ]


def intertwining_relation_check(n: int, g: int, tests: Sequence | None = None) -> IntertwiningReport:
    """``bar H_{g+1} bar Delta_g e == bar Delta_g bar H_g e`` exactly for each test input."""
    if tests is None:
        tests = default_test_expressions(n)
    report = IntertwiningReport(n, g)
    for k, item in enumerate(tests):
        label, e = item if isinstance(item, tuple) else (f"input {k}", item)
        lhs = apply_scattering_calogero(apply_vandermonde_bar(e, g), g + 1)
        rhs = apply_vandermonde_bar(apply_scattering_calogero(e, g), g)
        report.results.append(lhs == rhs)
        report.labels.append(label)
    return report
