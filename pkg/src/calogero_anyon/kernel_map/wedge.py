"""N-body wedge integrals: the Vandermonde identity and the full mapping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Sequence

import numpy as np

from ..anyon_states import lll_state
from ..calogero_states import DEFAULT_BUDGET, build_state
from ..exchange_algebra import Expression, exchange_parity
from ..scattering import build_scattering_symbolic
from .quadrature import (
    QuadratureGrid,
    gauss_hermite_tensor,
    gauss_legendre_panels,
    integrate,
)

# nominal tolerances by particle count
DEFAULT_TOL = {2: 1e-6, 3: 1e-3}

# default grids: (radius, panels, order) for the wedge panels, points per axis for Hermite
PANEL_DEFAULTS = {1: (6.0, 12, 12), 2: (6.0, 12, 12), 3: (6.0, 6, 10), 4: (6.0, 4, 8)}
HERMITE_DEFAULTS = {1: 60, 2: 48, 3: 32, 4: 20}


@dataclass
class Integrand:
    """``reduced(x) * exp(-rate [x^2])`` evaluated on an ``(m, n)`` array."""

    reduced: Callable[[np.ndarray], np.ndarray]
    rate: float = 0.0
    symmetric: bool = False


def _as_integrand(f) -> Integrand:
    return f if isinstance(f, Integrand) else Integrand(f)


def wedge_integrate(f, n: int, grid: QuadratureGrid, threads: int | None = None) -> complex:
    """Integral over ``x_1 < ... < x_n``.

    A wedge-filtered grid integrates directly. A full-space grid integrates
    the symmetric extension ``f(sort(x))`` and divides by ``n!``; integrands
    flagged ``symmetric`` skip the sort.
    """
    f = _as_integrand(f)
    if grid.dim != n:
        raise ValueError("grid dimension does not match n")
    extra = f.rate - grid.gaussian_rate

    def values(x):
        if not grid.wedge_filter and not f.symmetric:
            x = np.sort(x, axis=1)
        v = f.reduced(x)
        if extra:
            v = v * np.exp(-extra * np.sum(x * x, axis=1))
        return v

    nodes, weights = grid.nodes, grid.weights
    if grid.wedge_filter:
        keep = np.all(np.diff(nodes, axis=1) > 0, axis=1)
        if not np.all(keep):
            nodes, weights = nodes[keep], weights[keep]
        return integrate(values, nodes, weights, threads=threads)
    return integrate(values, nodes, weights, threads=threads) / math.factorial(n)


@lru_cache(maxsize=None)
def default_panel_grid(n: int, radius: float | None = None, panels: int | None = None,
                       order: int | None = None) -> QuadratureGrid:
    r0, p0, o0 = PANEL_DEFAULTS[n]
    return gauss_legendre_panels(n, radius or r0, panels or p0, order or o0, wedge=True)


@lru_cache(maxsize=None)
def default_hermite_grid(n: int, points: int | None = None) -> QuadratureGrid:
    return gauss_hermite_tensor(n, points or HERMITE_DEFAULTS[n], rate=1.0)


@dataclass
class StrategyPair:
    wedge: complex
    full: complex

    def discrepancy(self, scale: float) -> float:
        return abs(self.wedge - self.full) / scale


def both_strategies(f: Integrand, n: int, panel_grid: QuadratureGrid, hermite_grid: QuadratureGrid,
                    threads: int | None = None) -> StrategyPair:
    return StrategyPair(wedge_integrate(f, n, panel_grid, threads), wedge_integrate(f, n, hermite_grid, threads))


def sample_z(n: int, count: int, seed: int = 0, radius: float = 1.5, min_separation: float = 0.3) -> List[np.ndarray]:
    """Complex ``n``-tuples in the disk ``|z| <= radius`` with separated entries (PCG64)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    while len(out) < count:
        r = radius * np.sqrt(rng.random(n))
        theta = 2 * np.pi * rng.random(n)
        z = r * np.exp(1j * theta)
        if n > 1 and min(abs(z[i] - z[j]) for i in range(n) for j in range(i + 1, n)) < min_separation:
            continue
        out.append(z)
    return out


def choose_radius(f_numeric, z: np.ndarray, tol: float, scale: float, rate: float = 1.0) -> float:
    """Smallest box radius with ``exp(-rate R^2) * envelope(R) < 0.01 tol scale``."""
    for radius in np.arange(3.0, 10.01, 0.5):
        if math.exp(-rate * radius * radius) * f_numeric.envelope(radius) < 0.01 * tol * scale:
            return float(radius)
    return 10.0


def _polynomial_factor(body: Expression) -> Expression:
    (tag,) = body.tags()
    return body.strip_tag(tag)


def _symmetric_product(a: Expression, b: Expression) -> Expression:
    prod = a * b
    if prod.has_denominators("x"):
        raise ArithmeticError("x denominators survived in a kernel integrand")
    if exchange_parity(prod) != 1:
        raise ArithmeticError("kernel integrand is not symmetric")
    return prod


# -- Vandermonde identity -----------------------------------------------------


@dataclass
class VandermondeReport:
    n: int
    g: int
    z: List[complex]
    lhs_wedge: complex
    lhs_full: complex
    rhs: complex
    grid_meta: dict = field(default_factory=dict)

    @property
    def ratio(self) -> complex:
        return self.lhs_wedge / self.rhs

    @property
    def ratio_full(self) -> complex:
        return self.lhs_full / self.rhs

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs_wedge - self.lhs_full) / abs(self.rhs)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "g": self.g, "z": [[v.real, v.imag] for v in self.z],
            "ratio": [self.ratio.real, self.ratio.imag],
            "ratioFullSpace": [self.ratio_full.real, self.ratio_full.imag],
            "strategyDiscrepancy": self.discrepancy, "gridMeta": self.grid_meta,
        }


def vandermonde_rhs(n: int, g: int, z: Sequence[complex]) -> complex:
    """``2^(-g n(n-1)/2) pi^(n/2) Delta_z^g exp(-[z^2]/4)``."""
    z = np.asarray(z, dtype=complex)
    delta = np.prod([z[i] - z[j] for i in range(n) for j in range(i + 1, n)]) if n > 1 else 1.0
    return 2.0 ** (-g * n * (n - 1) / 2) * math.pi ** (n / 2) * delta ** g * np.exp(-np.sum(z * z) / 4)


@lru_cache(maxsize=None)
def _vandermonde_integrand(n: int, g: int) -> Expression:
    h = build_scattering_symbolic(n, g).expression
    return _symmetric_product(Expression.vandermonde(n, "x", g), h)


def vandermonde_integral(n: int, g: int, z: Sequence[complex], panel_grid: QuadratureGrid | None = None,
                         hermite_grid: QuadratureGrid | None = None, threads: int | None = None) -> VandermondeReport:
    """Both sides of ``int_wedge Delta^g e^{-[x^2]} h_g = 2^(-gP) pi^(n/2) Delta_z^g e^{-[z^2]/4}``."""
    z = np.asarray(z, dtype=complex)
    expr = _vandermonde_integrand(n, int(g))
    num = expr.numeric(z)
    f = Integrand(num, rate=1.0, symmetric=True)
    rhs = vandermonde_rhs(n, g, z)
    if panel_grid is None:
        radius = choose_radius(num, z, DEFAULT_TOL.get(n, 1e-3), abs(rhs))
        panel_grid = default_panel_grid(n, max(radius, PANEL_DEFAULTS[n][0]))
    hermite_grid = hermite_grid or default_hermite_grid(n)
    pair = both_strategies(f, n, panel_grid, hermite_grid, threads)
    meta = {"wedge": panel_grid.describe(), "fullSpace": hermite_grid.describe()}
    return VandermondeReport(n, int(g), list(z), pair.wedge, pair.full, rhs, meta)


# -- full mapping -------------------------------------------------------------


@dataclass
class MappingReport:
    n: int
    g: int
    ell: tuple
    z_samples: List[np.ndarray]
    lhs: List[complex]
    lhs_full: List[complex]
    rhs: List[complex]
    tolerance: float
    grid_meta: dict = field(default_factory=dict)

    @property
    def relative_errors(self) -> List[float]:
        return [abs(a - b) / abs(b) for a, b in zip(self.lhs, self.rhs)]

    @property
    def strategy_discrepancy(self) -> float:
        return max(abs(a - b) / abs(c) for a, b, c in zip(self.lhs, self.lhs_full, self.rhs))

    @property
    def overall_constant(self) -> complex:
        num = sum(np.conj(r) * l for l, r in zip(self.lhs, self.rhs))
        den = sum(abs(r) ** 2 for r in self.rhs)
        return complex(num / den)

    @property
    def ratio_spread(self) -> float:
        ratios = np.array([l / r for l, r in zip(self.lhs, self.rhs)])
        return float(np.std(ratios))

    @property
    def passed(self) -> bool:
        return (max(self.relative_errors) <= self.tolerance
                and abs(self.overall_constant - 1) <= self.tolerance
                and self.strategy_discrepancy <= 10 * self.tolerance)

    def to_dict(self) -> dict:
        c = self.overall_constant
        return {
            "case": {"n": self.n, "g": self.g, "ell": list(self.ell)},
            "samples": [
                {"z": [[v.real, v.imag] for v in z], "lhs": [l.real, l.imag], "rhs": [r.real, r.imag], "relErr": e}
                for z, l, r, e in zip(self.z_samples, self.lhs, self.rhs, self.relative_errors)
            ],
            "constant": [c.real, c.imag],
            "ratioSpread": self.ratio_spread,
            "strategyDiscrepancy": self.strategy_discrepancy,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "gridMeta": self.grid_meta,
        }


@lru_cache(maxsize=None)
def _mapping_integrand(n: int, g: int, ell: tuple, budget: int | None) -> tuple:
    state = build_state(n, g, ell, budget=budget)
    h = build_scattering_symbolic(n, g, budget=budget).expression
    prod = _symmetric_product(h, _polynomial_factor(state.body))
    return prod, float(math.pi ** float(state.pi_power))


def verify_mapping(n: int, g: int, ell: Sequence[int], z_samples: Sequence[Sequence[complex]],
                   tol: float | None = None, panel_grid: QuadratureGrid | None = None,
                   hermite_grid: QuadratureGrid | None = None, budget: int | None = DEFAULT_BUDGET,
                   threads: int | None = None) -> MappingReport:
    """Compare ``int_wedge e^{[z^2]/4} e^{-[x^2]/2} h_g psi_ell`` with ``Delta_z^g sum_pi prod z^ell``."""
    ell = tuple(int(v) for v in ell)
    tol = tol if tol is not None else DEFAULT_TOL.get(n, 1e-3)
    prod, norm = _mapping_integrand(n, int(g), ell, budget)
    target = lll_state(n, int(g), ell)
    zs = [np.asarray(z, dtype=complex) for z in z_samples]
    numerics = [prod.numeric(z) for z in zs]
    scales = [norm * complex(np.exp(np.sum(z * z) / 4)) for z in zs]
    rhs = [target.evaluate(z) for z in zs]
    if panel_grid is None:
        radius = max(choose_radius(f, z, tol, abs(r / s)) for f, z, r, s in zip(numerics, zs, rhs, scales))
        panel_grid = default_panel_grid(n, max(radius, PANEL_DEFAULTS[n][0]))
    auto_grids = hermite_grid is None
    hermite_grid = hermite_grid or default_hermite_grid(n)

    def run(pg, hg):
        lhs, lhs_full = [], []
        for num, scale in zip(numerics, scales):
            pair = both_strategies(Integrand(num, rate=1.0, symmetric=True), n, pg, hg, threads)
            lhs.append(pair.wedge * scale)
            lhs_full.append(pair.full * scale)
        return MappingReport(n, int(g), ell, zs, lhs, lhs_full, rhs, tol,
                             {"wedge": pg.describe(), "fullSpace": hg.describe()})

    report = run(panel_grid, hermite_grid)
    if auto_grids and report.strategy_discrepancy > 10 * tol:
        # the strategies disagree: refine both grids once and keep the refined result
        r0, p0, o0 = PANEL_DEFAULTS[n]
        finer_panel = default_panel_grid(n, panel_grid.radius, p0 + p0 // 2, o0)
        finer_hermite = default_hermite_grid(n, HERMITE_DEFAULTS[n] + HERMITE_DEFAULTS[n] // 2)
        report = run(finer_panel, finer_hermite)
        report.grid_meta["retried"] = True
    return report
