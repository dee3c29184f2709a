"""Quadrature grids and a deterministic chunked integrator."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_genlaguerre, roots_hermite, roots_legendre

GAUSS_HERMITE = "GaussHermiteTensor"
GAUSS_LEGENDRE = "GaussLegendrePanels"
GEN_LAGUERRE = "HalfLineGeneralizedLaguerre"

DEFAULT_CHUNK = 1 << 15


@dataclass
class QuadratureGrid:
    """Nodes and positive weights.

    ``gaussian_rate`` is the rate ``c`` of an ``exp(-c [x^2])`` factor already
    folded into the weights (Gauss-Hermite grids); integrands then supply the
    remaining factor only.
    """

    scheme: str
    nodes: np.ndarray
    weights: np.ndarray
    wedge_filter: bool = False
    radius: float | None = None
    gaussian_rate: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def describe(self) -> dict:
        d = {"scheme": self.scheme, "points": int(self.size), "wedgeFilter": self.wedge_filter,
             "gaussianRate": self.gaussian_rate}
        if self.radius is not None:
            d["boxRadius"] = self.radius
        d.update(self.meta)
        return d


def _tensor(nodes_1d: np.ndarray, weights_1d: np.ndarray, n: int):
    grids = np.meshgrid(*([nodes_1d] * n), indexing="ij")
    wgrids = np.meshgrid(*([weights_1d] * n), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([w.ravel() for w in wgrids], axis=1), axis=1)
    return nodes, weights


def gauss_hermite_tensor(n: int, points: int, rate: float = 1.0) -> QuadratureGrid:
    """Full-space tensor grid for ``int f(x) exp(-rate [x^2]) dx``."""
    y, w = roots_hermite(points)
    scale = 1.0 / math.sqrt(rate)
    nodes, weights = _tensor(y * scale, w * scale, n)
    return QuadratureGrid(GAUSS_HERMITE, nodes, weights, gaussian_rate=float(rate),
                          meta={"pointsPerAxis": points})


def _panel_rule(lo: float, hi: float, panels: int, order: int):
    t, w = roots_legendre(order)
    edges = np.linspace(lo, hi, panels + 1)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = (b - a) / 2
        nodes.append(a + half * (t + 1))
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def gauss_legendre_panels(n: int, radius: float, panels: int, order: int, wedge: bool = True) -> QuadratureGrid:
    """Composite Gauss-Legendre grid on a box, or on the ordered wedge.

    The wedge version uses ordered-gap coordinates ``x_1 = u``,
    ``x_{k+1} = x_k + t_k`` with ``u`` in ``[-R, R]`` and ``t_k`` in ``[0, 2R]``;
    the map has unit Jacobian and every node satisfies ``x_1 < ... < x_n``
    strictly, so the wedge filter never meets a tie.
    """
    u, wu = _panel_rule(-radius, radius, panels, order)
    if not wedge or n == 1:
        nodes, weights = _tensor(u, wu, n)
        return QuadratureGrid(GAUSS_LEGENDRE, nodes, weights, wedge_filter=wedge, radius=radius,
                              meta={"panels": panels, "order": order})
    t, wt = _panel_rule(0.0, 2 * radius, panels, order)
    axes = [u] + [t] * (n - 1)
    waxes = [wu] + [wt] * (n - 1)
    grids = np.meshgrid(*axes, indexing="ij")
    wgrids = np.meshgrid(*waxes, indexing="ij")
    gaps = np.stack([g.ravel() for g in grids], axis=1)
    nodes = np.cumsum(gaps, axis=1)
    weights = np.prod(np.stack([w.ravel() for w in wgrids], axis=1), axis=1)
    return QuadratureGrid(GAUSS_LEGENDRE, nodes, weights, wedge_filter=True, radius=radius,
                          meta={"panels": panels, "order": order, "coordinates": "ordered-gap"})


def wedge_filtered(grid: QuadratureGrid) -> QuadratureGrid:
    """Keep only nodes with ``x_1 < ... < x_n`` (ties are dropped)."""
    keep = np.all(np.diff(grid.nodes, axis=1) > 0, axis=1)
    return QuadratureGrid(grid.scheme, grid.nodes[keep], grid.weights[keep], True, grid.radius,
                          grid.gaussian_rate, dict(grid.meta))


def generalized_laguerre(points: int, alpha: float) -> QuadratureGrid:
    """Half-line rule for ``int_0^inf t^alpha exp(-t) f(t) dt``."""
    t, w = roots_genlaguerre(points, alpha)
    return QuadratureGrid(GEN_LAGUERRE, t[:, None], w, meta={"alpha": alpha, "points": points})


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CAK_THREADS", "1")))
    except ValueError:
        return 1


def _pairwise_sum(values: list) -> complex:
    """Fixed-shape tree reduction so the result does not depend on worker count."""
    while len(values) > 1:
        nxt = [values[k] + values[k + 1] for k in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            nxt.append(values[-1])
        values = nxt
    return values[0] if values else 0j


def integrate(values_at: Callable[[np.ndarray], np.ndarray], nodes: np.ndarray, weights: np.ndarray,
              chunk: int = DEFAULT_CHUNK, threads: int | None = None) -> complex:
    """``sum_k w_k f(x_k)`` over fixed chunks, merged by a pairwise tree."""
    starts = list(range(0, len(weights), chunk))

    def partial(s):
        sl = slice(s, s + chunk)
        return complex(np.sum(weights[sl] * values_at(nodes[sl])))

    workers = threads if threads is not None else thread_count()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial, starts))
    else:
        parts = [partial(s) for s in starts]
    return _pairwise_sum(parts)
