"""Composite Gauss-Legendre quadrature on graded panel meshes.

All the singular integrals in this package share one structure: an integrand
that is smooth except for an algebraic or logarithmic feature at a known
location.  Panels clustered toward that location (power-law grading or dyadic
halving) restore per-panel smoothness, so a fixed-order Gauss rule converges
geometrically as panels are split.  Integrand callables must accept numpy
arrays.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = [
    "QuadratureError",
    "gauss_legendre",
    "panel_rule",
    "integrate",
    "integrate_refining",
    "graded_edges",
    "dyadic_edges",
    "merge_edges",
    "split_panels",
]


class QuadratureError(RuntimeError):
    """Requested tolerance was not reached; carries the best value found."""

    def __init__(self, message: str, value: float | None = None,
                 achieved: float | None = None):
        super().__init__(message)
        self.value = value
        self.achieved = achieved


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_rule(edges, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss rule over consecutive panels."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    a = edges[:-1][:, None]
    h = np.diff(edges)[:, None]
    nodes = a + 0.5 * h * (x[None, :] + 1.0)
    weights = 0.5 * h * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate(f, edges, order: int = 16) -> float:
    nodes, weights = panel_rule(edges, order)
    return float(weights @ np.asarray(f(nodes), dtype=float))


def integrate_refining(f, edges, order: int = 16, rel_tol: float = 1e-11,
                       abs_tol: float = 1e-14, max_rounds: int = 4,
                       strict: bool = False) -> tuple[float, float]:
    """Integrate, splitting every panel in half until two rounds agree.

    Returns (value, error_estimate).  With strict=True a failure to converge
    raises QuadratureError instead of returning the best estimate.
    """
    edges = np.asarray(edges, dtype=float)
    value = integrate(f, edges, order)
    err = np.inf
    for _ in range(max_rounds):
        edges = split_panels(edges)
        new = integrate(f, edges, order)
        err = abs(new - value)
        value = new
        if err <= max(abs_tol, rel_tol * abs(value)):
            return value, err
    if strict:
        raise QuadratureError(
            f"quadrature stalled at error estimate {err:.3e}",
            value=value, achieved=err)
    return value, err


def graded_edges(a: float, b: float, panels: int, exponent: float = 3.0) -> np.ndarray:
    """Panel edges on [a, b] clustered toward a with power-law grading."""
    t = np.linspace(0.0, 1.0, panels + 1) ** float(exponent)
    return a + (b - a) * t


def dyadic_edges(a: float, b: float, levels: int) -> np.ndarray:
    """Panel edges on [a, b] whose widths halve toward a."""
    if levels < 1:
        return np.array([a, b], dtype=float)
    frac = 0.5 ** np.arange(levels, 0, -1, dtype=float)
    return np.concatenate(([a], a + (b - a) * frac))


def merge_edges(*edge_sets, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """Sorted union of edge sets, optionally clipped to [lo, hi]."""
    pts = np.unique(np.concatenate([np.atleast_1d(np.asarray(e, float))
                                    for e in edge_sets]))
    if lo is not None:
        pts = np.concatenate(([lo], pts[pts > lo]))
    if hi is not None:
        pts = np.concatenate((pts[pts < hi], [hi]))
    # collapse panels much smaller than fp resolution of their location
    keep = np.concatenate(([True], np.diff(pts) > 1e-15 * (1.0 + np.abs(pts[1:]))))
    return pts[keep]


def split_panels(edges) -> np.ndarray:
    edges = np.asarray(edges, dtype=float)
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(edges.size + mids.size)
    out[0::2] = edges
    out[1::2] = mids
    return out
