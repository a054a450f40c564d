"""Radial profiles, built-in test families, and scalar weighted functionals.

A profile is a radial function f(|x|) with vectorized value/derivative
callables plus an operational decay certificate: beyond ``tail_radius`` the
profile stays within ``tail_tol`` of ``tail_value``, so every improper
integral here is a graded-panel quadrature on [0, tail_radius] plus a closed
tail term evaluated as if f were constant there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import QuadratureError, dyadic_edges, integrate_refining, merge_edges
from .specfun import exp1, sphere_area

__all__ = [
    "DivergentIntegralError",
    "RadialProfile",
    "gaussian_profile",
    "bump_profile",
    "constant_profile",
    "sampled_profile",
    "oscillatory_profile",
    "scale_profile",
    "functional_J",
    "functional_R",
    "young_check",
    "YoungCheck",
]


class DivergentIntegralError(ValueError):
    """Near-origin behavior violates the integrability precondition."""


@dataclass(frozen=True)
class RadialProfile:
    """Radial scalar function with value/derivative access and a decay certificate."""

    kind: str                       # "analytic" or "sampled"
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    sup_norm: float
    tail_radius: float
    tail_tol: float
    tail_value: float = 0.0
    # optional cancellation-free evaluation of f(0) - f(rho)
    diff_from_origin: Callable[[np.ndarray], np.ndarray] | None = None
    breakpoints: tuple[float, ...] = ()
    name: str = ""

    @property
    def f0(self) -> float:
        return float(np.asarray(self.value(np.array([0.0])))[0])

    def diff0(self, rho: np.ndarray) -> np.ndarray:
        """f(0) - f(rho), using the accurate form when the family provides one."""
        if self.diff_from_origin is not None:
            return self.diff_from_origin(rho)
        return self.f0 - np.asarray(self.value(rho))


def gaussian_profile(a: float) -> RadialProfile:
    """f(r) = exp(-a r^2); the generic smooth rapidly decaying test profile."""
    if not a > 0:
        raise ValueError(f"gaussian_profile requires a > 0, got {a!r}")
    r_tail = math.sqrt(38.0 / a)

    def value(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-a * r * r)

    def derivative(r):
        r = np.asarray(r, dtype=float)
        return -2.0 * a * r * np.exp(-a * r * r)

    def diff0(r):
        r = np.asarray(r, dtype=float)
        return -np.expm1(-a * r * r)

    return RadialProfile(
        kind="analytic", value=value, derivative=derivative, sup_norm=1.0,
        tail_radius=r_tail, tail_tol=math.exp(-38.0), diff_from_origin=diff0,
        breakpoints=(1.0 / math.sqrt(a),), name=f"gaussian(a={a:g})")


def bump_profile(delta: float) -> RadialProfile:
    """Smooth bump: 1 on [0, delta], 0 beyond 2 delta, glued in between.

    On (delta, 2 delta) the value is s(-q) with the logistic s and
    q(r) = 1/(2 delta - r) - 1/(r - delta); the logistic form keeps the
    evaluation finite for delta all the way down to ~1e-150.
    """
    if not delta > 0:
        raise ValueError(f"bump_profile requires delta > 0, got {delta!r}")
    d = float(delta)

    def _masks(r):
        r = np.asarray(r, dtype=float)
        inner = r <= d
        outer = r >= 2.0 * d
        trans = ~inner & ~outer
        return r, inner, outer, trans

    def _q(r):
        return 1.0 / (2.0 * d - r) - 1.0 / (r - d)

    def value(r):
        r, inner, outer, trans = _masks(r)
        out = np.zeros_like(r)
        out[inner] = 1.0
        if np.any(trans):
            q = _q(r[trans])
            out[trans] = np.where(q >= 0,
                                  np.exp(-np.minimum(q, 745.0)) / (1.0 + np.exp(-np.minimum(q, 745.0))),
                                  1.0 / (1.0 + np.exp(np.maximum(q, -745.0))))
        return out

    def derivative(r):
        r, inner, outer, trans = _masks(r)
        out = np.zeros_like(r)
        if np.any(trans):
            rt = r[trans]
            q = _q(rt)
            t = np.exp(-np.minimum(np.abs(q), 745.0))
            sig_prod = t / (1.0 + t) ** 2          # f (1 - f)
            qp = (2.0 * d - rt) ** -2 + (rt - d) ** -2
            out[trans] = -sig_prod * qp
        return out

    def diff0(r):
        r, inner, outer, trans = _masks(r)
        out = np.zeros_like(r)
        out[outer] = 1.0
        if np.any(trans):
            q = _q(r[trans])
            out[trans] = np.where(q >= 0,
                                  1.0 / (1.0 + np.exp(-np.minimum(q, 745.0))),
                                  np.exp(np.maximum(q, -745.0)) / (1.0 + np.exp(np.maximum(q, -745.0))))
        return out

    return RadialProfile(
        kind="analytic", value=value, derivative=derivative, sup_norm=1.0,
        tail_radius=2.0 * d, tail_tol=0.0, diff_from_origin=diff0,
        breakpoints=(d, 1.5 * d, 2.0 * d), name=f"bump(delta={d:g})")


def constant_profile(c: float = 1.0) -> RadialProfile:
    def value(r):
        return np.full_like(np.asarray(r, dtype=float), c)

    def derivative(r):
        return np.zeros_like(np.asarray(r, dtype=float))

    return RadialProfile(
        kind="analytic", value=value, derivative=derivative, sup_norm=abs(c),
        tail_radius=1.0, tail_tol=abs(c), tail_value=c,
        diff_from_origin=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        name=f"constant({c:g})")


def scale_profile(f: RadialProfile, c: float) -> RadialProfile:
    """Profile c * f, inheriting f's certificate scaled by |c|."""
    diff = None
    if f.diff_from_origin is not None:
        diff = lambda r: c * f.diff_from_origin(r)  # noqa: E731
    return RadialProfile(
        kind=f.kind, value=lambda r: c * f.value(r),
        derivative=lambda r: c * f.derivative(r),
        sup_norm=abs(c) * f.sup_norm, tail_radius=f.tail_radius,
        tail_tol=abs(c) * f.tail_tol, tail_value=c * f.tail_value,
        diff_from_origin=diff, breakpoints=f.breakpoints,
        name=f"{f.name}*{c:g}")


# -- monotone cubic interpolation for sampled profiles -------------------------


def _pchip_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # Fritsch-Carlson shape-preserving slopes
    h = np.diff(x)
    delta = np.diff(y) / h
    d = np.zeros_like(y)
    if y.size == 2:
        d[:] = delta[0]
        return d
    w1 = 2.0 * h[1:] + h[:-1]
    w2 = h[1:] + 2.0 * h[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        harm = (w1 + w2) / (w1 / delta[:-1] + w2 / delta[1:])
    ok = (np.sign(delta[:-1]) * np.sign(delta[1:])) > 0
    d[1:-1] = np.where(ok, harm, 0.0)

    def _end(h0, h1, d0, d1):
        s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
        if np.sign(s) != np.sign(d0):
            return 0.0
        if np.sign(d0) != np.sign(d1) and abs(s) > 3.0 * abs(d0):
            return 3.0 * d0
        return s

    d[0] = _end(h[0], h[1], delta[0], delta[1])
    d[-1] = _end(h[-1], h[-2], delta[-1], delta[-2])
    return d


class _Pchip:
    def __init__(self, x, y, slopes=None):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.d = _pchip_slopes(self.x, self.y) if slopes is None else np.asarray(slopes, float)

    def _locate(self, r):
        idx = np.clip(np.searchsorted(self.x, r, side="right") - 1, 0, self.x.size - 2)
        h = self.x[idx + 1] - self.x[idx]
        t = (r - self.x[idx]) / h
        return idx, h, t

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        idx, h, t = self._locate(np.clip(r, self.x[0], self.x[-1]))
        y0, y1 = self.y[idx], self.y[idx + 1]
        d0, d1 = self.d[idx], self.d[idx + 1]
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t * t * (3 - 2 * t)
        h11 = t * t * (t - 1)
        out = h00 * y0 + h * h10 * d0 + h01 * y1 + h * h11 * d1
        return np.where(r > self.x[-1], 0.0, out)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        idx, h, t = self._locate(np.clip(r, self.x[0], self.x[-1]))
        y0, y1 = self.y[idx], self.y[idx + 1]
        d0, d1 = self.d[idx], self.d[idx + 1]
        dh00 = 6 * t * (t - 1) / h
        dh10 = (1 - t) * (1 - 3 * t)
        dh01 = -6 * t * (t - 1) / h
        dh11 = t * (3 * t - 2)
        out = dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1
        return np.where(r > self.x[-1], 0.0, out)


def _diff4(y: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h)
    d[-2] = -(-3 * y[-1] - 10 * y[-2] + 18 * y[-3] - 6 * y[-4] + y[-5]) / (12 * h)
    d[-1] = -(-25 * y[-1] + 48 * y[-2] - 36 * y[-3] + 16 * y[-4] - 3 * y[-5]) / (12 * h)
    return d


def sampled_profile(r_samples, f_samples, fprime_samples=None, name: str = "sampled") -> RadialProfile:
    """Profile from samples on [0, r_max]; zero beyond the last sample.

    Values interpolate with a monotone-preserving cubic.  The derivative uses
    supplied samples when given; otherwise 4th-order central differences on a
    uniform grid (interpolant slopes on a nonuniform one).
    """
    r = np.asarray(r_samples, dtype=float)
    y = np.asarray(f_samples, dtype=float)
    if r.ndim != 1 or r.size < 5 or np.any(np.diff(r) <= 0) or r[0] != 0.0:
        raise ValueError("need >= 5 strictly increasing samples starting at r = 0")
    interp = _Pchip(r, y)
    if fprime_samples is not None:
        dp = _Pchip(r, np.asarray(fprime_samples, dtype=float))
        deriv = dp.__call__
    else:
        h = np.diff(r)
        if np.allclose(h, h[0], rtol=1e-9):
            dp = _Pchip(r, _diff4(y, float(h[0])))
            deriv = dp.__call__
        else:
            deriv = interp.deriv
    return RadialProfile(
        kind="sampled", value=interp.__call__, derivative=deriv,
        sup_norm=float(np.max(np.abs(y))), tail_radius=float(r[-1]),
        tail_tol=max(float(np.abs(y[-1])), 1e-15), breakpoints=(float(r[-1]),),
        name=name)


def oscillatory_profile(decay: float = 1.0, wavenumber: float = 3.0,
                        r_max: float = 6.5, n_samples: int = 2001) -> RadialProfile:
    """Sampled profile with an oscillating, rapidly decaying tail."""
    r = np.linspace(0.0, r_max, n_samples)
    f = np.exp(-decay * r * r) * np.cos(wavenumber * r)
    prof = sampled_profile(r, f, name=f"oscillatory(decay={decay:g},k={wavenumber:g})")
    return prof


# -- weighted functionals -------------------------------------------------------


def _panel_edges(f: RadialProfile, upper: float) -> np.ndarray:
    bps = [b for b in f.breakpoints if 0.0 < b < upper]
    smallest = min(bps) if bps else 1e-3 * upper
    levels = min(240, max(14, int(math.ceil(math.log2(upper / smallest))) + 6))
    return merge_edges(dyadic_edges(0.0, upper, levels), bps, lo=0.0, hi=upper)


def _refined(f_int, edges, rel_tol, what: str) -> float:
    try:
        value, _ = integrate_refining(f_int, edges, order=16, rel_tol=rel_tol,
                                      abs_tol=1e-15, max_rounds=3, strict=True)
    except QuadratureError as exc:
        raise QuadratureError(
            f"{what}: quadrature stalled, achieved {exc.achieved:.3e}",
            value=exc.value, achieved=exc.achieved) from exc
    return value


def functional_J(f: RadialProfile, n: int, rel_tol: float = 1e-10) -> float:
    """Weighted average growth seed: area(S^{n-1}) * int (f(0)-f(rho)) e^-rho / rho drho.

    The integrand's rho -> 0 limit is -f'(0+); below a tiny switch radius the
    quotient is replaced by the Taylor-regularized value -f'(rho)/2 to avoid
    0/0 noise.
    """
    upper = f.tail_radius
    scale = min(f.breakpoints[0], upper) if f.breakpoints else upper
    reg = 1e-8 * scale

    def integrand(rho):
        quotient = np.where(rho >= reg, f.diff0(rho) / np.where(rho >= reg, rho, 1.0),
                            -0.5 * np.asarray(f.derivative(rho)))
        return np.exp(-rho) * quotient

    grid = _refined(integrand, _panel_edges(f, upper), rel_tol, "functional_J")
    tail = (f.f0 - f.tail_value) * exp1(upper)
    return sphere_area(n) * (grid + tail)


def _origin_slope_guard(f: RadialProfile, alpha: float):
    # integrand (f(0)-f)^2 rho^{-1-2a} integrates near 0 iff f(0)-f = O(rho^p), p > a
    upper = f.tail_radius
    scale = min(f.breakpoints[0], upper) if f.breakpoints else min(1.0, upper / 4.0)
    radii = scale * np.array([1e-3, 3e-3, 1e-2, 3e-2])
    diffs = np.abs(f.diff0(radii))
    ok = diffs > 1e-13 * max(1.0, abs(f.f0))
    if np.count_nonzero(ok) < 2:
        return
    slope = np.polyfit(np.log(radii[ok]), np.log(diffs[ok]), 1)[0]
    if slope <= alpha + 0.01:
        raise DivergentIntegralError(
            f"near-origin increment scales like rho^{slope:.3f} <= alpha = {alpha}; "
            "the quadratic-increment precondition fails")


def functional_R(f: RadialProfile, n: int, alpha: float, rel_tol: float = 1e-9) -> float:
    """Squared-increment energy: area(S^{n-1}) * int (f(0)-f)^2 rho^{-1-2 alpha} drho."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    _origin_slope_guard(f, alpha)
    upper = f.tail_radius

    def integrand(rho):
        return f.diff0(rho) ** 2 * rho ** (-1.0 - 2.0 * alpha)

    grid = _refined(integrand, _panel_edges(f, upper), rel_tol, "functional_R")
    tail = (f.f0 - f.tail_value) ** 2 * upper ** (-2.0 * alpha) / (2.0 * alpha)
    return sphere_area(n) * (grid + tail)


# one-dimensional ingredients of the three epsilon-split inequalities
def _term_power(f, power: float, rel_tol=1e-10) -> float:
    upper = f.tail_radius

    def integrand(rho):
        return f.diff0(rho) ** 2 * rho ** (-power)

    grid = _refined(integrand, _panel_edges(f, upper), rel_tol, f"increment power {power}")
    tail = (f.f0 - f.tail_value) ** 2 * upper ** (1.0 - power) / (power - 1.0)
    return grid + tail


def _term_half_exp(f, rel_tol=1e-10) -> float:
    upper = max(f.tail_radius, 40.0)

    def integrand(rho):
        return f.diff0(rho) ** 2 * np.exp(-0.5 * rho) / rho

    grid = _refined(integrand, _panel_edges(f, upper), rel_tol, "increment exp weight")
    tail = (f.f0 - f.tail_value) ** 2 * exp1(0.5 * upper)
    return grid + tail


def _term_one_minus_exp(f, rel_tol=1e-10) -> float:
    upper = f.tail_radius

    def integrand(rho):
        return f.diff0(rho) ** 2 * (-np.expm1(-0.5 * rho)) / rho**2

    grid = _refined(integrand, _panel_edges(f, upper), rel_tol, "increment 1-exp weight")
    R = upper
    tail = (f.f0 - f.tail_value) ** 2 * (1.0 / R - math.exp(-0.5 * R) / R + 0.5 * exp1(0.5 * R))
    return grid + tail


@dataclass(frozen=True)
class YoungCheck:
    lhs: float
    rhs: float
    holds: bool


def young_check(f: RadialProfile, alpha: float, eps: float, which: int) -> YoungCheck:
    """Evaluate both sides of one of the three epsilon-split increment bounds.

    which=1 (needs 1/2 < alpha < 1):
        int (f-f(0))^2 rho^{-2a} <= eps * int (f-f(0))^2 rho^{-1-2a}
                                    + (1/((2-2a) eps) + 4/(2a-1)) sup^2
    which=2:
        int (f-f(0))^2 / (rho e^{rho/2}) <= eps * int (f-f(0))^2 rho^{-2}
                                            + (8 + 1/eps) sup^2
    which=3:
        int (f-f(0))^2 (1-e^{-rho/2}) rho^{-2} <= eps * int (f-f(0))^2 rho^{-2}
                                                  + (4 + 1/(4 eps)) sup^2
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    sup2 = f.sup_norm**2
    if which == 1:
        if not 0.5 < alpha < 1.0:
            raise ValueError("inequality 1 requires 1/2 < alpha < 1")
        lhs = _term_power(f, 2.0 * alpha)
        rhs = eps * _term_power(f, 1.0 + 2.0 * alpha) \
            + (1.0 / ((2.0 - 2.0 * alpha) * eps) + 4.0 / (2.0 * alpha - 1.0)) * sup2
    elif which == 2:
        lhs = _term_half_exp(f)
        rhs = eps * _term_power(f, 2.0) + (8.0 + 1.0 / eps) * sup2
    elif which == 3:
        lhs = _term_one_minus_exp(f)
        rhs = eps * _term_power(f, 2.0) + (4.0 + 0.25 / eps) * sup2
    else:
        raise ValueError(f"which must be 1, 2 or 3, got {which!r}")
    holds = lhs <= rhs + 1e-10 * (1.0 + abs(rhs))
    return YoungCheck(lhs=lhs, rhs=rhs, holds=holds)
