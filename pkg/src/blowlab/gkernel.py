"""Angular kernel from the spherical reduction of the fractional velocity law.

The kernel is

    g(lam, m, beta) = int_0^pi sin^m(mu) * (1 - 2 lam cos(mu) + lam^2)^(-(m/2+beta)) dmu

for lam >= 0, integer m >= 1 and beta > 0.  It is even and real-analytic in
lam on (-1, 1) with Taylor series sum_k a_2k lam^{2k}, where

    a_0  = B(1/2, (m+1)/2)
    a_2k = B(1/2, (m+1)/2) * (beta)_k ((m/2)+beta)_k / (k! ((m/2)+1)_k)

and a_2k / k^{2 beta - 2} tends to Gamma(1/2) Gamma(m/2+1/2) /
(Gamma(beta) Gamma(m/2+beta)).  Across lam = 1 it obeys the reflection
identity g(1/lam) = lam^{m+2 beta} g(lam); at lam = 1 it is finite for
beta < 1/2, diverges like log|1-lam| at beta = 1/2 and like
|1-lam|^{1-2 beta} for beta > 1/2.

The transport model uses the specialization m = n (space dimension) and
beta = alpha (half the smoothing order of the velocity law).

Evaluation strategy: truncated Taylor series up to ``lambda_cut``, composite
Gauss quadrature on panels graded toward mu = 0 between the cut and 1, and
the reflection identity beyond 1.  The quadrature works off the cancellation-
free form 1 - 2 lam cos(mu) + lam^2 = (1-lam)^2 + 4 lam sin^2(mu/2).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .quadrature import dyadic_edges, graded_edges, integrate, merge_edges, split_panels
from .specfun import beta as beta_fn
from .specfun import gamma, pochhammer

__all__ = [
    "SingularKernelError",
    "KernelParams",
    "QuadPolicy",
    "GEvaluator",
    "taylor_coeff",
    "coeff_ratio_limit",
    "g_eval",
    "g_prime",
    "g_second",
    "quadrature_value",
    "check_recurrence",
    "singularity_scale",
]


class SingularKernelError(ValueError):
    """Kernel evaluated at its non-integrable point (lam = 1, beta >= 1/2)."""


@dataclass(frozen=True)
class KernelParams:
    """Sin-power m and exponent offset beta of the angular kernel."""

    m: int
    beta: float

    def __post_init__(self):
        if self.m < 1 or int(self.m) != self.m:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")

    @property
    def exponent(self) -> float:
        """Power m/2 + beta applied to the quadratic form."""
        return 0.5 * self.m + self.beta


@dataclass(frozen=True)
class QuadPolicy:
    """Panel policy for the quadrature branch near the lam = 1 singularity."""

    base_panels: int = 12
    grading: float = 3.0
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_rounds: int = 4
    max_panels: int = 20000
    order: int = 16


def _sing_class(beta: float) -> str:
    if beta < 0.5:
        return "finite"
    if beta == 0.5:
        return "logarithmic"
    return "power"


@dataclass
class GEvaluator:
    """Configured kernel evaluator with a growable Taylor-coefficient cache.

    Immutable after construction except for the coefficient cache, which is
    guarded by a lock so concurrent evaluations may extend it safely.
    """

    params: KernelParams
    lambda_cut: float = 0.5
    quad: QuadPolicy = field(default_factory=QuadPolicy)
    series_tol: float = 1e-16

    def __post_init__(self):
        if not 0.0 < self.lambda_cut < 1.0:
            raise ValueError(f"lambda_cut must lie in (0, 1), got {self.lambda_cut!r}")
        a0 = beta_fn(0.5, (self.params.m + 1) / 2.0)
        self._coeffs = np.array([a0])
        self._lock = threading.Lock()

    @property
    def singularity_class(self) -> str:
        return _sing_class(self.params.beta)

    # -- Taylor coefficients ------------------------------------------------

    def coeffs(self, upto: int) -> np.ndarray:
        """Coefficients a_0 .. a_2*upto as a read-only view."""
        if upto >= self._coeffs.size:
            with self._lock:
                self._extend(upto)
        view = self._coeffs[: upto + 1]
        view.flags.writeable = False
        return view

    def _extend(self, upto: int):
        have = self._coeffs.size
        if upto < have:
            return
        m, b = self.params.m, self.params.beta
        k = np.arange(have - 1, upto, dtype=float)
        # a_{2(k+1)} = a_{2k} (beta+k)(m/2+beta+k) / ((k+1)(m/2+1+k))
        ratios = (b + k) * (0.5 * m + b + k) / ((k + 1.0) * (0.5 * m + 1.0 + k))
        tail = self._coeffs[-1] * np.cumprod(ratios)
        self._coeffs = np.concatenate((self._coeffs, tail))

    def _series_order(self, lam2_max: float, tol: float) -> int:
        if lam2_max <= 0.0:
            return 4
        k = 32
        while True:
            a = self.coeffs(k)
            # (2k)^2 margin covers the polynomial factors of derivative series
            if a[-1] * (2.0 * k) ** 2 * lam2_max**k <= tol or k >= 20000:
                return k
            k *= 2

    # -- series branch (vectorized) ------------------------------------------

    def series_many(self, lams, deriv: int = 0, tol: float | None = None) -> np.ndarray:
        """Taylor evaluation of g (deriv=0), g' (1) or g'' (2) at |lam| < 1."""
        lam = np.asarray(lams, dtype=float)
        if lam.size and np.max(np.abs(lam)) >= 1.0:
            raise ValueError("series evaluation requires |lam| < 1")
        tol = self.series_tol if tol is None else tol
        x = lam * lam
        kmax = self._series_order(float(np.max(x)) if x.size else 0.0, tol)
        a = self.coeffs(kmax)
        k = np.arange(a.size, dtype=float)
        if deriv == 0:
            c = a
        elif deriv == 1:
            c = 2.0 * k * a
        elif deriv == 2:
            c = 2.0 * k * (2.0 * k - 1.0) * a
        else:
            raise ValueError(f"deriv must be 0, 1 or 2, got {deriv!r}")
        # Horner in lam^2; derivative series start at k = 1
        lo = 0 if deriv == 0 else 1
        acc = np.full_like(x, c[-1])
        for j in range(c.size - 2, lo - 1, -1):
            acc = acc * x + c[j]
        if deriv == 1:
            acc = acc * lam
        return acc

    def series_value(self, lam: float, deriv: int = 0) -> float:
        return float(self.series_many(np.array([lam]), deriv)[0])


def taylor_coeff(params: KernelParams, k: int) -> float:
    """Closed Pochhammer form of a_2k; strictly positive for all k >= 0."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k!r}")
    m, b = params.m, params.beta
    a0 = beta_fn(0.5, (m + 1) / 2.0)
    if k == 0:
        return a0
    if k <= 50:
        return a0 * (pochhammer(b, k) * pochhammer(0.5 * m + b, k)
                     / (math.factorial(k) * pochhammer(0.5 * m + 1.0, k)))
    log_ratio = (math.lgamma(b + k) - math.lgamma(b)
                 + math.lgamma(0.5 * m + b + k) - math.lgamma(0.5 * m + b)
                 - math.lgamma(k + 1.0)
                 - math.lgamma(0.5 * m + 1.0 + k) + math.lgamma(0.5 * m + 1.0))
    return a0 * math.exp(log_ratio)


def coeff_ratio_limit(params: KernelParams) -> float:
    """Limit of a_2k / k^{2 beta - 2} as k grows."""
    m, b = params.m, params.beta
    return (gamma(0.5) * gamma(0.5 * m + 0.5)) / (gamma(b) * gamma(0.5 * m + b))


# -- quadrature branch --------------------------------------------------------


def _quad_integrand(params: KernelParams, lam: float, deriv: int):
    m, p = params.m, params.exponent

    def f(mu):
        s2 = np.sin(0.5 * mu) ** 2
        d = (1.0 - lam) ** 2 + 4.0 * lam * s2
        sinm = np.sin(mu) ** m
        if deriv == 0:
            return sinm * d ** (-p)
        shift = (lam - 1.0) + 2.0 * s2  # lam - cos(mu), cancellation-free
        if deriv == 1:
            return -2.0 * p * sinm * shift * d ** (-p - 1.0)
        return (-2.0 * p * sinm * d ** (-p - 1.0)
                + 2.0 * p * (2.0 * p + 2.0) * sinm * shift**2 * d ** (-p - 2.0))

    return f


def _mu_edges(lam: float, policy: QuadPolicy) -> np.ndarray:
    dist = max(abs(1.0 - lam), 1e-13)
    need = int(math.ceil((math.pi / dist) ** (1.0 / policy.grading))) + 4
    panels = min(max(policy.base_panels, need), policy.max_panels)
    return graded_edges(0.0, math.pi, panels, policy.grading)


def _unit_point_edges(policy: QuadPolicy) -> np.ndarray:
    # smooth at t = 0 after the power substitution; half-integer zero at t = 1
    left = graded_edges(0.0, 0.6, max(policy.base_panels, 16), 1.0)
    right = 1.0 - dyadic_edges(0.0, 0.4, 30)[::-1]
    return merge_edges(left, right, lo=0.0, hi=1.0)


def quadrature_value(ev: GEvaluator, lam: float, deriv: int = 0) -> float:
    """Direct composite-quadrature evaluation of the defining integral.

    Valid for any lam >= 0 except lam = 1 with beta >= 1/2; serves as the
    independent check against the series branch.  Derivatives are only
    defined on [0, 1).
    """
    params, policy = ev.params, ev.quad
    if deriv not in (0, 1, 2):
        raise ValueError(f"deriv must be 0, 1 or 2, got {deriv!r}")
    if deriv > 0 and lam >= 1.0:
        raise ValueError("kernel derivatives are only evaluated for lam < 1")
    if lam == 1.0:
        if params.beta >= 0.5:
            raise SingularKernelError(
                f"kernel is not integrable at lam = 1 for beta = {params.beta}")
        # u = sin(mu/2) reduces the integrand to 2^{1-2b} u^{-2b} (1-u^2)^{(m-1)/2};
        # u = t^pw then removes the endpoint singularity entirely.
        m, b = params.m, params.beta
        pw = max(2, math.ceil(2.5 / (1.0 - 2.0 * b)))

        def f(t):
            tp = t**pw
            return (2.0 ** (1.0 - 2.0 * b) * pw * t ** (pw * (1.0 - 2.0 * b) - 1.0)
                    * (1.0 - tp * tp) ** (0.5 * (m - 1)))

        edges = _unit_point_edges(policy)
    else:
        f = _quad_integrand(params, lam, deriv)
        edges = _mu_edges(lam, policy)

    value = integrate(f, edges, policy.order)
    for _ in range(policy.max_rounds):
        edges = split_panels(edges)
        new = integrate(f, edges, policy.order)
        err = abs(new - value)
        value = new
        if err <= max(policy.abs_tol, policy.rel_tol * abs(value)):
            break
    return value


# -- public evaluation ---------------------------------------------------------


def g_eval(ev: GEvaluator, lam: float) -> float:
    """Kernel value at lam >= 0: series, graded quadrature, or reflection."""
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam!r}")
    if lam == 1.0:
        if ev.params.beta >= 0.5:
            raise SingularKernelError(
                f"kernel is not integrable at lam = 1 for beta = {ev.params.beta}")
        return quadrature_value(ev, 1.0)
    if lam > 1.0:
        m2b = ev.params.m + 2.0 * ev.params.beta
        return lam ** (-m2b) * g_eval(ev, 1.0 / lam)
    if lam <= ev.lambda_cut:
        return ev.series_value(lam)
    return quadrature_value(ev, lam)


def g_prime(ev: GEvaluator, lam: float) -> float:
    """First derivative in lam, on [0, 1) only."""
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"g_prime requires 0 <= lam < 1, got {lam!r}")
    if lam <= ev.lambda_cut:
        return ev.series_value(lam, deriv=1)
    return quadrature_value(ev, lam, deriv=1)


def g_second(ev: GEvaluator, lam: float) -> float:
    """Second derivative in lam, on [0, 1) only."""
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"g_second requires 0 <= lam < 1, got {lam!r}")
    if lam <= ev.lambda_cut:
        return ev.series_value(lam, deriv=2)
    return quadrature_value(ev, lam, deriv=2)


def values_many(ev: GEvaluator, lams, deriv: int = 0) -> np.ndarray:
    """Vectorized evaluation over an array of lam in [0, 1) (reflection for >1)."""
    lam = np.asarray(lams, dtype=float)
    out = np.empty_like(lam)
    refl = lam > 1.0
    if np.any(refl):
        m2b = ev.params.m + 2.0 * ev.params.beta
        if deriv != 0:
            raise ValueError("vectorized derivatives only supported for lam < 1")
        out[refl] = lam[refl] ** (-m2b) * values_many(ev, 1.0 / lam[refl])
    rest = ~refl
    ser = rest & (lam <= ev.lambda_cut)
    if np.any(ser):
        out[ser] = ev.series_many(lam[ser], deriv)
    quad = rest & ~ser
    for i in np.nonzero(quad)[0]:
        out[i] = quadrature_value(ev, float(lam[i]), deriv)
    return out


def check_recurrence(lam: float, m: int, beta: float) -> float:
    """Relative residual of the second-derivative parameter-shift identity.

    Compares d2g/dlam2 at (m, beta) against
    (m+2b) [ (m+2b+1) g(lam, m, beta+1) - (m+2b+2) g(lam, m+2, beta+1) ],
    with the two sides produced by independent evaluator configurations.
    """
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"check_recurrence requires 0 <= lam < 1, got {lam!r}")
    ev = GEvaluator(KernelParams(m, beta))
    lhs = g_second(ev, lam)
    m2b = m + 2.0 * beta
    rhs = m2b * ((m2b + 1.0) * g_eval(GEvaluator(KernelParams(m, beta + 1.0)), lam)
                 - (m2b + 2.0) * g_eval(GEvaluator(KernelParams(m + 2, beta + 1.0)), lam))
    return abs(lhs - rhs) / (1.0 + abs(rhs))


def singularity_scale(ev: GEvaluator, distances) -> float:
    """Fitted log-log slope of g(1 - d) against d for d shrinking to 0.

    For beta > 1/2 the slope approaches 1 - 2 beta; at beta = 1/2 the kernel
    grows like log(1/d) so the fitted slope drifts toward 0 while the values
    diverge; for beta < 1/2 the values stay bounded and the slope is ~0.
    """
    d = np.asarray(distances, dtype=float)
    if d.ndim != 1 or d.size < 2:
        raise ValueError("need at least two distances to fit a slope")
    if np.any((d <= 0) | (d >= 1)):
        raise ValueError("distances must lie in (0, 1)")
    vals = np.array([g_eval(ev, 1.0 - di) for di in d])
    slope = np.polyfit(np.log(d), np.log(vals), 1)[0]
    return float(slope)
