"""Classical real special functions underpinning every tracked constant.

Thin, scalar, and strict about domains: Gamma and Beta for positive real
arguments, the rising factorial, unit-sphere surface areas, and the
exponential integral used for weighted tail corrections.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "gamma",
    "gamma_limit_partial",
    "beta",
    "pochhammer",
    "sphere_area",
    "exp1",
]

_LOG_POCHHAMMER_CUTOFF = 50


def gamma(s: float) -> float:
    """Gamma(s) for s > 0, via the platform's minimax implementation."""
    if not s > 0:
        raise ValueError(f"gamma requires s > 0, got {s!r}")
    return math.gamma(s)


def gamma_limit_partial(s: float, k: int) -> float:
    """k-th term of the product sequence k^s k! / (s (s+1) ... (s+k)).

    Converges to gamma(s) as k grows, at an O(1/k) rate.  Evaluated in the
    log domain so large k cannot overflow.
    """
    if not s > 0:
        raise ValueError(f"gamma_limit_partial requires s > 0, got {s!r}")
    if k < 1:
        raise ValueError(f"gamma_limit_partial requires k >= 1, got {k!r}")
    # s(s+1)...(s+k) = Gamma(s+k+1) / Gamma(s)
    log_value = (s * math.log(k) + math.lgamma(k + 1)
                 + math.lgamma(s) - math.lgamma(s + k + 1))
    return math.exp(log_value)


def beta(p: float, q: float) -> float:
    """Beta(p, q) = Gamma(p) Gamma(q) / Gamma(p + q) for p, q > 0."""
    if not (p > 0 and q > 0):
        raise ValueError(f"beta requires positive arguments, got ({p!r}, {q!r})")
    return math.exp(math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q))


def pochhammer(x: float, k: int) -> float:
    """Rising factorial (x)_k = x (x+1) ... (x+k-1), with (x)_0 = 1.

    For k > 50 and x > 0 the product is formed in the log domain; this keeps
    coefficient asymptotics evaluable out to k ~ 1e5 without overflow.
    """
    if k < 0:
        raise ValueError(f"pochhammer requires k >= 0, got {k!r}")
    if k == 0:
        return 1.0
    if k > _LOG_POCHHAMMER_CUTOFF and x > 0:
        return math.exp(math.lgamma(x + k) - math.lgamma(x))
    out = 1.0
    for j in range(k):
        out *= x + j
    return out


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2)."""
    if n < 1:
        raise ValueError(f"sphere_area requires n >= 1, got {n!r}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


_EULER_GAMMA = float(np.euler_gamma)


def exp1(x: float) -> float:
    """Exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0."""
    if not x > 0:
        raise ValueError(f"exp1 requires x > 0, got {x!r}")
    if x < 1.0:
        # alternating series, terms shrink fast for x < 1
        total = -_EULER_GAMMA - math.log(x)
        term = -1.0
        for k in range(1, 40):
            term *= -x / k
            total += term / k
            if abs(term / k) < 1e-18 * max(1.0, abs(total)):
                break
        return total
    u, w = np.polynomial.laguerre.laggauss(80)
    return math.exp(-x) * float(np.sum(w / (x + u)))
