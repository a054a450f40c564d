"""Numerical laboratory for a radial nonlocal transport model.

The model transports a scalar theta by the velocity u = grad(Lambda^{-2+2a})theta,
where Lambda is the fractional Laplacian, 0 < a < 1 and the space dimension is
n >= 2.  This package evaluates the angular kernel produced by the spherical
reduction of that velocity law, verifies the weighted nonlinear inequalities
that drive the blow-up mechanism with explicitly tracked constants, constructs
qualifying initial data, and advects the radial dynamics against the
closed-form Riccati comparison solution.
"""

__version__ = "0.1.0"

from .gkernel import GEvaluator, KernelParams
from .radial import RadialProfile, bump_profile, gaussian_profile

__all__ = [
    "__version__",
    "GEvaluator",
    "KernelParams",
    "RadialProfile",
    "bump_profile",
    "gaussian_profile",
]
