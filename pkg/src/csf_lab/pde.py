"""Right-hand sides of the theta-gauge evolution equations.

pressure:    p_t = p p_thth - p_th^2 / 2 + 2 p^2
normalized:  k_tau = k^2 k_thth + k^3 - k      (k = kappa * sqrt(-2t), tau = -log(-t)/2)
"""

import numpy as np

from . import _spectral
from .geometry import require_positive


def pressure_rhs_values(p):
    p_th = _spectral.derivative(p, 1)
    p_thth = _spectral.derivative(p, 2)
    return p * p_thth - 0.5 * p_th ** 2 + 2.0 * p ** 2


def pressure_rhs(profile):
    """Evaluate the pressure equation's right side with spectral derivatives."""
    require_positive(profile)
    return pressure_rhs_values(profile.pressure)


def normalized_rhs_values(k):
    return k ** 2 * _spectral.derivative(k, 2) + k ** 3 - k


def harnack_margin(profile):
    """Minimum over nodes of p p_thth - p_th^2/2 + 2p^2.

    This is p_t itself, so a nonnegative margin means the curvature is
    pointwise nondecreasing in time at this instant, as it must be on an
    ancient convex solution.
    """
    return float(np.min(pressure_rhs(profile)))
