"""Lyapunov functionals of the pressure equation and related inequalities.

J(p) = int (p_th^2 / p - 4p) dtheta,      dJ/dt = -2 int p_t^2 / p^2 dtheta
I(alpha) = int (alpha_th^2 - 4 alpha^2),   alpha = p_th,
                                           dI/dt = -2 int alpha_t^2 / p dtheta

Instantaneous dissipations are computed from the PDE right side, not by
differencing in time.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import fft

from . import _spectral
from .errors import BadBoundary, BadInterval
from .geometry import require_positive
from .pde import pressure_rhs_values


@dataclass(frozen=True)
class QuadratureTolerances:
    """Absolute tolerances used when checking functional identities."""

    closed_form: float = 1e-10
    evolved: float = 1e-6


TOLERANCES = QuadratureTolerances()


class FunctionalValue(NamedTuple):
    value: float
    dissipation: float


@dataclass
class FunctionalSeries:
    """Time series of one scalar diagnostic (J, I, TAC, ...)."""

    name: str
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal lengths")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    def increments(self):
        return np.diff(self.values)

    def is_nonincreasing(self, slack=0.0):
        return bool(np.all(self.increments() <= slack))


def lyapunov_J(profile):
    """Value of J and its instantaneous time derivative -2 int p_t^2/p^2."""
    require_positive(profile)
    p = profile.pressure
    p_th = _spectral.derivative(p, 1)
    p_t = pressure_rhs_values(p)
    value = _spectral.periodic_integral(p_th ** 2 / p - 4.0 * p)
    dissipation = -2.0 * _spectral.periodic_integral(p_t ** 2 / p ** 2)
    return FunctionalValue(float(value), float(dissipation))


def alpha_of(profile):
    """alpha = p_theta, always derived spectrally from the pressure."""
    return _spectral.derivative(profile.pressure, 1)


def stability_I(profile):
    """Value of I(alpha) and its time derivative -2 int alpha_t^2 / p.

    alpha_t is evaluated as p (alpha_thth + 4 alpha).
    """
    require_positive(profile)
    p = profile.pressure
    alpha = alpha_of(profile)
    alpha_th = _spectral.derivative(alpha, 1)
    alpha_t = p * (_spectral.derivative(alpha, 2) + 4.0 * alpha)
    value = _spectral.periodic_integral(alpha_th ** 2 - 4.0 * alpha ** 2)
    dissipation = -2.0 * _spectral.periodic_integral(alpha_t ** 2 / p)
    return FunctionalValue(float(value), float(dissipation))


def steady_state_residual(profile):
    """Sup norm of p p_thth - p_th^2/2 + 2p^2; zeros of p are allowed."""
    return float(np.max(np.abs(pressure_rhs_values(profile.pressure))))


def gradient_bound(profile):
    """Both sides of int p_th^2/p <= 4 int p.

    The inequality follows by dividing the Harnack inequality by p and
    integrating; it holds whenever the Harnack margin is nonnegative.
    Returns ``(lhs, rhs)``.
    """
    require_positive(profile)
    p = profile.pressure
    p_th = _spectral.derivative(p, 1)
    return (float(_spectral.periodic_integral(p_th ** 2 / p)),
            float(4.0 * _spectral.periodic_integral(p)))


def wirtinger_gap(f_samples, a, b, lambda_w, tol=1e-8):
    """Return lambda_w^2 int f'^2 - int f^2 over [a, b] for f vanishing at a and b.

    ``f_samples`` are values on the uniform grid ``linspace(a, b, m)``.  The
    integrals are taken on the sine series of f (a type-I DST of the
    interior samples), which is exact for the odd periodic extension.

    Raises
    ------
    BadBoundary
        If |f(a)| or |f(b)| exceeds ``tol``.
    BadInterval
        If b - a > lambda_w * pi.
    """
    f = np.asarray(f_samples, dtype=float)
    if f.ndim != 1 or len(f) < 3:
        raise ValueError("need at least three samples")
    if abs(f[0]) > tol or abs(f[-1]) > tol:
        raise BadBoundary(f"endpoint values {f[0]!r}, {f[-1]!r} exceed {tol}")
    length = b - a
    if not 0 < length <= lambda_w * np.pi * (1 + 1e-12):
        raise BadInterval(f"interval length {length} exceeds lambda_w*pi = {lambda_w * np.pi}")
    m = len(f) - 1
    coeffs = fft.dst(f[1:-1], type=1) / m
    k = np.arange(1, m)
    int_f2 = 0.5 * length * np.sum(coeffs ** 2)
    int_df2 = 0.5 * length * np.sum((k * np.pi / length) ** 2 * coeffs ** 2)
    return float(lambda_w ** 2 * int_df2 - int_f2)
