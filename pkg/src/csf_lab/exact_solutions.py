"""Closed-form ancient solutions and the grim reaper soliton.

All pressure profiles here live in the frame whose extinction time is
t = 0.  Ovals are written as lambda * (cos^2(theta + gamma) + 1/expm1(-2*lambda*t)),
which equals lambda * (1/(1 - exp(2*lambda*t)) - sin^2(theta + gamma)) but
keeps full relative precision far in the past, where the two terms differ
by many orders of magnitude.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonAncientTime
from .geometry import CurvatureProfile, PlanarCurve, as_grid


@dataclass(frozen=True)
class OvalParams:
    """Parameters (lambda, gamma) of an Angenent oval.

    ``gamma`` is reduced modulo pi on construction since the oval only
    depends on sin^2(theta + gamma).
    """

    lam: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"oval lambda must be > 0, got {self.lam}")
        g = float(np.mod(self.gamma, np.pi))
        if g >= np.pi:
            g = 0.0
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "gamma", g)


def _check_ancient(t):
    if not t < 0:
        raise NonAncientTime(f"ancient solutions are defined for t < 0, got t={t}")


def circle_pressure(t, grid=256):
    """Pressure 1/(-2t) of the circle shrinking to a point at t = 0."""
    _check_ancient(t)
    grid = as_grid(grid)
    return CurvatureProfile(grid, np.full(grid.n, 1.0 / (-2.0 * t)), t)


def oval_offset(lam, t):
    """The spatially constant part lambda*e/(1-e), e = exp(2*lambda*t), of an oval."""
    _check_ancient(t)
    return lam / np.expm1(-2.0 * lam * t)


def oval_pressure(params, t, grid=256):
    """Pressure of the Angenent oval with the given parameters at time t < 0."""
    _check_ancient(t)
    grid = as_grid(grid)
    phase = grid.nodes + params.gamma
    values = params.lam * np.cos(phase) ** 2 + oval_offset(params.lam, t)
    return CurvatureProfile(grid, values, t)


def oval_pressure_derivatives(params, t, grid=256):
    """Analytic p, p_t, p_theta and p_thetatheta of an oval on the grid nodes."""
    _check_ancient(t)
    grid = as_grid(grid)
    lam = params.lam
    phase = grid.nodes + params.gamma
    em1 = np.expm1(-2.0 * lam * t)
    p = lam * np.cos(phase) ** 2 + lam / em1
    # d/dt [lam/expm1(-2 lam t)] = 2 lam^2 exp(-2 lam t)/expm1(-2 lam t)^2
    p_t = np.full(grid.n, 2.0 * lam ** 2 * np.exp(-2.0 * lam * t) / em1 ** 2)
    p_theta = -lam * np.sin(2.0 * phase)
    p_thetatheta = -2.0 * lam * np.cos(2.0 * phase)
    return {"p": p, "p_t": p_t, "p_theta": p_theta, "p_thetatheta": p_thetatheta}


def oval_ansatz_residual(a, b, da_dt, db_dt):
    """Residuals of the ODEs forced by the ansatz p = a(t) - b(t) sin^2(theta + gamma).

    Returns ``(db_dt, da_dt - (2a^2 - 2ab))``; both vanish exactly when the
    ansatz solves the pressure equation.
    """
    return db_dt, da_dt - (2.0 * a * a - 2.0 * a * b)


def backward_limit_profile(a, b, grid=256):
    """Non-strict profile a*cos^2(theta + b), the possible limits as t -> -inf."""
    if a < 0:
        raise ValueError(f"backward limit amplitude must be >= 0, got {a}")
    grid = as_grid(grid)
    values = a * np.cos(grid.nodes + b) ** 2
    return CurvatureProfile(grid, values, -np.inf, strict=False)


def grim_reaper_curve(t=0.0, half_width=1.4, n=401):
    """Open polyline of the translating soliton y = t - ln(cos x) on |x| <= half_width.

    Sampled uniformly in x.  The soliton moves in +y with unit speed and has
    curvature cos(x).
    """
    if not 0 < half_width < np.pi / 2:
        raise ValueError("half_width must lie in (0, pi/2)")
    x = np.linspace(-half_width, half_width, n)
    return PlanarCurve(np.column_stack([x, t - np.log(np.cos(x))]), closed=False)


def grim_reaper_curvature(x):
    return np.cos(x)
