"""Convex curves in the tangent-angle gauge and plain polygonal curves.

A strictly convex closed curve is described by its curvature as a function
of the tangent angle theta.  This module holds the grid and profile types,
the reconstruction of the curve from its profile, the closure integrals,
and the discrete curvature and measures of polygonal curves.
"""

from dataclasses import dataclass

import numpy as np

from . import _spectral
from .errors import DegenerateSegment, NonClosable, NonPositive

#: Default absolute tolerance on the closure integrals.
TAU_CLOSE = 1e-8

PRESSURE = "pressure"
CURVATURE = "curvature"


@dataclass(frozen=True)
class AngleGrid:
    """Uniform periodic grid theta_j = 2*pi*j/n, j = 0..n-1."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise ValueError(f"grid size must be an even integer >= 8, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def spacing(self):
        return 2.0 * np.pi / self.n

    @property
    def nodes(self):
        return self.spacing * np.arange(self.n)


def as_grid(grid):
    """Accept an AngleGrid or a node count."""
    if isinstance(grid, AngleGrid):
        return grid
    return AngleGrid(int(grid))


@dataclass(frozen=True, eq=False)
class CurvatureProfile:
    """Periodic samples of the pressure p = kappa**2 (or of kappa) at one time.

    Parameters
    ----------
    grid : AngleGrid
    values : ndarray
        One value per grid node.
    time : float
        Time stamp of the profile.
    representation : {"pressure", "curvature"}
        What ``values`` holds.
    strict : bool
        True for strictly convex profiles.  Backward-limit profiles, which
        vanish at isolated angles, carry ``strict=False``.
    """

    grid: AngleGrid
    values: np.ndarray
    time: float = 0.0
    representation: str = PRESSURE
    strict: bool = True

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise ValueError(
                f"expected {self.grid.n} values, got array of shape {values.shape}")
        if self.representation not in (PRESSURE, CURVATURE):
            raise ValueError(f"unknown representation {self.representation!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def from_function(cls, func, grid=256, time=0.0, representation=PRESSURE,
                      strict=True):
        grid = as_grid(grid)
        return cls(grid, func(grid.nodes), time, representation, strict)

    @property
    def theta(self):
        return self.grid.nodes

    @property
    def pressure(self):
        if self.representation == PRESSURE:
            return self.values
        return self.values ** 2

    @property
    def curvature(self):
        if self.representation == CURVATURE:
            return self.values
        return np.sqrt(np.clip(self.values, 0.0, None))

    def with_values(self, values, time=None):
        return CurvatureProfile(self.grid, values,
                                self.time if time is None else time,
                                self.representation, self.strict)

    def as_pressure(self):
        if self.representation == PRESSURE:
            return self
        return CurvatureProfile(self.grid, self.values ** 2, self.time,
                                PRESSURE, self.strict)

    def as_curvature(self):
        if self.representation == CURVATURE:
            return self
        return CurvatureProfile(self.grid, self.curvature, self.time,
                                CURVATURE, self.strict)


def require_positive(profile, time=None):
    """Raise NonPositive unless every node of ``profile`` is > 0."""
    values = profile.values
    if not np.all(values > 0):
        j = int(np.argmin(values))
        raise NonPositive(
            f"profile is not strictly positive: min {values[j]!r} at "
            f"theta={profile.theta[j]:.6g}",
            time=profile.time if time is None else time)


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    """Ordered vertices of a plane polygonal curve.

    ``points`` has shape (m, 2).  A closed curve does not repeat its first
    vertex at the end.
    """

    points: np.ndarray
    closed: bool = True

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("points must have shape (m, 2)")
        if len(pts) < 2:
            raise ValueError("a curve needs at least two points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def x(self):
        return self.points[:, 0]

    @property
    def y(self):
        return self.points[:, 1]

    def edges(self):
        if self.closed:
            return np.roll(self.points, -1, axis=0) - self.points
        return np.diff(self.points, axis=0)

    def reversed(self):
        return PlanarCurve(self.points[::-1].copy(), self.closed)

    def translated(self, offset):
        return PlanarCurve(self.points + np.asarray(offset, dtype=float), self.closed)

    def is_simple(self):
        """True when the polygon has no self-intersections."""
        from shapely.geometry import LinearRing, LineString

        geom = LinearRing(self.points) if self.closed else LineString(self.points)
        return bool(geom.is_simple)


# -- closure and reconstruction --------------------------------------------

def closure_residual(profile):
    """Return the closure integrals (int cos/kappa, int sin/kappa) over [0, 2*pi].

    A positive periodic curvature function belongs to a closed convex curve
    exactly when both integrals vanish.
    """
    require_positive(profile)
    inv = 1.0 / profile.curvature
    theta = profile.theta
    return (float(_spectral.periodic_integral(np.cos(theta) * inv)),
            float(_spectral.periodic_integral(np.sin(theta) * inv)))


def _support_coordinates(profile):
    # dX/dtheta = (cos, sin)/kappa, integrated spectrally; the mean of the
    # integrand (the closure defect) is dropped.
    inv = 1.0 / profile.curvature
    theta = profile.theta
    x = _spectral.antiderivative(np.cos(theta) * inv)
    y = _spectral.antiderivative(np.sin(theta) * inv)
    return x, y


def reconstruct_curve(profile, tau_close=TAU_CLOSE):
    """Rebuild the closed convex curve whose curvature profile is given.

    The tangent at node theta_j has direction (cos theta_j, sin theta_j); the
    curve is centred on the mean of its vertices.

    Raises
    ------
    NonPositive
        If the profile has a node with p <= 0.
    NonClosable
        If either closure integral exceeds ``tau_close`` in magnitude.
    """
    rx, ry = closure_residual(profile)
    if max(abs(rx), abs(ry)) > tau_close:
        raise NonClosable(
            f"closure residual ({rx:.3e}, {ry:.3e}) exceeds {tau_close:.1e}")
    x, y = _support_coordinates(profile)
    pts = np.column_stack([x - x.mean(), y - y.mean()])
    return PlanarCurve(pts, closed=True)


def enclosed_area(profile):
    """Area enclosed by the curve of a strictly positive profile.

    Uses the spectrally accurate line integral
    A = 1/2 * int (x sin(theta) - y cos(theta)) / kappa dtheta.  For profiles that
    do not close exactly the closure defect is ignored, which makes this a
    usable size measure for perturbation experiments as well.
    """
    require_positive(profile)
    x, y = _support_coordinates(profile)
    theta = profile.theta
    inv = 1.0 / profile.curvature
    return 0.5 * float(_spectral.periodic_integral(
        (x * np.sin(theta) - y * np.cos(theta)) * inv))


# -- polygonal curves -------------------------------------------------------

def _check_segments(curve):
    lengths = np.hypot(*curve.edges().T)
    if np.any(lengths == 0.0):
        i = int(np.flatnonzero(lengths == 0.0)[0])
        raise DegenerateSegment(f"repeated point at index {i}")
    return lengths


def turning_angles(curve):
    """Signed exterior angles and dual lengths at the vertices of a curve.

    For closed curves every vertex is returned; for open curves only the
    interior vertices.  Returns ``(phi, ds)`` where ``ds`` is the mean of
    the two adjacent edge lengths.
    """
    edges = curve.edges()
    lengths = _check_segments(curve)
    if curve.closed:
        prev_e, next_e = np.roll(edges, 1, axis=0), edges
        prev_h, next_h = np.roll(lengths, 1), lengths
    else:
        prev_e, next_e = edges[:-1], edges[1:]
        prev_h, next_h = lengths[:-1], lengths[1:]
    cross = prev_e[:, 0] * next_e[:, 1] - prev_e[:, 1] * next_e[:, 0]
    dot = np.einsum("ij,ij->i", prev_e, next_e)
    phi = np.arctan2(cross, dot)
    return phi, 0.5 * (prev_h + next_h)


def curvature_of_curve(curve):
    """Signed vertex curvature kappa_i = phi_i / ds_i of a polygonal curve.

    Returns
    -------
    s : ndarray
        Arclength position of each vertex, measured from vertex 0.
    kappa : ndarray
        Signed curvature, positive where a counterclockwise curve turns left.

    For open curves only interior vertices are reported.  Summed against
    ``ds`` the curvature reproduces the total turning exactly, so a simple
    closed counterclockwise polygon gives 2*pi.
    """
    if len(curve) < 3:
        raise ValueError("curvature needs at least three points")
    phi, ds = turning_angles(curve)
    lengths = np.hypot(*curve.edges().T)
    s = np.concatenate([[0.0], np.cumsum(lengths)])
    s = s[:len(curve)] if curve.closed else s[1:-1]
    return s, phi / ds


def geometric_measures(curve):
    """Polygon length and shoelace signed area (counterclockwise positive)."""
    pts = curve.points
    length = float(np.hypot(*curve.edges().T).sum())
    if not curve.closed:
        return {"length": length, "signed_area": 0.0}
    x, y = pts[:, 0], pts[:, 1]
    area = 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
    return {"length": length, "signed_area": area}


# -- test shapes ------------------------------------------------------------

def polar_curve(radius, m=256):
    """Closed counterclockwise curve r = radius(phi) sampled at m equal angles."""
    phi = 2.0 * np.pi * np.arange(m) / m
    r = np.broadcast_to(radius(phi) if callable(radius) else radius, phi.shape)
    return PlanarCurve(np.column_stack([r * np.cos(phi), r * np.sin(phi)]))


def ellipse_curve(a, b, m=256):
    u = 2.0 * np.pi * np.arange(m) / m
    return PlanarCurve(np.column_stack([a * np.cos(u), b * np.sin(u)]))
