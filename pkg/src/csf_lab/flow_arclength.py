"""Curve shortening flow of polygonal curves and the convexity diagnostics.

Points move with the discrete curvature vector

    V_i = 2 / (h_{i-1} + h_i) * (e_i / h_i - e_{i-1} / h_{i-1}),

an O(h^2) approximation of kappa * nu, by explicit Euler steps of size
``cfl * h_min^2 / 2``.  After every step the vertices are redistributed to
uniform arclength with a cubic spline (periodic for closed curves), which
is a tangential reparametrization and leaves the shape unchanged.  Open
curves keep their end points fixed.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import AllZero, EmptyTrajectory, SelfIntersection, StepSizeUnderflow
from .flow_theta import FlowTrajectory
from .geometry import PlanarCurve, curvature_of_curve, geometric_measures, turning_angles

ARCLENGTH = "arclength"


@dataclass(frozen=True)
class ArcFlowState:
    curve: PlanarCurve
    time: float


@dataclass(frozen=True)
class ArcControls:
    """Controls for evolve_curve.

    ``n_output`` states are retained at equally spaced times unless
    ``output_times`` is given.  ``check_every`` sets how often (in steps)
    embeddedness is verified.
    """

    cfl: float = 0.5
    dt_min: float = 1e-14
    kappa_blowup: float = 1e4
    area_min: float = 1e-6
    n_output: int = 40
    output_times: Optional[tuple] = None
    check_every: int = 16
    diagnostics: bool = True
    zero_tol_rel: float = 1e-6


def redistribute(points, closed, m=None):
    """Resample a polyline to ``m`` points equally spaced in arclength."""
    points = np.asarray(points, dtype=float)
    m = len(points) if m is None else m
    if closed:
        loop = np.vstack([points, points[:1]])
        seg = np.hypot(*np.diff(loop, axis=0).T)
        s = np.concatenate([[0.0], np.cumsum(seg)])
        spline = CubicSpline(s, loop, bc_type="periodic", axis=0)
        s_new = s[-1] * np.arange(m) / m
    else:
        seg = np.hypot(*np.diff(points, axis=0).T)
        s = np.concatenate([[0.0], np.cumsum(seg)])
        spline = CubicSpline(s, points, axis=0)
        s_new = np.linspace(0.0, s[-1], m)
    out = spline(s_new)
    if not closed:
        out[0], out[-1] = points[0], points[-1]
    return out


def curvature_vector(points, closed):
    """Discrete curvature vector at each vertex (zero at open end points)."""
    if closed:
        e = np.roll(points, -1, axis=0) - points
        h = np.hypot(*e.T)
        e_prev, h_prev = np.roll(e, 1, axis=0), np.roll(h, 1)
        t_next = e / h[:, None]
        t_prev = e_prev / h_prev[:, None]
        return 2.0 * (t_next - t_prev) / (h + h_prev)[:, None], h
    e = np.diff(points, axis=0)
    h = np.hypot(*e.T)
    t = e / h[:, None]
    v = np.zeros_like(points)
    v[1:-1] = 2.0 * (t[1:] - t[:-1]) / (h[1:] + h[:-1])[:, None]
    return v, h


def _arc_diagnostics(state, zero_tol_rel):
    curve = state.curve
    _, kappa = curvature_of_curve(curve)
    out = {"max_abs_kappa": float(np.max(np.abs(kappa)))}
    tol = zero_tol_rel * out["max_abs_kappa"]
    try:
        out["zero_count"] = sturm_zero_count(kappa, tol, periodic=curve.closed)
    except AllZero:
        out["zero_count"] = -1
    out["tac_0"] = total_absolute_curvature(curve, 0.0)
    out["tac_0.1"] = total_absolute_curvature(curve, 0.1)
    out["tac_1"] = total_absolute_curvature(curve, 1.0)
    if curve.closed:
        meas = geometric_measures(curve)
        out["area"] = meas["signed_area"]
        out["length"] = meas["length"]
        out["isoperimetric"] = meas["length"] ** 2 / (4 * np.pi * meas["signed_area"])
    return out


def evolve_curve(initial, t_end, controls=None):
    """Evolve a polygonal curve by curve shortening flow up to ``t_end``.

    Parameters
    ----------
    initial : ArcFlowState
        Closed embedded counterclockwise curve with at least 32 points, or
        an open curve (its end points are held fixed).
    t_end : float
    controls : ArcControls, optional

    Returns
    -------
    FlowTrajectory
        Frame ``"arclength"``.  Diagnostics per state: max_abs_kappa,
        zero_count, tac_0, tac_0.1, tac_1 and, for closed curves, area,
        length and isoperimetric (L^2 / 4 pi A).  Status ``"extinction"``
        when the run stopped on ``area_min`` or ``kappa_blowup``.

    Raises
    ------
    SelfIntersection
        If the curve stops being embedded; flow preserves embeddedness, so
        this signals a discretization failure.
    StepSizeUnderflow
        If the step size falls below ``dt_min``.
    """
    controls = controls or ArcControls()
    curve = initial.curve
    closed = curve.closed
    if closed and len(curve) < 32:
        raise ValueError("closed curves need at least 32 points")
    if not curve.is_simple():
        raise SelfIntersection(f"initial curve is not embedded (t={initial.time})")
    if closed and geometric_measures(curve)["signed_area"] <= 0:
        raise ValueError("closed curves must be counterclockwise")
    t0 = float(initial.time)
    if not t_end > t0:
        raise ValueError("t_end must exceed the initial time")

    if controls.output_times is not None:
        outputs = np.array(sorted(x for x in controls.output_times if t0 < x <= t_end))
    else:
        outputs = t0 + (t_end - t0) * np.arange(1, controls.n_output + 1) / controls.n_output
        outputs[-1] = t_end

    m = len(curve)
    x = redistribute(curve.points, closed)
    t = t0
    states = [ArcFlowState(PlanarCurve(x, closed), t0)]
    status = "completed"
    step = 0
    for t_out in outputs:
        while t < t_out:
            v, h = curvature_vector(x, closed)
            dt = controls.cfl * 0.5 * float(h.min()) ** 2
            if dt < controls.dt_min:
                raise StepSizeUnderflow(f"dt={dt:.3e} below dt_min at t={t:.6g}")
            if t + dt >= t_out or t_out - (t + dt) < 1e-3 * dt:
                dt = t_out - t
                t_next = t_out
            else:
                t_next = t + dt
            x = redistribute(x + dt * v, closed, m)
            t = t_next
            step += 1
            if step % controls.check_every == 0 and not PlanarCurve(x, closed).is_simple():
                raise SelfIntersection(f"curve lost embeddedness at t={t!r}")
            if _extinct(x, v, closed, controls):
                status = "extinction"
                break
        states.append(ArcFlowState(PlanarCurve(x.copy(), closed), t))
        if status == "extinction":
            break
    if not PlanarCurve(x, closed).is_simple():
        raise SelfIntersection(f"curve lost embeddedness at t={t!r}")
    diagnose = ((lambda s: _arc_diagnostics(s, controls.zero_tol_rel))
                if controls.diagnostics else None)
    return FlowTrajectory.from_states(
        states, ARCLENGTH, diagnose, status=status,
        metadata={"n": m, "steps": step, "controls": _controls_dict(controls)})


def _controls_dict(controls):
    d = dict(controls.__dict__)
    if d.get("output_times") is not None:
        d["output_times"] = [float(v) for v in d["output_times"]]
    return d


def _extinct(x, v, closed, controls):
    # |v| from the step just taken stands in for |kappa|
    if np.max(np.hypot(v[:, 0], v[:, 1])) > controls.kappa_blowup:
        return True
    if not closed:
        return False
    area = 0.5 * (np.dot(x[:, 0], np.roll(x[:, 1], -1)) - np.dot(np.roll(x[:, 0], -1), x[:, 1]))
    return area < controls.area_min


def area_slope(trajectory):
    """Least-squares slope of enclosed area against time (exactly -2 pi for CSF)."""
    t = trajectory.times
    a = np.asarray(trajectory.diagnostics["area"])
    return float(np.polyfit(t, a, 1)[0])


def sturm_zero_count(samples, tolerance=0.0, periodic=True):
    """Number of sign changes of ``samples``.

    Values with |v| <= tolerance form a band; a run of in-band samples
    between two samples of opposite sign counts as one crossing, between
    samples of equal sign as none.  Periodic samples are counted around
    the full period.

    Raises
    ------
    AllZero
        If every sample lies in the band.
    """
    v = np.asarray(samples, dtype=float)
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    signs = np.sign(v[np.abs(v) > tolerance])
    if len(signs) == 0:
        raise AllZero("every sample lies inside the zero band")
    changes = int(np.count_nonzero(signs[1:] != signs[:-1]))
    if periodic and signs[-1] != signs[0]:
        changes += 1
    return changes


def total_absolute_curvature(curve, epsilon=0.0):
    """Discrete int sqrt(epsilon^2 + kappa^2) ds over a closed curve.

    With epsilon = 0 this is the sum of absolute turning angles, exactly
    2 pi for a convex polygon.
    """
    phi, ds = turning_angles(curve)
    return float(np.sum(np.sqrt((epsilon * ds) ** 2 + phi ** 2)))


class ConvexityCertificate(NamedTuple):
    holds: bool
    max_kappa: float
    max_tac: float


def convexity_certificate(trajectory, C1, C2):
    """Check |kappa| <= C1 and int |kappa| ds <= C2 on every retained state."""
    if trajectory is None or len(trajectory.states) == 0:
        raise EmptyTrajectory("no states to certify")
    max_kappa = 0.0
    max_tac = 0.0
    for state in trajectory.states:
        _, kappa = curvature_of_curve(state.curve)
        max_kappa = max(max_kappa, float(np.max(np.abs(kappa))))
        max_tac = max(max_tac, total_absolute_curvature(state.curve, 0.0))
    return ConvexityCertificate(bool(max_kappa <= C1 and max_tac <= C2), max_kappa, max_tac)


def blowup_rescale(trajectory, index=-1):
    """Rescale a trajectory about the curvature maximum of one retained state.

    With Q = max |kappa| at state ``index`` (time t_i), attained at vertex
    p_i, every state becomes Q * (X(. + p_i, t) - X(p_i, t_i)) at time
    Q^2 (t - t_i).  The reference state is mapped to a curve through the
    origin with |kappa| = 1 there.  Q, p_i and t_i are stored in the
    result's metadata.
    """
    if trajectory is None or len(trajectory.states) == 0:
        raise EmptyTrajectory("no states to rescale")
    ref = trajectory.states[index]
    _, kappa = curvature_of_curve(ref.curve)
    j = int(np.argmax(np.abs(kappa)))
    if not ref.curve.closed:
        j += 1
    Q = float(np.abs(kappa).max())
    origin = ref.curve.points[j]
    t_i = ref.time
    states = []
    for s in trajectory.states:
        pts = s.curve.points
        if s.curve.closed and len(pts) == len(ref.curve.points):
            pts = np.roll(pts, -j, axis=0)
        states.append(ArcFlowState(PlanarCurve(Q * (pts - origin), s.curve.closed),
                                   Q * Q * (s.time - t_i)))
    meta = dict(trajectory.metadata)
    meta.update({"Q": Q, "p_index": j, "t_i": t_i})
    return FlowTrajectory(states, {}, trajectory.frame, trajectory.status, meta)
