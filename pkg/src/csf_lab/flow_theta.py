"""Explicit pseudospectral solvers for the pressure and normalized curvature flows.

Both equations are integrated with classical RK4 on the uniform periodic
grid.  The step is bounded by the diffusive stability limit of the
Nyquist mode, ``dt <= cfl * 2.78 / (D * (n/2)^2)`` with D the largest
diffusion coefficient (p for the pressure flow, k^2 for the normalized
flow), and by an accuracy limit on the reaction term.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _spectral
from .asymptotics import fourier_decompose
from .errors import NonPositive, StepSizeUnderflow
from .functionals import lyapunov_J, stability_I
from .geometry import CURVATURE, PRESSURE, CurvatureProfile, closure_residual, enclosed_area, require_positive
from .pde import harnack_margin, normalized_rhs_values, pressure_rhs, pressure_rhs_values

__all__ = [
    "ThetaFlowState", "FlowTrajectory", "SolverControls", "pressure_rhs",
    "harnack_margin", "evolve_pressure", "evolve_normalized",
    "to_normalized", "from_normalized", "estimate_extinction_time",
    "shift_to_extinction",
]

UNNORMALIZED = "unnormalized"
NORMALIZED = "normalized"

_RK4_REAL_STABILITY = 2.78


@dataclass(frozen=True)
class ThetaFlowState:
    profile: CurvatureProfile
    frame: str = UNNORMALIZED

    @property
    def time(self):
        return self.profile.time


@dataclass
class FlowTrajectory:
    """Retained states of one run plus per-state scalar diagnostics.

    ``status`` is ``"completed"`` when the run reached its end time and
    ``"extinction"`` when it stopped on a blow-up or area guard.
    """

    states: list
    diagnostics: dict
    frame: str
    status: str = "completed"
    metadata: dict = field(default_factory=dict)

    @property
    def times(self):
        return np.array([s.time for s in self.states])

    def __len__(self):
        return len(self.states)

    def series(self, name):
        from .functionals import FunctionalSeries
        return FunctionalSeries(name, self.times, np.array(self.diagnostics[name]))

    @classmethod
    def from_states(cls, states, frame, diagnose=None, **kwargs):
        """Assemble a trajectory from states, computing diagnostics with ``diagnose``."""
        states = sorted(states, key=lambda s: s.time)
        diags = {}
        if diagnose is not None:
            for s in states:
                for k, v in diagnose(s).items():
                    diags.setdefault(k, []).append(v)
        return cls(list(states), diags, frame, **kwargs)


@dataclass(frozen=True)
class SolverControls:
    """Step and output controls shared by the theta-gauge solvers.

    Attributes
    ----------
    cfl : float
        Fraction of the RK4 diffusive stability limit.
    reaction_limit : float
        Cap on dt * (reaction rate); keeps the ODE part accurate.
    dt_min : float
        Smaller steps raise StepSizeUnderflow.
    p_blowup : float
        The pressure run stops with status "extinction" once max p exceeds it.
    n_output : int
        Number of retained states after the initial one.
    output_times : tuple, optional
        Explicit retention times; overrides ``n_output``.
    spacing : {"geometric", "linear"}
        Output spacing for the pressure flow; geometric spacing in -t is
        uniform in the normalized time.  The normalized flow always uses
        linear spacing in tau.
    diagnostics : bool
        Compute per-state diagnostics.
    """

    cfl: float = 0.5
    reaction_limit: float = 0.02
    dt_min: float = 1e-12
    p_blowup: float = 1e6
    n_output: int = 40
    output_times: Optional[tuple] = None
    spacing: str = "geometric"
    diagnostics: bool = True


def _output_times(t0, t1, controls, geometric):
    if controls.output_times is not None:
        out = np.asarray(sorted(controls.output_times), dtype=float)
        return out[(out > t0) & (out <= t1)]
    k = np.arange(1, controls.n_output + 1) / controls.n_output
    if geometric and t1 < 0:
        out = -(-t0) * ((-t1) / (-t0)) ** k
    else:
        out = t0 + (t1 - t0) * k
    out[-1] = t1
    return out


def _rk4(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _integrate(y, t0, t1, rhs, dt_bound, check, controls, stop=None):
    """March y from t0 to t1 hitting each output time exactly.

    Yields ``(t, y)`` at every output time.  ``check(y, t)`` raises on loss
    of positivity; ``stop(y)`` returning True ends the run early with an
    extra final yield and status "extinction".
    """
    outputs = _output_times(t0, t1, controls, controls.spacing == "geometric")
    t = t0
    for t_out in outputs:
        while t < t_out:
            dt = dt_bound(y)
            if dt < controls.dt_min:
                raise StepSizeUnderflow(f"dt={dt:.3e} below dt_min at t={t:.6g}")
            if t + dt >= t_out or t_out - (t + dt) < 1e-3 * dt:
                dt = t_out - t
                t_next = t_out
            else:
                t_next = t + dt
            y = _rk4(rhs, y, dt)
            t = t_next
            check(y, t)
            if stop is not None and stop(y):
                yield t, y, True
                return
        yield t, y, False


def _pressure_diagnostics(profile):
    J = lyapunov_J(profile)
    I = stability_I(profile)
    cx, cy = closure_residual(profile)
    p = profile.pressure
    p_th = _spectral.derivative(p, 1)
    return {
        "J": J.value, "J_dissipation": J.dissipation,
        "I": I.value, "I_dissipation": I.dissipation,
        "closure": float(np.hypot(cx, cy)),
        "min_p": float(p.min()), "max_p": float(p.max()),
        "harnack_margin": harnack_margin(profile),
        "max_p_theta_sq": float(np.max(p_th ** 2)),
    }


def _normalized_diagnostics(profile):
    k = profile.curvature
    spec = fourier_decompose(k - 1.0, 3)
    return {
        "dev_inf": float(np.max(np.abs(k - 1.0))),
        "mode0": spec.cos(0),
        "mode1_amp": spec.amplitude(1),
        "mode2_amp": spec.amplitude(2),
        "mode3_amp": spec.amplitude(3),
        "min_k": float(k.min()), "max_k": float(k.max()),
    }


def _positivity_check(profile_like):
    def check(y, t):
        if not np.all(np.isfinite(y)) or np.min(y) <= 0:
            j = int(np.nanargmin(np.where(np.isfinite(y), y, -np.inf)))
            raise NonPositive(
                f"positivity lost at t={t!r} (theta={profile_like.theta[j]:.6g})", time=t)
    return check


def evolve_pressure(initial, t_end, controls=None):
    """Integrate p_t = p p_thth - p_th^2/2 + 2p^2 from ``initial`` to ``t_end``.

    Parameters
    ----------
    initial : ThetaFlowState or CurvatureProfile
        Strictly positive starting profile; its time is the start time.
    t_end : float
        Final time, with initial time < t_end <= 0.
    controls : SolverControls, optional

    Returns
    -------
    FlowTrajectory
        States at the output times (the initial state first).  Diagnostics
        per state: J, J_dissipation, I, I_dissipation, closure, min_p,
        max_p, harnack_margin, max_p_theta_sq.

    Raises
    ------
    NonPositive
        If the initial profile or any intermediate stage loses positivity;
        the exception carries the offending time.
    StepSizeUnderflow
        If stability forces dt below ``controls.dt_min``.
    """
    controls = controls or SolverControls()
    profile = getattr(initial, "profile", initial).as_pressure()
    require_positive(profile)
    t0 = profile.time
    if not t0 < t_end <= 0:
        raise ValueError(f"need t_start < t_end <= 0, got {t0} -> {t_end}")
    n = profile.grid.n
    kmax2 = (n // 2) ** 2

    def dt_bound(p):
        pmax = float(np.max(p))
        return min(controls.cfl * _RK4_REAL_STABILITY / (pmax * kmax2),
                   controls.reaction_limit / (4.0 * pmax))

    states = [ThetaFlowState(profile, UNNORMALIZED)]
    status = "completed"
    for t, p, stopped in _integrate(
            profile.pressure.copy(), t0, t_end, pressure_rhs_values, dt_bound,
            _positivity_check(profile), controls,
            stop=lambda p: np.max(p) > controls.p_blowup):
        states.append(ThetaFlowState(profile.with_values(p, t), UNNORMALIZED))
        if stopped:
            status = "extinction"
    diagnose = (lambda s: _pressure_diagnostics(s.profile)) if controls.diagnostics else None
    return FlowTrajectory.from_states(
        states, UNNORMALIZED, diagnose, status=status,
        metadata={"n": n, "controls": _controls_dict(controls)})


def evolve_normalized(initial, tau_end, controls=None, fix_extinction=True):
    """Integrate k_tau = k^2 k_thth + k^3 - k for the rescaled curvature.

    Parameters
    ----------
    initial : ThetaFlowState or CurvatureProfile
        Rescaled curvature (or pressure, converted) at the start time tau_0.
    tau_end : float
    controls : SolverControls, optional
        Output spacing is linear in tau regardless of ``controls.spacing``.
    fix_extinction : bool
        Rescale the initial data so the curve it describes encloses area
        pi.  An area different from pi means the extinction time is not at
        tau = infinity; the mismatch lives in the unstable mode 0 and would
        grow like e^{2 tau}.  The rescaling is a time shift of the
        unnormalized flow and leaves closed-form data (area pi) unchanged.

    Returns
    -------
    FlowTrajectory
        Normalized-frame states in the curvature representation with
        diagnostics dev_inf (sup|k - 1|), mode0, mode1_amp, mode2_amp,
        mode3_amp, min_k, max_k.
    """
    controls = controls or SolverControls()
    profile = getattr(initial, "profile", initial).as_curvature()
    require_positive(profile)
    tau0 = profile.time
    if not tau_end > tau0:
        raise ValueError("tau_end must exceed the initial time")
    scale = 1.0
    if fix_extinction:
        scale = np.sqrt(enclosed_area(profile) / np.pi)
        profile = profile.with_values(profile.values * scale)
    n = profile.grid.n
    kmax2 = (n // 2) ** 2

    def dt_bound(k):
        kmax = float(np.max(k))
        return min(controls.cfl * _RK4_REAL_STABILITY / (kmax ** 2 * kmax2),
                   controls.reaction_limit / max(3.0 * kmax ** 2, 1.0))

    linear = replace(controls, spacing="linear")
    states = [ThetaFlowState(profile, NORMALIZED)]
    for tau, k, _ in _integrate(profile.values.copy(), tau0, tau_end,
                                normalized_rhs_values, dt_bound,
                                _positivity_check(profile), linear):
        states.append(ThetaFlowState(profile.with_values(k, tau), NORMALIZED))
    diagnose = (lambda s: _normalized_diagnostics(s.profile)) if controls.diagnostics else None
    return FlowTrajectory.from_states(
        states, NORMALIZED, diagnose,
        metadata={"n": n, "initial_scale": float(scale),
                  "controls": _controls_dict(linear)})


def _controls_dict(controls):
    d = dict(controls.__dict__)
    if d.get("output_times") is not None:
        d["output_times"] = [float(x) for x in d["output_times"]]
    return d


# -- frames ----------------------------------------------------------------

def to_normalized(profile):
    """Map a pressure profile at t < 0 to k = kappa sqrt(-2t) at tau = -log(-t)/2."""
    t = profile.time
    if not t < 0:
        raise ValueError("the normalized frame needs t < 0")
    k = profile.curvature * np.sqrt(-2.0 * t)
    return CurvatureProfile(profile.grid, k, -0.5 * np.log(-t), CURVATURE, profile.strict)


def from_normalized(profile):
    """Inverse of to_normalized; returns a pressure profile."""
    tau = profile.time
    t = -np.exp(-2.0 * tau)
    p = profile.curvature ** 2 / (-2.0 * t)
    return CurvatureProfile(profile.grid, p, t, PRESSURE, profile.strict)


def estimate_extinction_time(profile):
    """T = t + A/(2 pi), from the exact area law dA/dt = -2 pi."""
    return profile.time + enclosed_area(profile) / (2.0 * np.pi)


def shift_to_extinction(profile):
    """Relabel the profile's time so that its extinction time is 0."""
    T = estimate_extinction_time(profile)
    return profile.with_values(profile.values, profile.time - T)
