"""Fourier-mode analysis, rate fits and the classification of ancient solutions.

Mode coefficients use the unnormalized trigonometric basis cos(l theta),
sin(l theta): a pure cos(l theta) input has alpha_l = 1.  Linearizing the
normalized flow about k = 1 gives L f = f_thth + 2f, whose eigenvalue on
mode l is 2 - l^2.
"""

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import _spectral
from .errors import GridTooCoarse, NonPositiveValues, TooFewSnapshots, WrongFrame
from .exact_solutions import OvalParams
from .functionals import FunctionalSeries, stability_I


@dataclass(frozen=True, eq=False)
class ModeSpectrum:
    """Coefficients of f = sum alpha_l cos(l theta) + sum beta_l sin(l theta).

    ``alpha`` has entries for l = 0..L, ``beta`` for l = 1..L (stored at
    index l - 1).
    """

    alpha: np.ndarray
    beta: np.ndarray

    @property
    def max_mode(self):
        return len(self.alpha) - 1

    def cos(self, l):
        return float(self.alpha[l])

    def sin(self, l):
        if l == 0:
            return 0.0
        return float(self.beta[l - 1])

    def amplitude(self, l):
        """sqrt(alpha_l^2 + beta_l^2); for l = 0 this is |alpha_0|."""
        return float(np.hypot(self.cos(l), self.sin(l)))

    def energy(self):
        """int f^2 over [0, 2*pi] by Parseval."""
        return float(2 * np.pi * self.alpha[0] ** 2
                     + np.pi * (np.sum(self.alpha[1:] ** 2) + np.sum(self.beta ** 2)))

    def synthesize(self, n):
        theta = 2 * np.pi * np.arange(n) / n
        l = np.arange(self.max_mode + 1)
        out = self.alpha @ np.cos(np.outer(l, theta))
        out += self.beta @ np.sin(np.outer(l[1:], theta))
        return out


def fourier_decompose(samples, max_mode=None):
    """Mode coefficients of uniform periodic samples.

    Parameters
    ----------
    samples : array_like or CurvatureProfile
        Values on theta_j = 2*pi*j/n.  A profile contributes its stored
        values.
    max_mode : int, optional
        Highest mode L; defaults to n/2 - 1 (the Nyquist mode is omitted).

    Raises
    ------
    GridTooCoarse
        If n < 2L + 2.
    """
    values = getattr(samples, "values", samples)
    values = np.asarray(values, dtype=float)
    n = len(values)
    if max_mode is None:
        max_mode = (n - 2) // 2
    if n < 2 * max_mode + 2:
        raise GridTooCoarse(f"{n} samples cannot resolve mode {max_mode}")
    c = np.fft.rfft(values) / n
    alpha = 2.0 * c.real[:max_mode + 1]
    alpha[0] = c[0].real
    beta = -2.0 * c.imag[1:max_mode + 1]
    return ModeSpectrum(alpha, beta)


def linearized_spectrum(l):
    """Eigenvalue 2 - l^2 of f -> f_thth + 2f on cos(l theta), sin(l theta)."""
    if l < 0:
        raise ValueError("mode index must be nonnegative")
    return 2.0 - l * l


def apply_linearized_operator(values):
    values = np.asarray(values, dtype=float)
    return _spectral.derivative(values, 2) + 2.0 * values


class RateFit(NamedTuple):
    rate: float
    r_squared: float
    intercept: float


def fit_exponential_rate(series):
    """Least-squares slope of log(value) against time.

    ``series`` is a FunctionalSeries or a ``(times, values)`` pair.
    """
    if isinstance(series, FunctionalSeries):
        times, values = series.times, series.values
    else:
        times, values = (np.asarray(v, dtype=float) for v in series)
    if len(values) < 5:
        raise ValueError("need at least five samples for a rate fit")
    if np.any(values <= 0):
        raise NonPositiveValues("rate fits need strictly positive values")
    logs = np.log(values)
    slope, intercept = np.polyfit(times, logs, 1)
    resid = logs - (slope * times + intercept)
    ss_tot = np.sum((logs - logs.mean()) ** 2)
    ss_res = np.sum(resid ** 2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return RateFit(float(slope), float(r2), float(intercept))


class BackwardLimitFit(NamedTuple):
    a: float
    b: float
    residual: float


def fit_backward_limit(profile):
    """Best L^2 fit of a*cos^2(theta + b) to a nonnegative pressure profile.

    Writing a*cos^2(theta + b) = a/2 + (a/2) cos 2(theta + b), the least
    squares problem decouples over Fourier modes: the phase aligns with the
    mode-2 coefficient and a/2 = (2*alpha_0 + |mode 2|)/3.  ``residual`` is
    the L^2 norm of the misfit.
    """
    p = profile.pressure
    theta = profile.theta
    spec = fourier_decompose(p, 2)
    alpha0 = spec.cos(0)
    r = spec.amplitude(2)
    a = max(0.0, 2.0 * (2.0 * alpha0 + r) / 3.0)
    if r == 0.0 or a == 0.0:
        b = 0.0
    else:
        b = float(np.mod(0.5 * np.arctan2(-spec.sin(2), spec.cos(2)), np.pi))
        if b >= np.pi:
            b = 0.0
    misfit = p - a * np.cos(theta + b) ** 2
    residual = float(np.sqrt(_spectral.periodic_integral(misfit ** 2)))
    return BackwardLimitFit(a, b, residual)


@dataclass
class QuadrupoleSeries:
    """Mode-2 coefficients of k - 1 scaled by exp(2 tau)."""

    times: np.ndarray
    a: np.ndarray
    b: np.ndarray


def extract_quadrupole(trajectory, tau_min=None):
    """Per retained state: a = alpha_2(k - 1) e^{2 tau}, b = beta_2(k - 1) e^{2 tau}.

    Raises WrongFrame unless the trajectory was produced by the normalized
    solver.
    """
    if getattr(trajectory, "frame", None) != "normalized":
        raise WrongFrame("quadrupole extraction needs a normalized-frame trajectory")
    times, a, b = [], [], []
    for state in trajectory.states:
        if tau_min is not None and state.time < tau_min:
            continue
        spec = fourier_decompose(state.profile.curvature - 1.0, 2)
        scale = np.exp(2.0 * state.time)
        times.append(state.time)
        a.append(spec.cos(2) * scale)
        b.append(spec.sin(2) * scale)
    return QuadrupoleSeries(np.array(times), np.array(a), np.array(b))


CIRCLE = "Circle"
OVAL = "AngenentOval"
UNKNOWN = "Unknown"


@dataclass
class Classification:
    """Outcome of classify_ancient.

    ``t_shift`` is the fitted time translation: the snapshots match the
    closed form evaluated at t - t_shift (zero when the extinction time is
    already normalized to 0).
    """

    kind: str
    params: Optional[OvalParams] = None
    residual: float = 0.0
    t_shift: Optional[float] = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == OVAL and self.params is None:
            raise ValueError("an oval classification needs parameters")
        if self.kind == CIRCLE and self.params is not None:
            raise ValueError("a circle classification carries no parameters")

    def to_dict(self):
        return {
            "kind": self.kind,
            "lambda": None if self.params is None else self.params.lam,
            "gamma": None if self.params is None else self.params.gamma,
            "residual": self.residual,
            "t_shift": self.t_shift,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def classify_ancient(snapshots, tol=1e-6):
    """Decide whether pressure snapshots belong to a circle or an Angenent oval.

    The test follows the structure of the classification: an ancient
    solution has I = 0, hence p = (A/2) sin 2theta - (B/2) cos 2theta + c(t)
    with A, B constant in time; A = B = 0 leaves the circle ODE c' = 2c^2,
    otherwise lambda = sqrt(A^2 + B^2), gamma is fixed by
    A = -lambda sin 2gamma, B = -lambda cos 2gamma, and c(t) must follow
    lambda (1 + e)/(2 (1 - e)) with e = exp(2 lambda (t - t_shift)).

    Parameters
    ----------
    snapshots : sequence of CurvatureProfile
        At least three profiles at distinct negative times.
    tol : float
        Relative tolerance for every test (1e-6 suits closed-form data,
        1e-3 evolved data).

    Returns
    -------
    Classification
        ``residual`` is the worst relative misfit found; for Unknown it
        names the failing test in ``details["reason"]``.
    """
    snaps = sorted(snapshots, key=lambda s: s.time)
    if len(snaps) < 3:
        raise TooFewSnapshots(f"need at least 3 snapshots, got {len(snaps)}")
    times = np.array([s.time for s in snaps])
    if np.any(np.diff(times) <= 0):
        raise TooFewSnapshots("snapshot times must be distinct")

    def unknown(reason, residual):
        return Classification(UNKNOWN, None, float(residual), None,
                              {"reason": reason})

    scale = [float(np.max(np.abs(s.pressure))) for s in snaps]
    if min(scale) <= 0 or not np.all(np.isfinite(scale)):
        return unknown("nonpositive", np.inf)

    # Form test: I = 0 and nothing outside modes 0 and 2.
    worst = 0.0
    coeffs = []
    for s, sc in zip(snaps, scale):
        if np.any(s.pressure <= 0):
            return unknown("nonpositive", np.inf)
        spec = fourier_decompose(s.pressure)
        other = [spec.amplitude(l) for l in range(spec.max_mode + 1) if l not in (0, 2)]
        form = max(other) / sc if other else 0.0
        I_val, _ = stability_I(s)
        alpha = _spectral.derivative(s.pressure, 1)
        i_scale = _spectral.periodic_integral(
            _spectral.derivative(alpha, 1) ** 2 + 4 * alpha ** 2)
        i_rel = abs(I_val) / i_scale if i_scale > 0 else 0.0
        worst = max(worst, form, min(i_rel, 1.0) if i_scale > 0 else 0.0)
        if form > tol:
            return unknown("mode content outside {0, 2}", form)
        coeffs.append((2.0 * spec.sin(2), -2.0 * spec.cos(2), spec.cos(0)))
    coeffs = np.array(coeffs)
    A, B, c = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2]

    # A, B must be constant in time.
    ref = max(scale)
    drift = max(np.ptp(A), np.ptp(B)) / ref
    worst = max(worst, drift)
    if drift > tol:
        return unknown("mode-2 coefficients drift in time", drift)
    A0, B0 = A.mean(), B.mean()
    lam = float(np.hypot(A0, B0))

    if lam <= tol * ref:
        # c' = 2c^2  =>  c = 1/(-2 (t - t_shift))
        if np.any(c <= 0):
            return unknown("circle pressure must be positive", np.inf)
        shifts = times + 1.0 / (2.0 * c)
        t_shift = float(shifts.mean())
        if np.any(times >= t_shift):
            return unknown("snapshots after fitted extinction time", np.inf)
        model = 1.0 / (-2.0 * (times - t_shift))
        fit = float(np.max(np.abs(model - c) / c))
        worst = max(worst, fit)
        if fit > tol:
            return unknown("c(t) does not follow 1/(-2t)", fit)
        return Classification(CIRCLE, None, worst, t_shift)

    gamma = float(np.mod(0.5 * np.arctan2(-A0, -B0), np.pi))
    if gamma >= np.pi:
        gamma = 0.0
    # invert c = lam (1+e) / (2 (1-e))  =>  e = (2c - lam) / (2c + lam)
    if np.any(2.0 * c <= lam):
        return unknown("c(t) below lambda/2", np.inf)
    e = (2.0 * c - lam) / (2.0 * c + lam)
    shifts = times - np.log(e) / (2.0 * lam)
    t_shift = float(shifts.mean())
    if np.any(times >= t_shift):
        return unknown("snapshots after fitted extinction time", np.inf)
    e_model = np.exp(2.0 * lam * (times - t_shift))
    model = lam * (1.0 + e_model) / (2.0 * (1.0 - e_model))
    fit = float(np.max(np.abs(model - c) / c))
    worst = max(worst, fit)
    if fit > tol:
        return unknown("c(t) does not follow the oval law", fit)
    return Classification(OVAL, OvalParams(lam, gamma), worst, t_shift,
                          {"A": float(A0), "B": float(B0)})
