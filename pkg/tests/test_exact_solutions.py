import numpy as np
import pytest
import sympy as sp

from csf_lab import exact_solutions as ex
from csf_lab.errors import NonAncientTime
from csf_lab.functionals import steady_state_residual
from csf_lab.geometry import curvature_of_curve
from csf_lab.pde import pressure_rhs_values


@pytest.fixture(scope="module")
def oval_symbolic():
    """Symbolic oval p(theta, t) and the residual of the pressure equation."""
    th, t, lam, g = sp.symbols("theta t lambda gamma", real=True)
    p = lam * (1 / (1 - sp.exp(2 * lam * t)) - sp.sin(th + g) ** 2)
    residual = sp.diff(p, t) - (p * sp.diff(p, th, 2) - sp.diff(p, th) ** 2 / 2 + 2 * p ** 2)
    args = (th, t, lam, g)
    return {
        "residual_simplified": sp.simplify(residual),
        "p_t": sp.lambdify(args, sp.diff(p, t), "numpy"),
        "p_theta": sp.lambdify(args, sp.diff(p, th), "numpy"),
        "p_thth": sp.lambdify(args, sp.diff(p, th, 2), "numpy"),
    }


def test_oval_solves_pressure_equation_symbolically(oval_symbolic):
    assert oval_symbolic["residual_simplified"] == 0


@pytest.mark.parametrize("lam,gamma,t", [(1.0, 0.0, -1.0), (0.5, 0.3, -4.0),
                                         (2.0, np.pi / 4, -0.3), (1.0, 2.0, -0.05)])
def test_analytic_derivatives_match_sympy(oval_symbolic, lam, gamma, t):
    params = ex.OvalParams(lam, gamma)
    d = ex.oval_pressure_derivatives(params, t, 64)
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    for key, sym in (("p_t", "p_t"), ("p_theta", "p_theta"), ("p_thetatheta", "p_thth")):
        ref = np.broadcast_to(oval_symbolic[sym](th, t, lam, gamma), th.shape)
        np.testing.assert_allclose(d[key], ref, rtol=1e-12, atol=1e-12)
    # pointwise PDE residual with the analytic derivatives
    res = d["p_t"] - (d["p"] * d["p_thetatheta"] - 0.5 * d["p_theta"] ** 2 + 2 * d["p"] ** 2)
    assert np.max(np.abs(res)) < 1e-10 * max(1.0, np.max(d["p"]) ** 2)


@pytest.mark.parametrize("t,value", [(-0.5, 1.0), (-50.0, 0.01)])
def test_circle_pressure_values(t, value):
    prof = ex.circle_pressure(t, 32)
    np.testing.assert_allclose(prof.values, value, rtol=1e-15)
    assert prof.time == t


@pytest.mark.parametrize("t", [0.0, 0.5])
def test_non_ancient_times_rejected(t):
    with pytest.raises(NonAncientTime):
        ex.circle_pressure(t)
    with pytest.raises(NonAncientTime):
        ex.oval_pressure(ex.OvalParams(1.0), t)


@pytest.mark.parametrize("t", [-3.0, -0.7, -0.01])
def test_circle_satisfies_ode(t):
    prof = ex.circle_pressure(t, 16)
    np.testing.assert_allclose(pressure_rhs_values(prof.values), 2 * prof.values ** 2,
                               rtol=1e-14)


def test_oval_at_half_life():
    t = -np.log(2) / 2
    prof = ex.oval_pressure(ex.OvalParams(1.0, 0.0), t, 256)
    assert prof.values[0] == pytest.approx(2.0, rel=1e-14)


def test_oval_far_past_keeps_relative_precision():
    prof = ex.oval_pressure(ex.OvalParams(1.0, 0.0), -20.0, 256)
    expected = np.exp(-40) / (1 - np.exp(-40))
    assert prof.values[64] == pytest.approx(expected, rel=1e-6)
    assert np.all(prof.values > 0)


def test_oval_minimizer_location():
    prof = ex.oval_pressure(ex.OvalParams(2.0, np.pi / 4), -0.8, 256)
    theta_min = prof.theta[np.argmin(prof.values)]
    # cos^2(theta + pi/4) vanishes at theta = pi/4 (mod pi)
    assert np.isclose((theta_min - np.pi / 4) % np.pi, 0.0, atol=1e-12)


def test_oval_params_gamma_reduced_mod_pi():
    assert ex.OvalParams(1.0, np.pi + 0.25).gamma == pytest.approx(0.25)
    assert ex.OvalParams(1.0, -0.25).gamma == pytest.approx(np.pi - 0.25)
    with pytest.raises(ValueError):
        ex.OvalParams(0.0, 0.1)


def test_glossary_form_agrees():
    lam, gamma, t = 1.5, 0.4, -0.6
    prof = ex.oval_pressure(ex.OvalParams(lam, gamma), t, 128)
    direct = lam * (1 / (1 - np.exp(2 * lam * t)) - np.sin(prof.theta + gamma) ** 2)
    np.testing.assert_allclose(prof.values, direct, rtol=1e-13)


@pytest.mark.parametrize("lam,gamma,t", [(1.0, 0.0, -1.0), (0.5, 1.0, -2.0), (3.0, 0.2, -0.1)])
def test_ovals_have_positive_time_derivative(lam, gamma, t):
    d = ex.oval_pressure_derivatives(ex.OvalParams(lam, gamma), t, 64)
    assert np.all(d["p_t"] > 0)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_backward_convergence_rate(lam):
    # sup-norm distance to lam cos^2(theta + gamma), at times where it is
    # still resolvable next to O(lam) values in double precision
    times = np.array([-2.0, -4.0, -6.0]) / lam
    errs = []
    for t in times:
        prof = ex.oval_pressure(ex.OvalParams(lam, 0.3), t, 128)
        limit = lam * (1 - np.sin(prof.theta + 0.3) ** 2)
        errs.append(np.max(np.abs(prof.values - limit)))
    assert np.polyfit(times, np.log(errs), 1)[0] == pytest.approx(2 * lam, rel=0.05)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_backward_offset_rate_far_past(lam):
    # the whole distance is the constant offset, which keeps full relative
    # precision at t = -10, -20, -30
    times = np.array([-10.0, -20.0, -30.0])
    offsets = np.array([ex.oval_offset(lam, t) for t in times])
    assert np.polyfit(times, np.log(offsets), 1)[0] == pytest.approx(2 * lam, rel=0.05)
    e = np.exp(2 * lam * times)
    np.testing.assert_allclose(offsets, lam * e / (1 - e), rtol=1e-12)


# -- ansatz ODEs -------------------------------------------------------------

@pytest.mark.parametrize("t,c", [(-1.0, 0.0), (-0.3, 0.2), (-5.0, -1.0)])
def test_ansatz_residual_vanishes_on_solution(t, c):
    e = np.exp(2 * (t - c))
    a = 1 / (1 - e)
    da = 2 * e / (1 - e) ** 2
    r1, r2 = ex.oval_ansatz_residual(a, 1.0, da, 0.0)
    assert abs(r1) < 1e-12 and abs(r2) < 1e-12


def test_ansatz_residual_reports_b_drift():
    assert ex.oval_ansatz_residual(1.0, 1.0, 0.0, 0.1)[0] == 0.1


def test_ansatz_zero_solution():
    assert ex.oval_ansatz_residual(0.0, 0.7, 0.0, 0.0) == (0.0, 0.0)


# -- backward limits ---------------------------------------------------------

def test_backward_limit_profile_values():
    prof = ex.backward_limit_profile(1.0, 0.0, 64)
    assert prof.values[0] == 1.0
    assert not prof.strict
    assert np.all(ex.backward_limit_profile(0.0, 1.3, 64).values == 0)
    with pytest.raises(ValueError):
        ex.backward_limit_profile(-1.0, 0.0)


@pytest.mark.parametrize("a,b", [(1.0, 0.0), (2.5, 0.7), (0.0, 0.0)])
def test_backward_limits_are_steady_states(a, b):
    assert steady_state_residual(ex.backward_limit_profile(a, b, 256)) < 1e-8


@pytest.mark.parametrize("gamma", [0.0, 0.3, np.pi / 2])
def test_oval_tends_to_backward_limit_with_same_phase(gamma):
    prof = ex.oval_pressure(ex.OvalParams(1.0, gamma), -30.0, 256)
    limit = ex.backward_limit_profile(1.0, gamma, 256)
    assert np.max(np.abs(prof.values - limit.values)) < 1e-12


def test_oval_with_quarter_turn_phase_tends_to_sine_squared():
    # cos^2(theta + pi/2) = sin^2(theta), so this limit is *not* cos^2(theta)
    prof = ex.oval_pressure(ex.OvalParams(1.0, np.pi / 2), -30.0, 256)
    np.testing.assert_allclose(prof.values, np.sin(prof.theta) ** 2, atol=1e-12)
    assert np.max(np.abs(prof.values - np.cos(prof.theta) ** 2)) == pytest.approx(1.0)


# -- grim reaper ---------------------------------------------------------------

def test_grim_reaper_vertex():
    curve = ex.grim_reaper_curve(0.0, 1.4, 401)
    mid = curve.points[200]
    np.testing.assert_allclose(mid, [0.0, 0.0], atol=1e-15)
    assert ex.grim_reaper_curvature(0.0) == 1.0
    assert not curve.closed


def test_grim_reaper_polygon_curvature():
    curve = ex.grim_reaper_curve(0.0, 1.4, 2001)
    s, kappa = curvature_of_curve(curve)
    x = curve.x[1:-1]
    j = np.argmin(np.abs(x - np.pi / 3))
    assert kappa[j] == pytest.approx(0.5, abs=2e-3)
    np.testing.assert_allclose(kappa, np.cos(x), atol=5e-3)


def test_grim_reaper_time_shift():
    a = ex.grim_reaper_curve(0.0, 1.0, 11)
    b = ex.grim_reaper_curve(0.25, 1.0, 11)
    np.testing.assert_allclose(b.points - a.points, np.tile([0.0, 0.25], (11, 1)), atol=1e-15)


@pytest.mark.parametrize("w", [0.0, np.pi / 2, 2.0])
def test_grim_reaper_half_width_range(w):
    with pytest.raises(ValueError):
        ex.grim_reaper_curve(0.0, w)
