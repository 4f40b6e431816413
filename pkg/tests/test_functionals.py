import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from csf_lab import exact_solutions as ex
from csf_lab.errors import BadBoundary, BadInterval, NonPositive
from csf_lab.experiments import dissipation_mismatch
from csf_lab.functionals import (TOLERANCES, FunctionalSeries, gradient_bound, lyapunov_J,
                                 stability_I, steady_state_residual, wirtinger_gap)
from csf_lab.geometry import AngleGrid, CurvatureProfile
from csf_lab.pde import harnack_margin


def profile(func, n=256, t=0.0):
    return CurvatureProfile.from_function(func, n, time=t)


# -- J ----------------------------------------------------------------------

def test_J_of_unit_circle():
    J = lyapunov_J(profile(lambda th: np.ones_like(th), 64))
    assert J.value == pytest.approx(-8 * np.pi, rel=1e-14)
    assert J.dissipation == pytest.approx(-16 * np.pi, rel=1e-14)


def test_J_of_oval_is_negative_and_matches_fine_grid():
    coarse = lyapunov_J(ex.oval_pressure(ex.OvalParams(1.0, 0.0), -1.0, 256))
    fine = lyapunov_J(ex.oval_pressure(ex.OvalParams(1.0, 0.0), -1.0, 1024))
    assert coarse.value < 0
    assert coarse.value == pytest.approx(fine.value, abs=TOLERANCES.closed_form)
    assert coarse.dissipation == pytest.approx(fine.dissipation, abs=TOLERANCES.closed_form)


def test_J_matches_independent_quadrature():
    J = lyapunov_J(profile(lambda th: 1 + 0.9 * np.cos(th), 256))

    def integrand(th):
        p = 1 + 0.9 * np.cos(th)
        return (0.9 * np.sin(th)) ** 2 / p - 4 * p

    ref, _ = quad(integrand, 0, 2 * np.pi, epsabs=1e-13, limit=200)
    assert J.value == pytest.approx(ref, abs=1e-8)


@pytest.mark.parametrize("lam,gamma", [(0.5, 0.0), (1.0, 0.3), (2.0, 1.2)])
@pytest.mark.parametrize("t", [-5.0, -1.0, -0.2])
def test_J_nonpositive_on_ancient_profiles(lam, gamma, t):
    assert lyapunov_J(ex.oval_pressure(ex.OvalParams(lam, gamma), t, 256)).value <= 0


def test_J_requires_positive_profile():
    values = np.ones(32)
    values[3] = -1e-3
    with pytest.raises(NonPositive):
        lyapunov_J(CurvatureProfile(AngleGrid(32), values))


# -- I ----------------------------------------------------------------------

def test_I_zero_on_circle():
    I = stability_I(ex.circle_pressure(-0.5, 64))
    assert I == (0.0, 0.0)


@pytest.mark.parametrize("t", [-10.0, -1.0, -0.1])
@pytest.mark.parametrize("lam,gamma", [(1.0, 0.0), (0.5, 0.3), (2.0, np.pi / 2)])
def test_I_zero_on_ovals(t, lam, gamma):
    I = stability_I(ex.oval_pressure(ex.OvalParams(lam, gamma), t, 256))
    assert abs(I.value) < TOLERANCES.closed_form
    assert abs(I.dissipation) < TOLERANCES.closed_form


def test_I_single_mode_value():
    # alpha = -0.3 sin 3theta: int alpha_th^2 = 0.81 pi, 4 int alpha^2 = 0.36 pi
    I = stability_I(profile(lambda th: 1 + 0.1 * np.cos(3 * th), 128))
    assert I.value == pytest.approx(0.45 * np.pi, rel=1e-13)
    assert I.dissipation < 0


@pytest.mark.parametrize("l", [3, 4, 6])
def test_I_positive_above_mode_two(l):
    # for a single mode l, I = pi a^2 l^2 (l^2 - 4) >= 0, and zero exactly at l = 2
    a = 0.05
    I = stability_I(profile(lambda th: 1 + a * np.cos(l * th), 128))
    assert I.value == pytest.approx(np.pi * a * a * l * l * (l * l - 4), rel=1e-12)


# -- steady states -------------------------------------------------------------

def test_steady_state_residuals():
    assert steady_state_residual(ex.backward_limit_profile(1.0, 0.0, 256)) < 1e-8
    assert steady_state_residual(profile(lambda th: np.ones_like(th), 32)) == 2.0
    assert steady_state_residual(CurvatureProfile(AngleGrid(32), np.zeros(32), strict=False)) == 0.0


def test_near_steady_profile_has_small_rhs():
    eps = 1e-6
    res = steady_state_residual(profile(lambda th: np.cos(th) ** 2 + eps))
    assert 0 < res < 10 * eps


# -- gradient bound ---------------------------------------------------------

@pytest.mark.parametrize("prof", [
    ex.circle_pressure(-1.0, 128),
    ex.oval_pressure(ex.OvalParams(1.0, 0.0), -1.0, 256),
    ex.oval_pressure(ex.OvalParams(2.0, 0.7), -0.3, 256),
    CurvatureProfile.from_function(lambda th: 1 + 0.2 * np.cos(2 * th), 128),
])
def test_gradient_bound_under_harnack(prof):
    assert harnack_margin(prof) >= 0
    lhs, rhs = gradient_bound(prof)
    assert lhs <= rhs


# -- Wirtinger ----------------------------------------------------------------

@pytest.mark.parametrize("f,a,b,lam", [
    (np.sin, 0.0, np.pi, 1.0),
    (lambda x: np.sin(2 * x), 0.0, np.pi / 2, 0.5),
    (lambda x: np.sin(x - 1.0), 1.0, 1.0 + np.pi, 1.0),
])
def test_wirtinger_equality_cases(f, a, b, lam):
    x = np.linspace(a, b, 257)
    assert abs(wirtinger_gap(f(x), a, b, lam)) < 1e-8


def test_wirtinger_polynomial():
    x = np.linspace(0, np.pi, 2049)
    gap = wirtinger_gap(x * (np.pi - x), 0.0, np.pi, 1.0)
    assert gap == pytest.approx(np.pi ** 3 / 3 - np.pi ** 5 / 30, abs=1e-6)


def test_wirtinger_errors():
    x = np.linspace(0, np.pi, 65)
    with pytest.raises(BadBoundary):
        wirtinger_gap(np.cos(x), 0.0, np.pi, 1.0)
    with pytest.raises(BadInterval):
        wirtinger_gap(np.sin(x), 0.0, np.pi, 0.9)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=6), st.floats(0.3, 1.0))
def test_wirtinger_gap_nonnegative(coeffs, shrink):
    # any sine polynomial on an interval shorter than lambda_w * pi
    length = shrink * np.pi
    x = np.linspace(0, length, 513)
    f = sum(c * np.sin((k + 1) * np.pi * x / length) for k, c in enumerate(coeffs))
    f[0] = f[-1] = 0.0
    assert wirtinger_gap(f, 0.0, length, 1.0) >= -1e-10


# -- along trajectories ------------------------------------------------------

def test_series_validation():
    with pytest.raises(ValueError):
        FunctionalSeries("J", [0.0, 0.0], [1.0, 2.0])
    s = FunctionalSeries("J", [0, 1, 2], [3.0, 2.0, 2.0 + 1e-9])
    assert not s.is_nonincreasing()
    assert s.is_nonincreasing(slack=1e-8)


def test_J_dissipation_identity_along_oval(oval_run):
    assert dissipation_mismatch(oval_run, "J", "J_dissipation").max() < 0.01


def test_J_and_I_monotone_along_runs(oval_run, perturbed_run):
    for run in (oval_run, perturbed_run):
        assert run.series("J").is_nonincreasing(1e-8)
        assert run.series("I").is_nonincreasing(1e-8)
    assert np.all(np.array(oval_run.diagnostics["J"]) < 0)


def test_identities_on_non_ancient_run(perturbed_run):
    assert dissipation_mismatch(perturbed_run, "J", "J_dissipation").max() < 0.01
    assert dissipation_mismatch(perturbed_run, "I", "I_dissipation").max() < 0.01
    # I is far from zero here, so the identity check is not vacuous
    assert min(perturbed_run.diagnostics["I"]) > 1.0
