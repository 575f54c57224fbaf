import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from steklov_bounds import riccati as RC
from steklov_bounds.errors import DomainError, InapplicableError
from steklov_bounds.models import WarpedProfile, curvature_data
from steklov_bounds.verification import riccati_cross_check, sharpness_case


@pytest.mark.parametrize("t, beta, k, expected", [
    (0.5, 0.0, 1.0, -2.0),
    (math.pi / 8, 1.0, 1.0, -math.tan(3 * math.pi / 8)),
    (0.0, 0.7, 2.5, -2.5),
])
def test_phi_closed(t, beta, k, expected):
    assert RC.phi_closed(t, beta, k) == pytest.approx(expected, rel=1e-14)


def test_psi_closed():
    assert np.all(RC.psi_closed(np.linspace(0, 50, 11), 1.0, 1.0) == -1.0)
    assert RC.psi_closed(0.25, 0.0, 2.0) == pytest.approx(-4.0, rel=1e-15)
    assert RC.psi_maximal_time(1.0, 2.0) == pytest.approx(math.atanh(0.5), rel=1e-15)
    with pytest.raises(InapplicableError):
        RC.psi_closed(0.1, 2.0, 1.0)


def test_closed_forms_reject_times_past_blowup():
    with pytest.raises(DomainError):
        RC.phi_closed(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        RC.psi_closed(0.5, 0.0, 2.0)


@pytest.mark.parametrize("c, y0, t_end, exact", [
    (0.0, -1.0, 0.9, lambda t: -1 / (1 - t)),
    (1.0, -1.0, 0.7 * math.pi / 4, lambda t: -np.tan(t + math.pi / 4)),
])
def test_integration_matches_closed_form(c, y0, t_end, exact):
    traj = RC.integrate_riccati(c, y0, t_end)
    assert not traj.blew_up
    assert np.max(np.abs(traj.y - exact(traj.t))) <= 1e-8


def test_integration_equilibrium():
    traj = RC.integrate_riccati(-1.0, -1.0, 10.0)
    assert np.max(np.abs(traj.y + 1.0)) <= 1e-10


def test_integration_detects_blowup():
    traj = RC.integrate_riccati(0.0, -1.0, 2.0)
    assert traj.blew_up
    assert traj.t_end == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("kind, s, k", [("phi", 0.0, 1.0), ("phi", 2.0, 0.5), ("psi", 0.5, 2.0),
                                        ("psi", 1.0, 1.0), ("psi", 0.0, 1.0)])
def test_cross_check_over_95_percent(kind, s, k):
    out = riccati_cross_check(kind, s, k)
    assert out["max_error"] <= 1e-8
    assert out["residual"] <= 1e-9


def test_generic_solution_maximal_time():
    assert RC.RiccatiSolution(1.0, -1.0).maximal_time == pytest.approx(math.pi / 4)
    assert RC.RiccatiSolution(-1.0, -2.0).maximal_time == pytest.approx(math.atanh(0.5))
    assert RC.RiccatiSolution(-1.0, -0.5).maximal_time == math.inf


@given(st.floats(0.05, 3.0), st.floats(0.05, 3.0), st.floats(0.0, 0.95))
def test_phi_solves_its_equation(beta, k, frac):
    sol = RC.RiccatiSolution(beta * beta, -k)
    t = frac * sol.maximal_time
    assert sol.residual(t) <= 1e-6
    assert sol(t) == pytest.approx(RC.phi_closed(t, beta, k), rel=1e-10, abs=1e-12)


@given(st.floats(0.0, 1.0), st.floats(0.05, 3.0), st.floats(0.0, 0.95))
def test_psi_solves_its_equation(ratio, kappa, frac):
    alpha = ratio * kappa
    sol = RC.RiccatiSolution(-alpha * alpha, -kappa)
    T = RC.psi_maximal_time(alpha, kappa)
    t = frac * (T if math.isfinite(T) else 10.0)
    assert sol(t) == pytest.approx(RC.psi_closed(t, alpha, kappa), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_case_split_is_continuous(k):
    ts = np.linspace(0.0, 0.9 / k, 40)
    flat = RC.phi_closed(ts, 0.0, k)
    diffs = [np.max(np.abs(RC.phi_closed(ts, e, k) - flat)) for e in (1e-2, 1e-3, 1e-4)]
    assert diffs[0] > diffs[1] > diffs[2] and diffs[2] < 1e-6
    flat = RC.psi_closed(ts, 0.0, k)
    diffs = [np.max(np.abs(RC.psi_closed(ts, e, k) - flat)) for e in (1e-2, 1e-3, 1e-4)]
    assert diffs[0] > diffs[1] > diffs[2] and diffs[2] < 1e-6


def test_parallel_H_upper_values(unit_ball, cap_data):
    assert RC.parallel_H_upper(0.5, unit_ball) == pytest.approx(4.0, rel=1e-15)
    assert RC.parallel_H_upper(math.pi / 8, cap_data) == pytest.approx(2 / math.tan(math.pi / 8), rel=1e-14)
    assert RC.parallel_H_upper(0.25, unit_ball, "ricci") == pytest.approx(4.0, rel=1e-15)


def test_parallel_H_upper_gates(unit_ball):
    with pytest.raises(InapplicableError):
        RC.parallel_H_upper(0.1, unit_ball.replace(sec_lower_collar=-4.0), "ricci")
    with pytest.raises(DomainError):
        RC.parallel_H_upper(1.0, unit_ball)


@pytest.mark.parametrize("profile", [WarpedProfile.flat(2, 1.0), WarpedProfile.flat(3, 1.0),
                                     WarpedProfile.spherical(1.0, 2, math.pi / 4),
                                     WarpedProfile.spherical(1.0, 3, math.pi / 3)],
                         ids=["flat2", "flat3", "cap2", "cap3"])
def test_comparison_is_sharp_on_models(profile):
    case = sharpness_case("model", profile)
    assert case.passed, case.outputs


def test_comparison_window_follows_geometry():
    g = curvature_data(WarpedProfile.spherical(1.0, 2, math.pi / 4))
    assert RC.delta_window(g) == pytest.approx(math.pi / 4, rel=1e-12)
