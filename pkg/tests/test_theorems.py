import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from steklov_bounds import kernels as K
from steklov_bounds.errors import DomainError, InvalidInputError
from steklov_bounds.theorems import (GeometricData, Theorem, all_bounds, best_bound,
                                     corollary_B_rolling_lower, escobar_baselines, spectral_gap,
                                     spectral_gap_report, theorem_A_bound, theorem_C_bound,
                                     theorem_corB_bound, theorem_E_bound, theorem_F_bound)
from steklov_bounds.verification import random_geometry

from conftest import flat_ball_data

# 50-digit references from scripts/derive_reference_values.py
UNIT_BALL_A = 0.599456183689829
UNIT_BALL_C = 0.57002747232012957
CAP_A = 0.72850425014583528
CAP_E = 0.63552928023773494
CAP_C = 0.67854040324107907


def test_unit_ball_theorem_A(unit_ball):
    r = theorem_A_bound(unit_ball)
    assert r.applicable
    assert r.delta_star == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
    assert r.bound == pytest.approx(UNIT_BALL_A, rel=1e-13)
    assert r.bound > 0.5
    assert r.kernel_values["F"] == pytest.approx(4 + 4 * math.sqrt(2), rel=1e-14)


def test_forced_delta_gives_smaller_bound(unit_ball):
    r = theorem_A_bound(unit_ball, delta=0.1)
    assert r.delta_star == 0.1
    assert r.kernel_values["E"] == pytest.approx(2 / 0.9 + 10, rel=1e-15)
    assert r.bound < UNIT_BALL_A


def test_forced_delta_outside_window(unit_ball):
    with pytest.raises(DomainError):
        theorem_A_bound(unit_ball, delta=1.0)
    with pytest.raises(DomainError):
        theorem_A_bound(unit_ball, delta=-0.1)


def test_theorem_A_gates_on_kappa(unit_ball):
    bad = unit_ball.replace(kappa_lower=-0.5, mean_lower=-1.0)
    r = theorem_A_bound(bad)
    assert not r.applicable
    assert "requires 0<κ≤κᵢ" in r.reasons
    assert math.isnan(r.bound)


def test_unit_ball_theorem_C(unit_ball):
    r = theorem_C_bound(unit_ball)
    assert r.delta_star == pytest.approx(0.25, abs=1e-12)
    assert r.bound == pytest.approx(UNIT_BALL_C, rel=1e-13)


def test_cap_theorems(cap_data):
    assert theorem_A_bound(cap_data).bound == pytest.approx(CAP_A, rel=1e-12)
    assert theorem_E_bound(cap_data).bound == pytest.approx(CAP_E, rel=1e-12)
    assert theorem_F_bound(cap_data).bound == pytest.approx(CAP_A, rel=1e-12)
    assert theorem_C_bound(cap_data).bound == pytest.approx(CAP_C, rel=1e-12)


def test_theorem_E_and_F_gates(unit_ball, cap_data):
    r = theorem_E_bound(unit_ball)
    assert not r.applicable and "requires Ric ≥ a² > 0" in r.reasons
    r = theorem_F_bound(cap_data.replace(mean_lower=0.0, kappa_lower=0.0))
    assert not r.applicable and "requires H >= h > 0 (defer to ThmE)" in r.reasons
    assert theorem_E_bound(cap_data.replace(mean_lower=0.0, kappa_lower=0.0)).applicable


def test_theorem_E_tolerates_negative_principal_curvature(cap_data):
    g = cap_data.replace(kappa_lower=-0.1, mean_lower=0.0)
    r = theorem_E_bound(g)
    assert r.applicable
    assert r.bound == pytest.approx(0.5 * (-0.1 + r.kernel_values["eps_1"]))
    assert theorem_E_bound(g.replace(kappa_lower=-5.0)).applicable is False


def test_theorem_E_beta_zero_note(cap_data):
    r = theorem_E_bound(cap_data.replace(sec_upper_collar=0.0))
    assert "outside stated hypotheses: beta = 0" in r.notes


def test_theorem_F_tends_to_E_as_h_vanishes(cap_data):
    e = theorem_E_bound(cap_data).bound
    vals = [theorem_F_bound(cap_data.replace(mean_lower=h, kappa_lower=h / 2)).bound
            - theorem_E_bound(cap_data.replace(kappa_lower=h / 2, mean_lower=h)).bound
            for h in (1e-2, 1e-4, 1e-6)]
    assert all(v >= 0 for v in vals)
    assert abs(vals[-1]) < 1e-6
    assert e < CAP_A


def test_theorem_C_alpha_boundary(unit_ball):
    assert theorem_C_bound(unit_ball.replace(sec_lower_collar=-1.0)).applicable
    r = theorem_C_bound(unit_ball.replace(sec_lower_collar=-4.0))
    assert not r.applicable and "requires 0≤α≤κ" in r.reasons


@pytest.mark.parametrize("kappa, alpha, beta, k, expected", [
    (1.0, 2.0, 0.0, 1.0, math.atanh(0.5) / 2),
    (2.0, 1.0, 0.0, 2.0, 0.5),
    (1.0, 2.0, 1.0, 1.0, math.atanh(0.5) / 2),
])
def test_corollary_B_rolling_lower(kappa, alpha, beta, k, expected):
    assert corollary_B_rolling_lower(kappa, alpha, beta, k) == pytest.approx(expected, rel=1e-15)


def test_corollary_B_rejects_alpha_zero():
    with pytest.raises(InvalidInputError):
        corollary_B_rolling_lower(1.0, 0.0, 0.0, 1.0)


def test_corollary_B_bound_shrinks_window(unit_ball):
    g = unit_ball.replace(sec_lower_collar=-4.0)
    r = theorem_corB_bound(g)
    assert r.kernel_values["window"] == pytest.approx(math.atanh(0.5) / 2)
    assert r.bound < theorem_A_bound(g).bound
    assert not theorem_corB_bound(unit_ball).applicable


def test_escobar_baselines():
    (r,) = escobar_baselines(flat_ball_data(1))
    assert r.theorem is Theorem.ESCOBAR_SURFACE and r.bound == 1.0 and not r.strict
    (r,) = escobar_baselines(flat_ball_data(3, kappa=2.0))
    assert r.theorem is Theorem.ESCOBAR_HIGHER and r.bound == 1.0 and r.strict
    (r,) = escobar_baselines(flat_ball_data(3).replace(kappa_lower=0.0, mean_lower=0.0))
    assert not r.applicable


def test_spectral_gap():
    assert spectral_gap(2, 2.0, 2.0) == (0.5, 1.0)
    assert spectral_gap(2, 2.0, 1.0) is None
    assert spectral_gap(2, 2.0, math.sqrt(2.0)) is None
    with pytest.raises(InvalidInputError):
        spectral_gap(2, 0.0, 1.0)


def test_spectral_gap_report_on_hyperbolic_data():
    kappa = 1 / math.tanh(0.5)
    g = GeometricData(n=2, ric_lower_global=-2.0, ric_lower_collar=-2.0, ric_upper_collar=0.0,
                      sec_upper_collar=0.0, sec_lower_collar=-1.0, kappa_lower=kappa, kappa_upper=kappa,
                      mean_lower=2 * kappa, mean_upper=2 * kappa, rolling_radius=0.5, collar_radius=0.5)
    r = spectral_gap_report(g)
    assert r.applicable
    assert r.gap == pytest.approx((1 / kappa, kappa / 2))
    assert r.gap[0] == pytest.approx(0.46211715726000974, rel=1e-12)
    assert r.gap[1] == pytest.approx(1.0819767068693265, rel=1e-12)


def test_best_bound(unit_ball, cap_data):
    r = best_bound(unit_ball)
    assert r.theorem is Theorem.THM_A and r.bound == pytest.approx(UNIT_BALL_A, rel=1e-13)
    assert {s.theorem for s in r.sub_reports} >= {Theorem.THM_A, Theorem.THM_C, Theorem.ESCOBAR_HIGHER}
    assert best_bound(cap_data).bound == pytest.approx(CAP_A, rel=1e-12)
    r = best_bound(unit_ball.replace(kappa_lower=0.0, mean_lower=0.0))
    assert r.theorem is None and not r.applicable


def test_geometric_data_validation(unit_ball):
    with pytest.raises(InvalidInputError):
        unit_ball.replace(collar_radius=2.0)
    with pytest.raises(InvalidInputError):
        unit_ball.replace(kappa_lower=2.0)
    with pytest.raises(InvalidInputError):
        unit_ball.replace(sec_upper_collar=-1.0)
    with pytest.raises(InvalidInputError):
        GeometricData.from_dict({"n": 2})
    assert GeometricData.from_dict(unit_ball.to_dict()) == unit_ball


def test_flat_ball_limit():
    vals = [theorem_A_bound(flat_ball_data(n)).bound for n in (1, 2, 4, 9, 100, 10**4)]
    assert vals == pytest.approx([0.56872930440884371, UNIT_BALL_A, 0.63745860881768742,
                                  0.68941266803281571, 0.84868779773826586, 0.98058797738742191],
                                 rel=1e-13)
    assert all(b > a for a, b in zip(vals, vals[1:]))


geometries = st.integers(0, 2**32 - 1).map(lambda s: random_geometry(np.random.default_rng(s)))


@given(geometries, st.floats(0.25, 4.0))
def test_bounds_scale_inversely(g, c):
    scaled = g.scaled(c)
    for fn in (theorem_A_bound, theorem_C_bound, theorem_E_bound, theorem_F_bound):
        r0, r1 = fn(g), fn(scaled)
        assert r0.applicable == r1.applicable
        if r0.applicable:
            assert r1.bound * c == pytest.approx(r0.bound, rel=1e-12)
            assert r1.delta_star == pytest.approx(c * r0.delta_star, rel=1e-6)


@given(geometries)
def test_theorem_A_dominates_escobar(g):
    assert theorem_A_bound(g).bound > escobar_baselines(g)[0].bound or g.n == 1


@given(geometries)
def test_theorem_F_at_least_theorem_E(g):
    e, f = theorem_E_bound(g), theorem_F_bound(g)
    if e.applicable and f.applicable:
        assert f.bound >= e.bound - 1e-12


@given(geometries, st.floats(0.05, 0.95))
def test_theorem_F_recovers_A_when_h_is_n_kappa(g, frac):
    w = K.delta_sup(g.collar_radius, g.beta, g.kappa_upper)
    a, f = theorem_A_bound(g, delta=frac * w), theorem_F_bound(g, delta=frac * w)
    assert f.bound == pytest.approx(a.bound, rel=1e-12)


@given(geometries, st.floats(0.0, 1.0))
def test_theorem_A_monotone_in_a_sq_and_K(g, t):
    base = theorem_A_bound(g).bound
    more_ric = g.replace(ric_lower_collar=g.a_sq * (1 + t), ric_upper_collar=g.ric_upper_collar + g.a_sq * t)
    assert theorem_A_bound(more_ric).bound >= base * (1 - 1e-12)
    bigger_K = g.replace(kappa_upper=g.kappa_upper * (1 + t), mean_upper=g.mean_upper * (1 + t))
    assert theorem_A_bound(bigger_K).bound <= base * (1 + 1e-12)


@given(geometries)
def test_all_bounds_reports_every_theorem(g):
    names = {r.theorem for r in all_bounds(g)}
    assert {Theorem.THM_A, Theorem.THM_E, Theorem.THM_F, Theorem.THM_C, Theorem.COR_B} <= names


@given(geometries, st.floats(-3.0, 0.0), st.floats(0.0, 1.0))
def test_theorem_F_admissible_implies_bound_decreasing_in_E(g, kappa, t):
    # whenever some delta is admissible, 8 h kappa + 16 a^2 > 0
    h = t * g.n * g.kappa_upper
    g = g.replace(kappa_lower=kappa, mean_lower=h)
    if h > 0 and theorem_F_bound(g).applicable:
        assert 8 * h * kappa + 16 * g.a_sq > 0
