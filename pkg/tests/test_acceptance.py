"""Acceptance gate: one check per criterion, each printed as a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""
import json
import math
import sys
import tempfile
import time

import numpy as np
import pytest

from steklov_bounds import kernels as K
from steklov_bounds import riccati as RC
from steklov_bounds.cli import dumps, main as cli_main
from steklov_bounds.models import WarpedProfile, curvature_data, parallel_mean_curvature_exact
from steklov_bounds.oracle import mode_sigma, steklov_spectrum
from steklov_bounds.theorems import (GeometricData, spectral_gap, theorem_A_bound, theorem_C_bound,
                                     theorem_corB_bound, theorem_E_bound, theorem_F_bound)
from steklov_bounds.verification import (random_geometry, riccati_cross_check, run_suite,
                                         suite_balls, suite_caps, suite_reilly, _riccati_grid)

RESULTS: dict[int, tuple[bool, str]] = {}


def flat_data(n):
    return GeometricData(n=n, ric_lower_global=0.0, ric_lower_collar=0.0, ric_upper_collar=0.0,
                         sec_upper_collar=0.0, sec_lower_collar=0.0, kappa_lower=1.0, kappa_upper=1.0,
                         mean_lower=float(n), mean_upper=float(n), rolling_radius=1.0, collar_radius=1.0)


def criterion_1():
    start = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 3, 4):
        for R in (0.5, 1.0, 2.0):
            p = WarpedProfile.flat(n, R)
            for ell in (1, 2, 3):
                worst = max(worst, abs(mode_sigma(p, ell) - ell / R))
    elapsed = time.perf_counter() - start
    return worst <= 1e-8 and elapsed < 5.0, f"max |sigma(l) - l/R| = {worst:.2e}, {elapsed:.2f} s"


def criterion_2():
    worst = 0.0
    for R in (0.3, math.pi / 4, 0.8):
        cap, disc = WarpedProfile.spherical(1.0, 1, R), WarpedProfile.hyperbolic(1.0, 1, R)
        for ell in (1, 2, 3, 4, 5):
            worst = max(worst, abs(mode_sigma(cap, ell) - ell / math.sin(R)),
                        abs(mode_sigma(disc, ell) - ell / math.sinh(R)))
    return worst <= 1e-8, f"max deviation from l/sin R and l/sinh R = {worst:.2e}"


def criterion_3():
    d_err = f_err = 0.0
    for n in (2, 4, 9, 100):
        kern = K.e_kernel(n, 0.0, 1.0)
        d, e = K.optimize_delta(kern, 1.0)
        d_err = max(d_err, abs(d - (math.sqrt(n) - 1) / (n - 1)))
        f_err = max(f_err, abs(K.kernel_F(d, n, 0.0, 1.0, 1.0) - (2 + 4 * math.sqrt(n) + n)))
    ns = list(range(1, 201)) + [10**3, 10**4]
    vals = [theorem_A_bound(flat_data(n)).bound for n in ns]
    increasing = all(b > a for a, b in zip(vals, vals[1:]))
    ok = d_err <= 1e-8 and f_err <= 1e-10 and increasing and vals[-1] > 0.98
    return ok, f"delta* err {d_err:.1e}, F err {f_err:.1e}, increasing={increasing}, bound(1e4)={vals[-1]:.6f}"


def criterion_4():
    r = theorem_A_bound(flat_data(2))
    sigma1 = steklov_spectrum(WarpedProfile.flat(2, 1.0)).sigma1
    ok = abs(r.bound - 0.599456) <= 1e-4 and r.bound > 0.5 and r.bound <= sigma1
    return ok, f"ThmA = {r.bound:.9f}, Escobar 0.5, oracle sigma1 = {sigma1:.12f}"


def criterion_5():
    rng = np.random.default_rng(0)
    logu = lambda lo, hi: math.exp(rng.uniform(math.log(lo), math.log(hi)))
    worst = worst_mean = worst_start = 0.0
    increasing = True
    for _ in range(1000):
        n, E, kappa = int(rng.integers(1, 11)), logu(1e-2, 1e3), logu(1e-2, 10.0)
        a_sq = 0.0 if rng.random() < 0.2 else logu(1e-3, 1e2)
        trace = K.iterate_epsilon(E, n, kappa, a_sq)
        increasing &= all(b > a for a, b in zip(trace, trace[1:]))
        worst = max(worst, abs(trace[-1] - K.fixed_point_epsilon(E, n, kappa, a_sq)))
        h = logu(1e-2, 1e2)
        a_sq = logu(1e-3, 1e2)
        trace = K.iterate_epsilon_mean(E, h, kappa, a_sq)
        eps1 = 2 * a_sq / (E + math.sqrt(E * E + 4 * a_sq))
        worst_start = max(worst_start, abs(trace[0] - eps1) / eps1)
        increasing &= all(b > a for a, b in zip(trace, trace[1:]))
        worst_mean = max(worst_mean, abs(trace[-1] - K.fixed_point_epsilon_mean(E, h, kappa, a_sq)))
    ok = worst <= 1e-10 and worst_mean <= 1e-10 and worst_start <= 1e-14 and increasing
    return ok, (f"max |limit - closed form| {worst:.1e} / {worst_mean:.1e} (mean variant), "
                f"strictly increasing={increasing}")


def criterion_6():
    cases = suite_balls() + suite_caps()
    margin = min(c.margin for c in cases)
    order = min((c.outputs["F_minus_E"] for c in cases if "F_minus_E" in c.outputs), default=math.inf)
    ok = margin >= -1e-8 and order >= -1e-12 and all(c.passed for c in cases)
    return ok, f"{len(cases)} models, min(sigma1 - bound) = {margin:.4f}, min(ThmF - ThmE) = {order:.4f}"


def _sharpness_models():
    for n in (1, 2, 3):
        yield WarpedProfile.flat(n, 1.0)
        for R in (math.pi / 6, math.pi / 4, math.pi / 3):
            yield WarpedProfile.spherical(1.0, n, R)


def criterion_7():
    worst = 0.0
    ricci_slack = math.inf
    for p in _sharpness_models():
        g = curvature_data(p)
        w = min(RC.delta_window(g, "sectional"), RC.delta_window(g, "ricci"))
        grid = w * np.arange(1, 101) / 101
        exact = parallel_mean_curvature_exact(p, grid)
        upper = RC.parallel_H_upper(grid, g, "sectional")
        worst = max(worst, float(np.max(np.abs(upper - exact))))
        if np.any(upper - exact < -1e-9):
            worst = math.inf
        ricci_slack = min(ricci_slack, float(np.min(RC.parallel_H_upper(grid, g, "ricci") - exact)))
    ok = worst <= 1e-9 and ricci_slack >= -1e-9
    return ok, f"max |E - 1/delta - H_exact| = {worst:.1e}, min Ricci-variant slack = {ricci_slack:.2e}"


def criterion_8():
    worst = 0.0
    count = 0
    for kind, s, k in _riccati_grid():
        worst = max(worst, riccati_cross_check(kind, s, k)["max_error"])
        count += 1
    eq = max(float(np.max(np.abs(RC.psi_closed(np.linspace(0, 100, 1001), a, a) + a))) for a in (0.5, 1.0, 2.0))
    traj = RC.integrate_riccati(-1.0, -1.0, 10.0)
    eq = max(eq, float(np.max(np.abs(traj.y + 1.0))))
    return worst <= 1e-8 and eq <= 1e-10, f"{count} grid points, max error {worst:.1e}, equilibrium drift {eq:.1e}"


def criterion_9():
    cases = suite_reilly()
    worst = {kind: max((c.outputs.get("residual", c.outputs.get("max_rel_error")) for c in cases
                        if f"/{kind}/" in c.key), default=math.nan)
             for kind in ("interior", "collar", "hessian_fd")}
    ok = all(c.passed for c in cases)
    return ok, (f"{len(cases)} checks, max residual interior {worst['interior']:.1e}, collar {worst['collar']:.1e}, "
                f"Hessian FD rel err {worst['hessian_fd']:.1e}")


def criterion_10():
    p = WarpedProfile.hyperbolic(1.0, 2, 0.5)
    g = curvature_data(p)
    kappa, a_sq = g.kappa_lower, -g.ric_lower_global
    gap = spectral_gap(2, a_sq, kappa)
    est = steklov_spectrum(p, L_max=10, early_stop=False)
    inside = [m.ell for m in est.modes if m.ell >= 1 and gap[0] < m.sigma_ell < gap[1]]
    gate_off = [spectral_gap(2, 2.0, 1.0), spectral_gap(2, 2.0, math.sqrt(2.0)), spectral_gap(3, 3.0, 1.4)]
    ok = (abs(kappa - 2.163953) < 1e-6 and abs(gap[0] - 0.46212) < 1e-5 and abs(gap[1] - 1.08198) < 1e-5
          and not inside and len(est.modes) == 11 and all(x is None for x in gate_off))
    return ok, f"kappa = {kappa:.6f}, gap = ({gap[0]:.5f}, {gap[1]:.5f}), modes inside: {inside}"


def criterion_11():
    rng = np.random.default_rng(11)
    worst_bound = 0.0
    for _ in range(100):
        g = random_geometry(rng)
        c = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        for fn in (theorem_A_bound, theorem_C_bound, theorem_E_bound, theorem_F_bound, theorem_corB_bound):
            r0, r1 = fn(g), fn(g.scaled(c))
            if r0.applicable:
                worst_bound = max(worst_bound, abs(c * r1.bound - r0.bound) / r0.bound)
    worst_oracle = 0.0
    for p in (WarpedProfile.flat(2, 1.0), WarpedProfile.spherical(1.0, 2, math.pi / 4),
              WarpedProfile.hyperbolic(1.0, 3, 0.6)):
        for c in (0.1, 0.5, 2.0, 10.0):
            for ell in (1, 2):
                worst_oracle = max(worst_oracle, abs(c * mode_sigma(p.scaled(c), ell) - mode_sigma(p, ell)))
    return (worst_bound <= 1e-12 and worst_oracle <= 1e-9,
            f"bound rel err {worst_bound:.1e}, oracle err {worst_oracle:.1e}")


def criterion_12():
    with tempfile.TemporaryDirectory() as d:
        out = f"{d}/report.json"
        start = time.perf_counter()
        code = cli_main(["verify", "all", "--no-timing", "--output", out])
        elapsed = time.perf_counter() - start
        with open(out) as fh:
            first = json.load(fh)
    second = json.loads(dumps(run_suite("all").to_dict(include_timing=False)))
    ok = code == 0 and first == second and elapsed < 60.0
    return ok, f"exit {code}, {first['n_cases']} cases, {elapsed:.1f} s, identical rerun={first == second}"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 13)}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = CRITERIA[k]()
    RESULTS[k] = (ok, detail)
    assert ok, detail


def summary_lines():
    return [f"criterion {k:2d} {'PASS' if ok else 'FAIL'}: {detail}" for k, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for k, fn in CRITERIA.items():
        RESULTS[k] = fn()
        print(summary_lines()[-1])
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
