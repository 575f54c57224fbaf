"""Verification suites: bounds against the oracle, Riccati cross-checks, integral
inequalities and randomised properties.

Every suite returns a :class:`SuiteReport` whose cases are sorted by key, so
two runs with the same seed give identical reports (apart from wall time).
"""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels as K
from . import riccati as RC
from .errors import InvalidInputError
from .models import WarpedProfile, curvature_data, parallel_mean_curvature_exact
from .oracle import (collar_inequality_check, mode_sigma, reilly_inequality_check,
                     steklov_spectrum, validate_hessian_reduction)
from .theorems import (GeometricData, Theorem, all_bounds, best_bound, spectral_gap,
                       theorem_A_bound, theorem_C_bound, theorem_E_bound, theorem_F_bound)

MARGIN = -1e-8
SEED_ENV = "STEKLOV_SEED"
PROPERTY_SAMPLES = 1000


@dataclass
class CaseRecord:
    key: str
    inputs: dict
    outputs: dict
    passed: bool
    margin: float | None = None

    def to_dict(self) -> dict:
        return {"key": self.key, "inputs": self.inputs, "outputs": self.outputs,
                "margin": self.margin, "passed": self.passed}


@dataclass
class SuiteReport:
    name: str
    cases: list[CaseRecord] = field(default_factory=list)
    wall_time: float = 0.0
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[CaseRecord]:
        return [c for c in self.cases if not c.passed]

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {"suite": self.name, "seed": self.seed, "passed": self.passed,
             "n_cases": len(self.cases), "n_failed": len(self.failures),
             "cases": [c.to_dict() for c in self.cases]}
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


def _theorem_margins(sigma1: float, geom: GeometricData) -> tuple[dict, float]:
    bounds = {r.theorem.value: r.bound for r in all_bounds(geom) if r.applicable}
    margin = min(sigma1 - b for b in bounds.values()) if bounds else math.inf
    return bounds, margin


def suite_balls(seed: int = 0) -> list[CaseRecord]:
    cases = []
    for n in (1, 2, 3, 4):
        for R in (0.5, 1.0, 2.0):
            p = WarpedProfile.flat(n, R)
            est = steklov_spectrum(p)
            geom = curvature_data(p)
            bounds, margin = _theorem_margins(est.sigma1, geom)
            exact_err = max(abs(m.sigma_ell - m.ell / R) for m in est.modes if 1 <= m.ell <= 3)
            best = best_bound(geom)
            cases.append(CaseRecord(
                key=f"balls/flat/n={n}/R={R:g}",
                inputs={"n": n, "R": R},
                outputs={"sigma1": est.sigma1, "max_mode_error": exact_err, "bounds": bounds,
                         "best": best.theorem.value, "best_bound": best.bound},
                margin=margin,
                passed=exact_err <= 1e-8 and abs(est.sigma1 - 1 / R) <= 1e-8 and margin >= MARGIN,
            ))
    return cases


def suite_caps(seed: int = 0) -> list[CaseRecord]:
    cases = []
    for n in (1, 2, 3):
        for label, R in (("pi/6", math.pi / 6), ("pi/4", math.pi / 4), ("pi/3", math.pi / 3)):
            p = WarpedProfile.spherical(1.0, n, R)
            est = steklov_spectrum(p)
            geom = curvature_data(p)
            bounds, margin = _theorem_margins(est.sigma1, geom)
            ok = margin >= MARGIN
            out = {"sigma1": est.sigma1, "bounds": bounds}
            if "ThmE" in bounds and "ThmF" in bounds:
                out["F_minus_E"] = bounds["ThmF"] - bounds["ThmE"]
                ok = ok and out["F_minus_E"] >= -1e-12
            if n == 1:
                err = max(abs(m.sigma_ell - m.ell / math.sin(R)) for m in est.modes if m.ell >= 1)
                out["closed_form_error"] = err
                ok = ok and err <= 1e-8
            cases.append(CaseRecord(key=f"caps/c=1/n={n}/R={label}", inputs={"n": n, "R": R},
                                    outputs=out, margin=margin, passed=ok))
    return cases


def suite_hyperbolic_gap(seed: int = 0) -> list[CaseRecord]:
    cases = []
    for R in (0.3, 0.5, 0.8):
        p = WarpedProfile.hyperbolic(1.0, 2, R)
        geom = curvature_data(p)
        a_sq = -geom.ric_lower_global
        kappa = geom.kappa_lower
        gate = kappa > math.sqrt(2 * a_sq / geom.n)
        gap = spectral_gap(geom.n, a_sq, kappa)
        est = steklov_spectrum(p, L_max=10, early_stop=False)
        inside = [m.ell for m in est.modes if m.ell >= 1 and gap and gap[0] < m.sigma_ell < gap[1]]
        margin = None
        if gap:
            margin = min(min(abs(m.sigma_ell - gap[0]), abs(m.sigma_ell - gap[1]))
                         for m in est.modes if m.ell >= 1)
        cases.append(CaseRecord(
            key=f"hyperbolic_gap/c=1/n=2/R={R:g}",
            inputs={"n": 2, "R": R},
            outputs={"kappa": kappa, "a_sq": a_sq, "gate": gate, "gap": list(gap) if gap else None,
                     "sigmas": [m.sigma_ell for m in est.modes if m.ell >= 1], "modes_in_gap": inside},
            margin=margin,
            passed=(gap is not None) == gate and not inside,
        ))
    for n, a_sq, kappa in ((2, 2.0, 1.0), (2, 2.0, math.sqrt(2.0)), (3, 1.5, 0.9)):
        gap = spectral_gap(n, a_sq, kappa)
        cases.append(CaseRecord(key=f"hyperbolic_gap/gate/n={n}/a2={a_sq:g}/kappa={kappa:.6g}",
                                inputs={"n": n, "a_sq": a_sq, "kappa": kappa},
                                outputs={"gap": gap}, passed=gap is None))
    return cases


def _riccati_grid():
    vals = (0.0, 0.5, 1.0, 2.0)
    inits = (0.5, 1.0, 2.0)
    for s in vals:
        for k in inits:
            yield "phi", s, k
    for a in vals:
        for k in inits:
            if a <= k:
                yield "psi", a, k


def riccati_cross_check(kind: str, s: float, k: float, fraction: float = 0.95) -> dict:
    """Max deviation between closed form and adaptive integration on ``[0, fraction*T]``."""
    if kind == "phi":
        T = RC.phi_maximal_time(s, k)
        closed, c = (lambda t: RC.phi_closed(t, s, k)), s * s
    else:
        T = RC.psi_maximal_time(s, k)
        closed, c = (lambda t: RC.psi_closed(t, s, k)), -s * s
    t_end = fraction * T if math.isfinite(T) else 10.0
    traj = RC.integrate_riccati(c, -k, t_end)
    err = float(np.max(np.abs(traj.y - closed(traj.t))))
    sol = RC.RiccatiSolution(c, -k)
    residual = float(np.max(sol.residual(np.linspace(0.0, t_end, 200))))
    generic = float(np.max(np.abs(sol(traj.t) - closed(traj.t)) / np.maximum(1.0, np.abs(closed(traj.t)))))
    return {"maximal_time": T, "t_end": t_end, "max_error": err, "residual": residual,
            "generic_vs_closed": generic, "blew_up": traj.blew_up}


def suite_riccati(seed: int = 0) -> list[CaseRecord]:
    cases = []
    for kind, s, k in _riccati_grid():
        out = riccati_cross_check(kind, s, k)
        ok = out["max_error"] <= 1e-8 and out["residual"] <= 1e-9 and out["generic_vs_closed"] <= 1e-12
        if kind == "psi" and s == k:
            ok = ok and out["max_error"] <= 1e-10
        cases.append(CaseRecord(key=f"riccati/{kind}/s={s:g}/k={k:g}", inputs={"s": s, "k": k},
                                outputs=out, passed=ok))
    # continuity of the case split as the curvature parameter -> 0+
    for k in (0.5, 1.0, 2.0):
        ts = np.linspace(0.0, 0.9 / k, 50)
        d_phi = float(np.max(np.abs(RC.phi_closed(ts, 1e-6, k) - RC.phi_closed(ts, 0.0, k))))
        d_psi = float(np.max(np.abs(RC.psi_closed(ts, 1e-6, k) - RC.psi_closed(ts, 0.0, k))))
        cases.append(CaseRecord(key=f"riccati/continuity/k={k:g}", inputs={"k": k, "eps": 1e-6},
                                outputs={"phi_diff": d_phi, "psi_diff": d_psi},
                                passed=d_phi <= 1e-8 and d_psi <= 1e-8))
    for label, p in _sharpness_models():
        cases.append(sharpness_case(label, p))
    return cases


def _sharpness_models():
    for n in (1, 2, 3):
        yield f"flat/n={n}/R=1", WarpedProfile.flat(n, 1.0)
        for label, R in (("pi/6", math.pi / 6), ("pi/4", math.pi / 4), ("pi/3", math.pi / 3)):
            yield f"cap/n={n}/R={label}", WarpedProfile.spherical(1.0, n, R)


def sharpness_case(label: str, p: WarpedProfile, points: int = 100) -> CaseRecord:
    """Exact parallel mean curvature vs the sectional and Ricci comparison bounds on a delta grid."""
    geom = curvature_data(p)
    w = RC.delta_window(geom, "sectional")
    grid = w * np.arange(1, points + 1) / (points + 1)
    exact = parallel_mean_curvature_exact(p, grid)
    upper = RC.parallel_H_upper(grid, geom, "sectional")
    diff = upper - exact
    rel = float(np.max(np.abs(diff) / np.maximum(1.0, np.abs(exact))))
    ok = rel <= 1e-9 and bool(np.all(diff >= -1e-9 * np.maximum(1.0, np.abs(exact))))
    wr = RC.delta_window(geom, "ricci")
    grid_r = wr * np.arange(1, points + 1) / (points + 1)
    ricci_gap = RC.parallel_H_upper(grid_r, geom, "ricci") - parallel_mean_curvature_exact(p, grid_r)
    min_ricci = float(np.min(ricci_gap / np.maximum(1.0, np.abs(parallel_mean_curvature_exact(p, grid_r)))))
    ok = ok and min_ricci >= -1e-9
    return CaseRecord(key=f"riccati/sharpness/{label}", inputs={"model": label, "points": points},
                      outputs={"sectional_max_rel_diff": rel, "ricci_min_rel_slack": min_ricci},
                      margin=min(float(np.min(diff)), min_ricci), passed=ok)


def suite_reilly(seed: int = 0) -> list[CaseRecord]:
    cases = []
    for label, p in (("flat/n=1", WarpedProfile.flat(1, 1.0)), ("flat/n=2", WarpedProfile.flat(2, 1.0)),
                     ("flat/n=3", WarpedProfile.flat(3, 1.0)),
                     ("cap/n=1", WarpedProfile.spherical(1.0, 1, math.pi / 4)),
                     ("cap/n=2", WarpedProfile.spherical(1.0, 2, math.pi / 4)),
                     ("cap/n=3", WarpedProfile.spherical(1.0, 3, math.pi / 3)),
                     ("hyperbolic/n=2", WarpedProfile.hyperbolic(1.0, 2, 0.5))):
        v = validate_hessian_reduction(p, n_points=20, seed=seed)
        cases.append(CaseRecord(key=f"reilly/hessian_fd/{label}", inputs={"points": 20},
                                outputs=v, passed=v["max_rel_error"] <= 1e-6))
        if label.startswith("hyperbolic"):
            continue
        geom = curvature_data(p)
        for tag, consts in (("curvature", (geom.a_sq, geom.mean_lower, geom.kappa_lower)),
                            ("escobar", (0.0, 0.0, 0.0))):
            chk = reilly_inequality_check(p, *consts)
            cases.append(CaseRecord(key=f"reilly/interior/{label}/{tag}",
                                    inputs={"a1": consts[0], "a2": consts[1], "a3": consts[2]},
                                    outputs=chk.to_dict(), margin=-chk.residual, passed=chk.holds))
        w = K.delta_sup(geom.collar_radius, geom.beta, geom.kappa_upper)
        for frac in (0.25, 0.5, 0.9):
            for eps in (0.1, 0.5, 1.0, 5.0):
                chk = collar_inequality_check(p, eps, frac * w)
                cases.append(CaseRecord(key=f"reilly/collar/{label}/delta={frac:g}w/eps={eps:g}",
                                        inputs={"epsilon": eps, "delta": frac * w},
                                        outputs=chk.to_dict(), margin=-chk.residual, passed=chk.holds))
    return cases


def random_geometry(rng: np.random.Generator) -> GeometricData:
    """Admissible data for theorems A, C, E and F (positive curvature near the boundary)."""
    n = int(rng.integers(1, 7))
    kappa = float(rng.uniform(0.1, 2.0))
    K_up = kappa * float(rng.uniform(1.0, 2.0))
    a_sq = float(rng.uniform(0.05, 3.0))
    beta = float(rng.uniform(0.0, 2.0))
    alpha = kappa * float(rng.uniform(0.0, 1.0))
    r = float(rng.uniform(0.1, 3.0))
    return GeometricData(
        n=n, ric_lower_global=0.0, ric_lower_collar=a_sq,
        ric_upper_collar=a_sq + float(rng.uniform(0.0, 3.0)),
        sec_upper_collar=beta * beta, sec_lower_collar=-alpha * alpha,
        kappa_lower=kappa, kappa_upper=K_up, mean_lower=n * kappa, mean_upper=n * K_up,
        rolling_radius=r * float(rng.uniform(1.0, 2.0)), collar_radius=r,
    )


def _loguniform(rng, lo, hi):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _strictly_increasing(xs):
    return all(b > a for a, b in zip(xs, xs[1:]))


def fixed_point_property(rng: np.random.Generator, samples: int = PROPERTY_SAMPLES) -> dict:
    worst, worst_mean, monotone = 0.0, 0.0, True
    for _ in range(samples):
        n = int(rng.integers(1, 11))
        E = _loguniform(rng, 1e-2, 1e3)
        kappa = _loguniform(rng, 1e-2, 10.0)
        a_sq = 0.0 if rng.random() < 0.2 else _loguniform(rng, 1e-3, 1e2)
        trace = K.iterate_epsilon(E, n, kappa, a_sq)
        worst = max(worst, abs(trace[-1] - K.fixed_point_epsilon(E, n, kappa, a_sq)))
        monotone &= _strictly_increasing(trace)
        h = _loguniform(rng, 1e-2, 1e2)
        eps1 = K.positive_root(E, a_sq)
        if a_sq > 0 and rng.random() < 0.25:
            kappa = -eps1 * float(rng.uniform(0.0, 0.9))
        trace = K.iterate_epsilon_mean(E, h, kappa, a_sq)
        worst_mean = max(worst_mean, abs(trace[-1] - K.fixed_point_epsilon_mean(E, h, kappa, a_sq)))
        monotone &= _strictly_increasing(trace)
    return {"samples": samples, "max_abs_error": worst, "max_abs_error_mean_variant": worst_mean,
            "strictly_increasing": monotone}


def scaling_property(rng: np.random.Generator, samples: int = 50) -> dict:
    worst_bound, worst_delta = 0.0, 0.0
    for _ in range(samples):
        geom = random_geometry(rng)
        c = _loguniform(rng, 0.25, 4.0)
        scaled = geom.scaled(c)
        for fn in (theorem_A_bound, theorem_C_bound, theorem_E_bound, theorem_F_bound):
            r0, r1 = fn(geom), fn(scaled)
            if not r0.applicable:
                continue
            worst_bound = max(worst_bound, abs(r1.bound * c - r0.bound) / abs(r0.bound))
            worst_delta = max(worst_delta, abs(r1.delta_star / c - r0.delta_star) / r0.delta_star)
    return {"samples": samples, "max_rel_bound_error": worst_bound, "max_rel_delta_error": worst_delta}


def oracle_scaling_property(scales=(0.5, 2.0, 3.7)) -> dict:
    worst = 0.0
    for p in (WarpedProfile.spherical(1.0, 2, math.pi / 4), WarpedProfile.hyperbolic(1.0, 3, 0.6),
              WarpedProfile.flat(2, 1.0)):
        base = [mode_sigma(p, ell) for ell in (1, 2, 3)]
        for c in scales:
            q = p.scaled(c)
            for ell, s in zip((1, 2, 3), base):
                worst = max(worst, abs(mode_sigma(q, ell) * c - s))
    return {"scales": list(scales), "max_abs_error": worst}


def monotonicity_property(rng: np.random.Generator, samples: int = 40) -> dict:
    violations = []
    steps = (0.0, 0.1, 0.25, 0.5, 1.0)
    for i in range(samples):
        g = random_geometry(rng)

        def series(make):
            out = []
            for t in steps:
                r = theorem_A_bound(make(t))
                out.append(r.bound)
            return out

        checks = {
            "a_sq": (series(lambda t: g.replace(ric_lower_collar=g.a_sq * (1 + t),
                                                ric_upper_collar=g.ric_upper_collar + g.a_sq * t)), +1),
            "kappa": (series(lambda t: g.replace(kappa_lower=g.kappa_lower + t * (g.kappa_upper - g.kappa_lower),
                                                 mean_lower=g.n * (g.kappa_lower + t * (g.kappa_upper - g.kappa_lower)))), +1),
            "K": (series(lambda t: g.replace(kappa_upper=g.kappa_upper * (1 + t),
                                             mean_upper=g.n * g.kappa_upper * (1 + t))), -1),
            "beta": (series(lambda t: g.replace(sec_upper_collar=(g.beta + t) ** 2)), -1),
        }
        for name, (vals, sign) in checks.items():
            d = np.diff(vals) * sign
            if np.any(d < -1e-12 * max(abs(v) for v in vals)):
                violations.append(f"sample {i}: {name}")
    return {"samples": samples, "violations": violations}


def flat_limit_property() -> dict:
    def flat(n):
        return GeometricData(n=n, ric_lower_global=0.0, ric_lower_collar=0.0, ric_upper_collar=0.0,
                             sec_upper_collar=0.0, sec_lower_collar=0.0, kappa_lower=1.0, kappa_upper=1.0,
                             mean_lower=float(n), mean_upper=float(n), rolling_radius=1.0, collar_radius=1.0)

    ns = list(range(1, 201)) + [1000, 10**4]
    vals = [theorem_A_bound(flat(n)).bound for n in ns]
    return {"bound_n1": vals[0], "bound_n2": vals[1], "bound_n100": vals[99], "bound_n10000": vals[-1],
            "increasing": _strictly_increasing(vals)}


def recovery_property(rng: np.random.Generator, samples: int = 50) -> dict:
    worst = 0.0
    for _ in range(samples):
        g = random_geometry(rng)
        w = K.delta_sup(g.collar_radius, g.beta, g.kappa_upper)
        d = w * float(rng.uniform(0.05, 0.95))
        a, f = theorem_A_bound(g, delta=d), theorem_F_bound(g, delta=d)
        worst = max(worst, abs(a.bound - f.bound) / a.bound)
    return {"samples": samples, "max_rel_diff": worst}


def suite_properties(seed: int = 0) -> list[CaseRecord]:
    rng = np.random.default_rng(seed)
    cases = []
    fp = fixed_point_property(rng)
    cases.append(CaseRecord("properties/fixed_point", {"seed": seed}, fp,
                            passed=fp["max_abs_error"] <= 1e-10 and fp["max_abs_error_mean_variant"] <= 1e-10
                            and fp["strictly_increasing"]))
    dom_min = math.inf
    for _ in range(200):
        g = random_geometry(rng)
        r = theorem_A_bound(g)
        dom_min = min(dom_min, r.bound - 0.5 * g.kappa_lower)
    cases.append(CaseRecord("properties/baseline_domination", {"samples": 200},
                            {"min_excess_over_half_kappa": dom_min}, margin=dom_min, passed=dom_min > 0))
    lim = flat_limit_property()
    cases.append(CaseRecord("properties/flat_limit", {}, lim,
                            passed=lim["increasing"] and lim["bound_n10000"] > 0.98))
    mono = monotonicity_property(rng)
    cases.append(CaseRecord("properties/monotonicity", {"samples": mono["samples"]}, mono,
                            passed=not mono["violations"]))
    sc = scaling_property(rng)
    cases.append(CaseRecord("properties/scaling_bounds", {"samples": sc["samples"]}, sc,
                            passed=sc["max_rel_bound_error"] <= 1e-12 and sc["max_rel_delta_error"] <= 1e-6))
    osc = oracle_scaling_property()
    cases.append(CaseRecord("properties/scaling_oracle", {}, osc, passed=osc["max_abs_error"] <= 1e-9))
    rec = recovery_property(rng)
    cases.append(CaseRecord("properties/recovery_F_equals_A", {"samples": rec["samples"]}, rec,
                            passed=rec["max_rel_diff"] <= 1e-12))
    return cases


SUITES: dict[str, Callable[[int], list[CaseRecord]]] = {
    "balls": suite_balls,
    "caps": suite_caps,
    "hyperbolic_gap": suite_hyperbolic_gap,
    "riccati": suite_riccati,
    "reilly": suite_reilly,
    "properties": suite_properties,
}


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidInputError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def run_suite(name: str, seed: int | None = None) -> SuiteReport:
    """Run one named suite, or ``all`` of them."""
    if name != "all" and name not in SUITES:
        raise InvalidInputError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    seed = default_seed() if seed is None else seed
    start = time.perf_counter()
    names = list(SUITES) if name == "all" else [name]
    cases = []
    for nm in names:
        cases.extend(SUITES[nm](seed))
    cases.sort(key=lambda c: c.key)
    return SuiteReport(name=name, cases=cases, wall_time=time.perf_counter() - start, seed=seed)
