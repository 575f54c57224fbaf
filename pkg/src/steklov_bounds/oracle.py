"""Numerical Steklov eigenvalues of warped-product balls.

Separating ``u = phi(r) Y_l`` with ``Delta_{S^n} Y_l = -l(l+n-1) Y_l`` reduces
harmonicity to ``phi'' + n (f'/f) phi' - lambda_l f^{-2} phi = 0`` and the
Steklov condition to ``sigma(l) = phi'(R)/phi(R)``.  We shoot the scaled log
derivative ``v = r phi'/phi`` in ``s = log r``::

    dv/ds = v + lambda r^2/f^2 - n (r f'/f) v - v^2,     v -> l as r -> 0,

whose regular solution is an attracting equilibrium at the pole, so the
start value ``v(r0) = l`` is accurate to ``O(r0^2)`` and perturbations decay.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp

from . import kernels as K
from .errors import InvalidInputError, OracleError
from .models import WarpedProfile, curvature_data

#: Start of the shooting interval, relative to R.
R0_FRACTION = 1e-6
DEFAULT_TOL = 1e-9
DEFAULT_L_MAX = 10
#: Stop scanning after sigma(l) increased this many times in a row.
MONOTONE_STOP = 3
_BLOWUP = 1e12
QUAD_RTOL = 1e-9


def harmonic_multiplicity(ell: int, n: int) -> int:
    """Dimension of degree-``ell`` spherical harmonics on the n-sphere."""
    if ell == 0:
        return 1
    return math.comb(ell + n, n) - math.comb(ell + n - 2, n)


def _shoot(profile: WarpedProfile, ell: int, r0: float, rtol: float, dense: bool = False):
    n = profile.n
    lam = ell * (ell + n - 1)

    def rhs(s, y):
        r = math.exp(s)
        f = float(profile.f(r))
        q = r / f
        v = y[0]
        return [v + lam * q * q - n * q * float(profile.df(r)) * v - v * v, v - ell]

    def blowup(s, y):
        return _BLOWUP - abs(y[0])

    blowup.terminal = True
    sol = solve_ivp(rhs, (math.log(r0), math.log(profile.R)), [float(ell), 0.0],
                    method="DOP853", rtol=rtol, atol=rtol * 1e-2, events=blowup,
                    dense_output=dense)
    if sol.status != 0:
        raise OracleError(f"shooting failed for l={ell} on {profile.kind} profile: "
                          f"{'log-derivative blow-up' if sol.status == 1 else sol.message}")
    return sol


def mode_sigma_with_error(profile: WarpedProfile, ell: int, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """``(sigma(l), error_estimate)``; the estimate compares against a run with halved r0 and tolerance."""
    if int(ell) != ell or ell < 1:
        raise InvalidInputError(f"ell must be an integer >= 1, got {ell}")
    r0 = R0_FRACTION * profile.R
    rtol = tol * 1e-3
    coarse = _shoot(profile, ell, r0, rtol).y[0, -1] / profile.R
    fine = _shoot(profile, ell, 0.5 * r0, 0.5 * rtol).y[0, -1] / profile.R
    err = abs(fine - coarse)
    if err > tol * max(1.0, abs(fine)):
        raise OracleError(f"sigma({ell}) not converged: refinement changed it by {err:.3e}")
    return float(fine), float(err)


def mode_sigma(profile: WarpedProfile, ell: int, tol: float = DEFAULT_TOL) -> float:
    """Steklov eigenvalue of the degree-``ell`` mode, ``phi'(R)/phi(R)``."""
    return mode_sigma_with_error(profile, ell, tol)[0]


@dataclass
class Mode:
    ell: int
    lambda_ell: float
    sigma_ell: float
    multiplicity: int


@dataclass
class SteklovEstimate:
    modes: list[Mode]
    sigma1: float
    error_estimate: float
    monotone: bool = True
    complete: bool = True
    caveats: list[str] = field(default_factory=list)

    @property
    def sigma1_multiplicity(self) -> int:
        return sum(m.multiplicity for m in self.modes if m.ell >= 1 and m.sigma_ell == self.sigma1)

    def to_dict(self) -> dict:
        return {
            "sigma1": self.sigma1,
            "sigma1_multiplicity": self.sigma1_multiplicity,
            "error_estimate": self.error_estimate,
            "monotone": self.monotone,
            "complete": self.complete,
            "caveats": list(self.caveats),
            "modes": [vars(m) for m in self.modes],
        }


def steklov_spectrum(profile: WarpedProfile, L_max: int = DEFAULT_L_MAX, tol: float = DEFAULT_TOL,
                     early_stop: bool = True) -> SteklovEstimate:
    """Scan modes ``l = 1..L_max`` and take the smallest as ``sigma_1``."""
    if int(L_max) != L_max or L_max < 1:
        raise InvalidInputError(f"L_max must be an integer >= 1, got {L_max}")
    n = profile.n
    modes = [Mode(0, 0.0, 0.0, 1)]
    err = 0.0
    rises = 0
    caveats = []
    for ell in range(1, L_max + 1):
        sig, e = mode_sigma_with_error(profile, ell, tol)
        err = max(err, e)
        if ell >= 2:
            rises = rises + 1 if sig > modes[-1].sigma_ell else 0
        modes.append(Mode(ell, float(ell * (ell + n - 1)), sig, harmonic_multiplicity(ell, n)))
        if early_stop and rises >= MONOTONE_STOP and ell < L_max:
            caveats.append(f"scan stopped at l={ell} after {MONOTONE_STOP} consecutive increases")
            break
    sigmas = [m.sigma_ell for m in modes[1:]]
    monotone = all(b >= a for a, b in zip(sigmas, sigmas[1:]))
    if not monotone:
        caveats.append("sigma(l) not monotone over the scanned range")
    complete = L_max > 1
    if not complete:
        caveats.append("only l=1 scanned; higher modes not checked")
    return SteklovEstimate(modes=modes, sigma1=min(sigmas), error_estimate=err,
                           monotone=monotone, complete=complete, caveats=caveats)


class RadialMode:
    """The radial factor ``phi`` of a mode, normalised to ``phi(R) = 1``.

    Below the shooting start ``r0`` the pole asymptotics ``phi ~ r^l`` are used.
    """

    def __init__(self, profile: WarpedProfile, ell: int = 1, tol: float = DEFAULT_TOL):
        self.profile = profile
        self.ell = ell
        self.lam = ell * (ell + profile.n - 1)
        self.r0 = R0_FRACTION * profile.R
        self._sol = _shoot(profile, ell, self.r0, tol * 1e-3, dense=True)
        self.sigma = float(self._sol.y[0, -1]) / profile.R
        self._log_norm = self._log_phi(profile.R)

    def _log_phi(self, r):
        s = math.log(max(r, self.r0))
        L = float(self._sol.sol(s)[1])
        return self.ell * math.log(r) + (L if r >= self.r0 else float(self._sol.sol(math.log(self.r0))[1]))

    def __call__(self, r: float) -> tuple[float, float, float]:
        """``(phi, phi', phi'')`` at ``r``."""
        p = self.profile
        phi = math.exp(self._log_phi(r) - self._log_norm)
        if r >= self.r0:
            w = float(self._sol.sol(math.log(r))[0]) / r
        else:
            w = self.ell / r
        f, df = float(p.f(r)), float(p.df(r))
        # phi'' = (lambda/f^2 - n (f'/f) w) phi from the radial equation
        return phi, w * phi, (self.lam / f**2 - p.n * df / f * w) * phi


def sphere_moments(ell: int, n: int) -> dict[str, float]:
    """Integrals over S^n of ``Y^2``, ``|grad Y|^2``, ``|Hess Y|^2`` for an L2-normalised degree-``ell`` harmonic.

    The Hessian moment follows from Bochner's formula with ``Ric = (n-1) g``.
    """
    lam = ell * (ell + n - 1)
    return {"Y2": 1.0, "grad2": float(lam), "hess2": float(lam * (lam - n + 1)), "Y_lapY": -float(lam)}


def hessian_density(profile: WarpedProfile, phi: float, dphi: float, d2phi: float, r: float, ell: int = 1) -> float:
    """Sphere-integrated ``|Hess u|^2`` for ``u = phi(r) Y``, per unit ``f^n dr``.

    With ``Hess u(d_r, d_r) = phi'' Y``, ``Hess u(d_r, d_i) = (phi' - phi f'/f) Y_i`` and
    ``Hess u(d_i, d_j) = phi Hess^S Y_ij + f f' phi' Y g^S_ij``.
    """
    n = profile.n
    m = sphere_moments(ell, n)
    f, df = float(profile.f(r)), float(profile.df(r))
    mixed = dphi - phi * df / f
    return (d2phi**2 * m["Y2"]
            + 2.0 * mixed**2 * m["grad2"] / f**2
            + (phi**2 * m["hess2"] + 2.0 * phi * f * df * dphi * m["Y_lapY"]
               + n * (f * df * dphi) ** 2 * m["Y2"]) / f**4)


def gradient_density(profile: WarpedProfile, phi: float, dphi: float, r: float, ell: int = 1) -> float:
    m = sphere_moments(ell, profile.n)
    f = float(profile.f(r))
    return dphi**2 * m["Y2"] + phi**2 * m["grad2"] / f**2


@dataclass
class ModeIntegrals:
    hess2: float
    grad2: float
    boundary_tangential: float
    sigma: float


def mode_integrals(profile: WarpedProfile, width: float, ell: int = 1, mode: RadialMode | None = None) -> ModeIntegrals:
    """Integrals of ``|Hess u|^2`` and ``|grad u|^2`` over ``{R - width <= r <= R}`` and of
    ``|grad^T u|^2`` over the boundary, for the Steklov mode ``u = phi Y_l``."""
    if not 0 < width <= profile.R:
        raise InvalidInputError(f"width must lie in (0, R], got {width}")
    mode = mode or RadialMode(profile, ell)
    n, R = profile.n, profile.R
    lo = max(R - width, mode.r0)

    def vol(r):
        return float(profile.f(r)) ** n

    def hess(r):
        phi, d1, d2 = mode(r)
        return hessian_density(profile, phi, d1, d2, r, ell) * vol(r)

    def grad(r):
        phi, d1, _ = mode(r)
        return gradient_density(profile, phi, d1, r, ell) * vol(r)

    pts = [lo + (R - lo) * k / 8 for k in range(1, 8)]
    g_int, _ = quad(grad, lo, R, epsabs=0.0, epsrel=QUAD_RTOL, limit=400, points=pts)
    fR = float(profile.f(R))
    boundary = mode.lam * fR ** (n - 2)  # phi(R) = 1
    # the Hessian term can vanish identically (linear modes); measure it against the others
    floor = 1e-3 * QUAD_RTOL * (g_int + boundary)
    h_int, _ = quad(hess, lo, R, epsabs=floor, epsrel=QUAD_RTOL, limit=400, points=pts)
    return ModeIntegrals(hess2=h_int, grad2=g_int, boundary_tangential=boundary, sigma=mode.sigma)


@dataclass
class InequalityCheck:
    terms: dict[str, float]
    value: float
    scale: float
    residual: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {"terms": dict(self.terms), "value": self.value, "scale": self.scale,
                "residual": self.residual, "tolerance": self.tolerance, "holds": self.holds}


def _check(terms: dict[str, float], tolerance: float) -> InequalityCheck:
    value = sum(terms.values())
    scale = max(abs(t) for t in terms.values()) or 1.0
    return InequalityCheck(terms=terms, value=value, scale=scale, residual=value / scale, tolerance=tolerance)


def reilly_inequality_check(profile: WarpedProfile, a1: float, a2: float, a3: float,
                            collar_r: float | None = None, ell: int = 1,
                            tolerance: float = 1e-6) -> InequalityCheck:
    """Evaluate ``Hess + (a1 + a2 sigma) Grad + (a3 - 2 sigma) Bdry`` for the degree-``ell`` mode.

    The integral inequality asserts this is ``<= 0``; ``residual`` is the
    value divided by its largest term.
    """
    collar_r = profile.R if collar_r is None else collar_r
    ints = mode_integrals(profile, collar_r, ell)
    s = ints.sigma
    return _check({
        "hess": ints.hess2,
        "grad": (a1 + a2 * s) * ints.grad2,
        "boundary": (a3 - 2.0 * s) * ints.boundary_tangential,
    }, tolerance)


def collar_inequality_check(profile: WarpedProfile, epsilon: float, delta: float, ell: int = 1,
                            tolerance: float = 1e-6) -> InequalityCheck:
    """Evaluate ``eps Bdry - Hess_delta - eps (eps + E(delta)) Grad_delta`` (asserted ``<= 0``)."""
    if not epsilon > 0:
        raise InvalidInputError("epsilon must be positive")
    geom = curvature_data(profile)
    window = K.delta_sup(geom.collar_radius, geom.beta, geom.kappa_upper)
    if not 0 < delta < window:
        raise InvalidInputError(f"delta must lie in (0, {window})")
    E = K.kernel_E(delta, geom.n, geom.beta, geom.kappa_upper)
    ints = mode_integrals(profile, delta, ell)
    return _check({
        "boundary": epsilon * ints.boundary_tangential,
        "hess": -ints.hess2,
        "grad": -epsilon * (epsilon + E) * ints.grad2,
    }, tolerance)


# --- independent check of the Hessian reduction -----------------------------------------


def _hyperspherical_metric_diag(theta: np.ndarray) -> np.ndarray:
    # g^S = d th1^2 + sin^2 th1 d th2^2 + ... ; coefficient k is prod_{j<k} sin^2 th_j
    out = np.ones_like(theta)
    for k in range(1, theta.size):
        out[k] = out[k - 1] * math.sin(theta[k - 1]) ** 2
    return out


def fd_hessian_norm2(profile: WarpedProfile, phi, x: np.ndarray, h_u: float = 1e-4, h_g: float = 1e-5) -> float:
    """``|Hess u|^2`` at chart point ``x = (r, th_1..th_n)`` for ``u = phi(r) cos(th_1)``.

    Everything is finite-differenced in hyperspherical coordinates: second
    derivatives of ``u`` and the Christoffel symbols from the metric.
    """
    dim = x.size

    def metric(p):
        g = np.empty(dim)
        g[0] = 1.0
        g[1:] = float(profile.f(p[0])) ** 2 * _hyperspherical_metric_diag(p[1:])
        return g

    def u(p):
        return phi(p[0]) * math.cos(p[1])

    eye = np.eye(dim)
    g = metric(x)
    dg = np.array([(metric(x + h_g * eye[c]) - metric(x - h_g * eye[c])) / (2 * h_g) for c in range(dim)])
    # dg[c, a] = d_c g_aa (metric is diagonal)
    gamma = np.zeros((dim, dim, dim))  # gamma[c, a, b] = Gamma^c_ab
    for c in range(dim):
        for a in range(dim):
            for b in range(dim):
                val = 0.0
                if b == c:
                    val += dg[a, c]
                if a == c:
                    val += dg[b, c]
                if a == b:
                    val -= dg[c, a]
                gamma[c, a, b] = 0.5 * val / g[c]
    du = np.array([(u(x + h_u * eye[a]) - u(x - h_u * eye[a])) / (2 * h_u) for a in range(dim)])
    d2u = np.empty((dim, dim))
    u0 = u(x)
    for a in range(dim):
        d2u[a, a] = (u(x + h_u * eye[a]) - 2 * u0 + u(x - h_u * eye[a])) / h_u**2
        for b in range(a + 1, dim):
            ea, eb = h_u * eye[a], h_u * eye[b]
            d2u[a, b] = d2u[b, a] = (u(x + ea + eb) - u(x + ea - eb) - u(x - ea + eb) + u(x - ea - eb)) / (4 * h_u**2)
    hess = d2u - np.einsum("cab,c->ab", gamma, du)
    ginv = 1.0 / g
    return float(np.einsum("a,b,ab,ab->", ginv, ginv, hess, hess))


def pointwise_hessian_norm2(profile: WarpedProfile, phi: float, dphi: float, d2phi: float,
                            r: float, Y: float) -> float:
    """Reduced formula for ``|Hess u|^2`` with ``u = phi(r) Y``, ``Y`` a unit-norm linear function on S^n.

    Uses ``Hess^S Y = -Y g^S`` and ``|grad^S Y|^2 = 1 - Y^2``.
    """
    n = profile.n
    f, df = float(profile.f(r)), float(profile.df(r))
    return (d2phi**2 * Y**2 + 2.0 * (dphi - phi * df / f) ** 2 * (1.0 - Y**2) / f**2
            + n * Y**2 * (f * df * dphi - phi) ** 2 / f**4)


def validate_hessian_reduction(profile: WarpedProfile, n_points: int = 20, seed: int = 0,
                               tolerance: float = 1e-6) -> dict:
    """Compare the reduced Hessian formula to finite differences at random chart points.

    A fixed cubic test profile ``phi(r) = r + 0.4 r^2/R - 0.2 r^3/R^2`` is used
    so the Hessian is non-trivial even where the Steklov mode is linear.
    """
    rng = np.random.default_rng(seed)
    R, n = profile.R, profile.n

    def phi(r):
        return r + 0.4 * r**2 / R - 0.2 * r**3 / R**2

    def dphi(r):
        return 1.0 + 0.8 * r / R - 0.6 * r**2 / R**2

    def d2phi(r):
        return 0.8 / R - 1.2 * r / R**2

    worst = 0.0
    for _ in range(n_points):
        r = rng.uniform(0.2 * R, 0.95 * R)
        if n == 1:
            angles = np.array([rng.uniform(0.3, 2 * math.pi - 0.3)])
        else:
            angles = np.concatenate([rng.uniform(0.3, math.pi - 0.3, size=n - 1),
                                     [rng.uniform(0.3, 2 * math.pi - 0.3)]])
        x = np.concatenate([[r], angles])
        fd = fd_hessian_norm2(profile, phi, x)
        exact = pointwise_hessian_norm2(profile, phi(r), dphi(r), d2phi(r), r, math.cos(angles[0]))
        scale = max(abs(exact), (dphi(r) ** 2 + phi(r) ** 2 / float(profile.f(r)) ** 2) / R**2)
        worst = max(worst, abs(fd - exact) / scale)
    if worst > tolerance:
        raise OracleError(f"Hessian reduction disagrees with finite differences (rel {worst:.2e})")
    return {"points": n_points, "max_rel_error": worst, "tolerance": tolerance}
