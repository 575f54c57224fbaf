"""Scalar comparison Riccati equations ``y' + y**2 + c = 0``.

Closed forms for the two comparison solutions used in the bounds, a generic
closed-form solution object, an adaptive-integration cross-check, and the
parallel-hypersurface mean-curvature upper bounds built on them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import kernels as K
from .errors import DomainError, InapplicableError, InvalidInputError

#: |y| beyond this counts as blow-up during numerical integration.
BLOWUP_THRESHOLD = 1e12
#: Step of the finite-difference residual check.
RESIDUAL_STEP = 1e-5


@dataclass(frozen=True)
class RiccatiSolution:
    """Solution of ``y' + y**2 + curvature_const = 0`` with ``y(0) = initial_value``."""

    curvature_const: float
    initial_value: float

    @property
    def maximal_time(self) -> float:
        c, y0 = self.curvature_const, self.initial_value
        if abs(c) <= (K.FLAT_RATIO * abs(y0)) ** 2:
            c = 0.0
        if c > 0:
            s = math.sqrt(c)
            # y = s tan(theta0 - s t), theta0 = arctan(y0/s)
            return (math.atan(y0 / s) + math.pi / 2) / s
        if c == 0:
            return -1.0 / y0 if y0 < 0 else math.inf
        a = math.sqrt(-c)
        if y0 >= -a:
            return math.inf
        return math.atanh(-a / y0) / a

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t >= self.maximal_time):
            raise DomainError(f"t outside [0, {self.maximal_time})")
        y = self._eval(t)
        return float(y) if y.ndim == 0 else y

    def _eval(self, t):
        # the formulas extend smoothly to small negative t
        c, y0 = self.curvature_const, self.initial_value
        if abs(c) <= (K.FLAT_RATIO * abs(y0)) ** 2:
            c = 0.0
        if c > 0:
            s = math.sqrt(c)
            tn = np.tan(s * t)
            y = s * (y0 - s * tn) / (s + y0 * tn)
        elif c == 0:
            y = y0 / (1.0 + y0 * t)
        else:
            a = math.sqrt(-c)
            if abs(y0) == a:
                return np.full_like(t, y0)  # equilibrium
            th = np.tanh(a * t)
            y = a * (y0 + a * th) / (a + y0 * th)
        return np.asarray(y, dtype=float)

    def residual(self, t, h: float = RESIDUAL_STEP):
        """Scaled residual ``|y' + y^2 + c| / max(1, y^2, |c|)`` with a fourth-order difference for ``y'``."""
        y = np.asarray(self(t))
        f = self._eval
        dy = (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)
        return np.abs(dy + y * y + self.curvature_const) / np.maximum(
            1.0, np.maximum(y * y, abs(self.curvature_const)))


def phi_maximal_time(beta: float, K_upper: float) -> float:
    return K.blowup_time(beta, K_upper)


def phi_closed(t, beta: float, K_upper: float):
    """Solution of ``phi' + phi^2 + beta^2 = 0``, ``phi(0) = -K``."""
    if beta < 0 or not K_upper > 0:
        raise InvalidInputError("need beta >= 0 and K > 0")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t >= phi_maximal_time(beta, K_upper)):
        raise DomainError(f"t outside [0, {phi_maximal_time(beta, K_upper)})")
    if beta > K.FLAT_RATIO * K_upper:
        tn = np.tan(beta * t)
        y = -(beta**2 * tn + beta * K_upper) / (beta - K_upper * tn)
    else:
        y = -K_upper / (1.0 - K_upper * t)
    return float(y) if y.ndim == 0 else y


def psi_maximal_time(alpha: float, kappa: float) -> float:
    if not kappa > 0 or alpha < 0:
        raise InvalidInputError("need kappa > 0 and alpha >= 0")
    if alpha > kappa:
        raise InapplicableError("requires 0≤α≤κ")
    if alpha <= K.FLAT_RATIO * kappa:
        return 1.0 / kappa
    if alpha < kappa:
        return math.atanh(alpha / kappa) / alpha
    return math.inf


def psi_closed(t, alpha: float, kappa: float):
    """Solution of ``psi' + psi^2 - alpha^2 = 0``, ``psi(0) = -kappa``, for ``0 <= alpha <= kappa``."""
    T = psi_maximal_time(alpha, kappa)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t >= T):
        raise DomainError(f"t outside [0, {T})")
    if alpha <= K.FLAT_RATIO * kappa:
        y = -kappa / (1.0 - kappa * t)
    elif alpha < kappa:
        th = np.tanh(alpha * t)
        y = -(kappa * alpha - alpha**2 * th) / (alpha - kappa * th)
    else:
        y = np.full_like(t, -kappa)
    return float(y) if np.ndim(y) == 0 else y


@dataclass
class RiccatiTrajectory:
    t: np.ndarray
    y: np.ndarray
    t_end: float
    blew_up: bool
    nfev: int


def integrate_riccati(curvature_const: float, initial_value: float, t_end: float,
                      rtol: float = 1e-12, atol: float = 1e-12,
                      t_eval=None) -> RiccatiTrajectory:
    """Adaptive RK4(5) integration of ``y' = -y^2 - c`` on ``[0, t_end]``.

    Integration stops early if ``|y|`` exceeds :data:`BLOWUP_THRESHOLD`; the
    trajectory then reports the earlier effective endpoint.
    """
    if not t_end > 0:
        raise InvalidInputError("t_end must be positive")
    c = float(curvature_const)

    def blowup(t, y):
        return BLOWUP_THRESHOLD - abs(y[0])

    blowup.terminal = True
    sol = solve_ivp(lambda t, y: -y * y - c, (0.0, t_end), [float(initial_value)],
                    method="RK45", rtol=rtol, atol=atol, t_eval=t_eval, events=blowup)
    if sol.status == -1:
        raise DomainError(f"integration failed: {sol.message}")
    blew_up = sol.status == 1
    return RiccatiTrajectory(t=sol.t, y=sol.y[0], t_end=float(sol.t[-1]) if not blew_up
                             else float(sol.t_events[0][0]), blew_up=blew_up, nfev=sol.nfev)


def parallel_H_upper(delta, geom, variant: str = "sectional"):
    """Upper bound on the mean curvature of the parallel hypersurface at distance ``delta``.

    ``sectional``: ``E(delta) - 1/delta`` from ``Sec <= beta^2`` and ``kappa_i <= K``.
    ``ricci``: ``P(delta) - 1/delta`` from ``Ric <= b^2`` and ``H <= mean_upper``;
    needs ``0 < kappa <= kappa_i`` and ``alpha <= kappa`` so the parallel
    hypersurfaces stay convex.
    """
    if variant == "sectional":
        kern = K.e_kernel(geom.n, geom.beta, geom.kappa_upper)
        window = K.delta_sup(geom.collar_radius, geom.beta, geom.kappa_upper)
    elif variant == "ricci":
        if not geom.kappa_lower > 0:
            raise InapplicableError("requires 0<κ≤κᵢ")
        if geom.alpha > geom.kappa_lower:
            raise InapplicableError("requires 0≤α≤κ")
        kern = K.p_kernel(geom.b, geom.mean_upper)
        window = K.delta_sup(geom.collar_radius, geom.b, geom.mean_upper)
    else:
        raise InvalidInputError(f"unknown variant {variant!r}")
    d = np.asarray(delta, dtype=float)
    if np.any(~(d > 0)) or np.any(d >= window):
        raise DomainError(f"delta outside (0, {window})")
    return kern.parallel_mean_bound(delta)


def delta_window(geom, variant: str = "sectional") -> float:
    if variant == "sectional":
        return K.delta_sup(geom.collar_radius, geom.beta, geom.kappa_upper)
    return K.delta_sup(geom.collar_radius, geom.b, geom.mean_upper)
