"""Scalar bound kernels, delta optimisation and the epsilon fixed-point machinery.

The two kernel families share one shape.  For a curvature scale ``s >= 0``
and an initial curvature ``k > 0``::

    G(delta) = m * (s**2 tan(s delta) + s k) / (s - k tan(s delta)) + 1/delta   (s > 0)
    G(delta) = m * k / (1 - k delta) + 1/delta                                   (s = 0)

``E`` is ``G`` with ``m = n`` and ``(s, k) = (beta, K)``; ``P`` is ``G`` with
``m = 1`` and ``(s, k) = (b, H)``.  The fraction is ``-m`` times the solution
of ``y' + y**2 + s**2 = 0, y(0) = -k`` and blows up at ``arctan(s/k)/s``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidInputError

#: Kernel evaluation refuses delta this close (relative) to the branch singularity.
SINGULARITY_GUARD = 1e-12
#: Absolute delta tolerance of the golden-section search.
DELTA_TOL = 1e-10
#: Interior points of the bracketing scan that precedes golden-section search.
SCAN_POINTS = 64
#: Default stopping rule of the epsilon recursions.
EPS_TOL = 1e-12
EPS_MAX_ITER = 10**5
#: Below this ratio s/k the curved formulas differ from the flat one by less
#: than (s/k)**2 and can underflow, so the flat formula is used.
FLAT_RATIO = 1e-9

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _curved(s: float, k: float) -> bool:
    return s > FLAT_RATIO * k


def blowup_time(s: float, k: float) -> float:
    """First time the comparison solution with curvature ``s**2`` and ``y(0) = -k`` blows up."""
    if k <= 0:
        return math.inf
    if _curved(s, k):
        return math.atan(s / k) / s
    return 1.0 / k


def delta_sup(r: float, beta: float, K: float) -> float:
    """Upper end of the admissible delta window, ``min{r, blowup_time(beta, K)}``."""
    if not r > 0:
        raise InvalidInputError(f"collar radius must be positive, got {r}")
    if not K > 0:
        raise InvalidInputError(f"curvature upper bound must be positive, got {K}")
    if beta < 0:
        raise InvalidInputError(f"beta must be non-negative, got {beta}")
    return min(r, blowup_time(beta, K))


def _comparison_fraction(delta, s, k):
    # -y(delta) for y' + y^2 + s^2 = 0, y(0) = -k
    if _curved(s, k):
        t = np.tan(s * delta)
        return (s * s * t + s * k) / (s - k * t)
    return k / (1.0 - k * delta)


@dataclass(frozen=True)
class Kernel:
    """A kernel ``delta -> mult * frac(delta) + 1/delta`` of the E/P family.

    Evaluating outside ``(0, singularity)`` raises :class:`DomainError`.
    """

    mult: float
    s: float
    k: float
    name: str = "E"

    def __post_init__(self):
        if not self.k > 0:
            raise InvalidInputError(f"{self.name}: initial curvature must be positive, got {self.k}")
        if self.s < 0:
            raise InvalidInputError(f"{self.name}: curvature scale must be non-negative, got {self.s}")

    @property
    def singularity(self) -> float:
        return blowup_time(self.s, self.k)

    def check_domain(self, delta) -> None:
        d = np.asarray(delta, dtype=float)
        if np.any(~(d > 0)):
            raise DomainError(f"{self.name}: delta must be positive, got {delta}")
        if np.any(d >= self.singularity * (1.0 - SINGULARITY_GUARD)):
            raise DomainError(
                f"{self.name}: delta={delta} at or beyond the branch singularity {self.singularity}"
            )

    def __call__(self, delta):
        self.check_domain(delta)
        val = self.mult * _comparison_fraction(delta, self.s, self.k) + 1.0 / np.asarray(delta, dtype=float)
        return float(val) if np.ndim(val) == 0 else val

    def parallel_mean_bound(self, delta):
        """The kernel minus ``1/delta``: the mean-curvature bound on the parallel hypersurface."""
        self.check_domain(delta)
        val = self.mult * _comparison_fraction(delta, self.s, self.k)
        return float(val) if np.ndim(val) == 0 else val

    def closed_form_minimizer(self) -> float | None:
        """Exact minimiser when ``s`` is zero (or negligible against ``k``); ``None`` otherwise.

        ``d/d delta [m k/(1 - k delta) + 1/delta] = 0`` gives ``delta = 1/(k (1 + sqrt m))``.
        """
        if not _curved(self.s, self.k):
            return 1.0 / (self.k * (1.0 + math.sqrt(self.mult)))
        return None


def e_kernel(n: int, beta: float, K: float) -> Kernel:
    return Kernel(mult=float(n), s=float(beta), k=float(K), name="E")


def p_kernel(b: float, H: float) -> Kernel:
    return Kernel(mult=1.0, s=float(b), k=float(H), name="P")


def kernel_E(delta, n, beta, K):
    return e_kernel(n, beta, K)(delta)


def kernel_F(delta, n, beta, K, kappa):
    return 2.0 * kernel_E(delta, n, beta, K) - n * kappa


def kernel_P(delta, b, H):
    return p_kernel(b, H)(delta)


def kernel_Q(delta, b, H, n, kappa):
    return 2.0 * kernel_P(delta, b, H) - n * kappa


def kernel_T(delta, n, beta, K, h):
    return 2.0 * kernel_E(delta, n, beta, K) - h


def _golden_section(func, a: float, b: float, tol: float) -> float:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
    return 0.5 * (a + b)


def minimize_on_window(func, window_sup: float, tol: float = DELTA_TOL,
                       scan_points: int = SCAN_POINTS) -> float:
    """Minimise a scalar function on the open interval ``(0, window_sup)``.

    A uniform scan brackets the minimum; if the scan is not unimodal every
    local minimum of the scan is refined and the best one kept.
    """
    if not window_sup > 0:
        raise DomainError(f"empty delta window (sup={window_sup})")
    grid = window_sup * np.arange(1, scan_points + 1) / (scan_points + 1)
    vals = np.array([func(x) for x in grid])
    diffs = np.sign(np.diff(vals))
    # unimodal: non-increasing then non-decreasing
    nz = diffs[diffs != 0]
    sign_changes = np.count_nonzero(np.diff(nz) != 0) if nz.size > 1 else 0
    unimodal = sign_changes == 0 or (sign_changes == 1 and nz[0] < 0)
    if unimodal:
        candidates = [int(np.argmin(vals))]
    else:
        candidates = [i for i in range(scan_points)
                      if (i == 0 or vals[i] <= vals[i - 1])
                      and (i == scan_points - 1 or vals[i] <= vals[i + 1])]
    edge = window_sup * (1.0 - SINGULARITY_GUARD)
    # absolute tolerance, tightened on short windows so the result is scale covariant
    tol = min(tol, tol * window_sup)
    best_x, best_v = None, math.inf
    for i in candidates:
        lo = grid[i - 1] if i > 0 else grid[0] * 1e-6
        hi = grid[i + 1] if i < scan_points - 1 else edge
        x = _golden_section(func, lo, hi, tol)
        v = func(x)
        if i == scan_points - 1 and func(edge) <= v:
            # still descending at the window end: the guarded endpoint is exact and scale covariant
            x, v = edge, func(edge)
        if v < best_v:
            best_x, best_v = x, v
    return float(best_x)


def optimize_delta(kernel: Kernel, window_sup: float) -> tuple[float, float]:
    """Minimise ``kernel`` over ``(0, window_sup)``; return ``(delta_star, value)``.

    The window is first cut at the kernel's singularity.  When the minimiser
    lies beyond the window the kernel is decreasing on it and the returned
    delta sits just inside the right end.
    """
    if not window_sup > 0:
        raise DomainError(f"empty delta window (sup={window_sup})")
    w = min(window_sup, kernel.singularity)
    exact = kernel.closed_form_minimizer()
    if exact is not None:
        delta = min(exact, w * (1.0 - SINGULARITY_GUARD))
    else:
        delta = minimize_on_window(kernel, w)
    return delta, kernel(delta)


def positive_root(b: float, c: float) -> float:
    """Largest root of ``y**2 + b*y - c = 0``, i.e. ``(-b + sqrt(b**2 + 4c))/2``.

    Uses the cancellation-free form when ``b > 0``.
    """
    disc = b * b + 4.0 * c
    if disc < 0:
        raise DomainError(f"no real root: b={b}, c={c}")
    root = math.sqrt(disc)
    if b > 0:
        return 2.0 * c / (b + root)
    return 0.5 * (root - b)


def fixed_point_epsilon(E_val: float, n: int, kappa: float, a_sq: float) -> float:
    """Closed-form limit of :func:`iterate_epsilon`.

    Equal to ``(-F + sqrt(F**2 + 8 n kappa**2 + 16 a_sq))/4`` with
    ``F = 2 E - n kappa``.
    """
    return positive_root(E_val - 0.5 * n * kappa, a_sq + 0.5 * n * kappa * kappa)


def fixed_point_epsilon_mean(E_val: float, h: float, kappa: float, a_sq: float) -> float:
    """Closed-form limit of :func:`iterate_epsilon_mean`: ``(h - 2E + sqrt((h-2E)^2 + 8 h kappa + 16 a^2))/4``."""
    return positive_root(E_val - 0.5 * h, a_sq + 0.5 * h * kappa)


def _iterate(update, start: list[float], tol: float, max_iter: int) -> list[float]:
    trace = list(start)
    cur = trace[-1]
    for _ in range(max_iter):
        nxt = update(cur)
        if nxt - cur < tol:
            if nxt > cur:
                trace.append(nxt)
            return trace
        trace.append(nxt)
        cur = nxt
    raise ConvergenceError(f"epsilon iteration did not converge in {max_iter} steps")


def iterate_epsilon(E_val: float, n: int, kappa: float, a_sq: float,
                    tol: float = EPS_TOL, max_iter: int = EPS_MAX_ITER) -> list[float]:
    """Iterates ``eps_{i+1} = (-E + sqrt(E^2 + 2n kappa^2 + 4a^2 + 2n kappa eps_i))/2`` from ``eps_0 = 0``.

    Stops once the increment drops below ``tol``; the returned trace is
    strictly increasing (a final non-increasing step is dropped).
    """
    if not E_val > 0:
        raise InvalidInputError(f"E must be positive, got {E_val}")
    if kappa < 0 or a_sq < 0:
        raise InvalidInputError("kappa and a^2 must be non-negative")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    base = 0.5 * n * kappa * kappa + a_sq
    return _iterate(lambda e: positive_root(E_val, base + 0.5 * n * kappa * e), [0.0], tol, max_iter)


def iterate_epsilon_mean(E_val: float, h: float, kappa: float, a_sq: float,
                         tol: float = EPS_TOL, max_iter: int = EPS_MAX_ITER) -> list[float]:
    """Recursion with a mean-curvature lower bound ``h > 0``.

    ``eps_{i+1} = (-E + sqrt(E^2 + 4a^2 + 2h(kappa + eps_i)))/2`` started at
    ``eps_1 = (-E + sqrt(E^2 + 4a^2))/2``.  ``kappa`` may be negative as long
    as ``kappa + eps_1 > 0``.
    """
    if not E_val > 0:
        raise InvalidInputError(f"E must be positive, got {E_val}")
    if not h > 0:
        raise InvalidInputError(f"h must be positive, got {h}")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    eps1 = positive_root(E_val, a_sq)
    if not kappa + eps1 > 0:
        raise InvalidInputError("requires kappa + eps_1 > 0")
    return _iterate(lambda e: positive_root(E_val, a_sq + 0.5 * h * (kappa + e)), [eps1], tol, max_iter)
