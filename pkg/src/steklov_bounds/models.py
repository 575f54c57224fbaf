"""Rotationally symmetric model balls ``dr^2 + f(r)^2 g_{S^n}`` over ``[0, R]``.

For the warped product the curvatures are

* radial sectional ``-f''/f``; tangential sectional ``(1 - f'^2)/f^2`` (n >= 2 only)
* Ricci, radial ``-n f''/f``; tangential ``-f''/f + (n-1)(1 - f'^2)/f^2``
* the geodesic sphere ``r = R`` is umbilic with principal curvatures ``f'(R)/f(R)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidInputError
from .theorems import GeometricData

#: Samples used to extremise curvature over a radial interval.
CURVATURE_SAMPLES = 1024
_POLE_PROBE = 1e-8
_POLE_TOL = 1e-10


@dataclass(frozen=True)
class WarpedProfile:
    """A warped-product geodesic ball; build with the ``flat/spherical/hyperbolic/custom`` constructors.

    ``one_minus_df2`` computes ``1 - f'(r)^2``; the built-in kinds supply a
    cancellation-free form, custom profiles fall back to the direct one.
    """

    kind: str
    n: int
    R: float
    f: Callable = field(repr=False, compare=False)
    df: Callable = field(repr=False, compare=False)
    d2f: Callable = field(repr=False, compare=False)
    c: float | None = None
    one_minus_df2: Callable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"n must be an integer >= 1, got {self.n}")
        if not (self.R > 0 and math.isfinite(self.R)):
            raise InvalidInputError(f"R must be positive, got {self.R}")
        if abs(self.f(_POLE_PROBE) - _POLE_PROBE) > _POLE_TOL or abs(self.df(_POLE_PROBE) - 1.0) > _POLE_TOL:
            raise InvalidInputError("profile is not regular at the pole (need f(0)=0, f'(0)=1)")
        rs = np.linspace(self.R / CURVATURE_SAMPLES, self.R, CURVATURE_SAMPLES)
        if np.any(~(np.asarray(self.f(rs)) > 0)):
            raise InvalidInputError("warp function must be positive on (0, R]")

    @classmethod
    def flat(cls, n: int, R: float) -> "WarpedProfile":
        return cls("flat", n, R, f=lambda r: np.asarray(r, dtype=float) * 1.0,
                   df=lambda r: np.ones_like(np.asarray(r, dtype=float)),
                   d2f=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                   one_minus_df2=lambda r: np.zeros_like(np.asarray(r, dtype=float)))

    @classmethod
    def spherical(cls, c: float, n: int, R: float) -> "WarpedProfile":
        if not c > 0:
            raise InvalidInputError("spherical profile needs c > 0")
        k = math.sqrt(c)
        if not R < math.pi / (2 * k):
            raise InvalidInputError("spherical cap radius must be below a quarter great circle (convex boundary)")
        return cls("spherical", n, R, c=c,
                   f=lambda r: np.sin(k * np.asarray(r, dtype=float)) / k,
                   df=lambda r: np.cos(k * np.asarray(r, dtype=float)),
                   d2f=lambda r: -k * np.sin(k * np.asarray(r, dtype=float)),
                   one_minus_df2=lambda r: np.sin(k * np.asarray(r, dtype=float)) ** 2)

    @classmethod
    def hyperbolic(cls, c: float, n: int, R: float) -> "WarpedProfile":
        if not c > 0:
            raise InvalidInputError("hyperbolic profile needs c > 0")
        k = math.sqrt(c)
        return cls("hyperbolic", n, R, c=c,
                   f=lambda r: np.sinh(k * np.asarray(r, dtype=float)) / k,
                   df=lambda r: np.cosh(k * np.asarray(r, dtype=float)),
                   d2f=lambda r: k * np.sinh(k * np.asarray(r, dtype=float)),
                   one_minus_df2=lambda r: -np.sinh(k * np.asarray(r, dtype=float)) ** 2)

    @classmethod
    def custom(cls, f, df, d2f, n: int, R: float) -> "WarpedProfile":
        return cls("custom", n, R, f=f, df=df, d2f=d2f)

    @classmethod
    def from_dict(cls, d: dict) -> "WarpedProfile":
        kind = d.get("kind")
        try:
            n, R = int(d["n"]), float(d["R"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"profile needs numeric n and R: {exc}") from exc
        if kind == "flat":
            return cls.flat(n, R)
        if kind in ("spherical", "hyperbolic"):
            try:
                c = float(d.get("c", 1.0))
            except (TypeError, ValueError) as exc:
                raise InvalidInputError(f"bad curvature c: {exc}") from exc
            return getattr(cls, kind)(c, n, R)
        raise InvalidInputError(f"unknown profile kind {kind!r} (custom profiles are library-only)")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n, "R": self.R}
        if self.c is not None:
            d["c"] = self.c
        return d

    def scaled(self, s: float) -> "WarpedProfile":
        """The profile of the metric ``s^2 g``: ``(s f(r/s), s R)``."""
        f, df, d2f = self.f, self.df, self.d2f
        om = self.one_minus_df2
        return WarpedProfile(
            "custom", self.n, s * self.R,
            f=lambda r: s * f(np.asarray(r, dtype=float) / s),
            df=lambda r: df(np.asarray(r, dtype=float) / s),
            d2f=lambda r: d2f(np.asarray(r, dtype=float) / s) / s,
            one_minus_df2=None if om is None else (lambda r: om(np.asarray(r, dtype=float) / s)),
        )

    def _om(self, r):
        if self.one_minus_df2 is not None:
            return np.asarray(self.one_minus_df2(r), dtype=float)
        return 1.0 - np.asarray(self.df(r), dtype=float) ** 2

    def radial_sectional(self, r):
        return -np.asarray(self.d2f(r)) / np.asarray(self.f(r))

    def tangential_sectional(self, r):
        return self._om(r) / np.asarray(self.f(r)) ** 2

    def radial_ricci(self, r):
        return self.n * self.radial_sectional(r)

    def tangential_ricci(self, r):
        return self.radial_sectional(r) + (self.n - 1) * self.tangential_sectional(r)

    def boundary_curvature(self) -> float:
        return float(self.df(self.R) / self.f(self.R))


def _extreme(func, lo: float, hi: float, which: str) -> float:
    """Min or max of ``func`` on ``[lo, hi]``: dense sampling plus a three-point parabolic refinement."""
    rs = np.linspace(lo, hi, CURVATURE_SAMPLES)
    vals = np.asarray(func(rs), dtype=float)
    sign = 1.0 if which == "min" else -1.0
    i = int(np.argmin(sign * vals))
    best = vals[i]
    if 0 < i < len(rs) - 1:
        y0, y1, y2 = vals[i - 1], vals[i], vals[i + 1]
        denom = y0 - 2 * y1 + y2
        if denom != 0:
            x = rs[i] + 0.5 * (rs[1] - rs[0]) * (y0 - y2) / denom
            if rs[i - 1] < x < rs[i + 1]:
                v = float(func(np.array([x]))[0])
                best = min(best, v) if which == "min" else max(best, v)
    return float(best)


def _curvature_range(profile: WarpedProfile, lo: float, hi: float):
    ric = [profile.radial_ricci, profile.tangential_ricci]
    sec = [profile.radial_sectional]
    if profile.n >= 2:
        sec.append(profile.tangential_sectional)
    return (min(_extreme(g, lo, hi, "min") for g in ric),
            max(_extreme(g, lo, hi, "max") for g in ric),
            min(_extreme(g, lo, hi, "min") for g in sec),
            max(_extreme(g, lo, hi, "max") for g in sec))


def curvature_data(profile: WarpedProfile, collar_r: float | None = None) -> GeometricData:
    """Extract :class:`GeometricData` for the geodesic ball described by ``profile``.

    Collar bounds are extremised over ``r`` in ``[R - collar_r, R]`` and the
    global Ricci lower bound over ``(0, R]``; sampling stops short of the pole,
    where the tangential formulas are 0/0.  Lower sectional and upper
    curvature bounds are clamped to the sign conventions of the theorems.
    """
    R = profile.R
    if collar_r is None:
        collar_r = R
    if not 0 < collar_r <= R:
        raise InvalidInputError(f"collar radius must lie in (0, R], got {collar_r}")
    r_floor = R / CURVATURE_SAMPLES
    ric_lo, ric_hi, sec_lo, sec_hi = _curvature_range(profile, max(R - collar_r, r_floor), R)
    ric_global, _, _, _ = _curvature_range(profile, r_floor, R)
    kappa = profile.boundary_curvature()
    n = profile.n
    return GeometricData(
        n=n,
        ric_lower_global=min(ric_global, ric_lo),
        ric_lower_collar=ric_lo,
        ric_upper_collar=max(ric_hi, 0.0),
        sec_upper_collar=max(sec_hi, 0.0),
        sec_lower_collar=min(sec_lo, 0.0),
        kappa_lower=kappa,
        kappa_upper=kappa,
        mean_lower=n * kappa,
        mean_upper=n * kappa,
        rolling_radius=R,
        collar_radius=collar_r,
    )


def parallel_mean_curvature_exact(profile: WarpedProfile, delta):
    """Mean curvature ``n f'(R-delta)/f(R-delta)`` of the parallel sphere at distance ``delta``."""
    d = np.asarray(delta, dtype=float)
    if np.any(~(d > 0)) or np.any(d >= profile.R):
        raise DomainError(f"delta outside (0, {profile.R})")
    r = profile.R - d
    val = profile.n * np.asarray(profile.df(r)) / np.asarray(profile.f(r))
    return float(val) if val.ndim == 0 else val
