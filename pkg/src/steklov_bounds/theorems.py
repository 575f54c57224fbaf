"""Theorem-level lower bounds for the first non-zero Steklov eigenvalue.

Every function here takes a :class:`GeometricData` record and returns a
:class:`BoundReport`.  Hypothesis failures never raise; they produce a report
with ``applicable=False`` and the list of violated gates.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, fields, replace


from . import kernels as K
from .errors import DomainError, InvalidInputError

_CONSISTENCY_RTOL = 1e-12


class Theorem(str, enum.Enum):
    THM_A = "ThmA"
    THM_E = "ThmE"
    THM_F = "ThmF"
    THM_C = "ThmC"
    COR_B = "CorB"
    ESCOBAR_SURFACE = "EscobarSurface"
    ESCOBAR_HIGHER = "EscobarHigher"
    SPECTRAL_GAP = "SpectralGap"


def _leq(x, y):
    return x <= y + _CONSISTENCY_RTOL * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class GeometricData:
    """Curvature and convexity data of a manifold near its boundary.

    Curvature bounds are per unit vector (``Ric(v, v) >= a^2 |v|^2``).
    ``ric_lower_collar`` plays the role of ``a^2``, ``ric_upper_collar`` of
    ``b^2``, ``sec_upper_collar`` of ``beta^2`` and ``sec_lower_collar`` of
    ``-alpha^2``.  Lower Ricci bounds may be negative (e.g. hyperbolic
    models); theorems gate on their sign.
    """

    n: int
    ric_lower_global: float
    ric_lower_collar: float
    ric_upper_collar: float
    sec_upper_collar: float
    sec_lower_collar: float
    kappa_lower: float
    kappa_upper: float
    mean_lower: float
    mean_upper: float
    rolling_radius: float
    collar_radius: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"n must be an integer >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise InvalidInputError(f"{f.name} must be finite, got {v}")
        problems = []
        if not self.rolling_radius > 0:
            problems.append("rolling_radius must be positive")
        if not self.collar_radius > 0:
            problems.append("collar_radius must be positive")
        if not _leq(self.collar_radius, self.rolling_radius):
            problems.append("collar_radius must not exceed rolling_radius")
        if not _leq(self.kappa_lower, self.kappa_upper):
            problems.append("kappa_lower must not exceed kappa_upper")
        if not _leq(self.mean_lower, self.mean_upper):
            problems.append("mean_lower must not exceed mean_upper")
        if not _leq(self.n * self.kappa_lower, self.mean_upper):
            problems.append("n*kappa_lower must not exceed mean_upper")
        if not _leq(self.mean_lower, self.n * self.kappa_upper):
            problems.append("mean_lower must not exceed n*kappa_upper")
        if not _leq(self.ric_lower_global, self.ric_lower_collar):
            problems.append("ric_lower_collar must be at least ric_lower_global")
        if not _leq(self.ric_lower_collar, self.ric_upper_collar):
            problems.append("ric_lower_collar must not exceed ric_upper_collar")
        if self.sec_lower_collar > 0 or self.sec_upper_collar < 0:
            problems.append("need sec_lower_collar <= 0 <= sec_upper_collar")
        if problems:
            raise InvalidInputError("; ".join(problems))

    @property
    def a_sq(self) -> float:
        return self.ric_lower_collar

    @property
    def beta(self) -> float:
        return math.sqrt(self.sec_upper_collar)

    @property
    def alpha(self) -> float:
        return math.sqrt(-self.sec_lower_collar)

    @property
    def b(self) -> float:
        return math.sqrt(max(self.ric_upper_collar, 0.0))

    def scaled(self, c: float) -> "GeometricData":
        """Data of the metric ``c**2 g``: lengths times ``c``, curvatures divided by ``c`` or ``c**2``."""
        c2 = c * c
        return GeometricData(
            n=self.n,
            ric_lower_global=self.ric_lower_global / c2,
            ric_lower_collar=self.ric_lower_collar / c2,
            ric_upper_collar=self.ric_upper_collar / c2,
            sec_upper_collar=self.sec_upper_collar / c2,
            sec_lower_collar=self.sec_lower_collar / c2,
            kappa_lower=self.kappa_lower / c,
            kappa_upper=self.kappa_upper / c,
            mean_lower=self.mean_lower / c,
            mean_upper=self.mean_upper / c,
            rolling_radius=self.rolling_radius * c,
            collar_radius=self.collar_radius * c,
        )

    def replace(self, **changes) -> "GeometricData":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GeometricData":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        missing = names - set(d)
        if unknown or missing:
            raise InvalidInputError(
                f"geometry fields: unknown {sorted(unknown)}, missing {sorted(missing)}"
            )
        try:
            vals = {k: (int(v) if k == "n" else float(v)) for k, v in d.items()}
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"non-numeric geometry field: {exc}") from exc
        return cls(**vals)


@dataclass
class BoundReport:
    theorem: Theorem | None
    applicable: bool
    reasons: list[str] = field(default_factory=list)
    delta_star: float | None = None
    kernel_values: dict[str, float] = field(default_factory=dict)
    epsilon_trace: list[float] = field(default_factory=list)
    bound: float = math.nan
    strict: bool = False
    notes: list[str] = field(default_factory=list)
    gap: tuple[float, float] | None = None
    sub_reports: list["BoundReport"] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "theorem": None if self.theorem is None else self.theorem.value,
            "applicable": self.applicable,
            "reasons": list(self.reasons),
            "delta_star": self.delta_star,
            "kernel_values": dict(self.kernel_values),
            "epsilon_trace_length": len(self.epsilon_trace),
            "epsilon_trace": list(self.epsilon_trace),
            "bound": self.bound if math.isfinite(self.bound) else None,
            "strict": self.strict,
            "notes": list(self.notes),
            "gap": None if self.gap is None else list(self.gap),
            "sub_reports": [r.to_dict() for r in self.sub_reports],
        }


def _inapplicable(theorem, reasons, notes=()):
    return BoundReport(theorem=theorem, applicable=False, reasons=list(reasons), notes=list(notes))


def _choose_delta(kernel: K.Kernel, window: float, delta: float | None) -> tuple[float, float]:
    if delta is None:
        return K.optimize_delta(kernel, window)
    if not 0 < delta < window:
        raise DomainError(f"delta={delta} outside the admissible window (0, {window})")
    return delta, kernel(delta)


def escobar_lower(kappa: float, n: int) -> float:
    """Escobar's baseline value: ``kappa`` for surfaces, ``kappa/2`` otherwise."""
    return kappa if n == 1 else 0.5 * kappa


def _fixed_point_report(theorem, geom, kernel, window, delta, kv_name, kv2_name, notes=()):
    # shared tail of theorems A, C and corollary B: kappa/2 + fixed point/2
    n, kappa, a_sq = geom.n, geom.kappa_lower, geom.a_sq
    d, val = _choose_delta(kernel, window, delta)
    eps = K.fixed_point_epsilon(val, n, kappa, a_sq)
    trace = K.iterate_epsilon(val, n, kappa, a_sq)
    return BoundReport(
        theorem=theorem,
        applicable=True,
        delta_star=d,
        kernel_values={kv_name: val, kv2_name: 2.0 * val - n * kappa, "window": window,
                       "fixed_point": eps},
        epsilon_trace=trace,
        bound=0.5 * kappa + 0.5 * eps,
        notes=list(notes),
    )


def theorem_A_bound(geom: GeometricData, delta: float | None = None) -> BoundReport:
    """Bound from Ric >= 0, a collar with Ric >= a^2 and Sec <= beta^2, and 0 < kappa <= kappa_i <= K."""
    reasons = []
    if geom.ric_lower_global < 0:
        reasons.append("requires Ric >= 0 in M")
    if geom.a_sq < 0:
        reasons.append("requires Ric >= a^2 >= 0 in the collar")
    if not geom.kappa_lower > 0:
        reasons.append("requires 0<κ≤κᵢ")
    if not geom.kappa_upper > 0:
        reasons.append("requires an upper principal-curvature bound K > 0")
    if reasons:
        return _inapplicable(Theorem.THM_A, reasons)
    window = K.delta_sup(geom.collar_radius, geom.beta, geom.kappa_upper)
    kernel = K.e_kernel(geom.n, geom.beta, geom.kappa_upper)
    return _fixed_point_report(Theorem.THM_A, geom, kernel, window, delta, "E", "F")


def theorem_C_bound(geom: GeometricData, delta: float | None = None) -> BoundReport:
    """Bound with a Ricci upper bound b^2 and mean-curvature upper bound H in place of beta and K."""
    reasons = []
    if geom.ric_lower_global < 0:
        reasons.append("requires Ric >= 0 in M")
    if geom.a_sq < 0:
        reasons.append("requires Ric >= a^2 >= 0 in the collar")
    if not geom.kappa_lower > 0:
        reasons.append("requires 0<κ≤κᵢ")
    elif geom.alpha > geom.kappa_lower:
        reasons.append("requires 0≤α≤κ")
    if not geom.mean_upper > 0:
        reasons.append("requires a mean-curvature upper bound H > 0")
    if reasons:
        return _inapplicable(Theorem.THM_C, reasons)
    window = K.delta_sup(geom.collar_radius, geom.b, geom.mean_upper)
    kernel = K.p_kernel(geom.b, geom.mean_upper)
    return _fixed_point_report(Theorem.THM_C, geom, kernel, window, delta, "P", "Q")


def corollary_B_rolling_lower(kappa: float, alpha: float, beta: float, K_upper: float) -> float:
    """Certified lower bound for the rolling radius from -alpha^2 <= Sec <= beta^2 and kappa_i in [kappa, K].

    Returns ``min{F, blowup_time(beta, K)}`` with ``F = arctanh(kappa/alpha)/alpha``
    when ``kappa < alpha`` and ``F = inf`` otherwise.
    """
    if not kappa > 0:
        raise InvalidInputError(f"kappa must be positive, got {kappa}")
    if alpha == 0:
        raise InvalidInputError("alpha = 0 is not supported (sectional lower bound must be negative)")
    if not alpha > 0:
        raise InvalidInputError(f"alpha must be positive, got {alpha}")
    reach = math.atanh(kappa / alpha) / alpha if kappa < alpha else math.inf
    return min(reach, K.blowup_time(beta, K_upper))


def theorem_corB_bound(geom: GeometricData, delta: float | None = None) -> BoundReport:
    """Theorem A's bound on a collar whose width is certified by :func:`corollary_B_rolling_lower`.

    The sectional bounds of ``geom`` are taken to hold on all of M.
    """
    reasons = []
    if geom.ric_lower_global < 0:
        reasons.append("requires Ric >= 0 in M")
    if geom.a_sq < 0:
        reasons.append("requires Ric >= a^2 >= 0 in the collar")
    if not geom.kappa_lower > 0:
        reasons.append("requires 0<κ≤κᵢ")
    if not geom.kappa_upper > 0:
        reasons.append("requires an upper principal-curvature bound K > 0")
    if not geom.alpha > 0:
        reasons.append("requires Sec >= -α² with α > 0")
    if reasons:
        return _inapplicable(Theorem.COR_B, reasons)
    certified = corollary_B_rolling_lower(geom.kappa_lower, geom.alpha, geom.beta, geom.kappa_upper)
    window = min(geom.collar_radius, certified)
    kernel = K.e_kernel(geom.n, geom.beta, geom.kappa_upper)
    report = _fixed_point_report(Theorem.COR_B, geom, kernel, window, delta, "E", "F",
                                 notes=["sectional bounds assumed on all of M"])
    report.kernel_values["rolling_lower"] = certified
    return report


def _mean_gates(geom, need_positive_h):
    reasons, notes = [], []
    if geom.ric_lower_global < 0:
        reasons.append("requires Ric >= 0 in M")
    if not geom.a_sq > 0:
        reasons.append("requires Ric ≥ a² > 0")
    if geom.mean_lower < 0:
        reasons.append("requires H >= 0")
    if need_positive_h and not geom.mean_lower > 0:
        reasons.append("requires H >= h > 0 (defer to ThmE)")
    if not geom.kappa_upper > 0:
        reasons.append("requires an upper principal-curvature bound K > 0")
    if geom.beta == 0:
        notes.append("outside stated hypotheses: beta = 0")
    return reasons, notes


def theorem_E_bound(geom: GeometricData, delta: float | None = None) -> BoundReport:
    """Bound for Ric >= a^2 > 0 near the boundary, allowing some negative principal curvatures.

    The admissibility condition ``kappa > -eps_1(delta)`` and the bound
    ``(kappa + eps_1(delta))/2`` both improve as ``E(delta)`` decreases, so the
    E-minimiser is optimal and is admissible whenever any delta is.
    """
    reasons, notes = _mean_gates(geom, need_positive_h=False)
    if reasons:
        return _inapplicable(Theorem.THM_E, reasons, notes)
    window = K.delta_sup(geom.collar_radius, geom.beta, geom.kappa_upper)
    kernel = K.e_kernel(geom.n, geom.beta, geom.kappa_upper)
    d, val = _choose_delta(kernel, window, delta)
    eps1 = K.positive_root(val, geom.a_sq)
    if not geom.kappa_lower > -eps1:
        return _inapplicable(Theorem.THM_E, ["no delta satisfies kappa > -eps_1(delta)"], notes)
    return BoundReport(
        theorem=Theorem.THM_E,
        applicable=True,
        delta_star=d,
        kernel_values={"E": val, "eps_1": eps1, "window": window},
        bound=0.5 * (geom.kappa_lower + eps1),
        notes=notes,
    )


def theorem_F_bound(geom: GeometricData, delta: float | None = None) -> BoundReport:
    """Iterated improvement of :func:`theorem_E_bound` when ``H >= h > 0``."""
    reasons, notes = _mean_gates(geom, need_positive_h=True)
    if reasons:
        return _inapplicable(Theorem.THM_F, reasons, notes)
    n, kappa, a_sq, h = geom.n, geom.kappa_lower, geom.a_sq, geom.mean_lower
    window = K.delta_sup(geom.collar_radius, geom.beta, geom.kappa_upper)
    kernel = K.e_kernel(n, geom.beta, geom.kappa_upper)

    # Admissibility forces |kappa| < eps_1 < a^2/E when kappa < 0, and E > n K >= h,
    # so 8 h kappa + 16 a^2 > 0: the bound decreases in E and the E-minimiser is optimal.
    d, val = _choose_delta(kernel, window, delta)
    if not kappa > -K.positive_root(val, a_sq):
        return _inapplicable(Theorem.THM_F, ["no delta satisfies kappa > -eps_1(delta)"], notes)
    eps = K.fixed_point_epsilon_mean(val, h, kappa, a_sq)
    return BoundReport(
        theorem=Theorem.THM_F,
        applicable=True,
        delta_star=d,
        kernel_values={"E": val, "T": 2.0 * val - h, "eps_1": K.positive_root(val, a_sq),
                       "window": window, "fixed_point": eps},
        epsilon_trace=K.iterate_epsilon_mean(val, h, kappa, a_sq),
        bound=0.5 * kappa + 0.5 * eps,
        notes=notes,
    )


def escobar_baselines(geom: GeometricData) -> list[BoundReport]:
    """Escobar's bounds: ``sigma_1 >= kappa`` on surfaces, ``sigma_1 > kappa/2`` for n >= 2."""
    n, kappa = geom.n, geom.kappa_lower
    theorem = Theorem.ESCOBAR_SURFACE if n == 1 else Theorem.ESCOBAR_HIGHER
    reasons = []
    if not kappa > 0:
        reasons.append("requires 0<κ≤κᵢ")
    if geom.ric_lower_global < 0:
        reasons.append("requires Gaussian curvature >= 0" if n == 1 else "requires Ric >= 0 in M")
    if reasons:
        return [_inapplicable(theorem, reasons)]
    return [BoundReport(theorem=theorem, applicable=True, bound=escobar_lower(kappa, n), strict=n >= 2)]


def spectral_gap(n: int, a_sq_neg: float, kappa: float) -> tuple[float, float] | None:
    """Open interval free of Steklov eigenvalues when ``Ric >= -a^2`` and ``kappa > sqrt(2 a^2/n)``."""
    if not a_sq_neg > 0 or not kappa > 0:
        raise InvalidInputError("spectral gap needs a^2 > 0 and kappa > 0")
    if not kappa > math.sqrt(2.0 * a_sq_neg / n):
        return None
    lo, hi = a_sq_neg / (n * kappa), 0.5 * kappa
    if not lo < hi:
        return None
    return lo, hi


def spectral_gap_report(geom: GeometricData) -> BoundReport:
    if not geom.ric_lower_global < 0:
        return _inapplicable(Theorem.SPECTRAL_GAP, ["requires Ric >= -a^2 with a > 0"])
    if not geom.kappa_lower > 0:
        return _inapplicable(Theorem.SPECTRAL_GAP, ["requires 0<κ≤κᵢ"])
    gap = spectral_gap(geom.n, -geom.ric_lower_global, geom.kappa_lower)
    if gap is None:
        return _inapplicable(Theorem.SPECTRAL_GAP, ["requires κ > sqrt(2a²/n)"])
    return BoundReport(theorem=Theorem.SPECTRAL_GAP, applicable=True, gap=gap, strict=True)


THEOREMS = {
    "A": theorem_A_bound,
    "E": theorem_E_bound,
    "F": theorem_F_bound,
    "C": theorem_C_bound,
    "corB": theorem_corB_bound,
}


def all_bounds(geom: GeometricData) -> list[BoundReport]:
    reports = [fn(geom) for fn in THEOREMS.values()]
    reports.extend(escobar_baselines(geom))
    return reports


def best_bound(geom: GeometricData) -> BoundReport:
    """Largest applicable lower bound, with every theorem's report attached."""
    subs = all_bounds(geom)
    ok = [r for r in subs if r.applicable]
    if not ok:
        reasons = [f"{r.theorem.value}: {why}" for r in subs for why in r.reasons]
        return BoundReport(theorem=None, applicable=False, reasons=reasons, sub_reports=subs)
    best = max(ok, key=lambda r: r.bound)
    return replace(best, sub_reports=subs)
