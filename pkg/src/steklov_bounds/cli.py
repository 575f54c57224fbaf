"""Command-line front end.

Input documents are JSON objects holding exactly one of ``geometry`` (every
:class:`GeometricData` field) or ``profile`` (``kind``, ``n``, ``R`` and
optionally ``c`` and ``collar_r``), plus an optional ``overrides`` object
with ``theorem``, ``delta``, ``L_max`` and ``tol``.  Reports written by
``bound`` are themselves valid input documents: their ``overrides`` pin the
chosen theorem and delta, so re-running on a report reproduces its bound.

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace

from .errors import DomainError, InvalidInputError, OracleError
from .models import WarpedProfile, curvature_data
from .oracle import DEFAULT_L_MAX, DEFAULT_TOL, steklov_spectrum
from .theorems import (BoundReport, GeometricData, Theorem, THEOREMS, best_bound, escobar_baselines,
                       spectral_gap, theorem_A_bound, theorem_C_bound)
from .verification import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

SELECTORS = ("auto", *THEOREMS, "escobar")
_SELECTOR_OF = {Theorem.THM_A: "A", Theorem.THM_E: "E", Theorem.THM_F: "F", Theorem.THM_C: "C",
                Theorem.COR_B: "corB", Theorem.ESCOBAR_SURFACE: "escobar",
                Theorem.ESCOBAR_HIGHER: "escobar"}
_DOC_KEYS = {"geometry", "profile", "overrides", "report", "source_profile"}
_PROFILE_KEYS = {"kind", "n", "R", "c", "collar_r"}
_OVERRIDE_KEYS = {"theorem", "delta", "L_max", "tol"}


def _finite_or_none(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite_or_none(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_or_none(v) for v in obj]
    return obj


def dumps(doc) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(_finite_or_none(doc), indent=2, allow_nan=False, ensure_ascii=False)


def _emit(doc, path: str | None = None) -> None:
    text = dumps(doc) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc}") from exc


def read_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc
    return validate_document(doc)


def validate_document(doc) -> dict:
    if not isinstance(doc, dict):
        raise InvalidInputError("input document must be an object")
    unknown = set(doc) - _DOC_KEYS
    if unknown:
        raise InvalidInputError(f"unknown top-level keys {sorted(unknown)}")
    if ("geometry" in doc) == ("profile" in doc):
        raise InvalidInputError("input needs exactly one of 'geometry' or 'profile'")
    if "profile" in doc:
        prof = doc["profile"]
        if not isinstance(prof, dict) or set(prof) - _PROFILE_KEYS:
            raise InvalidInputError(f"profile must be an object with keys from {sorted(_PROFILE_KEYS)}")
    elif not isinstance(doc["geometry"], dict):
        raise InvalidInputError("geometry must be an object")
    doc["overrides"] = validate_overrides(doc.get("overrides", {}))
    return doc


def validate_overrides(ov) -> dict:
    if not isinstance(ov, dict) or set(ov) - _OVERRIDE_KEYS:
        raise InvalidInputError(f"overrides must be an object with keys from {sorted(_OVERRIDE_KEYS)}")
    out = dict(ov)
    if "theorem" in out and out["theorem"] not in SELECTORS:
        raise InvalidInputError(f"theorem must be one of {SELECTORS}")
    if "delta" in out:
        out["delta"] = parse_delta(out["delta"])
    if "L_max" in out:
        L = out["L_max"]
        if isinstance(L, bool) or not isinstance(L, int) or not 1 <= L <= 100:
            raise InvalidInputError("L_max must be an integer in [1, 100]")
    if "tol" in out:
        t = out["tol"]
        if isinstance(t, bool) or not isinstance(t, (int, float)) or not 0 < t <= 1e-3:
            raise InvalidInputError("tol must lie in (0, 1e-3]")
    return out


def parse_delta(value) -> float | None:
    """``"auto"`` or ``None`` means optimise; anything else must be a positive finite number."""
    if value is None or value == "auto":
        return None
    try:
        d = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"delta must be 'auto' or a number, got {value!r}") from exc
    if not (d > 0 and math.isfinite(d)):
        raise InvalidInputError(f"delta must be positive, got {value!r}")
    return d


def document_geometry(doc: dict) -> tuple[GeometricData, WarpedProfile | None]:
    if "geometry" in doc:
        return GeometricData.from_dict(doc["geometry"]), None
    prof = doc["profile"]
    profile = WarpedProfile.from_dict(prof)
    collar = prof.get("collar_r")
    if collar is not None:
        try:
            collar = float(collar)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"collar_r must be a number: {exc}") from exc
    return curvature_data(profile, collar), profile


def _single(selector: str, geom: GeometricData, delta: float | None):
    if selector == "escobar":
        return escobar_baselines(geom)[0]
    return THEOREMS[selector](geom, delta=delta)


def compute_bound(geom: GeometricData, selector: str = "auto", delta: float | None = None):
    """Report for one theorem, or the best applicable one for ``auto``.

    A forced delta outside a theorem's window is an input error for a single
    theorem; under ``auto`` that theorem is marked inapplicable instead.
    """
    if selector != "auto":
        return _single(selector, geom, delta)
    if delta is None:
        return best_bound(geom)
    subs = []
    for fn in THEOREMS.values():
        try:
            subs.append(fn(geom, delta=delta))
        except DomainError as exc:
            theorem = fn(geom).theorem
            subs.append(BoundReport(theorem=theorem, applicable=False, reasons=[str(exc)]))
    subs.extend(escobar_baselines(geom))
    ok = [r for r in subs if r.applicable]
    if not ok:
        return BoundReport(theorem=None, applicable=False,
                           reasons=[f"{r.theorem.value}: {w}" for r in subs for w in r.reasons],
                           sub_reports=subs)
    return replace(max(ok, key=lambda r: r.bound), sub_reports=subs)


def bound_document(doc: dict, selector: str | None = None, delta_arg=None) -> dict:
    ov = doc["overrides"]
    selector = selector or ov.get("theorem", "auto")
    delta = parse_delta(delta_arg) if delta_arg is not None else ov.get("delta")
    geom, profile = document_geometry(doc)
    report = compute_bound(geom, selector, delta)
    pinned = {"theorem": selector, "delta": "auto" if delta is None else delta}
    if report.applicable and report.theorem is not None:
        pinned["theorem"] = _SELECTOR_OF.get(report.theorem, selector)
        pinned["delta"] = "auto" if report.delta_star is None else report.delta_star
    out = {"geometry": geom.to_dict(), "overrides": pinned, "report": report.to_dict()}
    out["report"]["baselines"] = [b.to_dict() for b in escobar_baselines(geom)]
    if profile is not None:
        out["source_profile"] = doc["profile"]
    return out


def sweep_rows(geom: GeometricData, samples: int, with_c: bool = False) -> list[dict]:
    """Kernel values and bounds at ``samples`` evenly spaced points strictly inside the window."""
    if isinstance(samples, bool) or int(samples) != samples or samples < 2:
        raise InvalidInputError("samples must be an integer >= 2")
    gate = theorem_A_bound(geom)
    if not gate.applicable:
        raise InvalidInputError("theorem A does not apply to this input: " + "; ".join(gate.reasons))
    w = gate.kernel_values["window"]
    if with_c:
        gate_c = theorem_C_bound(geom)
        if not gate_c.applicable:
            raise InvalidInputError("theorem C does not apply to this input: " + "; ".join(gate_c.reasons))
        w = min(w, gate_c.kernel_values["window"])
    rows = []
    for k in range(1, samples + 1):
        d = w * k / (samples + 1)
        a = theorem_A_bound(geom, delta=d)
        row = {"delta": d, "E": a.kernel_values["E"], "F": a.kernel_values["F"], "bound_A": a.bound}
        if with_c:
            c = theorem_C_bound(geom, delta=d)
            row.update(P=c.kernel_values["P"], Q=c.kernel_values["Q"], bound_C=c.bound)
        rows.append(row)
    return rows


def write_csv(rows: list[dict], path: str) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: repr(v) for k, v in row.items()})
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc}") from exc


def oracle_document(profile: WarpedProfile, L_max: int, tol: float) -> dict:
    est = steklov_spectrum(profile, L_max=L_max, tol=tol)
    return {"profile": profile.to_dict(), "L_max": L_max, "tol": tol, "spectrum": est.to_dict()}


def gap_document(n: int, a_sq: float, kappa: float) -> dict:
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    gap = spectral_gap(n, a_sq, kappa)
    return {"n": n, "a_sq": a_sq, "kappa": kappa, "threshold": math.sqrt(2 * a_sq / n),
            "applicable": gap is not None, "gap": None if gap is None else list(gap)}


def _cmd_bound(args) -> int:
    doc = read_document(args.input)
    _emit(bound_document(doc, args.theorem, args.delta), args.output)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    geom, _ = document_geometry(read_document(args.input))
    write_csv(sweep_rows(geom, args.samples, args.with_c), args.output)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    L_max, tol = args.L_max, args.tol
    if args.input:
        doc = read_document(args.input)
        if "profile" not in doc:
            raise InvalidInputError("oracle input needs a 'profile'")
        prof = doc["profile"]
        L_max = L_max if L_max is not None else doc["overrides"].get("L_max")
        tol = tol if tol is not None else doc["overrides"].get("tol")
    else:
        if args.kind is None or args.n is None or args.R is None:
            raise InvalidInputError("oracle needs --input or all of --kind, --n, --R")
        prof = {"kind": args.kind, "n": args.n, "R": args.R}
        if args.c is not None:
            prof["c"] = args.c
    validate_overrides({k: v for k, v in (("L_max", L_max), ("tol", tol)) if v is not None})
    profile = WarpedProfile.from_dict(prof)
    _emit(oracle_document(profile, L_max or DEFAULT_L_MAX, tol or DEFAULT_TOL), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed)
    _emit(report.to_dict(include_timing=not args.no_timing), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_gap(args) -> int:
    _emit(gap_document(args.n, args.a_sq, args.kappa), args.output)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="steklov-bounds", description="Steklov first-eigenvalue lower bounds and checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", help="bounds from a geometry or profile document")
    b.add_argument("input")
    b.add_argument("--theorem", choices=SELECTORS, default=None)
    b.add_argument("--delta", default=None, help="'auto' or a value inside the window")
    b.add_argument("--output", default=None)
    b.set_defaults(func=_cmd_bound)

    s = sub.add_parser("sweep", help="kernel landscape over the delta window as CSV")
    s.add_argument("input")
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--output", required=True)
    s.add_argument("--with-c", action="store_true", help="add P, Q and bound_C columns")
    s.set_defaults(func=_cmd_sweep)

    o = sub.add_parser("oracle", help="numerical Steklov spectrum of a model ball")
    o.add_argument("--input", default=None)
    o.add_argument("--kind", choices=("flat", "spherical", "hyperbolic"))
    o.add_argument("--n", type=int)
    o.add_argument("--R", type=float)
    o.add_argument("--c", type=float)
    o.add_argument("--L-max", dest="L_max", type=int, default=None)
    o.add_argument("--tol", type=float, default=None)
    o.add_argument("--output", default=None)
    o.set_defaults(func=_cmd_oracle)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=(*SUITES, "all"))
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--no-timing", action="store_true", help="omit wall time for byte-stable output")
    v.add_argument("--output", default=None)
    v.set_defaults(func=_cmd_verify)

    g = sub.add_parser("gap", help="Steklov-free interval for negatively curved data")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--a-sq", dest="a_sq", type=float, required=True)
    g.add_argument("--kappa", type=float, required=True)
    g.add_argument("--output", default=None)
    g.set_defaults(func=_cmd_gap)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OracleError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
