"""Every bound against the oracle on spherical caps and hyperbolic balls."""
import argparse
import math

from steklov_bounds import WarpedProfile, all_bounds, curvature_data, steklov_spectrum
from steklov_bounds.theorems import spectral_gap_report


def row(profile):
    sigma1 = steklov_spectrum(profile).sigma1
    geom = curvature_data(profile)
    bounds = {r.theorem.value: r.bound for r in all_bounds(geom) if r.applicable}
    cells = " ".join(f"{k}={v:.5f}" for k, v in sorted(bounds.items()))
    gap = spectral_gap_report(geom)
    if gap.applicable:
        cells += f" gap=({gap.gap[0]:.5f}, {gap.gap[1]:.5f})"
    return f"{profile.kind:>10} n={profile.n} R={profile.R:.4f} sigma1={sigma1:.6f}  {cells}"


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()
    for n in args.dims:
        for R in (math.pi / 6, math.pi / 4, math.pi / 3):
            print(row(WarpedProfile.spherical(1.0, n, R)))
        for R in (0.3, 0.5, 0.8):
            print(row(WarpedProfile.hyperbolic(1.0, n, R)))
