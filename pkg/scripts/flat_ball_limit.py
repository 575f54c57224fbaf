"""Theorem A bound on the unit Euclidean ball as the dimension grows (sigma_1 = 1 for every n)."""
import argparse

from steklov_bounds import GeometricData, theorem_A_bound


def flat_ball(n):
    return GeometricData(n=n, ric_lower_global=0.0, ric_lower_collar=0.0, ric_upper_collar=0.0,
                         sec_upper_collar=0.0, sec_lower_collar=0.0, kappa_lower=1.0, kappa_upper=1.0,
                         mean_lower=float(n), mean_upper=float(n), rolling_radius=1.0, collar_radius=1.0)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3, 4, 9, 25, 100, 1000, 10000])
    args = ap.parse_args()
    print(f"{'n':>6} {'delta*':>12} {'bound':>12} {'escobar':>8}")
    for n in args.dims:
        r = theorem_A_bound(flat_ball(n))
        print(f"{n:>6} {r.delta_star:12.8f} {r.bound:12.8f} {1.0 if n == 1 else 0.5:8.3f}")
