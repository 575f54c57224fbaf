"""Recompute the reference numbers frozen into the test suite.

Independent of the package: 50-digit mpmath, kernels written through the
tan-addition identity, minimisers located by root-finding on the derivative
after a dense grid scan, fixed points solved as roots of the defining
equation rather than by the quadratic formula.
"""
import mpmath as mp

mp.mp.dps = 50


def kernel(delta, mult, s, k):
    if s == 0:
        return mult * k / (1 - k * delta) + 1 / delta
    return mult * s * mp.tan(s * delta + mp.atan(k / s)) + 1 / delta


def window(r, s, k):
    return min(mp.mpf(r), (mp.pi / 2 - mp.atan(k / s)) / s if s > 0 else 1 / mp.mpf(k))


def argmin(mult, s, k, w, grid=20000):
    xs = [w * i / (grid + 1) for i in range(1, grid + 1)]
    vals = [kernel(x, mult, s, k) for x in xs]
    i = min(range(grid), key=vals.__getitem__)
    if i == grid - 1:
        return w, None
    x = mp.findroot(lambda d: mp.diff(lambda t: kernel(t, mult, s, k), d), xs[i])
    return x, kernel(x, mult, s, k)


def fixed_point(E, n, kappa, a_sq):
    g = lambda e: e * e + E * e - (a_sq + n * kappa**2 / 2 + n * kappa * e / 2)
    return mp.findroot(g, 1)


def fixed_point_mean(E, h, kappa, a_sq):
    g = lambda e: e * e + E * e - (a_sq + h * (kappa + e) / 2)
    return mp.findroot(g, 1)


def eps1(E, a_sq):
    return mp.findroot(lambda e: e * e + E * e - a_sq, 1)


def show(label, value):
    print(f"{label:48s} {mp.nstr(value, 17)}")


if __name__ == "__main__":
    show("E(pi/8; n=2, beta=1, K=1)", kernel(mp.pi / 8, 2, 1, 1))
    show("fixed_point(E=10, n=2, kappa=1, a2=0)", fixed_point(10, 2, 1, 0))
    show("fixed_point(E=(1+sqrt2)^2, n=2, kappa=1, a2=0)", fixed_point((1 + mp.sqrt(2)) ** 2, 2, 1, 0))
    show("2 coth(0.25)", 2 * mp.coth(mp.mpf("0.25")))

    d, v = argmin(1, 1, 1, mp.pi / 4)
    show("argmin E(n=1, beta=1, K=1) on (0, pi/4)", d)
    show("min E(n=1, beta=1, K=1) on (0, pi/4)", v)

    for n in (1, 2, 4, 9, 100, 10**4):
        d, v = argmin(n, 0, 1, 1)
        show(f"flat ball n={n} bound", 0.5 + fixed_point(v, n, 1, 0) / 2)

    d, v = argmin(1, 0, 2, mp.mpf(1) / 2)
    show("unit ball (n=2) theorem C delta*", d)
    show("unit ball (n=2) theorem C bound", 0.5 + fixed_point(v, 2, 1, 0) / 2)

    # cap of the unit 2-sphere, R = pi/4: a^2 = 2, beta = 1, b^2 = 2, kappa = K = 1, H = 2
    R = mp.pi / 4
    d, v = argmin(2, 1, 1, window(R, 1, 1))
    show("cap n=2 R=pi/4 delta* (E)", d)
    show("cap n=2 R=pi/4 theorem A", 0.5 + fixed_point(v, 2, 1, 2) / 2)
    show("cap n=2 R=pi/4 theorem E", (1 + eps1(v, 2)) / 2)
    show("cap n=2 R=pi/4 theorem F (h=2)", 0.5 + fixed_point_mean(v, 2, 1, 2) / 2)
    d, v = argmin(1, mp.sqrt(2), 2, window(R, mp.sqrt(2), 2))
    show("cap n=2 R=pi/4 delta* (P)", d)
    show("cap n=2 R=pi/4 theorem C", 0.5 + fixed_point(v, 2, 1, 2) / 2)


def steklov_mode(kind, n, R, ell, r0=mp.mpf("1e-3")):
    """sigma(ell) = phi'(R)/phi(R) by Taylor-series integration of the radial equation for phi itself."""
    sgn = 1 if kind == "spherical" else -1
    f = mp.sin if kind == "spherical" else mp.sinh
    df = mp.cos if kind == "spherical" else mp.cosh
    lam = ell * (ell + n - 1)
    c = sgn * (n * ell + lam) / (3 * ((ell + 2) * (ell + 1) + n * (ell + 2) - lam))
    phi0 = r0**ell * (1 + c * r0**2)
    dphi0 = ell * r0 ** (ell - 1) + c * (ell + 2) * r0 ** (ell + 1)
    rhs = lambda r, y: [y[1], -n * df(r) / f(r) * y[1] + lam / f(r) ** 2 * y[0]]
    sol = mp.odefun(rhs, r0, [phi0, dphi0])
    phi, dphi = sol(R)
    return dphi / phi


if __name__ == "__main__":
    mp.mp.dps = 20
    for ell in (1, 2, 3):
        show(f"cap n=2 R=pi/4 sigma({ell})", steklov_mode("spherical", 2, mp.pi / 4, ell))
    show("hyperbolic n=3 R=0.6 sigma(1)", steklov_mode("hyperbolic", 3, mp.mpf("0.6"), 1))
    show("hyperbolic n=2 R=0.5 sigma(1)", steklov_mode("hyperbolic", 2, mp.mpf("0.5"), 1))
