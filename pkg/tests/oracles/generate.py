"""Regenerate the frozen oracle values used by the test suite.

Run ``python3 tests/oracles/generate.py``; it prints Python literals. All values
come from mpmath at extended precision and never touch the package code,
except for the regression fixtures at the end, which are marked as such.
"""

import mpmath as mp

mp.mp.dps = 50


def ml_series(alpha, beta, z, dps=None):
    """Defining series summed until terms fall below 1e-40."""
    alpha, beta, z = mp.mpf(alpha), mp.mpf(beta), mp.mpf(z)
    with mp.workdps(dps or 30 + int(abs(float(z)) ** (1.0 / float(alpha)) / 2.0)):
        s, n = mp.mpf(0), 0
        while True:
            t = z ** n * mp.rgamma(alpha * n + beta)
            s += t
            if n > 10 and abs(t) < mp.mpf(10) ** -40 and alpha * n > 2 * abs(z) ** (1 / alpha):
                return s
            n += 1


def ml_cut(alpha, beta, x):
    """E_{alpha,beta}(-x) for 1 < alpha < 2 from the Hankel cut integral plus pole residues."""
    a, b, x = mp.mpf(alpha), mp.mpf(beta), mp.mpf(x)
    pa = mp.pi * a

    def integrand(r):
        num = r ** a * mp.sin(mp.pi * b) - x * mp.sin(mp.pi * (a - b))
        den = r ** (2 * a) + 2 * x * r ** a * mp.cos(pa) + x ** 2
        return mp.exp(-r) * r ** (a - b) * num / den

    peak = x ** (1 / a)
    # r = w^k near the origin removes the r^(a-b) endpoint singularity
    k = int(mp.ceil(1 / (1 + a - b))) + 1
    head = mp.quad(lambda w: integrand(w ** k) * k * w ** (k - 1), [0, (peak / 2) ** (mp.mpf(1) / k)])
    cut = (head + mp.quad(integrand, [peak / 2, peak, 2 * peak, mp.inf])) / mp.pi
    s = peak * mp.expjpi(1 / a)
    return cut + 2 * mp.re(s ** (1 - b) * mp.exp(s)) / a


def envelope_sup(alpha, beta, p, lo, hi):
    """Golden-section maximum of x^p |E(-x)| on [lo, hi] with mpmath values."""
    f = lambda x: x ** p * abs(ml_series(alpha, beta, -x))
    g = (mp.sqrt(5) - 1) / 2
    a, b = mp.mpf(lo), mp.mpf(hi)
    while b - a > mp.mpf(10) ** -12:
        c, d = b - g * (b - a), a + g * (b - a)
        if f(c) > f(d):
            b = d
        else:
            a = c
    return f((a + b) / 2), (a + b) / 2


def grid_argmax(alpha, beta, p, lo=1e-8, hi=60, n=1500):
    xs = [mp.mpf(lo) * (mp.mpf(hi) / lo) ** (mp.mpf(i) / n) for i in range(n + 1)]
    vals = [x ** p * abs(ml_series(alpha, beta, -x)) for x in xs]
    i = max(range(len(vals)), key=lambda j: vals[j])
    return xs[max(i - 1, 0)], xs[min(i + 1, n)]


def weight_quad(alpha, lam, a, b):
    """int_a^b s^(alpha-1) E_{alpha,alpha}(-lam s^alpha) ds."""
    f = lambda s: s ** (alpha - 1) * ml_series(alpha, alpha, -lam * s ** alpha, dps=30)
    return mp.quad(f, [a, b])


if __name__ == "__main__":
    print("E_1.5_1.5_m2 =", mp.nstr(ml_series(1.5, 1.5, -2), 20))
    print("E_1.5_1.5_mpi2 =", mp.nstr(ml_series(1.5, 1.5, -mp.pi ** 2), 20))
    print("B_04_03 =", mp.nstr(mp.beta(mp.mpf("0.4"), mp.mpf("0.3")), 20))
    # large-argument values from the cut integral, checked against the series at x = 5
    for a, b in [(1.5, 1.0), (1.5, 2.0), (1.5, 1.5), (1.25, 1.0), (1.75, 2.5), (1.9, 1.9)]:
        assert abs(ml_cut(a, b, 5) - ml_series(a, b, -5)) < 1e-25, (a, b, ml_cut(a, b, 5) - ml_series(a, b, -5))
        vals = [mp.nstr(ml_cut(a, b, x), 20) for x in (1e2, 1e4, 1e6, 1e8)]
        print(f"cut[{a}, {b}] =", vals)
    for a, b, p in [(1.5, 1.5, 0.5), (1.5, 1.0, 0.0), (1.5, 2.0, 0.0)]:
        lo, hi = grid_argmax(a, b, p)
        v, x = envelope_sup(a, b, p, lo, hi)
        print(f"sup[{a}, {b}, {p}] =", mp.nstr(v, 20), "at", mp.nstr(x, 12))
    lam = mp.pi ** 2
    t = [mp.mpf(j) / 8 for j in range(9)]
    ws = [weight_quad(1.5, lam, t[8] - t[j + 1], t[8] - t[j]) for j in range(8)]
    print("weights_1.5_pi2_uniform8 =", [mp.nstr(w, 20) for w in ws])
    f = lambda s: ml_series(1.5, 1, lam * s ** mp.mpf(1.5), dps=60) - 10 ** 6
    print("illposed_crossing =", mp.nstr(mp.findroot(f, 3.09), 20))
