#!/usr/bin/env python3
"""Extended-precision reference values for the Mittag-Leffler evaluator.

Two independent routes, both in mpmath:

* ``series``  - the defining Taylor series summed at a working precision chosen
  from the largest term, truncated once a geometric bound on the term envelope
  below 1e-45 (relative to max(1, |sum|)).
* ``contour`` - Bromwich inversion of s^(g-s)/(s^g - z) on a parabola
  s(u) = mu (1 + i u)^2 with tanh-sinh quadrature, plus the residues of the
  poles lying to the right of the parabola.

Where both are feasible they are cross-checked to 1e-25. Output rows are
``gamma,sigma,z_re,z_im,e_re,e_im`` with 20 significant digits.

Run from the repository root:

    python3 crates/core/tests/oracle/ml_oracle.py
"""

import csv
import os
import random

from mpmath import mp, loggamma, mpf, mpc, gamma as mgamma, rgamma, exp, log, pi, quad, erfc, e, fabs, inf, sqrt, cosh, sinh, cos, sin

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "fixtures")


def ml_series(g, s, z):
    g = mpf(g)
    s = mpf(s)
    z = mpc(z)
    az = abs(z)
    # crude location of the largest term to size the working precision
    mp.dps = 30
    best = mpf(0)
    k = 0
    while True:
        lt = k * log(az) - log(fabs(mgamma(g * k + s))) if az > 0 else mpf(0)
        best = max(best, lt)
        if k > 5 and g * k + s > 3 and lt < best - 120:
            break
        k += 1
        if k > 20000:
            return None
    dps = int(50 + best / log(10))
    if dps > 400:
        return None
    mp.dps = dps
    total = mpc(0)
    zk = mpc(1)
    k = 0
    prev = None
    while True:
        term = zk * rgamma(g * k + s)
        total += term
        # k ln|z| - ln Gamma(g k + s) is concave in k, so once it decreases with
        # slope ln r < 0 the tail is bounded by a geometric series
        env = k * log(az) - loggamma(g * k + s)
        if prev is not None and g * k + s > 2 and env < prev:
            r = exp(env - prev)
            if exp(env) / (1 - r) < mpf(10) ** (-45) * max(1, abs(total)):
                break
        prev = env
        zk *= z
        k += 1
    mp.dps = 30
    return total


def _poles(g, z):
    """Poles of s^(g-s)/(s^g - z) on the principal sheet."""
    r = abs(z) ** (1 / g)
    th = mp.arg(z)
    out = []
    for j in range(-3, 4):
        ang = (th + 2 * pi * j) / g
        if -pi < ang <= pi:
            out.append(r * exp(mpc(0, 1) * ang))
    return out


def ml_contour(g, s, z, dps=40):
    mp.dps = dps
    g = mpf(g)
    s = mpf(s)
    z = mpc(z)
    poles = _poles(g, z)
    best = None
    # choose mu keeping the parabola away from every pole
    for mu in [mpf(x) / 4 for x in range(2, 60)]:
        dist = min([abs(p.real - (mu - p.imag ** 2 / (4 * mu))) for p in poles] + [mpf(10)])
        if best is None or dist > best[1] + mpf("0.05"):
            best = (mu, dist)
        if dist > 1 and mu > 1:
            best = (mu, dist)
            break
    mu = best[0]

    def f(u):
        sp = mu * (1 + mpc(0, 1) * u) ** 2
        dsp = 2 * mu * mpc(0, 1) * (1 + mpc(0, 1) * u)
        return exp(sp) * sp ** (g - s) / (sp ** g - z) * dsp

    integral = quad(f, [-inf, -4, -1, 0, 1, 4, inf]) / (2 * pi * mpc(0, 1))
    res = mpc(0)
    for p in poles:
        if p.real > mu - p.imag ** 2 / (4 * mu):
            res += p ** (1 - s) * exp(p) / g
    out = integral + res
    mp.dps = 30
    return out


def ml_ref(g, s, z):
    val = ml_series(g, s, z)
    if val is not None and abs(mpc(z)) <= 8:
        if abs(mpc(z)) > 0.5:
            alt = ml_contour(g, s, z)
            assert abs(alt - val) <= mpf(10) ** (-25) * max(1, abs(val)), (g, s, z, val, alt)
        return val
    return ml_contour(g, s, z, dps=45)


def star_contour_points(n, scale):
    # hyperbolic contour for beta = 1, varphi_s = pi/60, omega = omega_star, a0 = pi/6
    mp.dps = 30
    phis = pi - pi / 60
    om = phis - pi / 2
    a0 = pi / 6
    ai = a0 * cos(om / 2 - phis) / cos(phis)
    bi = a0 * sin(om / 2 - phis) / cos(phis)
    pts = []
    for i in range(n):
        xi = -3 + 6 * mpf(i) / (n - 1)
        zc = a0 - ai * cosh(xi) + mpc(0, 1) * bi * sinh(xi)
        pts.append(zc * scale)
    return pts


def fmt(x):
    return mp.nstr(x, 20, min_fixed=-1, max_fixed=-1) if x != 0 else "0"


def write(path, rows):
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "sigma", "z_re", "z_im", "e_re", "e_im"])
        for g, s, z, v in rows:
            w.writerow([repr(float(g)), repr(float(s)), repr(float(mpc(z).real)), repr(float(mpc(z).imag)), fmt(v.real), fmt(v.imag)])


def main():
    os.makedirs(FIXTURES, exist_ok=True)
    rng = random.Random(20240611)

    # --- small arguments: series oracle -------------------------------------------
    small = []
    for g, s in [(0.35, 1.65), (0.5, 1.0), (0.7, 1.0), (0.9, 1.0), (1.0, 1.0), (0.1, 1.0),
                 (0.25, 1.5), (0.6, 1.4), (0.95, 1.05), (0.8, 1.2)]:
        for _ in range(24):
            r = min(5.0, 300.0 ** g) * rng.random() ** 0.7
            th = rng.uniform(-3.1, 3.1)
            z = mpc(r * cos(th), r * sin(th))
            # module-contour inputs never sit on the negative axis; keep 1e-6 clear of it
            small.append((g, s, complex(z)))
    for zc in star_contour_points(21, 2.5):
        small.append((0.35, 1.65, complex(zc)))
    for zc in star_contour_points(21, 5.0):
        small.append((0.35, 1.65, complex(zc)))
    rows = []
    for g, s, z in small:
        z = complex(float(z.real), float(z.imag))
        v = ml_series(g, s, z)
        if v is None:
            continue
        rows.append((g, s, z, v))
    write(os.path.join(FIXTURES, "ml_series.csv"), rows)

    # --- large arguments: contour oracle -------------------------------------------
    big = []
    for g, s in [(0.35, 1.65), (0.5, 1.0), (0.7, 1.0), (0.9, 1.5), (1.0, 1.0), (1.0, 1.5),
                 (0.2, 1.0), (0.6, 1.9)]:
        for _ in range(16):
            r = 10 ** rng.uniform(0.0, 4.0)
            th = rng.uniform(-3.1, 3.1)
            # skip points whose value overflows double precision
            zz = mpc(r * cos(th), r * sin(th))
            if abs(th) < g * float(pi) and (r ** (1 / g)) * cos(th / g) > 600:
                continue
            big.append((g, s, complex(zz)))
    rows = []
    for g, s, z in big:
        z = complex(float(z.real), float(z.imag))
        rows.append((g, s, z, ml_ref(g, s, z)))
    write(os.path.join(FIXTURES, "ml_large.csv"), rows)

    # --- real axis, orders above one and sigma outside [1, 2) -----------------------------
    rows = []
    for a in [0.4, 0.8, 1.2, 1.5, 1.8]:
        for s in [1.0, 2.0, a + 2.0]:
            for x in [-0.3, -2.0, -9.5, -40.0, -160.0, -1000.0, 0.7, 3.0]:
                v = ml_series(a, s, x)
                if v is None:
                    continue
                rows.append((a, s, complex(x, 0.0), v))
    write(os.path.join(FIXTURES, "ml_real.csv"), rows)

    # --- sanity identity: E_{1/2,1}(-1) = e * erfc(1) ---------------------------------
    mp.dps = 40
    assert abs(ml_series(0.5, 1.0, -1) - e * erfc(1)) < mpf(10) ** (-28)
    print("wrote", len(small), "small and", len(big), "large reference points")


if __name__ == "__main__":
    main()
