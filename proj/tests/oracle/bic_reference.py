#!/usr/bin/env python3
"""Independent reference values for the C++ test suite.

Computes, with mpmath at 50 digits, the constants that are frozen into
tests/test_model_selection.cpp and tests/acceptance.cpp:

  * Gaussian mixed-model BIC for the four-point line dataset {0,1,10,11}
    clustered as {0,1} | {10,11}
  * von Mises mixed-model BIC for the K=1 clustering of {0 deg, 90 deg}
    and for the K=2 / K=1 clusterings of {5, 355, 175, 185} deg
  * a small table of modified Bessel I0/I1 values

Run:  python3 tests/oracle/bic_reference.py
"""

import mpmath as mp

mp.mp.dps = 50


def gaussian_bic(clusters, q):
    """BIC of a shared-variance isotropic Gaussian mixture fitted to the
    given hard clustering.  `clusters` is a list of lists of q-dim tuples."""
    n = sum(len(c) for c in clusters)
    k = len(clusters)
    sse = mp.mpf(0)
    for c in clusters:
        mean = [sum(p[d] for p in c) / len(c) for d in range(q)]
        for p in c:
            sse += sum((p[d] - mean[d]) ** 2 for d in range(q))
    sigma2 = sse / (n - k)
    lnl = (
        -q * n / mp.mpf(2) * mp.log(2 * mp.pi * sigma2)
        - (n - k) / mp.mpf(2)
        + sum(len(c) * mp.log(len(c)) for c in clusters)
        - n * mp.log(n)
    )
    penalty = (k - 1 + q * k + 1) * mp.log(n)
    return lnl, penalty, -2 * lnl + penalty


def circular_mean(angles):
    s = sum(mp.sin(a) for a in angles) / len(angles)
    c = sum(mp.cos(a) for a in angles) / len(angles)
    return mp.atan2(s, c)


def von_mises_bic(clusters):
    """BIC of a shared-kappa von Mises mixture fitted to the given hard
    clustering of angles (radians)."""
    n = sum(len(c) for c in clusters)
    k = len(clusters)
    means = [circular_mean(c) for c in clusters]
    rbar = sum(mp.cos(a - means[i]) for i, c in enumerate(clusters) for a in c) / n
    kappa = 1 / (2 * (1 - rbar))
    lnl = (
        -n * mp.log(2 * mp.pi * mp.besseli(0, kappa))
        + kappa * n * rbar
        + sum(len(c) * mp.log(len(c)) for c in clusters)
        - n * mp.log(n)
    )
    penalty = 2 * k * mp.log(n)
    return kappa, lnl, penalty, -2 * lnl + penalty


def show(label, *vals):
    print(label)
    for name, v in vals:
        print(f"  {name:<12} {mp.nstr(v, 20)}")


deg = mp.pi / 180

show("1 - cos(40 deg)", ("value", 1 - mp.cos(40 * deg)))

lnl, pen, bic = gaussian_bic([[(0,), (1,)], [(10,), (11,)]], q=1)
show("gaussian bic, {0,1},{10,11}", ("lnL", lnl), ("penalty", pen), ("bic", bic))

kappa, lnl, pen, bic = von_mises_bic([[0 * deg, 90 * deg]])
show("von mises bic, K=1 {0,90} deg", ("kappa", kappa), ("lnL", lnl),
     ("penalty", pen), ("bic", bic))

two = von_mises_bic([[5 * deg, 355 * deg], [175 * deg, 185 * deg]])
one = von_mises_bic([[5 * deg, 355 * deg, 175 * deg, 185 * deg]])
show("von mises bic, K=2 {5,355}|{175,185} deg",
     ("kappa", two[0]), ("lnL", two[1]), ("penalty", two[2]), ("bic", two[3]))
show("von mises bic, K=1 {5,355,175,185} deg",
     ("kappa", one[0]), ("lnL", one[1]), ("penalty", one[2]), ("bic", one[3]))

print("modified Bessel table")
for z in ["0.1", "1", "5", "14.9", "15.1", "50", "300", "700"]:
    zz = mp.mpf(z)
    print(f"  I0({z}) = {mp.nstr(mp.besseli(0, zz), 20)}")
    print(f"  I1({z}) = {mp.nstr(mp.besseli(1, zz), 20)}")
for z in ["1e3", "1e6", "5e11"]:
    zz = mp.mpf(z)
    print(f"  log I0({z}) = {mp.nstr(mp.log(mp.besseli(0, zz)), 20)}")
