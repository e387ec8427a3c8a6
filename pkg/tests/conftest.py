"""Shared helpers: seeded random forcing specs and a seed-residual probe."""

import math

import numpy as np

from sepsplit import InverseZSeries, chi2, degeneracy_order, seed_series, validate_spec


def random_coeff(rng, lo=0.5, hi=2.5):
    """Complex coefficient with magnitude in [lo, hi] and random phase."""
    r = rng.uniform(lo, hi)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    return r * complex(math.cos(phase), math.sin(phase))


def random_support(rng, kmax=9, size_max=4):
    """Random positive support with gcd 1 (redraws until the gcd closes)."""
    while True:
        size = int(rng.integers(1, size_max + 1))
        ks = sorted(rng.choice(np.arange(1, kmax + 1), size=size, replace=False))
        if math.gcd(*[int(k) for k in ks]) == 1:
            return [int(k) for k in ks]


def random_spec(rng, kmax=8):
    """Random validated spec; support always contains a consecutive pair.

    The consecutive pair keeps the order-2 coefficient generically nonzero,
    so relative comparisons stay meaningful.
    """
    k = int(rng.integers(1, kmax))
    support = {k, k + 1}
    if rng.random() < 0.5:
        support.add(int(rng.integers(1, kmax + 1)))
    return validate_spec([(k, random_coeff(rng)) for k in sorted(support)])


def random_spec_order2(rng, kmax=5):
    """Random spec with degeneracy order exactly 2 and at most 3 harmonics.

    Built around an adjacent pair (k, k+1) with k >= 2, optionally plus one
    extra harmonic that avoids k = 1.  Redraws until the order-2 coefficient
    is comfortably away from zero.
    """
    while True:
        k = int(rng.integers(2, kmax))
        support = {k, k + 1}
        if rng.random() < 0.4:
            support.add(int(rng.integers(2, kmax + 1)))
        spec = validate_spec([(j, random_coeff(rng)) for j in sorted(support)])
        if degeneracy_order(spec).order_n != 2:
            continue
        if abs(chi2(spec).value) > 1.0:
            return spec


def seed_residual_slope(k, g_k, order_N, radii):
    """Log-log decay slope of the seed-series residual ik f + f' - h.

    f is the order-N formal solution for the right-hand side -2 g_k / z^2;
    f' keeps the full derivative (one order longer than f), so the residual
    is exactly the first neglected recurrence term, of size z^{-(N+1)}.
    """
    h = [0j] * order_N
    h[1] = -2.0 * complex(g_k)
    f = seed_series(k, InverseZSeries(tuple(h)))
    dcoeffs = [0j] + [-l * c for l, c in enumerate(f.coeffs, start=1)]
    radii = np.asarray(radii, float)
    resid = np.empty(len(radii))
    for i, r in enumerate(radii):
        z = complex(r)
        fp = sum(c / z**l for l, c in enumerate(dcoeffs, start=1))
        resid[i] = abs(1j * k * f.eval(z) + fp - (-2.0 * complex(g_k) / z**2))
    slope, _ = np.polyfit(np.log(radii), np.log(resid), 1)
    return float(slope)


def spec_from_amplitudes(entries):
    """validate_spec sugar: entries are (k, cosine amplitude) pairs."""
    return validate_spec([(k, 0.5 * a) for k, a in entries])
