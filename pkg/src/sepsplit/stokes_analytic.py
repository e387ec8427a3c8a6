"""Closed-form Stokes constants at orders one and two.

The first two coefficients of the splitting constant chi(mu) have closed
expressions in the forcing harmonics:

    chi_1 = 4 pi g[1],
    chi_2 = -(4 pi / 3) sum_{k>1} g[k] g[1-k] / (k (1-k))
          = (2 pi / 3) (G^2)[1],   G the zero-mean primitive of g.

Both routes to chi_2 are implemented; their agreement is a standing check
on either formula and on the numerical solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .harmonics import PerturbationSpec

ANALYTIC = "analytic"
NUMERIC_PLATEAU = "numeric-plateau"


@dataclass(frozen=True)
class StokesCoefficient:
    """One Taylor-in-mu coefficient of the splitting constant."""

    order: int
    value: complex
    provenance: str  # ANALYTIC or NUMERIC_PLATEAU


def chi1(spec: PerturbationSpec) -> StokesCoefficient:
    """chi_1 = 4 pi g[1]; zero when 1 is not in the support."""
    return StokesCoefficient(1, 4.0 * math.pi * spec.coeff(1), ANALYTIC)


def chi2(spec: PerturbationSpec) -> StokesCoefficient:
    """chi_2 = -(4 pi / 3) sum_{k>1} g[k] g[1-k] / (k (1-k)).

    Only k with both k and k - 1 in the support contribute; g[1-k] is the
    conjugate of g[k-1].
    """
    support = set(spec.support)
    total = 0j
    for k in sorted(support):
        if k > 1 and (k - 1) in support:
            total += spec.coeff(k) * spec.coeff(1 - k) / (k * (1 - k))
    return StokesCoefficient(2, -(4.0 * math.pi / 3.0) * total, ANALYTIC)


def g_squared_first_harmonic(spec: PerturbationSpec) -> complex:
    """Harmonic [1] of G^2, where G is the zero-mean primitive of g.

    G[m] = g[m] / (i m) on the signed support; the square is a finite
    Fourier convolution.  (2 pi / 3) times this value equals chi_2, which
    makes it an independent oracle for the chi_2 sum.
    """
    signed = spec.signed_support()
    total = 0j
    for m in sorted(signed):
        r = 1 - m
        if r in signed:
            total += (spec.coeff(m) / (1j * m)) * (spec.coeff(r) / (1j * r))
    return total
