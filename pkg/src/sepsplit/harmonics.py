"""Fourier-side combinatorics of the periodic forcing.

A real-analytic zero-mean forcing g(tau) = sum_k g[k] e^{ik tau} is stored
through its harmonics with k >= 1 only; negative harmonics follow by
conjugation.  The order at which the forcing first feeds the dominant
splitting harmonic is the degeneracy order

    n(g) = min { l >= 1 : 1 in G_l },    G_l = G_1 + ... + G_1  (l copies),

where G_1 is the signed support of g.  For the two-harmonic Arnold forcing
A sin(p tau) + B cos(q tau) the same number equals the minimal |k1| + |k2|
over integer solutions of k1 p + k2 q = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class SpecError(ValueError):
    """Invalid forcing data."""


class ZeroMeanViolation(SpecError):
    """A k = 0 harmonic was supplied; the forcing must have zero mean."""


class EmptySpec(SpecError):
    """No nonzero harmonic present."""


class DuplicateHarmonic(SpecError):
    """The same harmonic index appears twice."""


class NonUnitGcd(SpecError):
    """gcd of the support exceeds 1: no sum of harmonics ever reaches 1."""


class NotCoprime(SpecError):
    """p and q share a factor, so k1 p + k2 q = 1 has no solution."""


class OrderExceedsBound(SpecError):
    """The sumset ladder did not reach 1 within the iteration bound."""


@dataclass(frozen=True)
class PerturbationSpec:
    """Zero-mean real-analytic forcing, stored through harmonics k >= 1.

    Parameters
    ----------
    coefficients : dict
        Maps integer k >= 1 to the complex Fourier coefficient g[k].
        Entries are nonzero; g[-k] = conj(g[k]) is implied.
    sigma0 : float
        Width of the analyticity strip in complex tau.
    """

    coefficients: dict[int, complex]
    sigma0: float = 1.0

    @property
    def support(self) -> tuple[int, ...]:
        """Positive harmonics carrying a nonzero coefficient, ascending."""
        return tuple(sorted(self.coefficients))

    @property
    def max_harmonic(self) -> int:
        return max(self.coefficients)

    def coeff(self, k: int) -> complex:
        """g[k] for any integer k, conjugating for k < 0."""
        if k == 0:
            return 0j
        if k > 0:
            return complex(self.coefficients.get(k, 0.0))
        return complex(self.coefficients.get(-k, 0.0)).conjugate()

    def signed_support(self) -> frozenset[int]:
        """G_1: support indices together with their negatives."""
        return frozenset(self.support) | frozenset(-k for k in self.support)

    def value(self, tau):
        """Evaluate g(tau).  Works on scalars and numpy arrays."""
        total = 0.0
        for k, c in self.coefficients.items():
            c = complex(c)
            total = total + 2.0 * (c.real * np.cos(k * tau) - c.imag * np.sin(k * tau))
        return total

    def scaled(self, factor: float) -> "PerturbationSpec":
        """Spec of factor * g (factor real, to preserve real analyticity)."""
        return PerturbationSpec(
            {k: factor * complex(c) for k, c in self.coefficients.items()}, self.sigma0
        )

    def cache_key(self) -> tuple:
        return (self.sigma0,) + tuple(
            (k, complex(self.coefficients[k])) for k in self.support
        )


@dataclass(frozen=True)
class DegeneracyReport:
    """Sumset ladder G_1..G_n, the degeneracy order, and a witness sum."""

    g_sets: tuple[frozenset[int], ...]
    order_n: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class BezoutOrder:
    """Bezout pair k1 p + k2 q = 1 with |k1| + |k2| minimal."""

    p: int
    q: int
    k1: int
    k2: int
    n: int


DEFAULT_LADDER_BOUND = 32


def validate_spec(raw, sigma0: float = 1.0) -> PerturbationSpec:
    """Build a PerturbationSpec from (k, coefficient) pairs.

    Negative-k entries are folded onto |k| by conjugation.  Zero coefficients
    are dropped after the duplicate check.  The surviving support must be
    nonempty and have gcd 1.

    Raises
    ------
    ZeroMeanViolation, DuplicateHarmonic, EmptySpec, NonUnitGcd
    """
    if sigma0 <= 0:
        raise SpecError("sigma0 must be positive")
    coeffs: dict[int, complex] = {}
    seen: set[int] = set()
    for k, value in raw:
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
            raise SpecError(f"harmonic index must be an integer, got {k!r}")
        k = int(k)
        value = complex(value)
        if k == 0:
            if value != 0:
                raise ZeroMeanViolation("k = 0 harmonic breaks the zero-mean hypothesis")
            continue
        kk, vv = (k, value) if k > 0 else (-k, value.conjugate())
        if kk in seen:
            raise DuplicateHarmonic(f"harmonic k = {kk} given twice")
        seen.add(kk)
        if vv != 0:
            coeffs[kk] = vv
    if not coeffs:
        raise EmptySpec("no nonzero harmonic in the spec")
    g = math.gcd(*coeffs)
    if g != 1:
        raise NonUnitGcd(f"support gcd is {g}; the fundamental period is 2*pi/{g}")
    return PerturbationSpec(coeffs, float(sigma0))


def sumset(a, b) -> frozenset[int]:
    """{x + y : x in a, y in b}."""
    return frozenset(x + y for x in a for y in b)


def sumset_ladder(spec: PerturbationSpec, length: int) -> tuple[frozenset[int], ...]:
    """G_1 .. G_length with G_{l+1} = G_l + G_1."""
    g1 = spec.signed_support()
    ladder = [g1]
    for _ in range(length - 1):
        ladder.append(sumset(ladder[-1], g1))
    return tuple(ladder)


def degeneracy_order(spec: PerturbationSpec, L_max: int = DEFAULT_LADDER_BOUND) -> DegeneracyReport:
    """Smallest n with 1 in G_n, plus the lexicographically least witness.

    Iterates the sumset ladder and backtracks a decomposition
    1 = m_1 + ... + m_n with every m_i in G_1, picking the smallest
    admissible m_i at each position.

    Raises
    ------
    OrderExceedsBound
        If 1 is not reached within L_max summands (cannot happen for a
        validated gcd-1 support with L_max large enough; kept as a guard).
    """
    if L_max < 1:
        raise SpecError("L_max must be at least 1")
    g1 = sorted(spec.signed_support())
    ladder = [frozenset(g1)]
    while 1 not in ladder[-1]:
        if len(ladder) >= L_max:
            raise OrderExceedsBound(f"1 not reachable with {L_max} summands")
        ladder.append(sumset(ladder[-1], ladder[0]))
    n = len(ladder)
    witness = []
    target = 1
    for remaining in range(n, 0, -1):
        if remaining == 1:
            witness.append(target)
            break
        reachable = ladder[remaining - 2]
        for m in g1:
            if target - m in reachable:
                witness.append(m)
                target -= m
                break
    return DegeneracyReport(tuple(ladder), n, tuple(witness))


def truncation_cutoff(g_norm: float, sigma0: float, delta: float) -> int:
    """Smallest M >= 0 with g_norm <= (delta/2) e^{M sigma0/2} (1 - e^{-sigma0/2}).

    Harmonics above M then contribute less than delta on the analyticity
    strip.  Finite-support forcings bypass this bound and truncate at their
    top support index.
    """
    if g_norm <= 0 or sigma0 <= 0 or delta <= 0:
        raise ValueError("g_norm, sigma0 and delta must all be positive")
    base = 0.5 * delta * -math.expm1(-0.5 * sigma0)
    if g_norm <= base:
        return 0
    m = max(0, math.ceil(2.0 / sigma0 * math.log(g_norm / base)))
    while m > 0 and g_norm <= base * math.exp(0.5 * sigma0 * (m - 1)):
        m -= 1
    while g_norm > base * math.exp(0.5 * sigma0 * m):
        m += 1
    return m


def _egcd(a: int, b: int) -> tuple[int, int]:
    # coefficients (x, y) with x*a + y*b = gcd(a, b)
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_x, x = x, old_x - quo * x
        old_y, y = y, old_y - quo * y
    return old_x, old_y


def bezout_order(p: int, q: int) -> BezoutOrder:
    """Bezout pair k1 p + k2 q = 1 minimizing |k1| + |k2|.

    |k1 + t q| + |k2 - t p| is convex in t, so scanning the integers
    between the two kinks -k1/q and k2/p (padded by one on each side)
    finds the global minimum.  Ties go to the smaller |k1|.
    """
    if p < 1 or q < 1:
        raise SpecError("p and q must be positive integers")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {math.gcd(p, q)}")
    k1, k2 = _egcd(p, q)
    kinks = (-k1 / q, k2 / p)
    best = None
    for t in range(math.floor(min(kinks)) - 1, math.ceil(max(kinks)) + 2):
        a, b = k1 + t * q, k2 - t * p
        cand = (abs(a) + abs(b), abs(a), a, b)
        if best is None or cand < best:
            best = cand
    return BezoutOrder(p, q, best[2], best[3], best[0])
