"""Leading splitting asymptotics and the Arnold-example pipeline.

The derivative of the splitting distance in the rapidly forced pendulum
expands as

    d_u Delta = (2 e^{-pi/(2 eps)} / eps^2)
                [ Im(chi_n mu^n e^{i(tau - u/eps)}) + remainders ],

with remainders of relative size mu, mu e^{-pi/(2 eps)} / mu^n, and
1/log(1/eps).  This module evaluates the leading term with those remainder
magnitudes spelled out, decides whether the leading term actually
dominates, and runs the whole chain for the two-harmonic Arnold forcing
A sin(p tau) + B cos(q tau), where the degeneracy order is the minimal
Bezout weight of (p, q).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .harmonics import bezout_order, degeneracy_order, validate_spec
from .inner_solver import SolverConfig, plateau_scan
from .stokes_analytic import NUMERIC_PLATEAU, StokesCoefficient, chi1, chi2

ASYMPTOTIC_VALID = "asymptotic_valid"
DEGENERATE = "degenerate"

DOMINANCE_FACTOR = 10.0


class OrderMismatch(RuntimeError):
    """Bezout order and sumset degeneracy order disagree (a bug, not data)."""


@dataclass(frozen=True)
class ErrorBudget:
    """Order-of-magnitude remainder sizes, unit constants throughout."""

    next_mu_order: float
    second_exponential: float
    log_correction: float

    def as_dict(self) -> dict[str, float]:
        return {
            "next_mu_order": self.next_mu_order,
            "second_exponential": self.second_exponential,
            "log_correction": self.log_correction,
        }


@dataclass(frozen=True)
class SplittingEval:
    """Leading splitting term at one (mu, epsilon, u, tau)."""

    mu: float
    epsilon: float
    u: float
    tau: float
    n: int
    chi_n: complex
    leading: float
    error_budget: ErrorBudget


@dataclass(frozen=True)
class ArnoldReport:
    """End-to-end result for the forcing A sin(p tau) + B cos(q tau)."""

    p: int
    q: int
    A: float
    B: float
    n: int
    theta: complex
    chi_n: complex
    provenance: str
    samples: tuple[SplittingEval, ...]


def splitting_leading(
    chi_n: complex, n: int, mu: float, epsilon: float, u: float, tau: float
) -> SplittingEval:
    """Leading splitting derivative with its error budget.

    leading = (2 e^{-pi/(2 eps)} / eps^2) Im(chi_n mu^n e^{i(tau - u/eps)}).
    Budget entries are indicators with unit constants, not bounds:
    next_mu_order the mu^{n+1} tier, second_exponential the mu e^{-pi/eps}
    tier, log_correction the mu^n / ln(1/eps) tier.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError("mu must lie in [0, 1)")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    amp = 2.0 * math.exp(-math.pi / (2.0 * epsilon)) / epsilon**2
    leading = amp * (complex(chi_n) * mu**n * cmath.exp(1j * (tau - u / epsilon))).imag
    budget = ErrorBudget(
        next_mu_order=amp * mu ** (n + 1),
        second_exponential=2.0 / epsilon**2 * mu * math.exp(-math.pi / epsilon),
        log_correction=amp * mu**n / math.log(1.0 / epsilon),
    )
    return SplittingEval(mu, epsilon, u, tau, n, complex(chi_n), leading, budget)


def dominance_check(ev: SplittingEval, factor: float = DOMINANCE_FACTOR) -> str:
    """Does the leading term actually dominate its remainders?

    Compares the amplitude (2 e^{-pi/(2 eps)}/eps^2) |chi_n| mu^n of the
    leading oscillation (not the pointwise value, which vanishes at phase
    zeros) against every budget entry times `factor`.
    """
    if ev.chi_n == 0:
        return DEGENERATE
    amp = (
        2.0 * math.exp(-math.pi / (2.0 * ev.epsilon)) / ev.epsilon**2
        * abs(ev.chi_n) * ev.mu**ev.n
    )
    entries = (
        ev.error_budget.next_mu_order,
        ev.error_budget.second_exponential,
        ev.error_budget.log_correction,
    )
    if all(amp > factor * entry for entry in entries):
        return ASYMPTOTIC_VALID
    return DEGENERATE


_SAMPLE_TAUS = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)


def arnold_pipeline(
    p: int,
    q: int,
    A: float,
    B: float,
    cfg: SolverConfig | None = None,
    *,
    mu: float = 0.05,
    epsilon: float = 0.1,
) -> ArnoldReport:
    """Splitting constant Theta for the forcing A sin(p tau) + B cos(q tau).

    Builds the induced spec g[p] = -iA/2, g[q] = B/2, takes the degeneracy
    order from the minimal Bezout pair of (p, q), cross-checks it against
    the sumset ladder, computes chi_n (closed form for n <= 2, plateau scan
    otherwise) and reports Theta = 2 chi_n together with a few sampled
    splitting evaluations at the given (mu, epsilon).

    A degenerate outcome (chi_n = 0, or a forcing whose leading term fails
    dominance) is still a normal return; only inconsistent inputs raise.
    """
    bez = bezout_order(p, q)
    if p == q:
        raw = [(p, 0.5 * B - 0.5j * A)]
    else:
        raw = [(p, -0.5j * A), (q, 0.5 * B)]
    spec = validate_spec(raw)
    report = degeneracy_order(spec)
    if report.order_n != bez.n:
        raise OrderMismatch(
            f"bezout order {bez.n} but sumset degeneracy order {report.order_n}"
        )
    n = bez.n
    if n == 1:
        coeff: StokesCoefficient = chi1(spec)
        chi_value, provenance = coeff.value, coeff.provenance
    elif n == 2:
        coeff = chi2(spec)
        chi_value, provenance = coeff.value, coeff.provenance
    else:
        estimate = plateau_scan(spec, n, cfg=cfg)
        chi_value, provenance = estimate.plateau_value, NUMERIC_PLATEAU
    samples = tuple(
        splitting_leading(chi_value, n, mu, epsilon, 0.0, tau) for tau in _SAMPLE_TAUS
    )
    return ArnoldReport(
        p=p, q=q, A=float(A), B=float(B), n=n,
        theta=2.0 * chi_value, chi_n=chi_value,
        provenance=provenance, samples=samples,
    )
