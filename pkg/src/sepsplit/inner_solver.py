"""Inner-equation solver: seeding, coupled complex-path integration, and
Stokes-constant extraction.

The inner equation

    d_tau psi + d_z psi = (1/8) z^2 (d_z psi)^2 - 2 mu g(tau) / z^2

is expanded in powers of mu and Fourier modes in tau,
psi_j(z, tau) = sum_k psi_j^[k](z) e^{ik tau}, which turns each mode into a
linear ODE fed by lower orders:

    ik psi_j^[k] + d_z psi_j^[k] = h_j^[k],
    h_1^[k] = -2 g[k] / z^2,
    h_j^[k] = (z^2/8) sum_{l=1}^{j-1} sum_m  d_z psi_l^[m] d_z psi_{j-l}^[k-m].

Two solutions are singled out by decay as Re z -> +inf (branch "+") or
Re z -> -inf (branch "-").  Both are seeded far out on the horizontal line
Im z = -rho from truncated 1/z series and integrated to the shared endpoint
z = -i rho, where the amplified jump

    chi_n ~ e^rho (psi_n^{-,[1]} - psi_n^{+,[1]})(-i rho)

sits on a plateau in rho until e^rho amplification of roundoff takes over.
Derivatives are recovered algebraically, d_z psi = h - ik psi, instead of
co-integrating explicit derivative ODEs; the explicit formulation survives
in integrate_branch_derivative_odes as a cross-check for orders <= 2.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from .harmonics import PerturbationSpec, degeneracy_order, sumset_ladder
from .series import InverseZSeries

WORKERS_ENV = "SEPSPLIT_WORKERS"

DEFAULT_RHO_GRID = (4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0)
PLATEAU_RHO_MAX = 10.0
PLATEAU_WARN_SPREAD = 0.02
PLATEAU_FAIL_SPREAD = 0.10
RHO_MIN = 2.0
RHO_MAX = 16.0


class SolverError(Exception):
    """Inner-solver failure."""


class NonDecayingAverage(SolverError):
    """A k = 0 right-hand side carries a 1/z term; its antiderivative grows."""


class MissingMode(SolverError):
    """RHS assembly needs a mode that the state does not carry."""


class StepSizeUnderflow(SolverError):
    """The integrator could not proceed at the requested tolerances."""


class SeedOutOfRange(SolverError):
    """|z0| too small for the seed series accuracy (requires R >= 2N)."""


class NoPlateau(SolverError):
    """No contiguous rho window with an acceptably flat |chi| estimate."""


class ModeIndex(NamedTuple):
    """Taylor order j in mu and Fourier harmonic k."""

    j: int
    k: int


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs for the inner-equation integration.

    Parameters
    ----------
    series_order_N : int
        Truncation order of the asymptotic seed series.
    re_z0 : float
        Seeding abscissa R; branches start at +-R - i rho.
    ode_rel_tol, ode_abs_tol : float
        Adaptive integrator tolerances; must be at most 1e-6.
    max_step : float or None
        Step bound for the adaptive integrator.  None picks 0.1 / k_max,
        resolving the fastest tracked oscillation.
    fixed_step : float or None
        When set, integrate with the classical fixed-step fourth-order
        scheme at this step instead (bit-reproducible runs).
    """

    series_order_N: int = 20
    re_z0: float = 40.0
    ode_rel_tol: float = 1e-12
    ode_abs_tol: float = 1e-13
    max_step: float | None = None
    fixed_step: float | None = None

    def __post_init__(self):
        if self.series_order_N < 4:
            raise ValueError("series_order_N must be at least 4")
        if self.re_z0 <= 0:
            raise ValueError("re_z0 must be positive")
        for name in ("ode_rel_tol", "ode_abs_tol"):
            v = getattr(self, name)
            if not 0.0 < v <= 1e-6:
                raise ValueError(f"{name} must lie in (0, 1e-6]")
        if self.max_step is not None and self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.fixed_step is not None and self.fixed_step <= 0:
            raise ValueError("fixed_step must be positive")


@dataclass
class InnerState:
    """Mode values psi_j^[k] at one point of the integration path."""

    z: complex
    values: dict[ModeIndex, complex]


@dataclass(frozen=True)
class StokesEstimate:
    """chi_n estimates over a rho grid plus the detected plateau."""

    rho_grid: tuple[float, ...]
    estimates: tuple[complex, ...]
    plateau_value: complex
    plateau_window: tuple[float, float]
    plateau_spread: float

    @property
    def flagged(self) -> bool:
        """True when the plateau spread exceeds the 2% warning level."""
        return self.plateau_spread > PLATEAU_WARN_SPREAD


def seed_series(k: int, rhs: InverseZSeries) -> InverseZSeries:
    """Formal decaying solution f of ik f + f' = rhs as a 1/z series.

    For k != 0 the recurrence ik f_l = h_l + (l-1) f_{l-1}, f_0 = 0,
    determines every coefficient.  k = 0 is a termwise antiderivative
    f_l = -h_{l+1}/l; it needs h_1 = 0, and the last coefficient stays
    zero because h_{N+1} is beyond the truncation.
    """
    h = rhs.coeffs
    n = len(h)
    out = [0j] * n
    if k == 0:
        if h[0] != 0:
            raise NonDecayingAverage(
                "1/z term in a k = 0 right-hand side has no decaying antiderivative"
            )
        for l in range(1, n):
            out[l - 1] = -h[l] / l
        return InverseZSeries(tuple(out))
    prev = 0j
    for l in range(1, n + 1):
        prev = (h[l - 1] + (l - 1) * prev) / (1j * k)
        out[l - 1] = prev
    return InverseZSeries(tuple(out))


def rhs_order1(spec: PerturbationSpec, k: int, z: complex) -> complex:
    """Order-1 right-hand side -2 g[k] / z^2."""
    if z == 0:
        raise ValueError("z = 0 is the singularity of the inner equation")
    return -2.0 * spec.coeff(k) / (z * z)


def rhs_convolution(spec: PerturbationSpec, j: int, k: int, state: InnerState) -> complex:
    """(z^2/8) sum_{l=1}^{j-1} sum_m d_z psi_l^[m] d_z psi_{j-l}^[k-m].

    m runs over G_l with k - m in G_{j-l}; derivatives come from
    derivative_recover, so the state must carry all orders below j.
    """
    if j < 2:
        raise ValueError("convolution right-hand side starts at order 2")
    ladder = sumset_ladder(spec, j - 1)
    total = 0j
    for l in range(1, j):
        for m in sorted(ladder[l - 1]):
            km = k - m
            if km not in ladder[j - l - 1]:
                continue
            total += derivative_recover(spec, l, m, state) * derivative_recover(
                spec, j - l, km, state
            )
    z = complex(state.z)
    return z * z / 8.0 * total


def derivative_recover(spec: PerturbationSpec, j: int, k: int, state: InnerState) -> complex:
    """d_z psi_j^[k] = h_j^[k] - ik psi_j^[k], recursing through lower orders.

    Algebraic replacement for co-integrated derivative ODEs: the mode value
    itself determines its derivative through the equation.
    """
    mode = ModeIndex(j, k)
    if mode not in state.values:
        raise MissingMode(f"state lacks mode (j={j}, k={k})")
    h = rhs_order1(spec, k, state.z) if j == 1 else rhs_convolution(spec, j, k, state)
    return h - 1j * k * state.values[mode]


def delta_in_first_order(spec: PerturbationSpec, z: complex) -> complex:
    """Closed-form order-1 branch difference at harmonic 1: 4 pi g[1] e^{-iz}."""
    z = complex(z)
    if not z.imag < 0:
        raise ValueError("the branch difference is evaluated below the real axis")
    return 4.0 * math.pi * spec.coeff(1) * np.exp(-1j * z)


def mode_table(spec: PerturbationSpec, n: int, window: str = "gsets") -> tuple[ModeIndex, ...]:
    """Tracked modes: k in G_j per order for "gsets", all |k| <= j K for "full"."""
    if window not in ("gsets", "full"):
        raise ValueError("window must be 'gsets' or 'full'")
    ladder = sumset_ladder(spec, n)
    modes = []
    for j in range(1, n + 1):
        if window == "gsets":
            ks = sorted(ladder[j - 1])
        else:
            kj = j * spec.max_harmonic
            ks = list(range(-kj, kj + 1))
        modes.extend(ModeIndex(j, k) for k in ks)
    return tuple(modes)


class _ConvPlan(NamedTuple):
    src1: np.ndarray  # global mode index of the first factor
    src2: np.ndarray  # global mode index of the second factor
    starts: np.ndarray  # reduceat segment starts into the pair list
    outs: np.ndarray  # block-local output positions, one per segment


class _ModeSystem:
    """Mode table, asymptotic seeds, and convolution plans for one forcing."""

    def __init__(self, spec: PerturbationSpec, n: int, cfg: SolverConfig, window: str = "gsets"):
        self.spec = spec
        self.n = n
        self.cfg = cfg
        self.modes = mode_table(spec, n, window)
        self.index = {m: i for i, m in enumerate(self.modes)}
        self.kvec = np.array([m.k for m in self.modes], float)
        self.ik = 1j * self.kvec
        self.kmax = max(1.0, float(np.max(np.abs(self.kvec))))
        self.blocks: list[tuple[int, int]] = []
        pos = 0
        for j in range(1, n + 1):
            width = sum(1 for m in self.modes if m.j == j)
            self.blocks.append((pos, pos + width))
            pos += width
        b0, b1 = self.blocks[0]
        self.g1 = np.array([spec.coeff(m.k) for m in self.modes[b0:b1]], complex)
        self.plans = [self._build_plan(j) for j in range(2, n + 1)]
        self._build_seeds()

    def _build_plan(self, j: int) -> _ConvPlan:
        lo, hi = self.blocks[j - 1]
        outs_l, src1, src2 = [], [], []
        for out_local, mode in enumerate(self.modes[lo:hi]):
            for l in range(1, j):
                alo, ahi = self.blocks[l - 1]
                for a in range(alo, ahi):
                    partner = ModeIndex(j - l, mode.k - self.modes[a].k)
                    b = self.index.get(partner)
                    if b is not None:
                        outs_l.append(out_local)
                        src1.append(a)
                        src2.append(b)
        outs_l = np.asarray(outs_l, np.intp)
        outs, starts = np.unique(outs_l, return_index=True)
        return _ConvPlan(
            np.asarray(src1, np.intp), np.asarray(src2, np.intp), np.asarray(starts, np.intp), outs
        )

    def _build_seeds(self):
        # guard terms absorb the two orders lost at each z^2 shift, so the
        # first series_order_N coefficients of every seed are exact
        L = self.cfg.series_order_N + 2 * self.n
        seeds: list[InverseZSeries] = []
        derivs: list[InverseZSeries] = []
        for j, (lo, hi) in enumerate(self.blocks, start=1):
            if j == 1:
                for mode in self.modes[lo:hi]:
                    h = [0j] * L
                    h[1] = -2.0 * self.spec.coeff(mode.k)
                    f = seed_series(mode.k, InverseZSeries(tuple(h)))
                    seeds.append(f)
                    derivs.append(f.differentiate())
                continue
            plan = self.plans[j - 2]
            conv = [InverseZSeries.zero(L) for _ in range(hi - lo)]
            for out_local, a, b in zip(
                np.repeat(plan.outs, np.diff(np.append(plan.starts, len(plan.src1)))),
                plan.src1,
                plan.src2,
            ):
                conv[out_local] = conv[out_local] + derivs[a] * derivs[b]
            for out_local, mode in enumerate(self.modes[lo:hi]):
                h = 0.125 * conv[out_local].times_z_power(2)
                f = seed_series(mode.k, h)
                seeds.append(f)
                derivs.append(f.differentiate())
        N = self.cfg.series_order_N
        self.seeds = tuple(s.truncated(N) for s in seeds)
        self.seed_derivs = tuple(d.truncated(N) for d in derivs)

    def seeds_at(self, z0: complex) -> np.ndarray:
        return np.array([s.eval(z0) for s in self.seeds], complex)

    def dvec(self, z: complex, psi: np.ndarray) -> np.ndarray:
        """Derivative vector d_z psi for all modes, ascending in order."""
        d = np.empty(len(psi), complex)
        b0, b1 = self.blocks[0]
        d[b0:b1] = -2.0 / (z * z) * self.g1 - self.ik[b0:b1] * psi[b0:b1]
        coef = z * z / 8.0
        for (lo, hi), plan in zip(self.blocks[1:], self.plans):
            h = np.zeros(hi - lo, complex)
            if plan.src1.size:
                prod = d[plan.src1] * d[plan.src2]
                h[plan.outs] = np.add.reduceat(prod, plan.starts)
            d[lo:hi] = coef * h - self.ik[lo:hi] * psi[lo:hi]
        return d


def _branch_sign(branch) -> int:
    if branch in ("+", +1, "plus"):
        return 1
    if branch in ("-", -1, "minus"):
        return -1
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def _check_geometry(rho: float, cfg: SolverConfig):
    if rho < RHO_MIN:
        raise ValueError(f"rho = {rho} below the inner regime (need rho >= {RHO_MIN})")
    if cfg.re_z0 <= 2.0 * rho:
        raise ValueError(f"re_z0 = {cfg.re_z0} must exceed 2 rho = {2 * rho}")
    if cfg.re_z0 < 2.0 * cfg.series_order_N:
        raise SeedOutOfRange(
            f"re_z0 = {cfg.re_z0} too small for series order {cfg.series_order_N}; need R >= 2N"
        )


def _run_branch(system: _ModeSystem, sign: int, rho: float, cfg: SolverConfig, s_eval=None):
    """Integrate one branch; returns the final mode vector, or the sampled
    trajectory (s_grid, matrix) when s_eval is given."""
    _check_geometry(rho, cfg)
    R = cfg.re_z0
    z0 = sign * R - 1j * rho
    direction = -sign
    y0 = system.seeds_at(z0)

    def fun(s, y):
        return direction * system.dvec(z0 + direction * s, y)

    if cfg.fixed_step is not None:
        n_steps = max(1, math.ceil(R / cfg.fixed_step))
        if n_steps > 50_000_000:
            raise StepSizeUnderflow(f"fixed step {cfg.fixed_step} needs {n_steps} steps")
        h = R / n_steps
        want = None
        if s_eval is not None:
            want = {min(n_steps, round(s / h)): s for s in s_eval}
        y = y0.copy()
        samples = []
        if want is not None and 0 in want:
            samples.append((0.0, y.copy()))
        for i in range(n_steps):
            s = i * h
            k1 = fun(s, y)
            k2 = fun(s + 0.5 * h, y + 0.5 * h * k1)
            k3 = fun(s + 0.5 * h, y + 0.5 * h * k2)
            k4 = fun(s + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if want is not None and (i + 1) in want:
                samples.append(((i + 1) * h, y.copy()))
        if not np.isfinite(y).all():
            raise StepSizeUnderflow("non-finite state after fixed-step integration")
        if s_eval is not None:
            grid = np.array([s for s, _ in samples])
            return grid, np.array([v for _, v in samples])
        return y

    sol = solve_ivp(
        fun,
        (0.0, R),
        y0,
        method="DOP853",
        rtol=cfg.ode_rel_tol,
        atol=cfg.ode_abs_tol,
        max_step=cfg.max_step if cfg.max_step is not None else 0.1 / system.kmax,
        t_eval=None if s_eval is None else np.asarray(s_eval, float),
    )
    if not sol.success:
        raise StepSizeUnderflow(f"adaptive integration failed: {sol.message}")
    if not np.isfinite(sol.y[:, -1]).all():
        raise StepSizeUnderflow("non-finite state after adaptive integration")
    if s_eval is not None:
        return sol.t, sol.y.T
    return sol.y[:, -1]


def _state_from_vector(system: _ModeSystem, z: complex, y: np.ndarray) -> InnerState:
    return InnerState(z, {m: complex(y[i]) for i, m in enumerate(system.modes)})


def integrate_branch(
    spec: PerturbationSpec,
    n: int,
    branch,
    rho: float,
    cfg: SolverConfig | None = None,
    *,
    mode_window: str = "gsets",
) -> InnerState:
    """Integrate all modes of one lateral solution to z = -i rho.

    Branch "+" seeds at +R - i rho and walks left; "-" seeds at -R - i rho
    and walks right.  All orders j <= n advance as one coupled system, so
    the convolution at order j consumes same-z lower-order values.
    """
    cfg = cfg or SolverConfig()
    sign = _branch_sign(branch)
    system = _ModeSystem(spec, n, cfg, mode_window)
    y = _run_branch(system, sign, rho, cfg)
    return _state_from_vector(system, -1j * rho, y)


def branch_path(
    spec: PerturbationSpec,
    n: int,
    branch,
    rho: float,
    cfg: SolverConfig | None = None,
    *,
    mode_window: str = "gsets",
    samples: int = 33,
) -> list[InnerState]:
    """Sampled trajectory of integrate_branch, for diagnostics and the
    support-confinement check."""
    cfg = cfg or SolverConfig()
    sign = _branch_sign(branch)
    system = _ModeSystem(spec, n, cfg, mode_window)
    s_grid = np.linspace(0.0, cfg.re_z0, samples)
    grid, mat = _run_branch(system, sign, rho, cfg, s_eval=s_grid)
    z0 = sign * cfg.re_z0 - 1j * rho
    return [_state_from_vector(system, z0 - sign * s, row) for s, row in zip(grid, mat)]


def chi_estimate(
    spec: PerturbationSpec,
    n: int,
    rho: float,
    cfg: SolverConfig | None = None,
    *,
    mode_window: str = "gsets",
) -> complex:
    """e^rho-amplified jump of the (n, 1) mode between the lateral branches."""
    cfg = cfg or SolverConfig()
    report = degeneracy_order(spec)
    if n != report.order_n:
        raise ValueError(f"n = {n} but the forcing has degeneracy order {report.order_n}")
    if not RHO_MIN <= rho <= RHO_MAX:
        raise ValueError(f"rho must lie in [{RHO_MIN}, {RHO_MAX}]")
    system = _ModeSystem(spec, n, cfg, mode_window)
    y_plus = _run_branch(system, +1, rho, cfg)
    y_minus = _run_branch(system, -1, rho, cfg)
    i1 = system.index[ModeIndex(n, 1)]
    return complex(math.exp(rho) * (y_minus[i1] - y_plus[i1]))


def _chi_task(task):
    spec, n, rho, cfg = task
    return chi_estimate(spec, n, rho, cfg)


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def parallel_map(fn, tasks: list):
    """Map fn over tasks, in worker processes when SEPSPLIT_WORKERS > 1."""
    count = _worker_count()
    if count == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(count, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def _spread(values) -> float:
    mags = [abs(v) for v in values]
    mx = max(mags)
    return 0.0 if mx == 0 else (mx - min(mags)) / mx


def plateau_scan(
    spec: PerturbationSpec,
    n: int,
    rho_grid=DEFAULT_RHO_GRID,
    cfg: SolverConfig | None = None,
    *,
    include_unstable: bool = False,
) -> StokesEstimate:
    """chi_estimate over a rho grid plus plateau detection.

    The plateau is the widest contiguous window of at least 3 grid points
    whose |estimate| spread (max pairwise relative deviation) stays below
    10%; among windows of equal width the flattest wins.  Grid points with
    rho > 10 are computed but excluded from the window search unless
    include_unstable is set, since e^rho cancellation wrecks them.  The
    reported value is the window midpoint estimate; spreads above 2% only
    flag the estimate, they do not reject it.

    Grid entries run in parallel when the SEPSPLIT_WORKERS environment
    variable is an integer above 1; otherwise sequentially.
    """
    grid = tuple(float(r) for r in rho_grid)
    if len(grid) < 4:
        raise ValueError("rho_grid needs at least 4 points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("rho_grid must be strictly ascending")
    estimates = parallel_map(_chi_task, [(spec, n, rho, cfg) for rho in grid])
    eligible = [
        i for i, rho in enumerate(grid) if include_unstable or rho <= PLATEAU_RHO_MAX
    ]
    if len(eligible) < 3:
        raise NoPlateau(
            f"only {len(eligible)} grid points at rho <= {PLATEAU_RHO_MAX}; need 3 for a window"
        )
    best = None
    for width in range(len(eligible), 2, -1):
        candidates = []
        for start in range(len(eligible) - width + 1):
            idx = eligible[start : start + width]
            spread = _spread([estimates[i] for i in idx])
            if spread < PLATEAU_FAIL_SPREAD:
                candidates.append((spread, idx))
        if candidates:
            best = min(candidates, key=lambda c: c[0])
            break
    if best is None:
        raise NoPlateau("no contiguous window of 3+ points with |chi| spread below 10%")
    spread, idx = best
    mid = idx[(len(idx) - 1) // 2]
    return StokesEstimate(
        rho_grid=grid,
        estimates=tuple(estimates),
        plateau_value=estimates[mid],
        plateau_window=(grid[idx[0]], grid[idx[-1]]),
        plateau_spread=spread,
    )


def integrate_branch_derivative_odes(
    spec: PerturbationSpec,
    n: int,
    branch,
    rho: float,
    cfg: SolverConfig | None = None,
) -> tuple[InnerState, dict[ModeIndex, complex]]:
    """Alternative formulation co-integrating explicit derivative ODEs.

    Tracks phi = d_z psi (and d_z^2 psi at order 1) as independent unknowns:

        order 1:  phi'  = -ik phi  + 4 g[k]/z^3,
                  phi2' = -ik phi2 - 12 g[k]/z^4,
        order 2:  phi'  = -ik phi + (z/4) sum dpsi dpsi
                                   + (z^2/4) sum ddpsi dpsi,

    while psi at order 2 consumes the tracked phi instead of the algebraic
    recovery.  Supported for n <= 2; serves as a cross-check oracle for
    derivative_recover.  Returns the final state and the tracked d_z psi.
    """
    cfg = cfg or SolverConfig()
    if n > 2:
        raise ValueError("explicit derivative ODEs implemented for orders <= 2 only")
    sign = _branch_sign(branch)
    system = _ModeSystem(spec, n, cfg, "gsets")
    _check_geometry(rho, cfg)
    R = cfg.re_z0
    z0 = sign * R - 1j * rho
    direction = -sign

    b0, b1 = system.blocks[0]
    m1 = b1 - b0
    m_all = len(system.modes)
    m2 = m_all - m1
    ik1 = system.ik[b0:b1]
    g1 = system.g1
    plan = system.plans[0] if n == 2 else None
    ik2 = system.ik[b1:] if n == 2 else None

    def rhs(s, y):
        z = z0 + direction * s
        psi1 = y[:m1]
        phi1 = y[m_all : m_all + m1]
        phi1b = y[m_all + m1 : m_all + 2 * m1]
        out = np.empty_like(y)
        out[:m1] = -2.0 / (z * z) * g1 - ik1 * psi1
        out[m_all : m_all + m1] = -ik1 * phi1 + 4.0 / z**3 * g1
        out[m_all + m1 : m_all + 2 * m1] = -ik1 * phi1b - 12.0 / z**4 * g1
        if n == 2:
            psi2 = y[m1:m_all]
            phi2 = y[m_all + 2 * m1 :]
            conv = np.zeros(m2, complex)
            dconv = np.zeros(m2, complex)
            if plan.src1.size:
                conv[plan.outs] = np.add.reduceat(phi1[plan.src1] * phi1[plan.src2], plan.starts)
                dconv[plan.outs] = np.add.reduceat(
                    phi1b[plan.src1] * phi1[plan.src2], plan.starts
                )
            out[m1:m_all] = z * z / 8.0 * conv - ik2 * psi2
            out[m_all + 2 * m1 :] = -ik2 * phi2 + z / 4.0 * conv + z * z / 4.0 * dconv
        return direction * out

    y0 = np.concatenate(
        [
            system.seeds_at(z0),
            np.array([system.seed_derivs[i].eval(z0) for i in range(m1)], complex),
            np.array(
                [system.seed_derivs[i].differentiate().eval(z0) for i in range(m1)], complex
            ),
            np.array(
                [system.seed_derivs[m1 + i].eval(z0) for i in range(m2)], complex
            ),
        ]
    )
    sol = solve_ivp(
        rhs,
        (0.0, R),
        y0,
        method="DOP853",
        rtol=cfg.ode_rel_tol,
        atol=cfg.ode_abs_tol,
        max_step=cfg.max_step if cfg.max_step is not None else 0.1 / system.kmax,
    )
    if not sol.success:
        raise StepSizeUnderflow(f"adaptive integration failed: {sol.message}")
    y = sol.y[:, -1]
    state = _state_from_vector(system, -1j * rho, y[:m_all])
    derivs = {
        mode: complex(y[m_all + i if mode.j == 1 else m_all + m1 + i])
        for i, mode in enumerate(system.modes)
    }
    return state, derivs
