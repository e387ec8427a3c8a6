#!/usr/bin/env python3
# ===========================================================
# Stokes coefficients three ways:
# - closed forms chi_1, chi_2 for low degeneracy orders
# - the e^rho-amplified two-branch extraction on a rho grid,
#   which plateaus at chi_n once rho clears the transient
# - a higher-order forcing where only the numeric route exists
#
# The order-3 scan at the end integrates a coupled system of
# about 60 modes per branch and takes a few seconds per rho.
# Pass --fast to skip it.
# ===========================================================
import math
import sys

from sepsplit import (
    chi1,
    chi2,
    chi_estimate,
    degeneracy_order,
    g_squared_first_harmonic,
    plateau_scan,
    validate_spec,
)

FAST = "--fast" in sys.argv[1:]

# ---- order 1: chi_1 = 4 pi g^[1], and the solver reproduces it
spec = validate_spec([(1, 0.5)])  # cos(tau)
closed = chi1(spec).value
numeric = chi_estimate(spec, 1, 8.0)
print(f"cos(tau):  chi_1 closed  = {closed.real:.12f}")
print(f"           chi_1 numeric = {numeric.real:.12f}  (rho = 8)")
print(f"           rel diff      = {abs(numeric - closed) / abs(closed):.2e}")
print()

# ---- order 2: closed form, the square-route identity, and the plateau
spec = validate_spec([(3, 10.0), (2, 8.0)])  # 20 cos(3 tau) + 16 cos(2 tau)
closed = chi2(spec).value
print(f"20cos3t + 16cos2t:  n = {degeneracy_order(spec).order_n}")
print(f"  chi_2 closed       = {closed.real:.10f}   (exact 160 pi / 9 = {160 * math.pi / 9:.10f})")
print(f"  (2pi/3) (G^2)^[1]  = {((2 * math.pi / 3) * g_squared_first_harmonic(spec)).real:.10f}")

est = plateau_scan(spec, 2, tuple(float(r) for r in range(4, 11)))
print("  rho    |chi_2 estimate|   dev from closed")
for rho, value in zip(est.rho_grid, est.estimates):
    print(f"  {rho:4.1f}   {abs(value):15.10f}   {abs(abs(value) - abs(closed)) / abs(closed):9.2e}")
lo, hi = est.plateau_window
print(f"  plateau: {est.plateau_value.real:.10f} on rho in [{lo:.0f}, {hi:.0f}], spread {est.plateau_spread:.2e}")
print()

# ---- a degenerate chi_2 = 0 forcing: the estimate decays to zero
spec = validate_spec([(2, 0.5), (3, 0.5), (4, -1.0)])
print("cos2t + cos3t - 2cos4t:  chi_2 closed =", chi2(spec).value)
for rho in (4.0, 6.0, 8.0, 10.0):
    print(f"  rho = {rho:4.1f}   |estimate| = {abs(chi_estimate(spec, 2, rho)):.3e}")
print()

# ---- order 3: no closed form, the plateau is the answer
if FAST:
    print("order-3 scan skipped (--fast)")
else:
    spec = validate_spec([(5, 10.0), (3, 8.0)])  # 20 cos(5 tau) + 16 cos(3 tau)
    print(f"20cos5t + 16cos3t:  n = {degeneracy_order(spec).order_n}")
    est = plateau_scan(spec, 3, (4.0, 5.0, 6.0, 7.0, 8.0))
    for rho, value in zip(est.rho_grid, est.estimates):
        print(f"  rho = {rho:4.1f}   estimate = {value.real:+.7f}")
    print(f"  plateau: {est.plateau_value.real:.7f}, spread {est.plateau_spread:.2e}")
