#!/usr/bin/env python3
# ===========================================================
# Forcing specs and their degeneracy combinatorics:
# - validate a trigonometric forcing and inspect its harmonics
# - walk the sumset ladder G_1, G_2, ... until 1 appears
# - degeneracy order n(g), a witness decomposition, and the
#   two-harmonic shortcut via a minimal Bezout pair
# - truncation cutoff for a forcing known only through a bound
# ===========================================================
from sepsplit import (
    bezout_order,
    degeneracy_order,
    sumset_ladder,
    truncation_cutoff,
    validate_spec,
)

# ---- a forcing with an order-2 degeneracy: 20 cos(3 tau) + 16 cos(2 tau)
spec = validate_spec([(3, 10.0), (2, 8.0)])
print("support:", list(spec.support))
print("g(0.7) =", spec.value(0.7))

report = degeneracy_order(spec)
for ell, g in enumerate(sumset_ladder(spec, report.order_n), start=1):
    print(f"G_{ell} = {sorted(g)}")
print("n(g) =", report.order_n)
print("witness: 1 =", " + ".join(f"({m})" for m in report.witness))
print()

# ---- pushing the first harmonic further out raises the order
for support in [(2, 3), (3, 5), (5, 7), (11, 13)]:
    spec = validate_spec([(k, 1.0) for k in support])
    rep = degeneracy_order(spec)
    print(f"support {support}: n = {rep.order_n}, witness {rep.witness}")
print()

# ---- for two coprime harmonics the order is a Bezout problem
for p, q in [(2, 3), (3, 5), (11, 13)]:
    b = bezout_order(p, q)
    print(f"({b.k1})*{p} + ({b.k2})*{q} = 1   |k1|+|k2| = {b.n}")
print()

# ---- infinite-support forcings: harmonics above M contribute < delta
# on the analyticity strip, so the ladder only needs k <= M
for delta in (1e-2, 1e-6, 1e-12):
    m = truncation_cutoff(g_norm=25.0, sigma0=1.0, delta=delta)
    print(f"delta = {delta:8.0e}  ->  keep harmonics up to M = {m}")
