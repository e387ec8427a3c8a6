#!/usr/bin/env python3
# ===========================================================
# Leading splitting asymptotics and the A sin(p tau) + B cos(q tau)
# pipeline:
# - splitting_leading with its three-part error budget
# - dominance_check: where the leading term actually dominates
# - arnold_pipeline end to end, analytic orders and a numeric
#   order-3 case (the latter integrates for ~15 s; --fast skips)
# ===========================================================
import math
import sys

from sepsplit import (
    arnold_pipeline,
    chi2,
    dominance_check,
    splitting_leading,
    validate_spec,
)

FAST = "--fast" in sys.argv[1:]

# ---- leading term of the splitting distance for the order-2 forcing
spec = validate_spec([(3, 10.0), (2, 8.0)])
chi = chi2(spec).value
ev = splitting_leading(chi, 2, mu=0.05, epsilon=0.1, u=0.0, tau=0.5 * math.pi)
print("20cos3t + 16cos2t, mu = 0.05, eps = 0.1, tau = pi/2:")
print(f"  leading term = {ev.leading:.15e}")
for name, value in ev.error_budget.as_dict().items():
    print(f"  budget {name:18s} = {value:.3e}")
print(f"  dominance: {dominance_check(ev)}")
print()

# ---- the asymptotic regime closes when mu or the log factor is too weak
print("mu = eps^m scaling, order 2:")
for eps in (0.2, 0.1, 0.05):
    for m in (1, 2):
        verdict = dominance_check(splitting_leading(chi, 2, eps**m, eps, 0.0, 0.5 * math.pi))
        print(f"  eps = {eps:5.2f}, mu = eps^{m}: {verdict}")
print()

# ---- two-harmonic pipeline, analytic orders
for p, q, A, B in [(2, 3, 1.0, 1.0), (1, 5, 2.0, 1.0)]:
    rep = arnold_pipeline(p, q, A, B)
    print(
        f"A sin({p}t) + B cos({q}t), A = {A:g}, B = {B:g}:  n = {rep.n},"
        f" Theta = {rep.theta:.10g}  ({rep.provenance})"
    )
print()

# ---- order 3 needs the solver; the plateau feeds Theta = 2 chi_3
if FAST:
    print("order-3 pipeline skipped (--fast)")
else:
    rep = arnold_pipeline(3, 5, 1.0, 1.0)
    print(f"A sin(3t) + B cos(5t), A = B = 1:  n = {rep.n}  ({rep.provenance})")
    print(f"  chi_3  = {rep.chi_n:.10g}")
    print(f"  Theta  = {rep.theta:.10g}")
