"""The quadruple-counting average T and what controls it.

T(f1, f2, f3, f4) = E_{x,y in F_p} f1(x) f2(y) f3(x+y) f4(xy).  On
indicator functions, p^2 T counts pairs (x, y) such that x, y, x+y, xy
all land in the chosen sets, so T is the analytic handle on
monochromatic {x, y, x+y, xy} patterns.

Two facts demonstrated here:

  * T is NOT controlled by the classical u2+ or u3+ norms alone: there
    is a phased multiplicative-character quadruple whose individual
    norms are tiny yet T stays near 1.
  * The QM norm does control T (a generalised von Neumann bound with a
    calibrated constant), which is why the QM hierarchy exists.
"""

from __future__ import annotations

import numpy as np

from fpharmonics import (T, cached_field, census_quadruples, Coloring,
                         check_gvn_bounds, norm_u2_plus,
                         phased_character_example, random_signal)

p = 31
ctx = cached_field(p)

f1, f2, f3, f4, expected = phased_character_example(ctx)
value = T(f1, f2, f3, f4)
print(f"phased character example at p = {p}:")
print(f"  T        = {value:.12f}")
print(f"  expected = {expected:.12f}  (= ((p-1)^2 + 1) / p^2)")
print(f"  u2+ norms: {[round(norm_u2_plus(g).value, 4) for g in (f1, f2)]}"
      "  (tiny, yet T is near 1)")

rng = np.random.default_rng(1)
fs = [random_signal(ctx, rng, unit_l2=True) for _ in range(4)]
rep = check_gvn_bounds(*fs, which="u2plus")
print("\nu2+ von Neumann bound on random unit signals:")
print(f"  |T(f1,f2,f3,1)| = {rep.lhs:.6f} <= inf ||f_i||_u2+ = {rep.rhs:.6f}")

# Exact census: color F_p by quadratic residues and count monochromatic
# quadruples per color.
qr = {pow(t, 2, p) for t in range(1, p)}
assign = np.array([0 if x in qr else 1 for x in range(p)])
census = census_quadruples(ctx, Coloring(p, 2, assign))
print(f"\nquadratic-residue 2-coloring of F_{p}:")
print("  monochromatic quadruples per color:", census.per_color)
print("  total:", census.total, f"out of p^2 = {p * p} pairs")
