"""Pair-coloring densities, dependent random choice, and direct searches.

The combinatorial side of the package works in exact rational
arithmetic.  Lambda_T(A) is the density of 'corner' triples a pair set
A contains; the extremal colorings of F_2^r show its decay 4^{-r} is
attained.  find_rich_color extracts, from any coloring with few
uncolored pairs, a color class of triple density at least eps_r^2,
via dependent random choice.  On the integer side, a backtracking
search finds the largest interval [1, N] that a 2-coloring can keep
free of monochromatic {x, y, x+y, xy} quadruples, and exhaustive scans
over F_p colorings pin the minimum quadruple counts at small p.
"""

from __future__ import annotations

from fpharmonics import (cached_field, eps_r, extremal_coloring,
                         find_rich_color, fp_coloring_scan,
                         interval_backtrack, interval_sweep)

col = extremal_coloring(2)
print("extremal coloring of F_2^2 x F_2^5 with 5 classes:")
print(f"  Lambda(class 0) = {col.lam(0)} = 4^-2, all others = 0")

i, v = find_rich_color(col, mode="constructive")
print(f"  rich color found constructively: class {i},"
      f" Lambda = {v} >= eps_5^2 = {eps_r(5) ** 2}")

print("\ninterval search, 2 colors, repeats allowed:")
sweep = interval_sweep(2, 45)
print(f"  largest satisfiable N = {sweep['last_sat']}"
      " (first unsatisfiable interval follows immediately)")
res = interval_backtrack(sweep["last_sat"], 2)
print(f"  certificate coloring of [1, {sweep['last_sat']}]:")
print(f"  {list(res.coloring)}")

print("\nexhaustive minimum monochromatic quadruple counts, 2 colors:")
for p in (5, 7):
    out = fp_coloring_scan(cached_field(p), 2)
    print(f"  p = {p}: min = {out['min']} quadruples"
          f" ({out['min_over_p2']:.4f} of p^2), over 2^{p} colorings")
