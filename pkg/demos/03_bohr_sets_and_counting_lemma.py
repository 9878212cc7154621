"""Quadratic-multiplicative systems, Bohr sets, and the counting lemma.

A QM system Psi maps F_p into a product of circles: each coordinate
triple records a quadratic phase angle a x^2 / p, its derivative
2 a x / p, and a multiplicative character angle.  The closure of the
image is an exactly enumerable finite group H, and averages of
trigonometric polynomials along Psi equal their integrals over H up to
explicit error terms.  That is the engine behind the counting lemma:
restricted to a Bohr set S of Psi, the quadruple average of a composed
function F o Psi factors as mu(S) times an integral I(F) over H^2.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from fpharmonics import (QMSystem, TrigPoly, baby_count, bohr_set,
                         cached_field, check_bohr_density,
                         counting_lemma_check, enumerate_H, trig_norm)

p = 61
ctx = cached_field(p)
psi = QMSystem(ctx, [(1, 1)])

H = enumerate_H(psi)
print(f"H for the system (x^2/p, 2x/p, chi_1) at p = {p}:")
print(f"  |G+| = {len(H.gplus)}, |Gx| = {len(H.gtimes)}, |H| = {H.size}")

B = bohr_set(psi, Fraction(1, 2))
mu, floor = check_bohr_density(psi, Fraction(1, 2))
print(f"Bohr set B(Psi, 1/2): {len(B)} points, density {mu} >= floor {floor}")

rng = np.random.default_rng(2)
F = TrigPoly.random(1, rng, n_terms=3, max_freq=1)
print(f"\nrandom trig polynomial with norm M = {trig_norm(F)}")

lhs, rhs, margin = baby_count(psi, F)
print("single-average equidistribution (coefficient sum vs direct orbit):")
print(f"  E_x F(Psi(x)) = {lhs:.6f}, lattice-constrained sum = {rhs:.6f}")
print(f"  margin = {margin:.2e}")

rep = counting_lemma_check(psi, F, B, Fraction(1, 2))
print("\ncounting lemma margin audit:")
print(f"  |T(F o Psi, 1_S, ...) - mu(S) I(F)| = {rep.lhs:.3e}")
print(f"  audited budget = {rep.rhs:.3e}  (ok: {rep.ok()})")
