"""Character-sum inputs: Gauss sums, Weil-type shifted products, mixed
quadratic x multiplicative sums, and the eight-fold U^3-style box sum.

All sums are direct loops (vectorized over x); the chi(0) = 1 convention
is used throughout, so Weil-type bounds carry a +t defect allowance (each
zero argument can shift the sum by at most 1 relative to the chi(0) = 0
normalization).
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .calibration import AUDIT_CONSTANTS
from .field import FieldCtx, MultChar, mult_char_values


def gauss_sum(ctx: FieldCtx, a: int, b: int) -> complex:
    """sum_x e_p(a x^2 + b x); modulus sqrt(p) for a != 0, 0 for a=0 b!=0,
    p for a=b=0 (asserted within 1e-8)."""
    p = ctx.p
    a, b = a % p, b % p
    x = np.arange(p, dtype=np.int64)
    s = complex(np.sum(ctx.roots_p[(a * x * x + b * x) % p]))
    if a != 0:
        expected = math.sqrt(p)
    elif b != 0:
        expected = 0.0
    else:
        expected = float(p)
    if abs(abs(s) - expected) > 1e-8:
        raise AssertionError(f"gauss modulus {abs(s)} != {expected}")
    return s


def weil_product_sum(ctx: FieldCtx, chis: Sequence[MultChar],
                     shifts: Sequence[int], distinct: bool = True) -> tuple:
    """(sum_x prod_i chi_i(x + h_i), bound (t-1) sqrt(p) + t).

    Requires t < p and at least one nonprincipal chi.  With distinct=True
    (the bound's hypothesis) the shifts must be pairwise distinct and the
    bound is asserted; with distinct=False repeated shifts are allowed and
    the bound is only reported.  The +t term absorbs the chi(0) = 1
    convention defect.
    """
    p = ctx.p
    t = len(chis)
    if t != len(shifts):
        raise ValueError("one shift per character")
    if t >= p:
        raise ValueError("need t < p")
    hs = [h % p for h in shifts]
    if distinct and len(set(hs)) != t:
        raise ValueError("shifts must be distinct")
    if all(chi.is_principal() for chi in chis):
        raise ValueError("at least one chi must be nonprincipal")
    x = np.arange(p, dtype=np.int64)
    prod = np.ones(p, dtype=np.complex128)
    for chi, h in zip(chis, hs):
        prod *= mult_char_values(ctx, chi)[(x + h) % p]
    s = complex(np.sum(prod))
    bound = (t - 1) * math.sqrt(p) + t
    if distinct and abs(s) > bound + 1e-9:
        raise AssertionError(f"Weil bound violated: |{abs(s)}| > {bound}")
    return s, bound


def mixed_sum(ctx: FieldCtx, a: int, b: int, chi: MultChar, chi_prime: MultChar,
              h: int) -> tuple:
    """(E_x e_p(a x^2 + b x) chi(x) chi'(x+h), magnitude).

    h != 0 and the fully degenerate input (a = b = 0 with both characters
    principal) is rejected.  The audited budget is c * p^{-1/16}.
    """
    p = ctx.p
    a, b, h = a % p, b % p, h % p
    if h == 0:
        raise ValueError("need h != 0")
    if a == 0 and b == 0 and chi.is_principal() and chi_prime.is_principal():
        raise ValueError("degenerate input: trivial phase and characters")
    x = np.arange(p, dtype=np.int64)
    vals = (ctx.roots_p[(a * x * x + b * x) % p]
            * mult_char_values(ctx, chi)
            * mult_char_values(ctx, chi_prime)[(x + h) % p])
    s = complex(np.mean(vals))
    return s, abs(s)


def check_mixed_sum(ctx: FieldCtx, a: int, b: int, chi: MultChar,
                    chi_prime: MultChar, h: int):
    """mixed_sum plus the audited-budget assertion."""
    from .counting import MarginReport
    s, mag = mixed_sum(ctx, a, b, chi, chi_prime, h)
    c = AUDIT_CONSTANTS["mixed_sum_c"]
    rhs = c * ctx.p ** (-1 / 16)
    rep = MarginReport("mixed_sum", mag, rhs, {"sum": s, "c": c})
    if not rep.ok():
        raise AssertionError(f"mixed sum magnitude {mag} over budget {rhs}")
    return rep


def u3_box_sum(ctx: FieldCtx, chi: MultChar, chi_prime: MultChar, h: int) -> float:
    """The eight-fold correlation

      E_{x, z1, z2, z3} prod_{w in {0,1}^3} C^{|w|} chi(x + w.z) chi'(x + h + w.z)

    (C = conjugation), i.e. ||chi(.) chi'(. + h)||_{U^3}^8.  Real up to
    rounding.  Asserted against the derived budget
    7/sqrt(p) + 34/p (Weil term for nondegenerate shift triples plus the
    degenerate-triple and convention-defect allowance).
    """
    p = ctx.p
    h = h % p
    if h == 0:
        raise ValueError("need h != 0")
    if p > 61:
        raise ValueError("O(p^4) loop capped at p = 61")
    x = np.arange(p, dtype=np.int64)
    base = mult_char_values(ctx, chi) * mult_char_values(ctx, chi_prime)[(x + h) % p]
    total = 0.0 + 0.0j
    cube = list(itertools.product((0, 1), repeat=3))
    xg = x[:, None]
    z3g = x[None, :]
    for z1 in range(p):
        for z2 in range(p):
            prod = np.ones((p, p), dtype=np.complex128)
            for w in cube:
                arg = (xg + w[0] * z1 + w[1] * z2 + w[2] * z3g) % p
                f = base[arg]
                prod *= np.conj(f) if (w[0] + w[1] + w[2]) % 2 else f
            total += np.sum(prod)
    val = float(np.real(total)) / p**4
    budget = (AUDIT_CONSTANTS["u3box_weil"] / math.sqrt(p)
              + AUDIT_CONSTANTS["u3box_degenerate"] / p)
    if val > budget + 1e-9:
        raise AssertionError(f"u3 box sum {val} over budget {budget}")
    return val
