"""Exact arithmetic over the prime field F_p and character evaluation.

Characters follow two conventions used throughout the package:
  * additive: e_p(x) = exp(2*pi*i*x/p),
  * multiplicative: chi_k(g^a) = e(k*a/(p-1)) for the fixed primitive
    root g, extended to the whole field by chi(0) = 1.

All angle bookkeeping is integer arithmetic mod p or mod p-1; complex
values only appear through precomputed root-of-unity tables, so "is this
character trivial" questions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

MAX_TABLE_PRIME = 100_003  # largest p for which full tables are supported
MAX_GRID_PRIME = 2048      # largest p for which p x p index grids are built


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def smallest_factor(n: int) -> Optional[int]:
    """A nontrivial factor of n, or None when n is prime (n >= 2)."""
    if n < 2:
        return n
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1 if d == 2 else 2
    return None


def is_primitive_root(g: int, p: int, factors: list[int]) -> bool:
    return all(pow(g, (p - 1) // q, p) != 1 for q in factors)


@dataclass(frozen=True)
class FieldCtx:
    """Immutable context for F_p: primitive root, dlog table, root tables."""

    p: int
    g: int
    dlog: np.ndarray      # length p; dlog[x] = a with g^a = x; dlog[0] = -1
    pow_g: np.ndarray     # length p-1; pow_g[a] = g^a mod p
    roots_p: np.ndarray   # exp(2*pi*i*j/p), j = 0..p-1
    roots_pm1: np.ndarray # exp(2*pi*i*j/(p-1)), j = 0..p-2
    _grids: dict = field(default_factory=dict, compare=False, repr=False)

    # -- lazy p x p index grids used by the counting kernels ---------------
    def grid(self, kind: str) -> np.ndarray:
        """Index grid over (x, y): kind 'add' gives (x+y) mod p, 'mul' x*y mod p."""
        if self.p > MAX_GRID_PRIME:
            raise ValueError(f"p={self.p} too large for dense p x p grids")
        if kind not in self._grids:
            idx = np.arange(self.p, dtype=np.int64)
            if kind == "add":
                self._grids[kind] = (idx[:, None] + idx[None, :]) % self.p
            elif kind == "mul":
                self._grids[kind] = (idx[:, None] * idx[None, :]) % self.p
            else:
                raise ValueError(kind)
        return self._grids[kind]


def new_field(p: int) -> FieldCtx:
    """Build a FieldCtx for prime p, 3 <= p <= MAX_TABLE_PRIME.

    The primitive root is the smallest positive one, found by trial
    against the prime factors of p-1 (deterministic across runs).
    """
    if not isinstance(p, (int, np.integer)):
        raise TypeError(f"p must be an integer, got {type(p).__name__}")
    p = int(p)
    if p < 3:
        raise ValueError(f"p={p} too small (need p >= 3)")
    if p > MAX_TABLE_PRIME:
        raise ValueError(f"p={p} exceeds table bound {MAX_TABLE_PRIME}")
    w = smallest_factor(p)
    if w is not None:
        raise ValueError(f"p={p} is not prime: divisible by {w}")

    factors = prime_factors(p - 1)
    g = next(c for c in range(2, p) if is_primitive_root(c, p, factors))

    pow_g = np.empty(p - 1, dtype=np.int64)
    dlog = np.full(p, -1, dtype=np.int64)
    acc = 1
    for a in range(p - 1):
        pow_g[a] = acc
        dlog[acc] = a
        acc = acc * g % p
    roots_p = np.exp(2j * np.pi * np.arange(p) / p)
    roots_pm1 = np.exp(2j * np.pi * np.arange(p - 1) / (p - 1))
    return FieldCtx(p=p, g=g, dlog=dlog, pow_g=pow_g,
                    roots_p=roots_p, roots_pm1=roots_pm1)


@lru_cache(maxsize=64)
def cached_field(p: int) -> FieldCtx:
    return new_field(p)


@dataclass(frozen=True)
class MultChar:
    """Multiplicative character chi_k with chi(g^a) = e(ka/(p-1)), chi(0) = 1."""

    k: int

    def is_principal(self) -> bool:
        return self.k == 0


@dataclass(frozen=True)
class QuadPhase:
    """Quadratic phase x -> e_p(r*x^2 + s*x)."""

    r: int
    s: int


def eval_add_char(ctx: FieldCtx, r: int, x: int) -> complex:
    """e_p(r*x), by exact table lookup."""
    return ctx.roots_p[(r * x) % ctx.p]


def eval_mult_char(ctx: FieldCtx, chi: MultChar, x: int) -> complex:
    """chi(x) with the chi(0) = 1 convention."""
    x = x % ctx.p
    if x == 0:
        return complex(1.0)
    return ctx.roots_pm1[(chi.k * int(ctx.dlog[x])) % (ctx.p - 1)]


def eval_quad_phase(ctx: FieldCtx, phi: QuadPhase, x: int) -> complex:
    """e_p(r*x^2 + s*x)."""
    return ctx.roots_p[(phi.r * x * x + phi.s * x) % ctx.p]


# -- vectorized whole-field evaluations -----------------------------------

def add_char_values(ctx: FieldCtx, r: int) -> np.ndarray:
    """Array of e_p(r*x) for x = 0..p-1."""
    x = np.arange(ctx.p, dtype=np.int64)
    return ctx.roots_p[(r % ctx.p) * x % ctx.p]


def mult_char_values(ctx: FieldCtx, chi: MultChar) -> np.ndarray:
    """Array of chi(x) for x = 0..p-1 (chi(0) = 1)."""
    vals = np.empty(ctx.p, dtype=np.complex128)
    vals[0] = 1.0
    xs = np.arange(1, ctx.p, dtype=np.int64)
    vals[1:] = ctx.roots_pm1[(chi.k % (ctx.p - 1)) * ctx.dlog[xs] % (ctx.p - 1)]
    return vals


def quad_phase_values(ctx: FieldCtx, phi: QuadPhase) -> np.ndarray:
    """Array of e_p(r*x^2 + s*x) for x = 0..p-1."""
    x = np.arange(ctx.p, dtype=np.int64)
    return ctx.roots_p[((phi.r % ctx.p) * x * x + (phi.s % ctx.p) * x) % ctx.p]
