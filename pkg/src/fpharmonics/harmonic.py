"""Fourier analysis on F_p and the correlation norm hierarchy.

Signals are dense complex functions on F_p under the normalized measure
E_x = (1/p) * sum_x.  Four sup-correlation norms are provided:

  u2+  : sup over additive characters      max_r |f^(r)|
  u2x  : sup over multiplicative characters max_chi |<f, chi>|  (semi-norm:
         it vanishes on some nonzero signals, e.g. f(0) = -f(1) = 1)
  u3+  : sup over quadratic phases e_p(r x^2 + s x)
  QM   : sup over products (quadratic phase) * (multiplicative character)

They satisfy u2+ <= u3+ <= QM <= L1.  All four are exhaustive sups; u3+
and QM use the one-transform-per-quadratic-coefficient trick (multiply f
by conj(e_p(r x^2)), then one length-p additive transform covers every s).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .field import FieldCtx, MultChar, QuadPhase, mult_char_values, quad_phase_values


@dataclass(frozen=True)
class Signal:
    """A function F_p -> C stored densely, indexed by x = 0..p-1."""

    ctx: FieldCtx
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.ctx.p,):
            raise ValueError(f"expected {self.ctx.p} values, got {vals.shape}")

    @property
    def p(self) -> int:
        return self.ctx.p

    # Lq norms under the normalized measure E_x.
    def lp_norm(self, q: float) -> float:
        return float(np.mean(np.abs(self.values) ** q) ** (1.0 / q))

    def linf_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def mean(self) -> complex:
        return complex(np.mean(self.values))


def require_same_ctx(*signals: Signal) -> FieldCtx:
    ctx = signals[0].ctx
    for s in signals[1:]:
        if s.ctx.p != ctx.p:
            raise ValueError(f"field mismatch: p={ctx.p} vs p={s.ctx.p}")
    return ctx


def ones(ctx: FieldCtx) -> Signal:
    return Signal(ctx, np.ones(ctx.p, dtype=np.complex128))


def indicator(ctx: FieldCtx, subset) -> Signal:
    vals = np.zeros(ctx.p, dtype=np.complex128)
    for x in subset:
        vals[x % ctx.p] = 1.0
    return Signal(ctx, vals)


def random_signal(ctx: FieldCtx, rng: np.random.Generator,
                  kind: str = "gaussian", unit_l2: bool = False) -> Signal:
    """Seeded random Signal: complex gaussian, 'signs' (+-1), or 'bounded' (|f|<=1)."""
    if kind == "gaussian":
        vals = rng.standard_normal(ctx.p) + 1j * rng.standard_normal(ctx.p)
    elif kind == "signs":
        vals = rng.choice([-1.0, 1.0], size=ctx.p).astype(np.complex128)
    elif kind == "bounded":
        mag = rng.uniform(0.0, 1.0, size=ctx.p)
        arg = rng.uniform(0.0, 2 * np.pi, size=ctx.p)
        vals = mag * np.exp(1j * arg)
    else:
        raise ValueError(kind)
    f = Signal(ctx, vals)
    if unit_l2:
        n2 = f.lp_norm(2)
        if n2 > 0:
            f = Signal(ctx, f.values / n2)
    return f


# -- transforms ------------------------------------------------------------

@dataclass(frozen=True)
class AddSpectrum:
    """Additive spectrum: coefficients f^(r) = E_x f(x) e_p(-r x)."""

    ctx: FieldCtx
    coeffs: np.ndarray

    def parseval_check(self, f: Signal) -> float:
        return abs(float(np.sum(np.abs(self.coeffs) ** 2))
                   - float(np.mean(np.abs(f.values) ** 2)))


@dataclass(frozen=True)
class MultSpectrum:
    """Multiplicative spectrum: <f, chi_k> = E_{x in F} f(x) conj(chi_k(x)),
    the full-field average including the x = 0 term (chi(0) = 1)."""

    ctx: FieldCtx
    coeffs: np.ndarray  # length p-1, indexed by character index k


def add_transform(f: Signal) -> AddSpectrum:
    """f^(r) = E_x f(x) e_p(-r x).  np.fft matches this convention exactly."""
    return AddSpectrum(f.ctx, np.fft.fft(f.values) / f.p)


def add_invert(spec: AddSpectrum) -> Signal:
    """f(x) = sum_r f^(r) e_p(r x)."""
    return Signal(spec.ctx, np.fft.ifft(spec.coeffs) * spec.ctx.p)


def mult_transform(f: Signal) -> MultSpectrum:
    """All p-1 inner products <f, chi_k> at once.

    With h[a] = f(g^a), <f, chi_k> = (f(0) + sum_a h[a] e(-ka/(p-1))) / p,
    and the sum over a is a length-(p-1) additive transform of h.
    """
    ctx = f.ctx
    h = f.values[ctx.pow_g]
    coeffs = (f.values[0] + np.fft.fft(h)) / ctx.p
    return MultSpectrum(ctx, coeffs)


def convolve(f: Signal, g: Signal) -> Signal:
    """f * g(y) = E_x f(x) g(y - x); satisfies (f*g)^ = f^ g^."""
    ctx = require_same_ctx(f, g)
    vals = np.fft.ifft(np.fft.fft(f.values) * np.fft.fft(g.values)) / ctx.p
    return Signal(ctx, vals)


# -- sup-correlation norms -------------------------------------------------

class NormResult(NamedTuple):
    value: float
    witness: tuple  # maximizer parameters, lexicographically smallest


def _conj_quad_column(ctx: FieldCtx, r: int) -> np.ndarray:
    """conj(e_p(r x^2)) for x = 0..p-1."""
    x = np.arange(ctx.p, dtype=np.int64)
    return ctx.roots_p[(-r * x * x) % ctx.p]


def _conj_chi_matrix(ctx: FieldCtx) -> np.ndarray:
    """Matrix C[k, x] = conj(chi_k(x)), all k = 0..p-2 at once."""
    p = ctx.p
    C = np.ones((p - 1, p), dtype=np.complex128)
    ks = np.arange(p - 1, dtype=np.int64)[:, None]
    dl = ctx.dlog[1:][None, :]
    C[:, 1:] = ctx.roots_pm1[(-ks * dl) % (p - 1)]
    return C


def norm_u2_plus(f: Signal) -> NormResult:
    """max_r |f^(r)|; witness (r,), smallest r on ties."""
    mags = np.abs(add_transform(f).coeffs)
    r = int(np.argmax(mags))
    return NormResult(float(mags[r]), (r,))


def norm_u2_times(f: Signal) -> NormResult:
    """max_k |<f, chi_k>|; witness (k,).  A semi-norm (see module docstring)."""
    mags = np.abs(mult_transform(f).coeffs)
    k = int(np.argmax(mags))
    return NormResult(float(mags[k]), (k,))


def norm_u3_plus(f: Signal) -> NormResult:
    """max over quadratic phases e_p(r x^2 + s x) of |<f, phi>|; witness (r, s)."""
    p = f.p
    best_val, best_wit = -1.0, (0, 0)
    for r in range(p):
        mags = np.abs(np.fft.fft(f.values * _conj_quad_column(f.ctx, r))) / p
        s = int(np.argmax(mags))
        if mags[s] > best_val:
            best_val, best_wit = float(mags[s]), (r, s)
    return NormResult(best_val, best_wit)


def norm_qm(f: Signal) -> NormResult:
    """max over phi*chi, phi in Q(F), chi multiplicative; witness (r, s, k)."""
    p = f.p
    C = _conj_chi_matrix(f.ctx)
    best_val, best_wit = -1.0, (0, 0, 0)
    for r in range(p):
        q = f.values * _conj_quad_column(f.ctx, r)
        # rows: character index k, columns: x; transform over x covers all s
        mags = np.abs(np.fft.fft(C * q[None, :], axis=1)).T / p  # [s, k]
        flat = int(np.argmax(mags))
        s, k = divmod(flat, p - 1)
        if mags[s, k] > best_val:
            best_val, best_wit = float(mags[s, k]), (r, s, k)
    return NormResult(best_val, best_wit)


def inner_product(f: Signal, g: Signal) -> complex:
    """<f, g> = E_x f(x) conj(g(x))."""
    require_same_ctx(f, g)
    return complex(np.mean(f.values * np.conj(g.values)))


def qm_basis_signal(ctx: FieldCtx, r: int, s: int, k: int) -> Signal:
    """The product e_p(r x^2 + s x) * chi_k(x) as a Signal."""
    return Signal(ctx, quad_phase_values(ctx, QuadPhase(r, s))
                  * mult_char_values(ctx, MultChar(k)))


# -- JSON interchange ------------------------------------------------------

def signal_to_json(f: Signal) -> dict:
    return {"p": f.p, "values": [[float(v.real), float(v.imag)] for v in f.values]}


def signal_from_json(obj: dict, ctx: Optional[FieldCtx] = None) -> Signal:
    from .field import cached_field
    p = int(obj["p"])
    if ctx is None:
        ctx = cached_field(p)
    elif ctx.p != p:
        raise ValueError(f"ctx p={ctx.p} does not match payload p={p}")
    vals = np.array([complex(re, im) for re, im in obj["values"]])
    return Signal(ctx, vals)


def signal_dump(f: Signal, path) -> None:
    with open(path, "w") as fh:
        json.dump(signal_to_json(f), fh)


def signal_load(path, ctx: Optional[FieldCtx] = None) -> Signal:
    with open(path) as fh:
        return signal_from_json(json.load(fh), ctx)
