"""Arbitrary-precision polylogarithm values at roots of unity and the
projections used for regulator verdicts.

Precision policy: public entry points take a precision in bits; internal
arithmetic runs at twice that plus guard bits, and every result carries an
explicit error budget (a rigorous truncation bound plus a rounding
allowance), so reported "below tolerance" verdicts account for the
numerics.

The class of a complex number w modulo the real line (2 pi i)^(k+1) R is
represented by its real part for even k and by i Im(w) for odd k.  That is
the convention of the single-valued polylogarithms (Bloch-Wigner in weight
two), and it is the one under which the kernel relations verified here
hold.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath
from mpmath import mp

from .errors import PrecisionError
from .exact import as_rational, bernoulli_number
from .modular import Divisor, PolylogCombo, polylog_coefficients, residue_zero_divisor

__all__ = [
    "BigComplex",
    "CollapseCheck",
    "KernelRelationResidual",
    "embeddings",
    "hurwitz_zeta",
    "zeta_value",
    "li_at_root_of_unity",
    "twist_projection",
    "evaluate_polylog_combo",
    "kernel_relation_residual",
    "verify_polylog_collapse",
]

_GUARD_BITS = 30
_MAX_CUTOFF = 1 << 20
_MAX_CORRECTIONS = 400


@dataclass(frozen=True)
class BigComplex:
    """An arbitrary-precision complex value with its working precision and a
    rigorous upper bound on the distance to the true value."""

    value: mpmath.mpc
    prec_bits: int
    error_bound: mpmath.mpf

    @property
    def real(self) -> mpmath.mpf:
        return self.value.real

    @property
    def imag(self) -> mpmath.mpf:
        return self.value.imag

    def digits(self) -> int:
        return max(1, int(self.prec_bits * 0.30103))

    def real_str(self) -> str:
        return mpmath.nstr(self.value.real, self.digits())

    def imag_str(self) -> str:
        return mpmath.nstr(self.value.imag, self.digits())

    def error_str(self) -> str:
        return mpmath.nstr(self.error_bound, 5)


def _workbits(prec_bits: int) -> int:
    if prec_bits < 8:
        raise ValueError("precision must be at least 8 bits")
    return 2 * prec_bits + _GUARD_BITS


def _em_parameters(s: int, x: float, target_log2: float) -> tuple[int, int]:
    """Smallest (cutoff, corrections) with a rigorous remainder below target.

    The remainder after q correction terms is bounded by
    2.42 * (s)_{2q+1} / (2 pi)^(2q+1) * (M+x)^(-s-2q) / (s+2q),
    evaluated here in log2 with conservative rounding.
    """
    log2pi = math.log2(2 * math.pi)
    lgamma_s = math.lgamma(s)
    cutoff = 16
    while cutoff <= _MAX_CUTOFF:
        log2mx = math.log2(cutoff + x)
        previous = math.inf
        for q in range(1, _MAX_CORRECTIONS + 1):
            rising = (math.lgamma(s + 2 * q + 1) - lgamma_s) / math.log(2)
            bound = (
                math.log2(2.42)
                + rising
                - (2 * q + 1) * log2pi
                - (s + 2 * q) * log2mx
                - math.log2(s + 2 * q)
            )
            if bound <= target_log2:
                return cutoff, q
            if bound >= previous:
                break  # the correction terms started growing; enlarge the cutoff
            previous = bound
        cutoff *= 2
    raise PrecisionError(
        f"cannot reach 2^{target_log2:.0f} for zeta({s}, {x}) within the caps"
    )


_zeta_cache: dict[tuple[int, Fraction, int], "BigComplex"] = {}
_cache_lock = threading.Lock()


def hurwitz_zeta(s: int, x, prec_bits: int = 200) -> BigComplex:
    """zeta(s, x) = sum_{n>=0} (n+x)^(-s) for integer s >= 2 and rational
    x in (0, 1], by Euler-Maclaurin with a rigorous remainder bound."""
    if not isinstance(s, int) or s < 2:
        raise ValueError("s must be an integer >= 2")
    x = as_rational(x)
    if not 0 < x <= 1:
        raise ValueError("x must lie in (0, 1]")
    key = (s, x, prec_bits)
    cached = _zeta_cache.get(key)
    if cached is not None:
        return cached
    wb = _workbits(prec_bits)
    target_log2 = -(wb - 10)
    cutoff, q = _em_parameters(s, float(x), target_log2)
    with mp.workprec(wb):
        xm = mp.mpf(x.numerator) / x.denominator
        total = mp.mpf(0)
        for n in range(cutoff):
            total += (n + xm) ** (-s)
        mx = cutoff + xm
        total += mx ** (1 - s) / (s - 1)
        total += mx ** (-s) / 2
        # correction terms B_{2j}/(2j)! * (s)_{2j-1} * (M+x)^(-s-2j+1)
        rising = mp.mpf(s)  # (s)_1
        power = mx ** (-s - 1)
        inv_mx2 = mx ** (-2)
        for j in range(1, q + 1):
            if j > 1:
                rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
                power *= inv_mx2
            b = bernoulli_number(2 * j)
            term = (
                mp.mpf(b.numerator)
                / b.denominator
                / mp.factorial(2 * j)
                * rising
                * power
            )
            total += term
        rising_rem = rising * (s + 2 * q - 1) * (s + 2 * q)
        remainder = (
            mp.mpf("2.42")
            * rising_rem
            / (2 * mp.pi) ** (2 * q + 1)
            * mx ** (-s - 2 * q)
            / (s + 2 * q)
        )
        rounding = abs(total) * mp.mpf(2) ** (-(wb - 10)) * (cutoff + q + 8)
        result = BigComplex(mp.mpc(total), prec_bits, remainder + rounding)
    with _cache_lock:
        _zeta_cache[key] = result
    return result


def zeta_value(s: int, prec_bits: int = 200) -> BigComplex:
    """The Riemann zeta value zeta(s) = zeta(s, 1)."""
    return hurwitz_zeta(s, 1, prec_bits)


_li_cache: dict[tuple[int, int, int, int], "BigComplex"] = {}


def li_at_root_of_unity(w: int, p: int, q: int, prec_bits: int = 200) -> BigComplex:
    """Li_w(exp(2 pi i p/q)) for integer weight w >= 2.

    Splitting the defining sum over residues mod q gives
    q^(-w) sum_{m=1}^{q} exp(2 pi i p m / q) zeta(w, m/q); this is exact and
    reduces everything to Hurwitz zeta values at rational arguments.
    """
    if not isinstance(w, int) or w < 2:
        raise ValueError("weight must be an integer >= 2")
    if q < 1:
        raise ValueError("q must be >= 1")
    ratio = Fraction(p % q, q)
    p, q = ratio.numerator, ratio.denominator
    if p == 0:
        return zeta_value(w, prec_bits)
    key = (w, p, q, prec_bits)
    cached = _li_cache.get(key)
    if cached is not None:
        return cached
    wb = _workbits(prec_bits)
    with mp.workprec(wb):
        total = mp.mpc(0)
        err = mp.mpf(0)
        scale = mp.mpf(q) ** (-w)
        for m in range(1, q + 1):
            z = hurwitz_zeta(w, Fraction(m, q), prec_bits)
            angle = Fraction(2 * ((p * m) % q), q)
            phase = mpmath.expjpi(mp.mpf(angle.numerator) / angle.denominator)
            total += phase * z.value
            err += z.error_bound
        total *= scale
        err = err * scale + abs(total) * mp.mpf(2) ** (-(wb - 10)) * (q + 4)
        result = BigComplex(total, prec_bits, err)
    with _cache_lock:
        _li_cache[key] = result
    return result


def embeddings(N: int) -> list[int]:
    """Exponents j with gcd(j, N) = 1, labelling zeta -> exp(2 pi i j/N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return [j for j in range(1, N + 1) if math.gcd(j, N) == 1 and (N == 1 or j < N)]


def twist_projection(k: int, z) -> BigComplex:
    """Representative of z modulo (2 pi i)^(k+1) R: the real part for even k
    and i Im(z) for odd k, i.e. (z + (-1)^k conj(z)) / 2."""
    if isinstance(z, BigComplex):
        value, prec_bits, err = z.value, z.prec_bits, z.error_bound
    else:
        value, prec_bits, err = mp.mpc(z), mp.prec, mp.mpf(0)
    with mp.workprec(_workbits(prec_bits)):
        out = (value + (-1) ** (k % 2) * mpmath.conj(value)) / 2
    return BigComplex(out, prec_bits, err)


def evaluate_polylog_combo(
    combo: PolylogCombo, embedding: int, prec_bits: int = 200
) -> BigComplex:
    """Numeric value of sum_u q_u Li_{k+1}(exp(2 pi i * embedding * u / N))."""
    wb = _workbits(prec_bits)
    with mp.workprec(wb):
        total = mp.mpc(0)
        err = mp.mpf(0)
        for u, coeff in combo.items():
            if coeff == 0:
                continue
            li = li_at_root_of_unity(
                combo.k + 1, (embedding * u) % combo.N, combo.N, prec_bits
            )
            cm = mp.mpf(coeff.numerator) / coeff.denominator
            total += cm * li.value
            err += abs(cm) * li.error_bound
        err += abs(total) * mp.mpf(2) ** (-(wb - 10)) * (len(combo.coeffs) + 4)
    return BigComplex(total, prec_bits, err)


class KernelRelationResidual(NamedTuple):
    residual: mpmath.mpf
    error_bound: mpmath.mpf
    value: BigComplex


def kernel_relation_residual(
    k: int, psi: Divisor, embedding: int, prec_bits: int = 200
) -> KernelRelationResidual:
    """|projection of sum_t psi(t, 0) Li_{k+1}(zeta^(j t))| for one embedding.

    For psi in the kernel of the horospherical map the projection must be
    zero; the residual measures how far the numeric evaluation is from
    that, with its error budget."""
    if k < 1:
        raise ValueError("k must be >= 1")
    combo = PolylogCombo(psi.N, k, dict(psi.horizontal_line()))
    value = evaluate_polylog_combo(combo, embedding, prec_bits)
    projected = twist_projection(k, value)
    return KernelRelationResidual(abs(projected.value), projected.error_bound, projected)


class CollapseCheck(NamedTuple):
    lhs: BigComplex
    rhs: BigComplex
    difference: mpmath.mpf


def verify_polylog_collapse(
    k: int, u: int, N: int, embedding: int, prec_bits: int = 200
) -> CollapseCheck:
    """The full coefficient pipeline applied to the canonical residue-zero
    divisor must reproduce the single value Li_{k+1}(zeta^(j u)) modulo the
    twisted reals."""
    psi = residue_zero_divisor(k, u, N)
    combo = polylog_coefficients(k, psi)
    lhs = twist_projection(k, evaluate_polylog_combo(combo, embedding, prec_bits))
    rhs = twist_projection(
        k, li_at_root_of_unity(k + 1, (embedding * u) % N, N, prec_bits)
    )
    with mp.workprec(_workbits(prec_bits)):
        diff = abs(lhs.value - rhs.value)
    return CollapseCheck(lhs, rhs, diff)
