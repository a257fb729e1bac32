"""Exact rational arithmetic: polynomials, truncated power series, Bernoulli data.

All scalars are ``fractions.Fraction``; nothing in this module ever rounds.
Bernoulli polynomials follow the generating-function convention

    t * exp(t*x) / (exp(t) - 1)  =  sum_{k >= 0} B_k(x) t^k / k!

so ``B_1(0) == -1/2``, and the periodic variant evaluates B_k on the
representative of x mod 1 in [0, 1).
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

from .errors import ConsistencyError

RationalLike = Union[Fraction, int, str]

__all__ = [
    "RationalPolynomial",
    "PowerSeries",
    "as_rational",
    "format_rational",
    "parse_rational",
    "bernoulli_number",
    "bernoulli_polynomial",
    "periodic_bernoulli",
    "DistributionRelationCheck",
    "distribution_relation_check",
    "exp_minus_one_over_z",
    "exp_series",
    "residue_generating_series",
]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, strings like "p/q", and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: RationalLike) -> str:
    """Serialize as "p/q" with positive denominator in lowest terms."""
    q = as_rational(value)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" (or "p"); the result is normalized to lowest terms."""
    if not isinstance(text, str):
        raise TypeError(f"expected a rational string, got {text!r}")
    return Fraction(text.strip())


class RationalPolynomial:
    """Dense univariate polynomial over Q; coefficient index equals degree.

    The zero polynomial has ``degree == -1`` (the distinguished sentinel).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(
            [i * c for i, c in enumerate(self.coeffs)][1:]
        )

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPolynomial(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)]
        )

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RationalPolynomial):
            if not self.coeffs or not other.coeffs:
                return RationalPolynomial()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return RationalPolynomial(out)
        scale = as_rational(other)
        return RationalPolynomial([scale * c for c in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"


class PowerSeries:
    """Formal power series over Q, exact modulo z**(order+1).

    ``coeffs`` always has length ``order + 1``.  Binary operations between
    series of different orders truncate to the smaller order, mirroring the
    fact that higher coefficients of the shorter operand are unknown.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[RationalLike], order: int | None = None):
        cs = [as_rational(c) for c in coeffs]
        if order is None:
            if not cs:
                raise ValueError("empty coefficient list needs an explicit order")
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = cs[: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([1], order)

    def coefficient(self, i: int) -> Fraction:
        if i < 0 or i > self.order:
            raise IndexError(f"coefficient {i} beyond truncation order {self.order}")
        return self.coeffs[i]

    def truncated(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: order + 1], order)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n
        )

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            out = [Fraction(0)] * (n + 1)
            for i, a in enumerate(self.coeffs[: n + 1]):
                if a == 0:
                    continue
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
            return PowerSeries(out, n)
        scale = as_rational(other)
        return PowerSeries([scale * c for c in self.coeffs], self.order)

    __rmul__ = __mul__

    def derivative(self) -> "PowerSeries":
        """Exact derivative; the order drops by one."""
        if self.order == 0:
            raise ValueError("derivative of an order-0 truncation is unknown")
        return PowerSeries(
            [i * self.coeffs[i] for i in range(1, self.order + 1)], self.order - 1
        )

    def inverse(self) -> "PowerSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ValueError("series with zero constant term has no inverse")
        inv = [Fraction(0)] * (self.order + 1)
        inv[0] = 1 / c0
        for n in range(1, self.order + 1):
            acc = Fraction(0)
            for i in range(1, n + 1):
                acc += self.coeffs[i] * inv[n - i]
            inv[n] = -acc / c0
        return PowerSeries(inv, self.order)

    def __truediv__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return self * (1 / as_rational(other))
        return self * other.inverse()

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner) by Horner evaluation; inner needs zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("composition needs a zero constant term inside")
        order = min(self.order, inner.order)
        inner = inner.truncated(order)
        result = PowerSeries.zero(order)
        for c in reversed(self.coeffs[: order + 1]):
            result = result * inner
            result = PowerSeries((result.coeffs[0] + c,) + result.coeffs[1:], order)
        return result

    def exp(self) -> "PowerSeries":
        """exp of a series with zero constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a zero constant term")
        result = PowerSeries.one(self.order)
        term = PowerSeries.one(self.order)
        for n in range(1, self.order + 1):
            term = term * self * Fraction(1, n)
            result = result + term
        return result

    def log(self) -> "PowerSeries":
        """log of a series with constant term one."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term one")
        u = self - PowerSeries.one(self.order)
        result = PowerSeries.zero(self.order)
        power = PowerSeries.one(self.order)
        for n in range(1, self.order + 1):
            power = power * u
            result = result + power * Fraction((-1) ** (n + 1), n)
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PowerSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"PowerSeries({[str(c) for c in self.coeffs]}, order={self.order})"


def exp_series(c: RationalLike, order: int) -> PowerSeries:
    """The series of exp(c*z), exact to the given order."""
    c = as_rational(c)
    coeffs = [Fraction(1)]
    for n in range(1, order + 1):
        coeffs.append(coeffs[-1] * c / n)
    return PowerSeries(coeffs, order)


def exp_minus_one_over_z(order: int) -> PowerSeries:
    """The series of (exp(z) - 1)/z = sum_m z^m / (m+1)!."""
    coeffs = []
    fact = 1
    for m in range(order + 1):
        fact *= m + 1
        coeffs.append(Fraction(1, fact))
    return PowerSeries(coeffs, order)


# Bernoulli caches: one-time initialization per degree, safe for concurrent
# readers.  _numbers holds B_0..B_{len-1}; _polys maps degree -> B_k(x).
_bernoulli_lock = threading.Lock()
_bernoulli_numbers: list[Fraction] = []
_bernoulli_polys: dict[int, RationalPolynomial] = {}


def bernoulli_number(k: int) -> Fraction:
    """The k-th Bernoulli number B_k = B_k(0), with B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k < len(_bernoulli_numbers):
        return _bernoulli_numbers[k]
    with _bernoulli_lock:
        if k < len(_bernoulli_numbers):
            return _bernoulli_numbers[k]
        order = max(k, 2 * len(_bernoulli_numbers), 8)
        inv = exp_minus_one_over_z(order).inverse()  # z/(e^z - 1)
        fact = 1
        numbers = []
        for j in range(order + 1):
            if j > 0:
                fact *= j
            numbers.append(inv.coefficient(j) * fact)
        _bernoulli_numbers[:] = numbers
    return _bernoulli_numbers[k]


def bernoulli_polynomial(k: int) -> RationalPolynomial:
    """The k-th Bernoulli polynomial, B_k(x) = sum_j C(k,j) B_j x^(k-j)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    poly = _bernoulli_polys.get(k)
    if poly is not None:
        return poly
    bernoulli_number(k)  # ensure the number cache is long enough
    with _bernoulli_lock:
        poly = _bernoulli_polys.get(k)
        if poly is None:
            coeffs = [
                math.comb(k, j) * _bernoulli_numbers[j] for j in range(k, -1, -1)
            ]
            poly = RationalPolynomial(coeffs)
            _bernoulli_polys[k] = poly
    return poly


def periodic_bernoulli(k: int, x: RationalLike) -> Fraction:
    """B_k evaluated on the representative of x mod 1 in [0, 1)."""
    x = as_rational(x)
    frac = x - (x.numerator // x.denominator)
    return bernoulli_polynomial(k)(frac)


class DistributionRelationCheck(NamedTuple):
    equal: bool
    lhs: Fraction
    rhs: Fraction


def distribution_relation_check(
    k: int, m: int, x: RationalLike
) -> DistributionRelationCheck:
    """Exact check of sum_{j<m} B_k((x+j)/m) == m^(1-k) B_k(x)."""
    x = as_rational(x)
    if k < 0:
        raise ValueError("k must be >= 0")
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= x < 1:
        raise ValueError("x must lie in [0, 1)")
    poly = bernoulli_polynomial(k)
    lhs = sum((poly(Fraction(x + j, m)) for j in range(m)), Fraction(0))
    rhs = Fraction(m) ** (1 - k) * poly(x)
    return DistributionRelationCheck(lhs == rhs, lhs, rhs)


def residue_generating_series(
    a: int, N: int, order: int
) -> tuple[PowerSeries, PowerSeries]:
    """Two exact series whose equality encodes the Bernoulli residue identity.

    Returns ``N * d/dz (z exp((a/N) z)/(exp(z)-1))`` and
    ``sum_j (N/j!) B_{j+1}(a/N) z^j``, both truncated at the given order; the
    caller compares them coefficientwise.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 <= a < N:
        raise ValueError("a must satisfy 0 <= a < N")
    if order < 0:
        raise ValueError("order must be >= 0")
    n = order + 1  # headroom for the derivative
    base = exp_minus_one_over_z(n)
    if base.coefficient(0) != 1:
        raise ConsistencyError("(exp(z)-1)/z must have constant term 1")
    c = Fraction(a, N)
    gen = exp_series(c, n) * base.inverse()  # z exp(cz)/(e^z - 1)
    lhs = gen.derivative() * N
    rhs_coeffs = []
    fact = 1
    for j in range(order + 1):
        if j > 0:
            fact *= j
        rhs_coeffs.append(Fraction(N, fact) * bernoulli_polynomial(j + 1)(c))
    return lhs, PowerSeries(rhs_coeffs, order)
