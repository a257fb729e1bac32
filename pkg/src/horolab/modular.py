"""GL2(Z/N), its coset space under the mirabolic subgroup, divisors on
N-torsion points, and the horospherical map.

Conventions.  A matrix g = (a b; c d) acts on column vectors:
``g.(t1, t2) = (a t1 + b t2, c t1 + d t2) mod N``.  P denotes the subgroup
of matrices (a b; 0 1) with a a unit; left cosets P\\GL2(Z/N) are labelled
by their lexicographically smallest member (a, b, c, d), and the identity
represents its own coset.  The horospherical map sends a divisor psi on
(Z/N)^2 minus the origin to the coset function

    g  |->  N^k / (k! (k+2)) * sum_t psi(t) B_{k+2}( ((g t)_2 mod N) / N ),

which equals the defining sum over psi(g^{-1} t) after the change of
variable t -> g t.  Both evaluation paths are exposed; tests and the
consistency checker compare them.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from . import linalg
from .errors import ModulusMismatchError
from .exact import RationalLike, as_rational, bernoulli_polynomial

__all__ = [
    "ModMatrix",
    "TorsionPoint",
    "Divisor",
    "IsomFunction",
    "CyclotomicCombo",
    "PolylogCombo",
    "SurjectivityReport",
    "ResidueConsistency",
    "act",
    "coset_representatives",
    "parabolic_elements",
    "horospherical",
    "horospherical_value",
    "indicator_at_infinity",
    "vanishes_at_infinity",
    "residue_zero_divisor",
    "kernel_basis",
    "surjectivity_report",
    "cyclotomic_coefficients",
    "polylog_coefficients",
    "residue_closed_form",
    "residue_consistency_check",
]

Entries = tuple[int, int, int, int]


class TorsionPoint(NamedTuple):
    """A point of (Z/N)^2, written (t1, t2); t2 feeds the Bernoulli factor."""

    t1: int
    t2: int


@dataclass(frozen=True)
class ModMatrix:
    """An element of GL2(Z/N); invertibility is enforced at construction."""

    N: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("modulus must be positive")
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, getattr(self, name) % self.N)
        if math.gcd(self.det, self.N) != 1:
            raise ValueError(
                f"matrix {self.entries} is not invertible mod {self.N}"
            )

    @property
    def entries(self) -> Entries:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.N

    @classmethod
    def identity(cls, N: int) -> "ModMatrix":
        return cls(N, 1, 0, 0, 1)

    @classmethod
    def from_rows(cls, N: int, rows: Iterable[Iterable[int]]) -> "ModMatrix":
        (a, b), (c, d) = rows
        return cls(N, a, b, c, d)

    def __mul__(self, other: "ModMatrix") -> "ModMatrix":
        if self.N != other.N:
            raise ModulusMismatchError(
                f"cannot multiply matrices mod {self.N} and mod {other.N}"
            )
        return ModMatrix(
            self.N,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "ModMatrix":
        dinv = pow(self.det, -1, self.N)
        return ModMatrix(
            self.N, self.d * dinv, -self.b * dinv, -self.c * dinv, self.a * dinv
        )

    def __neg__(self) -> "ModMatrix":
        return ModMatrix(self.N, -self.a, -self.b, -self.c, -self.d)

    def act(self, t) -> TorsionPoint:
        t1, t2 = t
        return TorsionPoint(
            (self.a * t1 + self.b * t2) % self.N,
            (self.c * t1 + self.d * t2) % self.N,
        )


def act(g: ModMatrix, t) -> TorsionPoint:
    """Matrix times column vector mod N."""
    return g.act(t)


class Divisor:
    """Finitely supported Q-valued function on (Z/N)^2 minus the origin."""

    __slots__ = ("N", "_coeffs")

    def __init__(self, N: int, coeffs: Mapping | Iterable = ()):
        if N < 1:
            raise ValueError("modulus must be positive")
        self.N = N
        data: dict[TorsionPoint, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for point, value in items:
            t = TorsionPoint(point[0] % N, point[1] % N)
            value = as_rational(value)
            if value == 0:
                continue
            if t == (0, 0):
                raise ValueError("divisor support must exclude the origin")
            data[t] = data.get(t, Fraction(0)) + value
        self._coeffs = {t: v for t, v in data.items() if v != 0}

    @classmethod
    def delta(cls, N: int, point, value: RationalLike = 1) -> "Divisor":
        return cls(N, {TorsionPoint(*point): as_rational(value)})

    def coefficient(self, point) -> Fraction:
        t = TorsionPoint(point[0] % self.N, point[1] % self.N)
        return self._coeffs.get(t, Fraction(0))

    def items(self) -> list[tuple[TorsionPoint, Fraction]]:
        return sorted(self._coeffs.items())

    def support(self) -> list[TorsionPoint]:
        return sorted(self._coeffs)

    def degree(self) -> Fraction:
        return sum(self._coeffs.values(), Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def horizontal_line(self) -> dict[int, Fraction]:
        """Coefficients psi(t1, 0) indexed by t1 (the t2 = 0 line)."""
        return {t.t1: v for t, v in self._coeffs.items() if t.t2 == 0}

    def translate(self, h: ModMatrix) -> "Divisor":
        """The divisor t -> psi(h^{-1} t), i.e. support pushed forward by h."""
        if h.N != self.N:
            raise ModulusMismatchError(
                f"divisor mod {self.N} translated by matrix mod {h.N}"
            )
        return Divisor(self.N, {h.act(t): v for t, v in self._coeffs.items()})

    def __add__(self, other: "Divisor") -> "Divisor":
        if self.N != other.N:
            raise ModulusMismatchError("cannot add divisors with different moduli")
        out = dict(self._coeffs)
        for t, v in other._coeffs.items():
            out[t] = out.get(t, Fraction(0)) + v
        return Divisor(self.N, out)

    def __neg__(self) -> "Divisor":
        return Divisor(self.N, {t: -v for t, v in self._coeffs.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, scale: RationalLike) -> "Divisor":
        scale = as_rational(scale)
        return Divisor(self.N, {t: scale * v for t, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Divisor)
            and self.N == other.N
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash((self.N, tuple(self.items())))

    def __repr__(self) -> str:
        terms = ", ".join(f"{t}: {v}" for t, v in self.items())
        return f"Divisor(N={self.N}, {{{terms}}})"


class _CosetTable:
    """Representatives and lookup tables for P\\GL2(Z/N), built once per N."""

    def __init__(self, N: int):
        self.N = N
        units = [a for a in range(N) if math.gcd(a, N) == 1]
        self.parabolic = [ModMatrix(N, a, b, 0, 1) for a in units for b in range(N)]
        rep_of: dict[Entries, Entries] = {}
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    for d in range(N):
                        if math.gcd((a * d - b * c) % N, N) != 1:
                            continue
                        if (a, b, c, d) in rep_of:
                            continue
                        g = ModMatrix(N, a, b, c, d)
                        orbit = [(u * g).entries for u in self.parabolic]
                        rep = min(orbit)
                        for e in orbit:
                            rep_of[e] = rep
        self.rep_of = rep_of
        self.reps: list[Entries] = sorted(set(rep_of.values()))
        self.rep_index = {e: i for i, e in enumerate(self.reps)}
        minus = ModMatrix(N, -1, 0, 0, -1)
        self.neg_rep = {
            e: rep_of[(ModMatrix(N, *e) * minus).entries] for e in self.reps
        }
        self.infinity_rep = rep_of[ModMatrix.identity(N).entries]
        self.minus_infinity_rep = rep_of[minus.entries]


_coset_tables: dict[int, _CosetTable] = {}
_coset_lock = threading.Lock()


def _table(N: int) -> _CosetTable:
    if N < 3:
        raise ValueError("modulus must be at least 3")
    table = _coset_tables.get(N)
    if table is None:
        with _coset_lock:
            table = _coset_tables.get(N)
            if table is None:
                table = _CosetTable(N)
                _coset_tables[N] = table
    return table


def coset_representatives(N: int) -> list[ModMatrix]:
    """Canonical representatives of P\\GL2(Z/N) in a deterministic order."""
    return [ModMatrix(N, *e) for e in _table(N).reps]


def parabolic_elements(N: int) -> list[ModMatrix]:
    """All elements of P(Z/N) = {(a b; 0 1): a a unit}."""
    return list(_table(N).parabolic)


class IsomFunction:
    """Q-valued function on P\\GL2(Z/N) with parity (-1)^k under -id.

    Values are stored on the canonical coset representatives; evaluation at
    an arbitrary group element factors through the representative lookup, so
    P-invariance holds structurally and the parity constraint is verified at
    construction.
    """

    __slots__ = ("N", "parity", "_values")

    def __init__(self, N: int, parity: int, values: Mapping, *, check: bool = True):
        table = _table(N)
        self.N = N
        self.parity = parity % 2
        vals: dict[Entries, Fraction] = {e: Fraction(0) for e in table.reps}
        for key, value in values.items():
            entries = key.entries if isinstance(key, ModMatrix) else tuple(key)
            if entries not in vals:
                raise ValueError(f"{entries} is not a canonical coset representative")
            vals[entries] = as_rational(value)
        self._values = vals
        if check:
            sign = (-1) ** self.parity
            for e in table.reps:
                if vals[table.neg_rep[e]] != sign * vals[e]:
                    raise ValueError(
                        f"values violate the (-1)^{self.parity} parity at {e}"
                    )

    def value_at(self, g: ModMatrix) -> Fraction:
        if g.N != self.N:
            raise ModulusMismatchError("function and matrix have different moduli")
        return self._values[_table(self.N).rep_of[g.entries]]

    def value_at_rep(self, entries: Entries) -> Fraction:
        return self._values[entries]

    def items(self) -> list[tuple[Entries, Fraction]]:
        return [(e, self._values[e]) for e in _table(self.N).reps]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self._values.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IsomFunction)
            and self.N == other.N
            and self.parity == other.parity
            and self._values == other._values
        )

    def __repr__(self) -> str:
        return f"IsomFunction(N={self.N}, parity={self.parity})"


_bernoulli_tables: dict[tuple[int, int], tuple[Fraction, ...]] = {}
_bernoulli_tables_lock = threading.Lock()


def _bernoulli_residue_table(k: int, N: int) -> tuple[Fraction, ...]:
    """B_k(r/N) for r = 0..N-1, cached."""
    key = (k, N)
    table = _bernoulli_tables.get(key)
    if table is None:
        poly = bernoulli_polynomial(k)
        with _bernoulli_tables_lock:
            table = _bernoulli_tables.get(key)
            if table is None:
                table = tuple(poly(Fraction(r, N)) for r in range(N))
                _bernoulli_tables[key] = table
    return table


def _horospherical_scale(k: int, N: int) -> Fraction:
    return Fraction(N**k, math.factorial(k) * (k + 2))


def horospherical(k: int, psi: Divisor) -> IsomFunction:
    """The horospherical image of a divisor, as a coset function of parity k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    N = psi.N
    table = _table(N)
    btable = _bernoulli_residue_table(k + 2, N)
    scale = _horospherical_scale(k, N)
    items = psi.items()
    values = {}
    for e in table.reps:
        _, _, c, d = e
        acc = Fraction(0)
        for (t1, t2), q in items:
            acc += q * btable[(c * t1 + d * t2) % N]
        values[e] = scale * acc
    return IsomFunction(N, k, values)


def horospherical_value(k: int, psi: Divisor, g: ModMatrix) -> Fraction:
    """Literal defining sum over psi(g^{-1} t), for cross-checking."""
    if psi.N != g.N:
        raise ModulusMismatchError("divisor and matrix have different moduli")
    N = psi.N
    btable = _bernoulli_residue_table(k + 2, N)
    ginv = g.inverse()
    acc = Fraction(0)
    for t1 in range(N):
        for t2 in range(N):
            q = psi.coefficient(ginv.act((t1, t2)))
            if q:
                acc += q * btable[t2]
    return _horospherical_scale(k, N) * acc


def indicator_at_infinity(k: int, N: int) -> IsomFunction:
    """The signed indicator of the cosets of P and -P (1, (-1)^k, else 0)."""
    table = _table(N)
    values = {
        table.infinity_rep: Fraction(1),
        table.minus_infinity_rep: Fraction((-1) ** (k % 2)),
    }
    return IsomFunction(N, k, values)


def vanishes_at_infinity(f: IsomFunction) -> bool:
    """True iff f is zero on the cosets of P and of -P."""
    table = _table(f.N)
    return (
        f.value_at_rep(table.infinity_rep) == 0
        and f.value_at_rep(table.minus_infinity_rep) == 0
    )


def residue_zero_divisor(k: int, u: int, N: int) -> Divisor:
    """The weighted line divisor over first coordinate u whose horospherical
    image vanishes at infinity (by the Bernoulli distribution relation)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if u % N == 0:
        raise ValueError("u must be nonzero mod N")
    u %= N
    sign = Fraction((-1) ** (k + 1))
    coeffs = {TorsionPoint(u, 0): sign / Fraction(N) ** (k - 1)}
    tail = -sign * Fraction(N**2, 1 - N ** (k + 1))
    for v in range(1, N):
        coeffs[TorsionPoint(u, v)] = tail
    return Divisor(N, coeffs)


def _points(N: int) -> list[TorsionPoint]:
    return [
        TorsionPoint(t1, t2)
        for t1 in range(N)
        for t2 in range(N)
        if (t1, t2) != (0, 0)
    ]


def _horospherical_matrix(k: int, N: int) -> list[list[Fraction]]:
    """Rows indexed by coset representatives, columns by nonzero points."""
    table = _table(N)
    btable = _bernoulli_residue_table(k + 2, N)
    scale = _horospherical_scale(k, N)
    points = _points(N)
    rows = []
    for e in table.reps:
        _, _, c, d = e
        rows.append([scale * btable[(c * t1 + d * t2) % N] for t1, t2 in points])
    return rows


def kernel_basis(k: int, N: int, restrict_degree_zero: bool = False) -> list[Divisor]:
    """Exact basis of the kernel of the horospherical map.

    Columns are the nonzero points of (Z/N)^2 in sorted order; with
    ``restrict_degree_zero`` the kernel is intersected with the divisors of
    total degree zero (one extra all-ones row).
    """
    rows = _horospherical_matrix(k, N)
    if restrict_degree_zero:
        rows = rows + [[Fraction(1)] * len(rows[0])]
    points = _points(N)
    basis = []
    for vec in linalg.nullspace(rows):
        basis.append(Divisor(N, {p: v for p, v in zip(points, vec) if v != 0}))
    return basis


@dataclass(frozen=True)
class SurjectivityReport:
    """Ranks of the horospherical map on three source spaces.

    ``rank_with_origin`` uses all of (Z/N)^2 (the space on which the map is
    classically surjective for every k); ``rank_full`` drops the origin;
    ``rank_degree_zero`` further restricts to divisors of total degree zero.
    The exact computation shows the punctured space already misses the
    constant direction at k = 0, and the degree-zero subspace additionally
    drops one dimension for even k when N is prime; the reports expose all
    three numbers rather than hard-wiring one convention.
    """

    N: int
    k: int
    target_dim: int
    rank_with_origin: int
    rank_full: int
    rank_degree_zero: int

    @property
    def surjective_with_origin(self) -> bool:
        return self.rank_with_origin == self.target_dim

    @property
    def surjective_full(self) -> bool:
        return self.rank_full == self.target_dim

    @property
    def surjective_degree_zero(self) -> bool:
        return self.rank_degree_zero == self.target_dim


def surjectivity_report(k: int, N: int) -> SurjectivityReport:
    """Rank of the horospherical map on the with-origin space, the punctured
    space, and the degree-zero subspace, against the coset-function dimension."""
    rows = _horospherical_matrix(k, N)
    n_points = len(rows[0])
    rank_full = linalg.rank(rows)
    # Degree-zero subspace is spanned by e_i - e_0; its image columns are
    # column_i - column_0.
    deg0_rows = [[row[i] - row[0] for i in range(1, n_points)] for row in rows]
    rank_zero = linalg.rank(deg0_rows)
    # The origin contributes the constant column B_{k+2}(0) (times the scale).
    origin_value = _horospherical_scale(k, N) * _bernoulli_residue_table(k + 2, N)[0]
    with_origin_rows = [row + [origin_value] for row in rows]
    rank_origin = linalg.rank(with_origin_rows)
    target = len(_table(N).reps) // 2
    return SurjectivityReport(N, k, target, rank_origin, rank_full, rank_zero)


@dataclass
class CyclotomicCombo:
    """Formal Q-linear combination of cyclotomic symbols c^k(zeta^u).

    ``coeffs`` maps the exponent u (nonzero mod N) to its coefficient; the
    combination carries no arithmetic beyond linear algebra over Q.
    ``residue_zero`` records whether the source divisor's horospherical
    image vanished at infinity (the hypothesis under which the combination
    is meaningful); it is reported, never enforced.
    """

    N: int
    k: int
    coeffs: dict[int, Fraction] = field(default_factory=dict)
    residue_zero: bool | None = None

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coeffs.values())


@dataclass
class PolylogCombo:
    """Formal Q-linear combination of polylogarithm values Li_{k+1}(zeta^u)."""

    N: int
    k: int
    coeffs: dict[int, Fraction] = field(default_factory=dict)
    residue_zero: bool | None = None

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coeffs.values())


def cyclotomic_coefficients(k: int, psi: Divisor) -> CyclotomicCombo:
    """Coefficients (-1)^{k+1}/(k! N) psi(t, 0) on the symbols c^k(zeta^t)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    N = psi.N
    factor = Fraction((-1) ** (k + 1), math.factorial(k) * N)
    coeffs = {t1: factor * q for t1, q in psi.horizontal_line().items()}
    flag = vanishes_at_infinity(horospherical(k, psi))
    return CyclotomicCombo(N, k, coeffs, residue_zero=flag)


def polylog_coefficients(k: int, psi: Divisor) -> PolylogCombo:
    """Coefficients (-1)^{k+1} N^{k-1} psi(t, 0) on the values Li_{k+1}(zeta^t)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    N = psi.N
    factor = Fraction((-1) ** (k + 1)) * Fraction(N) ** (k - 1)
    coeffs = {t1: factor * q for t1, q in psi.horizontal_line().items()}
    flag = vanishes_at_infinity(horospherical(k, psi))
    return PolylogCombo(N, k, coeffs, residue_zero=flag)


def residue_closed_form(k: int, g: ModMatrix, t) -> Fraction:
    """The closed-form residue -N/((k+2) k!) B_{k+2}(((g t)_2 mod N)/N)."""
    N = g.N
    btable = _bernoulli_residue_table(k + 2, N)
    return Fraction(-N, (k + 2) * math.factorial(k)) * btable[g.act(t).t2]


class ResidueConsistency(NamedTuple):
    equal: bool
    lhs: Fraction
    rhs: Fraction


def residue_consistency_check(k: int, psi: Divisor, g: ModMatrix) -> ResidueConsistency:
    """Exact identity between the horospherical value at g and the weighted
    sum of closed-form residues: a change-of-variable identity that doubles
    as a cross-check between the two coordinate conventions."""
    if psi.N != g.N:
        raise ModulusMismatchError("divisor and matrix have different moduli")
    N = psi.N
    lhs = horospherical_value(k, psi, g)
    acc = Fraction(0)
    for t, q in psi.items():
        acc += q * residue_closed_form(k, g, t)
    rhs = -(Fraction(N) ** (k - 1)) * acc
    return ResidueConsistency(lhs == rhs, lhs, rhs)
