"""Nilpotent quotients of the free Lie algebra and the monodromy residue
computation at torsion parameters.

Three quotients of the free Lie algebra L on e1, e2 (truncated at degree D)
are used; L' denotes [L, L], the part of degree >= 2.

  DERIVED_ABELIAN   L / [L', L']
  LOG_MODULE        L' / [L', L'], a free rank-one module over Q[z1, z2]
                    with zi = ad_{ei}, generated by u0 = [e1, e2]
  REDUCED           L / ([L', L'] + [e1, L']), with basis e2 and z^i e1
                    where z = ad_{e2}; all z^i e1 commute there

The degree-(N, a) monodromy data enters through group words: the loop
gamma_1 gamma_2 gamma_1^-1 gamma_2^-1 around the puncture, the twist
gamma_2 -> gamma_2 gamma_1^N, and the conjugated twist
gamma_1^a gamma_2 gamma_1^(N-a).  In the REDUCED quotient those logarithms
collapse to power series in z applied to e1, and comparing them against
exact Bernoulli series yields the closed-form residue
-N/((k+2) k!) B_{k+2}(a/N).
"""

from __future__ import annotations

import math
import threading
from enum import Enum
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from . import linalg
from .errors import ConsistencyError
from .exact import (
    PowerSeries,
    as_rational,
    bernoulli_polynomial,
    exp_minus_one_over_z,
    exp_series,
)
from .freelie import (
    GroupWord,
    HallWord,
    LieElement,
    ad_series,
    apply_monodromy,
    bch,
    bracket,
    generator,
    hall_basis,
    log_of_word,
    phi_zero,
)

__all__ = [
    "QuotientTag",
    "ReducedCoords",
    "SplittingCheck",
    "MonodromyIdentityCheck",
    "TorsionResidue",
    "SymTensor",
    "quotient_reduce",
    "log_module_coords",
    "reduced_coords",
    "commutator_log",
    "invariant_log_generator",
    "reduced_generator_series",
    "module_generator_presentation",
    "module_monomial_apply",
    "scale_module_monomials",
    "verify_exp_splitting",
    "verify_monodromy_identity",
    "MONODROMY_IDENTITIES",
    "residue_at_torsion",
    "pr_project",
    "mu_dual",
]


class QuotientTag(Enum):
    FULL = "full"
    DERIVED_ABELIAN = "derived-abelian"
    LOG_MODULE = "log-module"
    REDUCED = "reduced"


def _exp_ps(order: int) -> PowerSeries:
    return exp_series(1, order)


class _QuotientData:
    """Canonical complement and solver for one (truncation, tag) pair.

    The hall-coordinate space splits as complement + killed span; the
    combined matrix must be square and invertible, which is verified at
    construction (this is the well-definedness check for the quotient).
    """

    def __init__(self, truncation: int, tag: QuotientTag):
        self.truncation = truncation
        self.tag = tag
        basis = hall_basis(truncation)
        self.basis = basis
        self.index = {hw: i for i, hw in enumerate(basis)}
        self.dim = len(basis)

        e1 = generator(1, truncation)
        e2 = generator(2, truncation)
        u0 = bracket(e1, e2)

        labels: list[tuple] = []
        complement: list[LieElement] = []
        if tag in (QuotientTag.DERIVED_ABELIAN, QuotientTag.REDUCED):
            if tag is QuotientTag.DERIVED_ABELIAN:
                labels.append(("gen", 1))
                complement.append(e1)
            labels.append(("gen", 2))
            complement.append(e2)
        if tag in (QuotientTag.DERIVED_ABELIAN, QuotientTag.LOG_MODULE):
            for total in range(0, truncation - 1):
                for i in range(total, -1, -1):
                    j = total - i
                    elem = u0
                    for _ in range(j):
                        elem = bracket(e2, elem)
                    for _ in range(i):
                        elem = bracket(e1, elem)
                    labels.append(("mono", i, j))
                    complement.append(elem)
        if tag is QuotientTag.REDUCED:
            elem = e1
            labels.append(("zpow", 0))
            complement.append(elem)
            for i in range(1, truncation):
                elem = bracket(e2, elem)
                labels.append(("zpow", i))
                complement.append(elem)

        killed: list[LieElement] = []
        if tag is not QuotientTag.FULL:
            if tag is QuotientTag.LOG_MODULE:
                killed.extend([e1, e2])  # the quotient keeps only degree >= 2
            pairs = [hw for hw in basis if hw.degree >= 2]
            for idx, h1 in enumerate(pairs):
                x1 = LieElement(truncation, {h1: Fraction(1)})
                for h2 in pairs[idx + 1 :]:
                    if h1.degree + h2.degree > truncation:
                        continue
                    v = bracket(x1, LieElement(truncation, {h2: Fraction(1)}))
                    if not v.is_zero():
                        killed.append(v)
            if tag is QuotientTag.REDUCED:
                for h in pairs:
                    if h.degree + 1 > truncation:
                        continue
                    v = bracket(e1, LieElement(truncation, {h: Fraction(1)}))
                    if not v.is_zero():
                        killed.append(v)

        self.labels = labels
        self.complement = complement
        kill_basis = self._independent(killed)
        if len(complement) + len(kill_basis) != self.dim:
            raise ConsistencyError(
                f"quotient {tag} at truncation {truncation}: complement size "
                f"{len(complement)} + killed rank {len(kill_basis)} != {self.dim}"
            )
        columns = [self._vector(x) for x in complement + kill_basis]
        matrix = [[columns[c][r] for c in range(self.dim)] for r in range(self.dim)]
        try:
            self.solver = linalg.invert(matrix)
        except ValueError as exc:
            raise ConsistencyError(
                f"quotient {tag} at truncation {truncation}: complement and "
                f"killed span do not form a direct sum"
            ) from exc
        self.kill_basis = kill_basis
        if tag is QuotientTag.REDUCED:
            self._verify_z_stability(e2)

    def _vector(self, x: LieElement) -> list[Fraction]:
        vec = [Fraction(0)] * self.dim
        for hw, c in x.coords.items():
            vec[self.index[hw]] = c
        return vec

    def _independent(self, vectors: Sequence[LieElement]) -> list[LieElement]:
        """Greedy deterministic extraction of an independent subset, by
        incremental elimination against the rows already kept."""
        pivots: dict[int, list[Fraction]] = {}  # pivot column -> reduced row
        chosen: list[LieElement] = []
        for x in vectors:
            row = self._vector(x)
            for col, prow in pivots.items():
                f = row[col]
                if f:
                    row = [a - f * b for a, b in zip(row, prow)]
            pivot = next((i for i, v in enumerate(row) if v != 0), None)
            if pivot is None:
                continue
            pv = row[pivot]
            pivots[pivot] = [v / pv for v in row]
            chosen.append(x)
        return chosen

    def _verify_z_stability(self, e2: LieElement) -> None:
        """ad_{e2} must preserve the killed span (so z acts on classes)."""
        for v in self.kill_basis:
            image = bracket(e2, v)
            if image.is_zero():
                continue
            coords = self.coords(image)
            if any(c != 0 for c in coords.values()):
                raise ConsistencyError(
                    "killed subspace of the reduced quotient is not ad_{e2}-stable"
                )

    def coords(self, x: LieElement) -> dict[tuple, Fraction]:
        if x.truncation < self.truncation:
            raise ValueError(
                f"element truncated at {x.truncation} reduced in a quotient "
                f"built at {self.truncation}"
            )
        vec = self._vector(x.truncate(self.truncation))
        sol = linalg.mat_vec(self.solver, vec)
        return {
            label: sol[i] for i, label in enumerate(self.labels) if sol[i] != 0
        }

    def representative(self, coords: Mapping[tuple, Fraction]) -> LieElement:
        out = LieElement.zero(self.truncation)
        for i, label in enumerate(self.labels):
            c = coords.get(label, Fraction(0))
            if c:
                out = out + c * self.complement[i]
        return out


_quotient_cache: dict[tuple[int, QuotientTag], _QuotientData] = {}
_quotient_lock = threading.Lock()


def _quotient(truncation: int, tag: QuotientTag) -> _QuotientData:
    key = (truncation, tag)
    data = _quotient_cache.get(key)
    if data is None:
        with _quotient_lock:
            data = _quotient_cache.get(key)
            if data is None:
                data = _QuotientData(truncation, tag)
                _quotient_cache[key] = data
    return data


def quotient_reduce(x: LieElement, tag: QuotientTag) -> LieElement:
    """Canonical representative of x in the chosen quotient."""
    if tag is QuotientTag.FULL:
        return x
    data = _quotient(x.truncation, tag)
    return data.representative(data.coords(x))


def log_module_coords(x: LieElement) -> dict[tuple[int, int], Fraction]:
    """Coordinates of x in the LOG module on the monomials z1^i z2^j u0."""
    data = _quotient(x.truncation, QuotientTag.LOG_MODULE)
    return {(lab[1], lab[2]): c for lab, c in data.coords(x).items()}


class ReducedCoords(NamedTuple):
    """Coordinates in the REDUCED quotient: coefficient of e2 and the
    coefficients ze1[i] of z^i e1 for i = 0..D-1."""

    e2: Fraction
    ze1: tuple[Fraction, ...]

    def apply_series(self, series: PowerSeries) -> "ReducedCoords":
        """Apply f(z); z kills e2 and shifts the z^i e1 coefficients."""
        coeffs = series.coeffs
        n = len(self.ze1)
        out = [Fraction(0)] * n
        for m in range(n):
            acc = Fraction(0)
            for j in range(min(m, series.order) + 1):
                acc += coeffs[j] * self.ze1[m - j]
            out[m] = acc
        return ReducedCoords(coeffs[0] * self.e2, tuple(out))

    @classmethod
    def from_e1_series(cls, series: PowerSeries, truncation: int) -> "ReducedCoords":
        vals = [
            series.coeffs[i] if i <= series.order else Fraction(0)
            for i in range(truncation)
        ]
        return cls(Fraction(0), tuple(vals))

    def is_zero(self) -> bool:
        return self.e2 == 0 and all(c == 0 for c in self.ze1)


def reduced_coords(x: LieElement) -> ReducedCoords:
    data = _quotient(x.truncation, QuotientTag.REDUCED)
    coords = data.coords(x)
    ze1 = [Fraction(0)] * x.truncation
    e2 = Fraction(0)
    for label, c in coords.items():
        if label == ("gen", 2):
            e2 = c
        else:
            ze1[label[1]] = c
    return ReducedCoords(e2, tuple(ze1))


def commutator_log(truncation: int) -> LieElement:
    """Canonical LOG-module form of log(gamma_1 gamma_2 gamma_1^-1 gamma_2^-1)."""
    return quotient_reduce(
        log_of_word(phi_zero(), truncation), QuotientTag.LOG_MODULE
    )


def invariant_log_generator(a: int, b: int, N: int, truncation: int) -> LieElement:
    """exp(-(a/N) ad_{e2} - (b/N) ad_{e1}) applied to the commutator log,
    returned in canonical LOG-module form.

    This is the multiplication-invariant generator attached to the torsion
    parameters (a, b); its REDUCED image is the series
    exp(-(a/N) z) (1 - exp(z)) e1, independent of b.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if not (0 <= a < N and 0 <= b < N):
        raise ValueError("(a, b) must lie in [0, N)^2")
    if (a, b) == (0, 0) and N == 1:
        raise ValueError("the parameters must describe a nonzero torsion point")
    u0log = log_of_word(phi_zero(), truncation)
    direction = (
        Fraction(-a, N) * generator(2, truncation)
        + Fraction(-b, N) * generator(1, truncation)
    )
    raw = ad_series(_exp_ps(truncation), direction, u0log)
    return quotient_reduce(raw, QuotientTag.LOG_MODULE)


def reduced_generator_series(a: int, N: int, order: int) -> PowerSeries:
    """The closed-form REDUCED image of the invariant generator:
    exp(-(a/N) z) (1 - exp(z))."""
    one_minus_exp = PowerSeries.one(order) - exp_series(1, order)
    return exp_series(Fraction(-a, N), order) * one_minus_exp


class _Bivariate:
    """Tiny bivariate truncated series over Q used for module presentations."""

    def __init__(self, terms: Mapping[tuple[int, int], Fraction], maxdeg: int):
        self.maxdeg = maxdeg
        self.terms = {
            ij: as_rational(c)
            for ij, c in terms.items()
            if c != 0 and ij[0] + ij[1] <= maxdeg
        }

    def divide(self, other: "_Bivariate") -> "_Bivariate":
        lead = other.terms.get((0, 0), Fraction(0))
        if lead == 0:
            raise ValueError("divisor must have a nonzero constant term")
        out: dict[tuple[int, int], Fraction] = {}
        for total in range(self.maxdeg + 1):
            for i in range(total + 1):
                j = total - i
                acc = self.terms.get((i, j), Fraction(0))
                for p in range(i + 1):
                    for q in range(j + 1):
                        if (p, q) == (i, j):
                            continue
                        f = out.get((p, q))
                        if f:
                            g = other.terms.get((i - p, j - q))
                            if g:
                                acc -= f * g
                out[(i, j)] = acc / lead
        return _Bivariate(out, self.maxdeg)


def module_generator_presentation(
    x: LieElement, gen: LieElement
) -> dict[tuple[int, int], Fraction]:
    """Coefficients F with x = F(ad_{e1}, ad_{e2}) gen in the LOG module.

    ``gen`` must have nonzero coefficient on the monomial u0, so the
    division is a unit operation on bivariate truncated series.
    """
    maxdeg = x.truncation - 2
    num = _Bivariate(log_module_coords(x), maxdeg)
    den = _Bivariate(log_module_coords(gen), maxdeg)
    return _Bivariate.divide(num, den).terms


def scale_module_monomials(
    coeffs: Mapping[tuple[int, int], Fraction], factor: int
) -> dict[tuple[int, int], Fraction]:
    """Scale the (i, j) monomial coefficient by factor^(i+j): the action of
    the multiplication-by-factor map on the LOG module in a presentation by
    an invariant generator."""
    return {ij: c * Fraction(factor) ** (ij[0] + ij[1]) for ij, c in coeffs.items()}


def module_monomial_apply(
    coeffs: Mapping[tuple[int, int], Fraction], gen: LieElement
) -> LieElement:
    """sum_ij F_ij ad_{e1}^i ad_{e2}^j gen, in canonical LOG-module form."""
    t = gen.truncation
    e1 = generator(1, t)
    e2 = generator(2, t)
    acc = LieElement.zero(t)
    for (i, j), c in sorted(coeffs.items()):
        if c == 0:
            continue
        elem = gen
        for _ in range(j):
            elem = bracket(e2, elem)
        for _ in range(i):
            elem = bracket(e1, elem)
        acc = acc + c * elem
    return quotient_reduce(acc, QuotientTag.LOG_MODULE)


class SplittingCheck(NamedTuple):
    equal: bool
    lhs: ReducedCoords
    rhs: ReducedCoords


def verify_exp_splitting(U: LieElement, V: LieElement, truncation: int) -> SplittingCheck:
    """Check, in the REDUCED quotient, that

        log exp(U + V) == log( exp( (exp(ad_U) - 1)/ad_U applied to V ) exp(U) )

    for V in the ideal generated by e1 (no e2 component)."""
    e2_word = HallWord.from_word((2,))
    if V.coefficient(e2_word) != 0:
        raise ValueError("V must lie in the ideal generated by e1")
    U = U.truncate(truncation)
    V = V.truncate(truncation)
    lhs = reduced_coords(U + V)
    expm1_over = PowerSeries(
        [Fraction(1, math.factorial(n + 1)) for n in range(truncation + 1)]
    )
    W = ad_series(expm1_over, U, V)
    rhs = reduced_coords(bch(W, U))
    return SplittingCheck(lhs == rhs, lhs, rhs)


MONODROMY_IDENTITIES = ("commutator_series", "twisted_generator", "bernoulli_series")


class MonodromyIdentityCheck(NamedTuple):
    identity: str
    a: int
    N: int
    truncation: int
    equal: bool
    lhs: ReducedCoords
    rhs: ReducedCoords


def verify_monodromy_identity(
    identity: str, a: int, N: int, truncation: int
) -> MonodromyIdentityCheck:
    """Verify one of the REDUCED-quotient monodromy identities.

    commutator_series:  log(phi_0) == (1 - exp(z)) e1
    twisted_generator:  log(T(gamma_2)) == e2 + N z exp(z)/(exp(z)-1) e1
    bernoulli_series:   log(gamma_1^a gamma_2 gamma_1^(N-a)) - N e1 - e2
                        == N sum_j B_{j+1}(a/N) z^j/j! applied to the
                        invariant generator
    """
    if identity not in MONODROMY_IDENTITIES:
        raise ValueError(f"unknown identity {identity!r}")
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 <= a < N:
        raise ValueError("a must satisfy 0 <= a < N")
    D = truncation
    if identity == "commutator_series":
        lhs = reduced_coords(log_of_word(phi_zero(), D))
        rhs = ReducedCoords.from_e1_series(reduced_generator_series(0, 1, D - 1), D)
    elif identity == "twisted_generator":
        lhs = reduced_coords(log_of_word(apply_monodromy(GroupWord.gamma(2), N), D))
        twist = _exp_ps(D - 1) * exp_minus_one_over_z(D - 1).inverse()
        base = ReducedCoords.from_e1_series(twist * N, D)
        rhs = ReducedCoords(Fraction(1), base.ze1)
    else:
        if D < 3:
            raise ValueError("bernoulli_series needs truncation >= 3")
        lhs = _twisted_torsion_log(a, N, D)
        gen = reduced_coords(invariant_log_generator(a, 0, N, D))
        series = PowerSeries(
            [
                Fraction(N, math.factorial(j)) * bernoulli_polynomial(j + 1)(Fraction(a, N))
                for j in range(D)
            ]
        )
        rhs = gen.apply_series(series)
    return MonodromyIdentityCheck(identity, a, N, D, lhs == rhs, lhs, rhs)


def _twisted_torsion_log(a: int, N: int, truncation: int) -> ReducedCoords:
    """REDUCED coordinates of log(gamma_1^a gamma_2 gamma_1^(N-a)) - N e1 - e2."""
    word = GroupWord.gamma(1, a) * GroupWord.gamma(2) * GroupWord.gamma(1, N - a)
    x = (
        log_of_word(word, truncation)
        - N * generator(1, truncation)
        - generator(2, truncation)
    )
    return reduced_coords(x)


class TorsionResidue(NamedTuple):
    k: int
    a: int
    N: int
    truncation: int
    lie_value: Fraction
    closed_form: Fraction
    equal: bool
    note: str | None


def residue_at_torsion(k: int, a: int, N: int, truncation: int | None = None) -> TorsionResidue:
    """Residue of weight k at the torsion parameter a/N, both ways.

    The Lie side extracts the coefficient r_{k+1} of z^{k+1} applied to the
    invariant generator from the twisted-torsion logarithm, then applies the
    projection factor -(k+1)/(k+2).  The closed form is
    -N/((k+2) k!) B_{k+2}(a/N); the two must agree exactly.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 <= a < N:
        raise ValueError("a must satisfy 0 <= a < N")
    D = truncation if truncation is not None else k + 3
    if D < k + 3:
        raise ValueError(f"truncation {D} too small: need at least k + 3 = {k + 3}")
    lhs = _twisted_torsion_log(a, N, D)
    if lhs.e2 != 0:
        raise ConsistencyError("twisted torsion log has an unexpected e2 component")
    gen = reduced_coords(invariant_log_generator(a, 0, N, D))
    r = _divide_valuation_one(list(lhs.ze1), list(gen.ze1))
    lie_value = Fraction(-(k + 1), k + 2) * r[k + 1]
    closed = Fraction(-N, (k + 2) * math.factorial(k)) * bernoulli_polynomial(k + 2)(
        Fraction(a, N)
    )
    note = None
    if lie_value != closed:
        alt = Fraction(-N, (k + 2) * math.factorial(k)) * bernoulli_polynomial(k)(
            Fraction(a, N)
        )
        note = (
            "degree-k Bernoulli variant matches"
            if lie_value == alt
            else "matches neither Bernoulli variant"
        )
    return TorsionResidue(k, a, N, D, lie_value, closed, lie_value == closed, note)


def _divide_valuation_one(c: list[Fraction], f: list[Fraction]) -> list[Fraction]:
    """Solve c(z) = r(z) f(z) where f has valuation exactly one."""
    if not f or f[0] != 0 or len(f) < 2 or f[1] == 0:
        raise ConsistencyError("divisor series must have valuation exactly one")
    if c and c[0] != 0:
        raise ConsistencyError("dividend series must have zero constant term")
    n = len(c) - 1
    r = [Fraction(0)] * n
    for m in range(1, n + 1):
        acc = c[m]
        for j in range(m - 1):
            fi = m - j
            if fi < len(f):
                acc -= r[j] * f[fi]
        r[m - 1] = acc / f[1]
    return r


class SymTensor:
    """Element of Sym^m of the 2-dimensional space spanned by e1, e2.

    Coordinates are on the monomials e1^i e2^(m-i); index i counts e1
    factors.
    """

    __slots__ = ("weight", "coeffs")

    def __init__(self, weight: int, coeffs):
        if weight < 0:
            raise ValueError("weight must be >= 0")
        cs = [as_rational(c) for c in coeffs]
        if len(cs) != weight + 1:
            raise ValueError("need one coefficient per monomial e1^i e2^(m-i)")
        self.weight = weight
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, weight: int, e1_count: int) -> "SymTensor":
        if not 0 <= e1_count <= weight:
            raise ValueError("e1 count out of range")
        coeffs = [Fraction(0)] * (weight + 1)
        coeffs[e1_count] = Fraction(1)
        return cls(weight, coeffs)

    def __add__(self, other: "SymTensor") -> "SymTensor":
        if self.weight != other.weight:
            raise ValueError("cannot add symmetric tensors of different weights")
        return SymTensor(self.weight, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, factor):
        factor = as_rational(factor)
        return SymTensor(self.weight, [factor * c for c in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymTensor)
            and self.weight == other.weight
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return f"SymTensor(weight={self.weight}, coeffs={[str(c) for c in self.coeffs]})"


def pr_project(dual_index: int, x: SymTensor) -> SymTensor:
    """Pairing-and-deletion projection Sym^m -> Sym^(m-1) with prefactor
    1/(m+1): each slot equal to e_{dual_index} is deleted in turn."""
    if dual_index not in (1, 2):
        raise ValueError("dual index must be 1 or 2")
    m = x.weight
    if m < 1:
        raise ValueError("weight must be >= 1")
    out = [Fraction(0)] * m
    for i, c in enumerate(x.coeffs):
        if c == 0:
            continue
        if dual_index == 1:
            if i >= 1:
                out[i - 1] += Fraction(i, m + 1) * c
        else:
            if m - i >= 1:
                out[i] += Fraction(m - i, m + 1) * c
    return SymTensor(m - 1, out)


def mu_dual(x: SymTensor) -> dict[int, SymTensor]:
    """Symmetric multiplication by each generator: weight m -> m+1 pieces,
    keyed by the generator index.  pr_project is a section of this map."""
    m = x.weight
    by_e1 = [Fraction(0)] * (m + 2)
    by_e2 = [Fraction(0)] * (m + 2)
    for i, c in enumerate(x.coeffs):
        by_e1[i + 1] += c
        by_e2[i] += c
    return {1: SymTensor(m + 1, by_e1), 2: SymTensor(m + 1, by_e2)}
