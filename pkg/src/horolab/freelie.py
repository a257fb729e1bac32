"""Truncated free Lie algebra on two generators over Q.

Basis: Lyndon words on the alphabet {1, 2} (standing for the generators
e1 < e2), each identified with its standard bracketing.  These bracketings
form a Hall set; ``hall_basis`` lists them by degree and then
lexicographically, and the count per degree matches the Witt numbers.

Everything nonlinear (brackets, Baker-Campbell-Hausdorff products,
logarithms of group words) is computed in the truncated free associative
algebra on the same two letters and projected back to Lyndon coordinates
by triangular elimination.  The projection insists that the associative
element really was a Lie element, so every BCH-type computation carries a
built-in primitivity check.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ConsistencyError
from .exact import PowerSeries, RationalLike, as_rational

__all__ = [
    "HallWord",
    "LieElement",
    "GroupWord",
    "hall_basis",
    "hall_word",
    "witt_number",
    "generator",
    "bracket",
    "bch",
    "ad_series",
    "log_of_word",
    "apply_monodromy",
    "phi_zero",
]

Word = tuple[int, ...]

_GENERATOR_NAMES = {1: "e1", 2: "e2"}


def witt_number(n: int, alphabet: int = 2) -> int:
    """Dimension of the degree-n component of the free Lie algebra."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _moebius(d) * alphabet ** (n // d)
    return total // n


def _moebius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def _lyndon_words(max_degree: int) -> list[Word]:
    """All Lyndon words on {1, 2} of length <= max_degree (Duval's method)."""
    words: list[Word] = []
    t = [1]
    while t:
        if len(t) <= max_degree:
            words.append(tuple(t))
        t = (t * (max_degree // len(t)) + t[: max_degree % len(t)])[:max_degree]
        while t and t[-1] == 2:
            t.pop()
        if t:
            t[-1] += 1
    return sorted(words, key=lambda w: (len(w), w))


class HallWord:
    """A Lyndon word with its standard bracketing.

    ``left``/``right`` are None exactly for the generators; otherwise the
    word factors as left.word + right.word with right the lexicographically
    smallest proper suffix.
    """

    __slots__ = ("word", "left", "right")

    _registry: dict[Word, "HallWord"] = {}
    _registry_lock = threading.Lock()

    def __init__(self, word: Word, left, right):
        self.word = word
        self.left = left
        self.right = right

    @classmethod
    def from_word(cls, word: Word) -> "HallWord":
        cached = cls._registry.get(word)
        if cached is not None:
            return cached
        if len(word) == 1:
            hw = cls(word, None, None)
        else:
            suffix = min(word[i:] for i in range(1, len(word)))
            split = len(word) - len(suffix)
            hw = cls(word, cls.from_word(word[:split]), cls.from_word(suffix))
        with cls._registry_lock:
            return cls._registry.setdefault(word, hw)

    @property
    def degree(self) -> int:
        return len(self.word)

    def expansion(self) -> dict[Word, int]:
        """Tensor-algebra expansion of the bracketing (cached per word)."""
        return _expansion(self.word)

    def sort_key(self) -> tuple[int, Word]:
        return (len(self.word), self.word)

    def __lt__(self, other: "HallWord") -> bool:
        return self.sort_key() < other.sort_key()

    def __eq__(self, other) -> bool:
        return isinstance(other, HallWord) and self.word == other.word

    def __hash__(self) -> int:
        return hash(self.word)

    def __str__(self) -> str:
        if len(self.word) == 1:
            return _GENERATOR_NAMES[self.word[0]]
        return f"[{self.left},{self.right}]"

    __repr__ = __str__


_expansion_cache: dict[Word, dict[Word, int]] = {}
_expansion_lock = threading.Lock()


def _expansion(word: Word) -> dict[Word, int]:
    exp = _expansion_cache.get(word)
    if exp is not None:
        return exp
    hw = HallWord.from_word(word)
    if hw.degree == 1:
        exp = {word: 1}
    else:
        left = _expansion(hw.left.word)
        right = _expansion(hw.right.word)
        acc: dict[Word, int] = {}
        for wl, cl in left.items():
            for wr, cr in right.items():
                c = cl * cr
                _bump(acc, wl + wr, c)
                _bump(acc, wr + wl, -c)
        exp = acc
    with _expansion_lock:
        _expansion_cache[word] = exp
    return exp


def _bump(d: dict, key, value) -> None:
    new = d.get(key, 0) + value
    if new:
        d[key] = new
    else:
        d.pop(key, None)


_basis_cache: dict[int, list[HallWord]] = {}
_basis_lock = threading.Lock()


def hall_basis(max_degree: int) -> list[HallWord]:
    """All basis words of degree <= max_degree, by degree then lexicographic."""
    if max_degree < 1:
        raise ValueError("degree bound must be >= 1")
    basis = _basis_cache.get(max_degree)
    if basis is None:
        with _basis_lock:
            basis = _basis_cache.get(max_degree)
            if basis is None:
                basis = [HallWord.from_word(w) for w in _lyndon_words(max_degree)]
                _basis_cache[max_degree] = basis
    return basis


def hall_word(word: Iterable[int]) -> HallWord:
    """The basis word for a Lyndon letter sequence such as (1, 1, 2)."""
    word = tuple(word)
    if word not in {hw.word for hw in hall_basis(max(len(word), 1))}:
        raise ValueError(f"{word} is not a Lyndon word on (1, 2)")
    return HallWord.from_word(word)


class TensorSeries:
    """Element of the free associative algebra on letters 1, 2, truncated
    beyond total degree ``order``.  Keys are letter tuples."""

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Mapping[Word, Fraction] | None = None):
        self.order = order
        self.terms: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                if len(w) <= order and c != 0:
                    self.terms[w] = c

    @classmethod
    def zero(cls, order: int) -> "TensorSeries":
        return cls(order)

    @classmethod
    def one(cls, order: int) -> "TensorSeries":
        return cls(order, {(): Fraction(1)})

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __add__(self, other: "TensorSeries") -> "TensorSeries":
        out = dict(self.terms)
        for w, c in other.terms.items():
            _bump(out, w, c)
        return TensorSeries(min(self.order, other.order), out)

    def __sub__(self, other: "TensorSeries") -> "TensorSeries":
        out = dict(self.terms)
        for w, c in other.terms.items():
            _bump(out, w, -c)
        return TensorSeries(min(self.order, other.order), out)

    def scale(self, factor: RationalLike) -> "TensorSeries":
        factor = as_rational(factor)
        return TensorSeries(self.order, {w: factor * c for w, c in self.terms.items()})

    def __mul__(self, other: "TensorSeries") -> "TensorSeries":
        order = min(self.order, other.order)
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            room = order - len(w1)
            if room < 0:
                continue
            for w2, c2 in other.terms.items():
                if len(w2) <= room:
                    _bump(out, w1 + w2, c1 * c2)
        return TensorSeries(order, out)

    def exp(self) -> "TensorSeries":
        if self.constant_term() != 0:
            raise ValueError("exp needs a zero constant term")
        result = TensorSeries.one(self.order)
        term = TensorSeries.one(self.order)
        for n in range(1, self.order + 1):
            term = (term * self).scale(Fraction(1, n))
            if not term.terms:
                break
            result = result + term
        return result

    def log(self) -> "TensorSeries":
        if self.constant_term() != 1:
            raise ValueError("log needs constant term one")
        u = self - TensorSeries.one(self.order)
        result = TensorSeries.zero(self.order)
        power = TensorSeries.one(self.order)
        for n in range(1, self.order + 1):
            power = power * u
            if not power.terms:
                break
            result = result + power.scale(Fraction((-1) ** (n + 1), n))
        return result

    def degree_slice(self, n: int) -> dict[Word, Fraction]:
        return {w: c for w, c in self.terms.items() if len(w) == n}


class LieElement:
    """Element of the free Lie algebra truncated beyond degree ``truncation``,
    stored sparsely in the Lyndon basis."""

    __slots__ = ("truncation", "coords")

    def __init__(self, truncation: int, coords: Mapping[HallWord, Fraction] | None = None):
        if truncation < 1:
            raise ValueError("truncation degree must be >= 1")
        self.truncation = truncation
        self.coords: dict[HallWord, Fraction] = {}
        if coords:
            for hw, c in coords.items():
                c = as_rational(c)
                if hw.degree <= truncation and c != 0:
                    self.coords[hw] = c

    @classmethod
    def zero(cls, truncation: int) -> "LieElement":
        return cls(truncation)

    def coefficient(self, hw: HallWord) -> Fraction:
        return self.coords.get(hw, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coords

    def degree_part(self, n: int) -> "LieElement":
        return LieElement(
            self.truncation, {h: c for h, c in self.coords.items() if h.degree == n}
        )

    def truncate(self, truncation: int) -> "LieElement":
        return LieElement(
            truncation, {h: c for h, c in self.coords.items() if h.degree <= truncation}
        )

    def __add__(self, other: "LieElement") -> "LieElement":
        t = min(self.truncation, other.truncation)
        out = {h: c for h, c in self.coords.items() if h.degree <= t}
        for h, c in other.coords.items():
            if h.degree <= t:
                _bump(out, h, c)
        return LieElement(t, out)

    def __neg__(self) -> "LieElement":
        return LieElement(self.truncation, {h: -c for h, c in self.coords.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __mul__(self, factor: RationalLike) -> "LieElement":
        factor = as_rational(factor)
        return LieElement(self.truncation, {h: factor * c for h, c in self.coords.items()})

    __rmul__ = __mul__

    def to_tensor(self) -> TensorSeries:
        out: dict[Word, Fraction] = {}
        for hw, c in self.coords.items():
            for w, mult in hw.expansion().items():
                _bump(out, w, c * mult)
        return TensorSeries(self.truncation, out)

    def items(self) -> list[tuple[HallWord, Fraction]]:
        return sorted(self.coords.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LieElement)
            and self.truncation == other.truncation
            and self.coords == other.coords
        )

    def __repr__(self) -> str:
        if not self.coords:
            return "0"
        return " + ".join(f"({c})*{h}" for h, c in self.items())


def generator(i: int, truncation: int) -> LieElement:
    """The generator e1 or e2 as a LieElement."""
    if i not in (1, 2):
        raise ValueError("generator index must be 1 or 2")
    return LieElement(truncation, {HallWord.from_word((i,)): Fraction(1)})


def _from_tensor(t: TensorSeries, truncation: int) -> LieElement:
    """Triangular extraction of Lyndon coordinates from a Lie tensor element.

    Raises ConsistencyError if the input is not primitive (not a Lie
    element), which would indicate a broken upstream computation.
    """
    if t.constant_term() != 0:
        raise ConsistencyError("Lie element cannot have a constant term")
    coords: dict[HallWord, Fraction] = {}
    basis = hall_basis(truncation)
    by_degree: dict[int, list[HallWord]] = {}
    for hw in basis:
        by_degree.setdefault(hw.degree, []).append(hw)
    for n in range(1, truncation + 1):
        residual = t.degree_slice(n)
        for hw in by_degree.get(n, []):  # lexicographic within the degree
            c = residual.get(hw.word)
            if not c:
                continue
            coords[hw] = c
            for w, mult in hw.expansion().items():
                _bump(residual, w, -c * mult)
        if residual:
            raise ConsistencyError(
                f"tensor element is not a Lie element in degree {n}: {residual}"
            )
    return LieElement(truncation, coords)


_bracket_cache: dict[tuple[Word, Word], dict[HallWord, Fraction]] = {}
_bracket_lock = threading.Lock()


def _bracket_basis(h1: HallWord, h2: HallWord, truncation: int) -> dict[HallWord, Fraction]:
    degree = h1.degree + h2.degree
    key = (h1.word, h2.word)
    result = _bracket_cache.get(key)
    if result is None:
        t1, t2 = h1.expansion(), h2.expansion()
        comm: dict[Word, Fraction] = {}
        for w1, c1 in t1.items():
            for w2, c2 in t2.items():
                c = Fraction(c1 * c2)
                _bump(comm, w1 + w2, c)
                _bump(comm, w2 + w1, -c)
        result = _from_tensor(TensorSeries(degree, comm), degree).coords
        with _bracket_lock:
            _bracket_cache[key] = result
    if degree > truncation:
        return {}
    return result


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """The Lie bracket, truncated beyond the common truncation degree."""
    t = min(x.truncation, y.truncation)
    out: dict[HallWord, Fraction] = {}
    for h1, c1 in x.coords.items():
        for h2, c2 in y.coords.items():
            if h1.degree + h2.degree > t or h1 == h2:
                continue
            for hw, m in _bracket_basis(h1, h2, t).items():
                _bump(out, hw, c1 * c2 * m)
    return LieElement(t, out)


def bch(x: LieElement, y: LieElement) -> LieElement:
    """log(exp(x) exp(y)) in the truncated free Lie algebra."""
    t = min(x.truncation, y.truncation)
    s = x.to_tensor().exp() * y.to_tensor().exp()
    return _from_tensor(s.log(), t)


def ad_series(f: PowerSeries, x: LieElement, y: LieElement) -> LieElement:
    """sum_j f_j ad_x^j(y), truncated beyond the common truncation degree."""
    t = min(x.truncation, y.truncation)
    out = f.coefficient(0) * y
    term = y
    for j in range(1, f.order + 1):
        term = bracket(x, term)
        if term.is_zero():
            break
        out = out + f.coefficient(j) * term
    return out.truncate(t)


class GroupWord:
    """Freely reduced word in gamma_1^{+-1}, gamma_2^{+-1}.

    Letters are the signed integers +-1, +-2; adjacent inverse pairs are
    cancelled at construction.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        stack: list[int] = []
        for letter in letters:
            if letter not in (1, -1, 2, -2):
                raise ValueError(f"invalid group letter {letter}")
            if stack and stack[-1] == -letter:
                stack.pop()
            else:
                stack.append(letter)
        self.letters = tuple(stack)

    @classmethod
    def gamma(cls, i: int, exponent: int = 1) -> "GroupWord":
        if i not in (1, 2):
            raise ValueError("generator index must be 1 or 2")
        sign = 1 if exponent >= 0 else -1
        return cls([sign * i] * abs(exponent))

    @classmethod
    def identity(cls) -> "GroupWord":
        return cls()

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord([-letter for letter in reversed(self.letters)])

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for letter in self.letters:
            base = f"g{abs(letter)}"
            parts.append(base if letter > 0 else base + "^-1")
        return " ".join(parts)


def phi_zero() -> GroupWord:
    """The commutator gamma_1 gamma_2 gamma_1^-1 gamma_2^-1 (loop around 0)."""
    return GroupWord([1, 2, -1, -2])


def apply_monodromy(w: GroupWord, N: int) -> GroupWord:
    """Letterwise substitution gamma_1 -> gamma_1, gamma_2 -> gamma_2 gamma_1^N,
    followed by free reduction."""
    if N < 1:
        raise ValueError("N must be >= 1")
    out: list[int] = []
    for letter in w.letters:
        if letter == 1 or letter == -1:
            out.append(letter)
        elif letter == 2:
            out.extend([2] + [1] * N)
        else:
            out.extend([-1] * N + [-2])
    return GroupWord(out)


def log_of_word(w: GroupWord, truncation: int) -> LieElement:
    """log of the product of exponentials of the word's letters.

    Consecutive powers of one generator are folded into a single
    exponential, then the associative product is logged and projected.
    """
    if truncation < 1:
        raise ValueError("truncation degree must be >= 1")
    product = TensorSeries.one(truncation)
    idx = 0
    letters = w.letters
    while idx < len(letters):
        letter = letters[idx]
        run = idx
        while run < len(letters) and letters[run] == letter:
            run += 1
        count = (run - idx) * (1 if letter > 0 else -1)
        product = product * _exp_generator_power(abs(letter), count, truncation)
        idx = run
    return _from_tensor(product.log(), truncation)


def _exp_generator_power(i: int, count: int, truncation: int) -> TensorSeries:
    """exp(count * e_i) as a tensor series: sum_n count^n (i,...,i)/n!."""
    terms: dict[Word, Fraction] = {}
    coeff = Fraction(1)
    for n in range(truncation + 1):
        if n > 0:
            coeff = coeff * count / n
        terms[(i,) * n] = coeff
    return TensorSeries(truncation, terms)
