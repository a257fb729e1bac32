"""Shared helpers for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from horolab import Divisor, LieElement, hall_basis, hall_word
from horolab.modular import ModMatrix, _bernoulli_residue_table, _horospherical_scale


def random_divisor(N: int, rng: random.Random, size: int = 4) -> Divisor:
    points = [(t1, t2) for t1 in range(N) for t2 in range(N) if (t1, t2) != (0, 0)]
    while True:
        chosen = rng.sample(points, min(size, len(points)))
        coeffs = {p: Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for p in chosen}
        psi = Divisor(N, coeffs)
        if not psi.is_zero():
            return psi


def random_lie(rng: random.Random, truncation: int, max_degree: int = 3,
               include_e2: bool = True) -> LieElement:
    coords = {}
    for hw in hall_basis(truncation):
        if hw.degree > max_degree:
            continue
        if not include_e2 and hw.word == (2,):
            continue
        c = rng.randint(-2, 2)
        if c:
            coords[hw] = Fraction(c)
    if not coords:
        coords[hall_word((1,))] = Fraction(1)
    return LieElement(truncation, coords)


def defining_value(k: int, psi: Divisor, g: ModMatrix) -> Fraction:
    """The horospherical sum evaluated at an arbitrary group element via the
    change of variable t -> g t; used to probe P-invariance pointwise."""
    N = psi.N
    btable = _bernoulli_residue_table(k + 2, N)
    acc = Fraction(0)
    for (t1, t2), q in psi.items():
        acc += q * btable[(g.c * t1 + g.d * t2) % N]
    return _horospherical_scale(k, N) * acc


def akiyama_tanigawa(n: int) -> list[Fraction]:
    """Independent Bernoulli-number oracle; this variant yields B1 = +1/2."""
    A = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        A[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            A[j - 1] = j * (A[j - 1] - A[j])
        out.append(A[0])
    return out
