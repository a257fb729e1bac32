"""Coset combinatorics, divisors, and the horospherical map."""

import math
import random
from fractions import Fraction

import pytest

from conftest import defining_value, random_divisor
from horolab import (
    Divisor,
    ModMatrix,
    act,
    coset_representatives,
    cyclotomic_coefficients,
    horospherical,
    horospherical_value,
    indicator_at_infinity,
    kernel_basis,
    parabolic_elements,
    polylog_coefficients,
    residue_consistency_check,
    residue_zero_divisor,
    surjectivity_report,
    vanishes_at_infinity,
)
from horolab.errors import ModulusMismatchError


def brute_force_gl2_order(N):
    return sum(
        1
        for a in range(N)
        for b in range(N)
        for c in range(N)
        for d in range(N)
        if math.gcd((a * d - b * c) % N, N) == 1
    )


def test_coset_counts():
    assert len(coset_representatives(3)) == 8
    for N in (3, 4, 5):
        expected = brute_force_gl2_order(N) // len(parabolic_elements(N))
        assert len(coset_representatives(N)) == expected
    with pytest.raises(ValueError):
        coset_representatives(2)


def test_identity_coset():
    reps = {g.entries for g in coset_representatives(3)}
    assert (1, 0, 0, 1) in reps
    f = indicator_at_infinity(0, 3)
    for alpha in (1, 2):
        for beta in range(3):
            assert f.value_at(ModMatrix(3, alpha, beta, 0, 1)) == 1


def test_mod_matrix_construction():
    with pytest.raises(ValueError):
        ModMatrix(4, 1, 0, 0, 2)  # determinant 2 is not a unit mod 4
    g = ModMatrix(3, 0, -1, 1, 0)
    assert g.entries == (0, 2, 1, 0)
    assert (g * g.inverse()).entries == (1, 0, 0, 1)
    with pytest.raises(ModulusMismatchError):
        g * ModMatrix.identity(4)


def test_act_examples():
    g = ModMatrix.identity(3)
    assert act(g, (1, 2)) == (1, 2)
    assert act(ModMatrix(3, 0, -1, 1, 0), (1, 0)) == (0, 1)
    assert act(-ModMatrix.identity(3), (1, 2)) == (2, 1)


def test_divisor_invariants():
    with pytest.raises(ValueError):
        Divisor(3, {(0, 0): Fraction(1)})
    with pytest.raises(ValueError):
        Divisor(3, {(3, 3): Fraction(1)})  # reduces to the origin
    psi = Divisor(3, {(1, 0): Fraction(1, 2), (4, 0): Fraction(1, 2)})
    assert psi.coefficient((1, 0)) == 1  # points reduce mod N and merge
    assert psi.degree() == 1
    with pytest.raises(ModulusMismatchError):
        psi + Divisor(4, {(1, 0): 1})


def test_horospherical_examples():
    psi = Divisor.delta(3, (1, 0))
    f = horospherical(1, psi)
    assert f.value_at(ModMatrix.identity(3)) == 0
    g = ModMatrix(3, 0, -1, 1, 0)
    assert f.value_at(g) == Fraction(1, 27)
    assert horospherical_value(1, psi, g) == Fraction(1, 27)
    zero = horospherical(1, Divisor(3, {}))
    assert zero.is_zero()


def test_horospherical_literal_matches_table_everywhere_mod_3():
    rng = random.Random(7)
    for k in (0, 1, 2):
        psi = random_divisor(3, rng)
        f = horospherical(k, psi)
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    for d in range(3):
                        if math.gcd((a * d - b * c) % 3, 3) != 1:
                            continue
                        g = ModMatrix(3, a, b, c, d)
                        assert horospherical_value(k, psi, g) == f.value_at(g)


def test_indicator_at_infinity():
    for k in (0, 1):
        f = indicator_at_infinity(k, 3)
        assert f.value_at(ModMatrix.identity(3)) == 1
        assert f.value_at(-ModMatrix.identity(3)) == (-1) ** k
        assert f.value_at(ModMatrix(3, 0, -1, 1, 0)) == 0
        assert not vanishes_at_infinity(f)
    assert vanishes_at_infinity(horospherical(1, Divisor(3, {})))


def test_residue_zero_divisor_coefficients():
    psi = residue_zero_divisor(1, 1, 3)
    assert psi.coefficient((1, 0)) == 1
    assert psi.coefficient((1, 1)) == Fraction(9, 8)
    assert psi.coefficient((2, 1)) == 0
    assert residue_zero_divisor(2, 2, 3).coefficient((2, 0)) == Fraction(-1, 3)
    with pytest.raises(ValueError):
        residue_zero_divisor(1, 0, 3)
    with pytest.raises(ValueError):
        residue_zero_divisor(0, 1, 3)


def test_residue_zero_divisor_vanishes_at_infinity():
    for N in (3, 4):
        for k in (1, 2):
            for u in range(1, N):
                f = horospherical(k, residue_zero_divisor(k, u, N))
                assert vanishes_at_infinity(f)


def test_parity_and_p_invariance_small():
    rng = random.Random(11)
    for N in (3, 4):
        reps = coset_representatives(N)
        parabolic = parabolic_elements(N)
        for k in (0, 1, 2):
            for _ in range(5):
                psi = random_divisor(N, rng)
                f = horospherical(k, psi)
                for g in reps:
                    assert f.value_at(-g) == (-1) ** k * f.value_at(g)
                    for u in parabolic[:3]:
                        assert defining_value(k, psi, u * g) == f.value_at(g)


def test_equivariance_small():
    rng = random.Random(13)
    N = 3
    reps = coset_representatives(N)
    group_sample = [
        ModMatrix(N, 1, 1, 0, 1),
        ModMatrix(N, 0, 1, 2, 0),
        ModMatrix(N, 1, 0, 1, 1),
        ModMatrix(N, 2, 1, 1, 1),
    ]
    for k in (0, 1, 2):
        for _ in range(5):
            psi = random_divisor(N, rng)
            f = horospherical(k, psi)
            for h in group_sample:
                translated = horospherical(k, psi.translate(h))
                for g in reps:
                    assert translated.value_at(g) == f.value_at(g * h)


def test_kernel_basis_and_rank():
    basis = kernel_basis(1, 3)
    assert len(basis) == 4  # 8 points minus rank 4
    for psi in basis:
        assert horospherical(1, psi).is_zero()
    report = surjectivity_report(1, 3)
    assert report.target_dim == 4
    assert report.rank_full == 4 and report.surjective_full
    assert report.rank_degree_zero == 4
    deg0 = kernel_basis(1, 3, restrict_degree_zero=True)
    assert all(psi.degree() == 0 for psi in deg0)
    assert len(deg0) == 3  # 7-dimensional degree-zero space minus rank 4


def test_surjectivity_with_origin_always_full():
    # The exact ranks: including the origin the map is surjective for every
    # k; the punctured space misses the constants exactly at k = 0, and the
    # degree-zero subspace drops one more dimension at even k for prime N.
    for N in (3, 4):
        for k in range(4):
            report = surjectivity_report(k, N)
            assert report.surjective_with_origin
            if k >= 1:
                assert report.surjective_full
            else:
                assert report.rank_full == report.target_dim - 1
            if k % 2 == 1:
                assert report.surjective_degree_zero
    assert surjectivity_report(2, 3).rank_degree_zero == 3
    assert surjectivity_report(2, 4).surjective_degree_zero  # composite N differs


def test_cyclotomic_and_polylog_combos():
    N, k, u = 3, 1, 1
    psi = residue_zero_divisor(k, u, N)
    combo = cyclotomic_coefficients(k, psi)
    assert combo.residue_zero is True
    assert dict(combo.items()) == {u: Fraction(1, N**k * math.factorial(k))}
    li = polylog_coefficients(k, psi)
    assert dict(li.items()) == {u: Fraction(1)}

    off_line = Divisor(3, {(1, 1): Fraction(2), (2, 2): Fraction(-5)})
    assert cyclotomic_coefficients(1, off_line).is_zero()

    pair = Divisor.delta(3, (1, 0)) - Divisor.delta(3, (2, 0))
    li = polylog_coefficients(1, pair)
    assert dict(li.items()) == {1: Fraction(1), 2: Fraction(-1)}

    kernel_element = kernel_basis(1, 3)[0]
    assert cyclotomic_coefficients(1, kernel_element).residue_zero is True


def test_residue_consistency_examples():
    psi = Divisor.delta(3, (1, 0))
    check = residue_consistency_check(1, psi, ModMatrix.identity(3))
    assert check.equal and check.lhs == 0
    scaled = Fraction(7, 5) * psi
    check = residue_consistency_check(1, scaled, ModMatrix(3, 0, 1, 2, 1))
    assert check.equal
    rng = random.Random(17)
    for _ in range(5):
        psi = random_divisor(4, rng)
        for g in coset_representatives(4)[:4]:
            assert residue_consistency_check(2, psi, g).equal


def test_divisor_translate_moves_support():
    psi = Divisor.delta(3, (1, 0))
    h = ModMatrix(3, 0, -1, 1, 0)
    assert psi.translate(h).coefficient((0, 1)) == 1
