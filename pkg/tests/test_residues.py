"""Quotient spaces, monodromy identities, and the torsion residue."""

import random
from fractions import Fraction

import pytest

from conftest import random_lie
from horolab import (
    LieElement,
    QuotientTag,
    SymTensor,
    ad_series,
    bracket,
    commutator_log,
    generator,
    invariant_log_generator,
    log_module_coords,
    log_of_word,
    module_generator_presentation,
    module_monomial_apply,
    mu_dual,
    phi_zero,
    pr_project,
    quotient_reduce,
    reduced_generator_series,
    residue_at_torsion,
    scale_module_monomials,
    verify_exp_splitting,
    verify_monodromy_identity,
)
from horolab.exact import exp_series
from horolab.residues import reduced_coords


def test_reduced_quotient_basics():
    e1, e2 = generator(1, 5), generator(2, 5)
    u0 = bracket(e1, e2)
    coords = reduced_coords(u0)
    assert coords.e2 == 0
    assert coords.ze1 == (0, -1, 0, 0, 0)  # [e1,e2] = -z e1
    assert quotient_reduce(bracket(e1, u0), QuotientTag.REDUCED).is_zero()
    deep = bracket(u0, bracket(e1, u0))  # inside [L', L']
    assert quotient_reduce(deep, QuotientTag.DERIVED_ABELIAN).is_zero()
    assert quotient_reduce(deep, QuotientTag.REDUCED).is_zero()
    assert quotient_reduce(u0, QuotientTag.FULL) == u0


def test_log_module_coordinates_of_commutator_log():
    x = log_of_word(phi_zero(), 4)
    coords = log_module_coords(x)
    assert coords[(0, 0)] == 1
    assert coords[(1, 0)] == Fraction(1, 2)
    assert coords[(0, 1)] == Fraction(1, 2)
    # degree-1 components do not survive in the module
    y = x + generator(1, 4)
    assert log_module_coords(y) == coords


def test_reduced_dimension_counts():
    for D in (2, 4, 6):
        x = LieElement.zero(D)
        coords = reduced_coords(x)
        assert len(coords.ze1) == D


def test_invariant_generator_closed_form():
    for (a, N) in ((1, 3), (2, 5), (0, 4)):
        gen = invariant_log_generator(a, 1, N, 6)
        assert log_module_coords(gen)[(0, 0)] == 1  # leading term [e1,e2]
        coords = reduced_coords(gen)
        closed = reduced_generator_series(a, N, 5)
        assert coords.e2 == 0
        assert list(coords.ze1) == list(closed.coeffs)


def test_invariant_generator_is_independent_of_b():
    base = reduced_coords(invariant_log_generator(1, 0, 3, 6))
    for b in (1, 2):
        assert reduced_coords(invariant_log_generator(1, b, 3, 6)) == base


def test_invariant_generator_multiplication_invariance():
    # Replicates the four-line computation: conjugating back by
    # exp(a ad_{e2} + b ad_{e1}) after scaling the module monomials by
    # (N+1)^(i+j) must reproduce the generator.
    D = 6
    for (a, b, N) in ((1, 0, 3), (2, 1, 5), (0, 2, 4)):
        gen = invariant_log_generator(a, b, N, D)
        u0log = commutator_log(D)
        presentation = module_generator_presentation(gen, u0log)
        scaled = module_monomial_apply(
            scale_module_monomials(presentation, N + 1), u0log
        )
        direction = a * generator(2, D) + b * generator(1, D)
        back = quotient_reduce(
            ad_series(exp_series(1, D), direction, scaled), QuotientTag.LOG_MODULE
        )
        assert back == gen


def test_exp_splitting_examples():
    e1, e2 = generator(1, 6), generator(2, 6)
    assert verify_exp_splitting(e2, LieElement.zero(6), 6).equal
    assert verify_exp_splitting(e2, e1, 6).equal
    U = e2 + bracket(e1, e2)
    V = bracket(e1, e2)
    assert verify_exp_splitting(U, V, 6).equal
    with pytest.raises(ValueError):
        verify_exp_splitting(e2, e2, 6)  # V not in the ideal generated by e1


def test_exp_splitting_random():
    rng = random.Random(23)
    for _ in range(8):
        U = random_lie(rng, 6)
        V = random_lie(rng, 6, include_e2=False)
        assert verify_exp_splitting(U, V, 6).equal


def test_monodromy_identities():
    check = verify_monodromy_identity("commutator_series", 0, 1, 2)
    assert check.equal
    assert check.lhs.ze1[1] == -1
    assert verify_monodromy_identity("commutator_series", 0, 1, 6).equal
    assert verify_monodromy_identity("twisted_generator", 0, 3, 6).equal
    assert verify_monodromy_identity("bernoulli_series", 1, 3, 8).equal
    with pytest.raises(ValueError):
        verify_monodromy_identity("unknown", 0, 3, 6)
    with pytest.raises(ValueError):
        verify_monodromy_identity("bernoulli_series", 3, 3, 6)


def test_residue_at_torsion_spot_values():
    res = residue_at_torsion(0, 1, 3)
    assert res.lie_value == Fraction(1, 12) and res.equal
    res = residue_at_torsion(1, 1, 3)
    assert res.lie_value == Fraction(-1, 27) and res.equal
    res = residue_at_torsion(1, 0, 3)
    assert res.lie_value == 0 and res.equal
    assert res.note is None
    with pytest.raises(ValueError):
        residue_at_torsion(2, 1, 3, truncation=4)


def test_residue_scaling_in_truncation():
    # A larger truncation must not change the extracted value.
    for D in (4, 6, 8):
        assert residue_at_torsion(1, 1, 3, truncation=D).lie_value == Fraction(-1, 27)


def test_pr_projection():
    for k in range(0, 6):
        top = SymTensor.monomial(k + 1, 0)  # e2^(k+1)
        assert pr_project(2, top) == Fraction(k + 1, k + 2) * SymTensor.monomial(k, 0)
        assert pr_project(1, top) == SymTensor(k, [0] * (k + 1))
    with pytest.raises(ValueError):
        pr_project(2, SymTensor.monomial(0, 0))


def test_pr_is_a_section_of_mu_dual():
    for m in range(0, 11):
        for i in range(m + 1):
            x = SymTensor.monomial(m, i)
            pieces = mu_dual(x)
            back = pr_project(1, pieces[1]) + pr_project(2, pieces[2])
            assert back == x
