"""Acceptance suite: one test per criterion, at the stated grids and
tolerances, with one printed pass/fail line each.

Criterion runtimes are budgets, asserted after the content checks; the
content grids are exactly the stated ones.
"""

import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from mpmath import mp

from conftest import defining_value, random_divisor
from horolab import (
    Divisor,
    coset_representatives,
    distribution_relation_check,
    embeddings,
    horospherical,
    hurwitz_zeta,
    kernel_basis,
    kernel_relation_residual,
    li_at_root_of_unity,
    parabolic_elements,
    residue_at_torsion,
    residue_consistency_check,
    residue_generating_series,
    residue_zero_divisor,
    surjectivity_report,
    vanishes_at_infinity,
    verify_exp_splitting,
    verify_monodromy_identity,
    verify_polylog_collapse,
)
from horolab.freelie import bch, bracket, generator, hall_word
from conftest import random_lie


@contextmanager
def criterion(number: int, budget_seconds: float, description: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        print(f"[criterion {number}] FAIL    ({elapsed:6.1f}s / {budget_seconds}s) {description}")
        raise
    elapsed = time.perf_counter() - start
    print(f"[criterion {number}] PASS    ({elapsed:6.1f}s / {budget_seconds}s) {description}")
    assert elapsed < budget_seconds, (
        f"criterion {number} exceeded its runtime budget: {elapsed:.1f}s"
    )


def test_criterion_1_bernoulli_suite():
    with criterion(1, 5.0, "Bernoulli distribution relation and residue series"):
        for k in range(0, 13):
            for m in range(1, 7):
                for x in (Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)):
                    assert distribution_relation_check(k, m, x).equal, (k, m, x)
        for N in range(1, 9):
            for a in range(N):
                lhs, rhs = residue_generating_series(a, N, 20)
                assert lhs.coeffs == rhs.coeffs, (a, N)


def test_criterion_2_horospherical_suite():
    with criterion(2, 30.0, "horospherical invariances and surjectivity ranks"):
        rng = random.Random(20240)
        for N in (3, 4, 5):
            reps = coset_representatives(N)
            parabolic = parabolic_elements(N)
            translates = [rng.choice(reps) * rng.choice(parabolic) for _ in range(20)]
            divisors = [random_divisor(N, rng) for _ in range(50)]
            for k in range(5):
                report = surjectivity_report(k, N)
                assert report.surjective_with_origin, (N, k, report)
                if k >= 1:
                    assert report.surjective_full, (N, k, report)
                for psi in divisors:
                    f = horospherical(k, psi)
                    for g in reps:
                        value = f.value_at(g)
                        assert f.value_at(-g) == (-1) ** k * value, (N, k, g)
                        for u in parabolic:
                            assert defining_value(k, psi, u * g) == value, (N, k, g)
                for psi in divisors[:10]:
                    f = horospherical(k, psi)
                    for h in translates:
                        translated = horospherical(k, psi.translate(h))
                        assert all(
                            translated.value_at(g) == f.value_at(g * h) for g in reps
                        ), (N, k, h)


def test_criterion_3_residue_zero_divisors():
    with criterion(3, 30.0, "residue-zero canonical divisors across the grid"):
        for N in range(3, 8):
            for u in range(1, N):
                for k in range(1, 5):
                    f = horospherical(k, residue_zero_divisor(k, u, N))
                    assert vanishes_at_infinity(f), (N, u, k)


def test_criterion_4_lie_suite():
    with criterion(4, 120.0, "free-Lie splitting, monodromy identities, BCH oracle"):
        rng = random.Random(20244)
        for _ in range(20):
            U = random_lie(rng, 6)
            V = random_lie(rng, 6, include_e2=False)
            assert verify_exp_splitting(U, V, 6).equal
        for N in (3, 4, 5):
            assert verify_monodromy_identity("commutator_series", 0, N, 8).equal
            assert verify_monodromy_identity("twisted_generator", 0, N, 8).equal
            for a in range(N):
                assert verify_monodromy_identity("bernoulli_series", a, N, 8).equal, (a, N)
        z = bch(generator(1, 3), generator(2, 3))
        e1, e2 = generator(1, 3), generator(2, 3)
        assert z.coefficient(hall_word((1, 1, 2))) == Fraction(1, 12)
        assert z.degree_part(3) == Fraction(1, 12) * bracket(
            e1, bracket(e1, e2)
        ) - Fraction(1, 12) * bracket(e2, bracket(e1, e2))


def test_criterion_5_residue_closed_form():
    with criterion(5, 120.0, "torsion residues equal the closed Bernoulli form"):
        assert residue_at_torsion(1, 1, 3).lie_value == Fraction(-1, 27)
        assert residue_at_torsion(0, 1, 3).lie_value == Fraction(1, 12)
        for k in range(0, 6):
            for N in range(2, 8):  # N = 1 only has the excluded zero point
                for a in range(N):
                    res = residue_at_torsion(k, a, N, truncation=k + 3)
                    assert res.equal, (k, a, N, res)


def test_criterion_6_consistency_identity():
    with criterion(6, 30.0, "horospherical vs closed-form residue consistency"):
        rng = random.Random(20246)
        for N in (3, 4):
            reps = coset_representatives(N)
            for k in range(4):
                for _ in range(20):
                    psi = random_divisor(N, rng)
                    for g in reps:
                        assert residue_consistency_check(k, psi, g).equal, (N, k, g)


def test_criterion_7_numeric_regulator():
    with criterion(7, 120.0, "polylog anchors and regulator collapse"):
        prec = 200
        with mp.workprec(640):
            li = li_at_root_of_unity(2, 1, 2, prec)
            assert abs(li.value.real + mp.pi**2 / 12) < mp.mpf(10) ** (-40)
            hz = hurwitz_zeta(2, Fraction(1, 2), prec)
            assert abs(hz.value.real - mp.pi**2 / 2) < mp.mpf(10) ** (-40)
        tolerance = mp.mpf(10) ** (-35)
        for N in (3, 5):
            for k in (1, 2):
                for u in range(1, N):
                    for j in embeddings(N):
                        check = verify_polylog_collapse(k, u, N, j, prec)
                        assert check.difference < tolerance, (N, k, u, j)
                        assert check.lhs.error_bound < tolerance


def test_criterion_8_kernel_relations():
    with criterion(8, 180.0, "kernel divisors force polylog relations"):
        prec = 200
        tolerance = mp.mpf(10) ** (-35)
        for N in (3, 4, 5):
            for k in (1, 2, 3):
                basis = kernel_basis(k, N)
                assert basis, (N, k)
                for psi in basis:
                    assert horospherical(k, psi).is_zero()
                    for j in embeddings(N):
                        res = kernel_relation_residual(k, psi, j, prec)
                        assert res.residual < tolerance, (N, k, j, res.residual)
        perturbed = kernel_basis(1, 3)[0] + Divisor.delta(3, (1, 0))
        res = kernel_relation_residual(1, perturbed, 1, prec)
        assert res.residual > mp.mpf("1e-3")


def test_criterion_9_cli_end_to_end(tmp_path):
    with criterion(9, 120.0, "CLI `all` passes and reports are byte-identical"):
        paths = [tmp_path / "run1.json", tmp_path / "run2.json"]
        for path in paths:
            proc = subprocess.run(
                [sys.executable, "-m", "horolab", "all", "--output", str(path)],
                capture_output=True,
            )
            assert proc.returncode == 0, proc.stderr.decode()
        assert paths[0].read_bytes() == paths[1].read_bytes()
        report = json.loads(paths[0].read_text())
        assert report["summary"]["failed"] == 0
