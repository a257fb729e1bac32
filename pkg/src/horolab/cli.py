"""Command-line front end.

Subcommands drive the verification suites of the library modules over a
requested parameter grid and emit deterministic machine-readable JSON
reports.  The process exits 0 if and only if every verdict passed; schema
or precondition problems exit 2, distinct from verification failures
(exit 1).
"""

from __future__ import annotations

import argparse
import platform
import random
import sys
from fractions import Fraction

import mpmath
from mpmath import mp

from . import __version__, io
from .errors import SchemaError
from .exact import (
    bernoulli_polynomial,
    distribution_relation_check,
    format_rational,
    residue_generating_series,
)
from .freelie import LieElement, bch, generator, hall_basis, hall_word, witt_number
from .modular import (
    Divisor,
    ModMatrix,
    coset_representatives,
    cyclotomic_coefficients,
    horospherical,
    horospherical_value,
    kernel_basis,
    parabolic_elements,
    polylog_coefficients,
    residue_consistency_check,
    residue_zero_divisor,
    surjectivity_report,
    vanishes_at_infinity,
)
from .regulator import (
    embeddings,
    kernel_relation_residual,
    li_at_root_of_unity,
    hurwitz_zeta,
    verify_polylog_collapse,
)
from .residues import (
    MONODROMY_IDENTITIES,
    residue_at_torsion,
    verify_exp_splitting,
    verify_monodromy_identity,
)

SUBCOMMANDS = (
    "bernoulli",
    "horospherical",
    "kernel",
    "psi-u",
    "lie-verify",
    "residue",
    "regulator",
    "kernel-relations",
    "consistency",
    "all",
)


class UsageError(ValueError):
    """Bad parameters: reported as a usage problem, not a failed verdict."""


def _case(params: dict, ok: bool, **extra) -> dict:
    record = {"params": params, "verdict": "pass" if ok else "fail"}
    record.update(extra)
    return record


def _report(suite: str, parameters: dict, cases: list[dict], **payload) -> dict:
    passed = sum(1 for c in cases if c["verdict"] == "pass")
    report = {
        "suite": suite,
        "parameters": parameters,
        "cases": cases,
        "summary": {
            "total": len(cases),
            "passed": passed,
            "failed": len(cases) - passed,
        },
        "toolchain": {
            "package": "horolab",
            "version": __version__,
            "python": platform.python_version(),
        },
    }
    report.update(payload)
    return report


def _mp_str(value, digits: int = 30) -> str:
    return mpmath.nstr(value, digits)


def _random_divisor(N: int, rng: random.Random, size: int = 4) -> Divisor:
    points = [(t1, t2) for t1 in range(N) for t2 in range(N) if (t1, t2) != (0, 0)]
    while True:
        chosen = rng.sample(points, min(size, len(points)))
        coeffs = {
            p: Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for p in chosen
        }
        psi = Divisor(N, coeffs)
        if not psi.is_zero():
            return psi


def _validate(args) -> None:
    if getattr(args, "N", None) is not None and args.N < 3:
        raise UsageError("N must be at least 3")
    if getattr(args, "k", None) is not None and args.k < 0:
        raise UsageError("k must be >= 0")
    if getattr(args, "D", None) is not None and args.D < 1:
        raise UsageError("D must be >= 1")
    if getattr(args, "precision", None) is not None and args.precision < 8:
        raise UsageError("precision must be at least 8 bits")


def run_bernoulli(args) -> dict:
    poly = bernoulli_polynomial(args.k)
    cases = []
    for k in range(0, args.max_k + 1):
        for m in range(1, args.max_m + 1):
            for x in ("0", "1/2", "1/3", "2/5"):
                check = distribution_relation_check(k, m, Fraction(x))
                cases.append(
                    _case(
                        {"k": k, "m": m, "x": x},
                        check.equal,
                        lhs=format_rational(check.lhs),
                        rhs=format_rational(check.rhs),
                    )
                )
    for N in range(1, args.max_modulus + 1):
        for a in range(N):
            lhs, rhs = residue_generating_series(a, N, args.order)
            cases.append(
                _case(
                    {"a": a, "N": N, "order": args.order},
                    lhs.coeffs == rhs.coeffs,
                )
            )
    payload = {
        "polynomial": {
            "k": args.k,
            "coefficients": [format_rational(c) for c in poly.coeffs],
        }
    }
    return _report(
        "bernoulli",
        {"k": args.k, "max_k": args.max_k, "max_m": args.max_m,
         "max_modulus": args.max_modulus, "order": args.order},
        cases,
        **payload,
    )


def _input_divisor(args, default) -> Divisor:
    if getattr(args, "input", None):
        return io.load_divisor(args.input)
    return default


def run_horospherical(args) -> dict:
    _validate(args)
    u = args.u % args.N
    if u == 0:
        raise UsageError("u must be nonzero mod N")
    psi = _input_divisor(args, residue_zero_divisor(max(args.k, 1), u, args.N))
    f = horospherical(args.k, psi)
    cases = []
    reps = coset_representatives(args.N)
    sample = [p * g for p in parabolic_elements(args.N)[:2] for g in reps[:3]]
    for g in sample:
        literal = horospherical_value(args.k, psi, g)
        cases.append(
            _case(
                {"check": "literal-vs-table", "g": g.entries},
                literal == f.value_at(g),
                lhs=format_rational(literal),
                rhs=format_rational(f.value_at(g)),
            )
        )
    for h in (ModMatrix(args.N, 1, 1, 0, 1), ModMatrix(args.N, 0, 1, args.N - 1, 0)):
        translated = horospherical(args.k, psi.translate(h))
        ok = all(
            translated.value_at(g) == f.value_at(g * h) for g in reps
        )
        cases.append(_case({"check": "equivariance", "h": h.entries}, ok))
    return _report(
        "horospherical",
        {"N": args.N, "k": args.k, "u": u, "input": getattr(args, "input", None)},
        cases,
        function=io.isom_function_to_json(f),
        divisor=io.divisor_to_json(psi),
        vanishes_at_infinity=vanishes_at_infinity(f),
    )


def run_kernel(args) -> dict:
    _validate(args)
    basis = kernel_basis(args.k, args.N, restrict_degree_zero=args.degree_zero)
    report = surjectivity_report(args.k, args.N)
    cases = [
        _case(
            {"check": "surjectivity", "space": "with-origin"},
            report.surjective_with_origin,
            rank=report.rank_with_origin,
            target=report.target_dim,
        ),
    ]
    for i, psi in enumerate(basis):
        cases.append(
            _case(
                {"check": "horospherical-vanishes", "basis_index": i},
                horospherical(args.k, psi).is_zero(),
            )
        )
    return _report(
        "kernel",
        {"N": args.N, "k": args.k, "degree_zero": args.degree_zero},
        cases,
        dimension=len(basis),
        ranks={
            "target": report.target_dim,
            "with_origin": report.rank_with_origin,
            "punctured": report.rank_full,
            "degree_zero": report.rank_degree_zero,
        },
        basis=[io.divisor_to_json(psi) for psi in basis],
    )


def run_psi_u(args) -> dict:
    _validate(args)
    if args.k < 1:
        raise UsageError("k must be >= 1 for the residue-zero divisor")
    u = args.u % args.N
    if u == 0:
        raise UsageError("u must be nonzero mod N")
    psi = residue_zero_divisor(args.k, u, args.N)
    f = horospherical(args.k, psi)
    cases = [_case({"check": "vanishes-at-infinity"}, vanishes_at_infinity(f))]
    return _report(
        "psi-u",
        {"N": args.N, "k": args.k, "u": u},
        cases,
        divisor=io.divisor_to_json(psi),
        degree=format_rational(psi.degree()),
        cyclotomic=io.cyclotomic_combo_to_json(cyclotomic_coefficients(args.k, psi)),
        polylog=io.polylog_combo_to_json(polylog_coefficients(args.k, psi)),
    )


def run_lie_verify(args) -> dict:
    _validate(args)
    rng = random.Random(args.seed)
    cases = []
    dims_ok = all(
        sum(1 for hw in hall_basis(args.D) if hw.degree == n) == witt_number(n)
        for n in range(1, args.D + 1)
    )
    cases.append(_case({"check": "hall-dimensions", "D": args.D}, dims_ok))
    z = bch(generator(1, 3), generator(2, 3))
    third_order_ok = (
        z.coefficient(hall_word((1, 2))) == Fraction(1, 2)
        and z.coefficient(hall_word((1, 1, 2))) == Fraction(1, 12)
        and z.coefficient(hall_word((1, 2, 2))) == Fraction(1, 12)
    )
    cases.append(_case({"check": "bch-low-order"}, third_order_ok))
    for trial in range(args.trials):
        U = _random_lie(rng, min(args.D, 6), include_e2=True)
        V = _random_lie(rng, min(args.D, 6), include_e2=False)
        check = verify_exp_splitting(U, V, min(args.D, 6))
        cases.append(_case({"check": "exp-splitting", "trial": trial}, check.equal))
    for identity in MONODROMY_IDENTITIES:
        for a in range(args.N):
            check = verify_monodromy_identity(identity, a, args.N, args.D)
            record = _case({"a": a, "N": args.N, "D": args.D}, check.equal)
            record["identity"] = identity
            record["equal"] = check.equal
            record["lhs"] = {"e2": format_rational(check.lhs.e2),
                             "ze1": [format_rational(c) for c in check.lhs.ze1]}
            record["rhs"] = {"e2": format_rational(check.rhs.e2),
                             "ze1": [format_rational(c) for c in check.rhs.ze1]}
            cases.append(record)
            if identity != "bernoulli_series":
                break  # the first two identities do not depend on a
    return _report(
        "lie-verify",
        {"N": args.N, "D": args.D, "seed": args.seed, "trials": args.trials},
        cases,
    )


def _random_lie(rng: random.Random, truncation: int, include_e2: bool) -> LieElement:
    words = [hw for hw in hall_basis(truncation) if hw.degree <= 3]
    coords = {}
    for hw in words:
        if not include_e2 and hw.word == (2,):
            continue
        coeff = rng.randint(-2, 2)
        if coeff:
            coords[hw] = Fraction(coeff)
    if not coords:
        coords[hall_word((1,))] = Fraction(1)
    return LieElement(truncation, coords)


def run_residue(args) -> dict:
    _validate(args)
    D = max(args.D, args.k + 3)
    if args.a is not None and not 0 <= args.a < args.N:
        raise UsageError("a must satisfy 0 <= a < N")
    a_values = [args.a] if args.a is not None else range(args.N)
    cases = []
    for a in a_values:
        res = residue_at_torsion(args.k, a, args.N, D)
        extra = {
            "lie_value": format_rational(res.lie_value),
            "closed_form": format_rational(res.closed_form),
        }
        if res.note:
            extra["note"] = res.note
        cases.append(_case({"k": args.k, "a": a, "N": args.N, "D": D}, res.equal, **extra))
    return _report("residue", {"N": args.N, "k": args.k, "D": D}, cases)


def run_regulator(args) -> dict:
    _validate(args)
    prec = args.precision
    cases = []
    with mp.workprec(4 * prec):
        li_anchor = li_at_root_of_unity(2, 1, 2, prec)
        anchor_ok = abs(li_anchor.value.real + mp.pi**2 / 12) < mp.mpf(10) ** (-40)
        cases.append(
            _case(
                {"check": "dilogarithm-at-minus-one"},
                bool(anchor_ok),
                value=li_anchor.real_str(),
                error_budget=li_anchor.error_str(),
            )
        )
        zeta_anchor = hurwitz_zeta(2, Fraction(1, 2), prec)
        zeta_ok = abs(zeta_anchor.value.real - mp.pi**2 / 2) < mp.mpf(10) ** (-40)
        cases.append(
            _case(
                {"check": "hurwitz-zeta-half"},
                bool(zeta_ok),
                value=zeta_anchor.real_str(),
                error_budget=zeta_anchor.error_str(),
            )
        )
    tolerance = mp.mpf(10) ** (-35)
    for u in range(1, args.N):
        for j in embeddings(args.N):
            check = verify_polylog_collapse(args.k, u, args.N, j, prec)
            record = _case(
                {"u": u},
                bool(check.difference < tolerance),
                value_re=check.lhs.real_str(),
                value_im=check.lhs.imag_str(),
                difference=_mp_str(check.difference, 8),
                error_budget=check.lhs.error_str(),
            )
            record.update(
                {"k": args.k, "N": args.N, "embedding": j, "precision_bits": prec}
            )
            cases.append(record)
    return _report(
        "regulator", {"N": args.N, "k": args.k, "precision_bits": prec}, cases
    )


def run_kernel_relations(args) -> dict:
    _validate(args)
    if args.k < 1:
        raise UsageError("k must be >= 1")
    prec = args.precision
    tolerance = mp.mpf(args.tolerance)
    cases = []
    if getattr(args, "input", None):
        psi = io.load_divisor(args.input)
        in_kernel = horospherical(args.k, psi).is_zero()
        cases.append(_case({"check": "divisor-in-kernel"}, in_kernel))
        members = [("input", psi)]
    else:
        basis = kernel_basis(args.k, args.N, restrict_degree_zero=False)
        members = [(i, psi) for i, psi in enumerate(basis)]
    for label, psi in members:
        for j in embeddings(args.N):
            res = kernel_relation_residual(args.k, psi, j, prec)
            cases.append(
                _case(
                    {"basis": label, "embedding": j, "k": args.k, "N": args.N},
                    bool(res.residual < tolerance),
                    residual=_mp_str(res.residual, 8),
                    error_budget=_mp_str(res.error_bound, 5),
                )
            )
    if not getattr(args, "input", None):
        perturbed = members[0][1] + Divisor.delta(args.N, (1, 0))
        res = kernel_relation_residual(args.k, perturbed, embeddings(args.N)[0], prec)
        cases.append(
            _case(
                {"check": "perturbed-negative-control"},
                bool(res.residual > mp.mpf("1e-3")),
                residual=_mp_str(res.residual, 8),
            )
        )
    return _report(
        "kernel-relations",
        {"N": args.N, "k": args.k, "precision_bits": prec,
         "tolerance": args.tolerance, "input": getattr(args, "input", None)},
        cases,
    )


def run_consistency(args) -> dict:
    _validate(args)
    rng = random.Random(args.seed)
    reps = coset_representatives(args.N)
    cases = []
    for trial in range(args.trials):
        psi = _random_divisor(args.N, rng)
        failures = []
        for g in reps:
            check = residue_consistency_check(args.k, psi, g)
            if not check.equal:
                failures.append(g.entries)
        cases.append(
            _case(
                {"trial": trial, "k": args.k, "N": args.N},
                not failures,
                failing_representatives=failures,
            )
        )
    return _report(
        "consistency",
        {"N": args.N, "k": args.k, "trials": args.trials, "seed": args.seed},
        cases,
    )


_RUNNERS = {
    "bernoulli": run_bernoulli,
    "horospherical": run_horospherical,
    "kernel": run_kernel,
    "psi-u": run_psi_u,
    "lie-verify": run_lie_verify,
    "residue": run_residue,
    "regulator": run_regulator,
    "kernel-relations": run_kernel_relations,
    "consistency": run_consistency,
}


def run_all(args) -> dict:
    suites = []
    for name, runner in _RUNNERS.items():
        suites.append(runner(args))
    total = sum(s["summary"]["total"] for s in suites)
    passed = sum(s["summary"]["passed"] for s in suites)
    return {
        "suite": "all",
        "parameters": {"N": args.N, "k": args.k, "D": args.D,
                       "precision_bits": args.precision, "seed": args.seed},
        "suites": suites,
        "summary": {"total": total, "passed": passed, "failed": total - passed},
        "toolchain": {
            "package": "horolab",
            "version": __version__,
            "python": platform.python_version(),
        },
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horolab",
        description="Exact and high-precision verification suites: Bernoulli "
        "distribution relations, horospherical maps, free-Lie monodromy "
        "residues, and polylogarithm regulator values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, **defaults):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--N", type=int, default=3, help="modulus (default 3)")
        p.add_argument("--k", type=int, default=1, help="weight (default 1)")
        p.add_argument("--a", type=int, default=None, help="torsion parameter")
        p.add_argument("--u", type=int, default=1, help="nonzero residue mod N")
        p.add_argument("--D", type=int, default=8, help="Lie truncation degree")
        p.add_argument(
            "--precision", type=int, default=200, help="working precision in bits"
        )
        p.add_argument("--seed", type=int, default=0, help="seed for random cases")
        p.add_argument("--trials", type=int, default=20, help="random trial count")
        p.add_argument("--input", type=str, default=None, help="input divisor JSON")
        p.add_argument("--output", type=str, default=None, help="report output path")
        for key, value in defaults.items():
            p.set_defaults(**{key: value})
        return p

    b = add("bernoulli", "Bernoulli polynomial and distribution relation suite")
    b.add_argument("--max-k", dest="max_k", type=int, default=12)
    b.add_argument("--max-m", dest="max_m", type=int, default=6)
    b.add_argument("--max-modulus", dest="max_modulus", type=int, default=8)
    b.add_argument("--order", type=int, default=20)

    add("horospherical", "horospherical map invariance checks")
    kq = add("kernel", "kernel basis of the horospherical map")
    kq.add_argument("--degree-zero", dest="degree_zero", action="store_true")
    add("psi-u", "the canonical residue-zero divisor and its combinations")
    add("lie-verify", "free-Lie BCH and monodromy identity suite")
    add("residue", "torsion residues: Lie side against the closed form")
    add("regulator", "numeric regulator collapse checks")
    kr = add("kernel-relations", "numeric relations from kernel divisors")
    kr.add_argument("--tolerance", type=str, default="1e-35")
    add("consistency", "horospherical vs closed-form residue consistency")
    a = add("all", "run every suite with shared defaults")
    a.set_defaults(max_k=12, max_m=6, max_modulus=8, order=20,
                   degree_zero=False, tolerance="1e-35")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    runner = run_all if args.command == "all" else _RUNNERS[args.command]
    try:
        report = runner(args)
    except SchemaError as exc:
        for violation in exc.violations:
            print(f"schema error: {violation}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    text = io.dumps_report(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["failed"] == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
