"""JSON serialization for divisors, matrices, coset functions, Lie elements,
and verification reports.

Rationals serialize as strings "p/q" with positive denominator in lowest
terms; numeric values serialize as decimal strings.  Reports are dumped
with sorted keys and a fixed layout so reruns with identical inputs are
byte-identical.  Schema violations are collected and reported with JSON
pointers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import SchemaError
from .exact import format_rational, parse_rational
from .freelie import LieElement
from .modular import CyclotomicCombo, Divisor, IsomFunction, ModMatrix, PolylogCombo

__all__ = [
    "divisor_to_json",
    "divisor_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "isom_function_to_json",
    "lie_element_to_json",
    "cyclotomic_combo_to_json",
    "polylog_combo_to_json",
    "load_divisor",
    "save_report",
    "dumps_report",
]


def _parse_coeff(raw: Any, pointer: str, violations: list[str]) -> Fraction | None:
    if not isinstance(raw, str):
        violations.append(f"{pointer}: expected a rational string \"p/q\", got {raw!r}")
        return None
    try:
        return parse_rational(raw)
    except (ValueError, ZeroDivisionError):
        violations.append(f"{pointer}: malformed rational {raw!r}")
        return None


def divisor_to_json(psi: Divisor) -> dict:
    return {
        "N": psi.N,
        "support": [
            {"t1": t.t1, "t2": t.t2, "coeff": format_rational(v)}
            for t, v in psi.items()
        ],
    }


def divisor_from_json(data: Any) -> Divisor:
    violations: list[str] = []
    if not isinstance(data, dict):
        raise SchemaError(["/: expected an object with keys N, support"])
    N = data.get("N")
    if not isinstance(N, int) or N < 1:
        violations.append("/N: expected a positive integer modulus")
        raise SchemaError(violations)
    support = data.get("support")
    if not isinstance(support, list):
        violations.append("/support: expected a list of {t1, t2, coeff}")
        raise SchemaError(violations)
    coeffs: dict[tuple[int, int], Fraction] = {}
    for i, entry in enumerate(support):
        pointer = f"/support/{i}"
        if not isinstance(entry, dict):
            violations.append(f"{pointer}: expected an object")
            continue
        t1, t2 = entry.get("t1"), entry.get("t2")
        if not isinstance(t1, int):
            violations.append(f"{pointer}/t1: expected an integer")
            continue
        if not isinstance(t2, int):
            violations.append(f"{pointer}/t2: expected an integer")
            continue
        value = _parse_coeff(entry.get("coeff"), f"{pointer}/coeff", violations)
        if value is None:
            continue
        point = (t1 % N, t2 % N)
        if point == (0, 0) and value != 0:
            violations.append(f"{pointer}: support must exclude the origin (0, 0)")
            continue
        coeffs[point] = coeffs.get(point, Fraction(0)) + value
    if violations:
        raise SchemaError(violations)
    return Divisor(N, coeffs)


def matrix_to_json(g: ModMatrix) -> dict:
    return {"N": g.N, "rows": [[g.a, g.b], [g.c, g.d]]}


def matrix_from_json(data: Any) -> ModMatrix:
    violations: list[str] = []
    if not isinstance(data, dict):
        raise SchemaError(["/: expected an object with keys N, rows"])
    N = data.get("N")
    if not isinstance(N, int) or N < 1:
        raise SchemaError(["/N: expected a positive integer modulus"])
    rows = data.get("rows")
    if (
        not isinstance(rows, list)
        or len(rows) != 2
        or any(not isinstance(r, list) or len(r) != 2 for r in rows)
    ):
        raise SchemaError(["/rows: expected [[a, b], [c, d]]"])
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            if not isinstance(entry, int):
                violations.append(f"/rows/{i}/{j}: expected an integer")
    if violations:
        raise SchemaError(violations)
    try:
        return ModMatrix.from_rows(N, rows)
    except ValueError as exc:
        raise SchemaError([f"/rows: {exc}"]) from exc


def isom_function_to_json(f: IsomFunction) -> list[dict]:
    return [
        {"representative": [[e[0], e[1]], [e[2], e[3]]], "value": format_rational(v)}
        for e, v in f.items()
    ]


def lie_element_to_json(x: LieElement) -> dict:
    return {
        "D": x.truncation,
        "terms": [
            {"hall": str(hw), "coeff": format_rational(c)} for hw, c in x.items()
        ],
    }


def cyclotomic_combo_to_json(combo: CyclotomicCombo) -> dict:
    return {
        "N": combo.N,
        "k": combo.k,
        "residue_zero": combo.residue_zero,
        "terms": [
            {"u": u, "coeff": format_rational(c)} for u, c in combo.items() if c != 0
        ],
    }


def polylog_combo_to_json(combo: PolylogCombo) -> dict:
    return {
        "N": combo.N,
        "k": combo.k,
        "residue_zero": combo.residue_zero,
        "terms": [
            {"u": u, "coeff": format_rational(c)} for u, c in combo.items() if c != 0
        ],
    }


def load_divisor(path) -> Divisor:
    """Load a divisor JSON file; schema violations carry JSON pointers."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError([f"/: invalid JSON ({exc})"]) from exc
    return divisor_from_json(data)


def dumps_report(report: dict) -> str:
    """Canonical report encoding: sorted keys, fixed separators, newline."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def save_report(report: dict, path) -> None:
    Path(path).write_text(dumps_report(report))
