"""Exact matrix helpers on top of sympy's DomainMatrix.

Matrices travel through the toolkit as tuples of rows of ``int`` or
``Fraction``; these helpers move them in and out of ``ZZ``/``QQ`` domain
matrices so determinants use fraction-free elimination and solves stay exact.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from prymtools.errors import DomainError

Rows = Sequence[Sequence[int | Fraction]]


def _qq(value: int | Fraction) -> object:
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(int(value))


def from_qq(value: object) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))  # type: ignore[attr-defined]


def zz_matrix(rows: Rows) -> DomainMatrix:
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (n_rows, n_cols), ZZ)


def qq_matrix(rows: Rows) -> DomainMatrix:
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    return DomainMatrix([[_qq(x) for x in row] for row in rows], (n_rows, n_cols), QQ)


def zz_det(rows: Rows) -> int:
    if not rows:
        return 1
    return int(zz_matrix(rows).det())


def qq_det(rows: Rows) -> Fraction:
    if not rows:
        return Fraction(1)
    return from_qq(qq_matrix(rows).det())


def qq_inverse(rows: Rows) -> tuple[tuple[Fraction, ...], ...]:
    if not rows:
        return ()
    if qq_det(rows) == 0:
        raise DomainError("matrix is singular")
    inverse = qq_matrix(rows).inv()
    return tuple(tuple(from_qq(x) for x in row) for row in inverse.to_list())


def qq_solve(rows: Rows, rhs: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    """Solve ``rows · x = rhs`` for a nonsingular square system."""
    if not rows:
        return ()
    b = qq_matrix([[x] for x in rhs])
    solution = qq_matrix(rows).lu_solve(b)
    return tuple(from_qq(row[0]) for row in solution.to_list())


def mat_vec(rows: Rows, vector: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    return tuple(
        sum((Fraction(a) * b for a, b in zip(row, vector)), Fraction(0)) for row in rows
    )


def leading_minors(rows: Rows) -> list[Fraction]:
    return [qq_det([row[:k] for row in rows[:k]]) for k in range(1, len(rows) + 1)]
