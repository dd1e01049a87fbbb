"""Exact rational linear algebra on divisor lattices.

Scalars are :class:`fractions.Fraction`. Matrices are tuples of row tuples,
vectors are tuples; both are immutable so they can be shared freely.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, NotSymmetric, ParseError, SingularMatrix

Rational = Fraction
QVector = tuple  # tuple[Fraction, ...]
QMatrix = tuple  # tuple[tuple[Fraction, ...], ...]

RationalLike = Union[Fraction, int, str]

NEG_INF = -math.inf
"""Marker for an infimum that is minus infinity. Compares below every Fraction."""

_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``[-]digits[/digits]`` into a reduced Fraction.

    >>> parse_rational("-4/6")
    Fraction(-2, 3)
    """
    if not isinstance(text, str) or _RATIONAL_RE.fullmatch(text) is None:
        raise ParseError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q) -> str:
    """Canonical text form: ``p/q`` reduced, or ``p`` when the denominator is 1.

    ``NEG_INF`` is rendered as ``-inf``.
    """
    if q == NEG_INF:
        return "-inf"
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_rational(x: RationalLike) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; pass a Fraction or a string")
    return Fraction(x)


def qvector(values: Iterable[RationalLike]) -> QVector:
    return tuple(to_rational(v) for v in values)


def qmatrix(rows: Iterable[Iterable[RationalLike]]) -> QMatrix:
    m = tuple(qvector(r) for r in rows)
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("matrix is not square")
    return m


def identity(n: int) -> QMatrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def is_symmetric(a: Sequence[Sequence[Fraction]]) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def mat_vec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> QVector:
    if any(len(row) != len(x) for row in a):
        raise DimensionMismatch(f"matrix has {len(a[0]) if a else 0} columns, vector has {len(x)}")
    return tuple(sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a)


def submatrix(a: Sequence[Sequence[Fraction]], idx: Sequence[int]) -> QMatrix:
    return tuple(tuple(a[i][j] for j in idx) for i in idx)


def solve_linear(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> QVector:
    """Return the unique exact ``x`` with ``a @ x == b``.

    Gauss-Jordan elimination with partial pivoting on nonzero entries.
    Raises SingularMatrix when ``a`` has no inverse over Q.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("coefficient matrix is not square")
    if len(b) != n:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {n}")
    rows = [[Fraction(v) for v in a[i]] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"matrix is singular (no pivot in column {col})")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [vr - f * vc for vr, vc in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(a)
    m = [[Fraction(v) for v in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / p
                m[r] = [vr - f * vc for vr, vc in zip(m[r], m[col])]
    return det


def leading_minors(a: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Leading principal minors ``det(a[:k, :k])`` for k = 1..n."""
    return [determinant(submatrix(a, range(k))) for k in range(1, len(a) + 1)]


def is_negative_definite(a: Sequence[Sequence[Fraction]]) -> bool:
    """Sylvester's criterion on ``-a``: every ``(-1)^k * minor_k`` is positive.

    Elimination without row exchanges produces the pivots
    ``minor_k / minor_{k-1}``, so it suffices that every pivot is negative.
    The empty matrix is vacuously negative definite.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("matrix is not square")
    if not is_symmetric(a):
        raise NotSymmetric("negative definiteness is only defined for symmetric forms")
    m = [[Fraction(v) for v in row] for row in a]
    for k in range(n):
        p = m[k][k]
        if p >= 0:
            return False
        for r in range(k + 1, n):
            if m[r][k] != 0:
                f = m[r][k] / p
                for c in range(k, n):
                    m[r][c] -= f * m[k][c]
    return True


def eval_form(a: Sequence[Sequence[Fraction]], u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """Return ``u^T a v``."""
    n = len(a)
    if len(u) != n or len(v) != n:
        raise DimensionMismatch(f"form has dimension {n}, vectors have {len(u)} and {len(v)}")
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = a[i]
            total += ui * sum((row[j] * vj for j, vj in enumerate(v) if vj), Fraction(0))
    return total


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch(f"vectors of length {len(u)} and {len(v)}")
    return sum((x * y for x, y in zip(u, v)), Fraction(0))
