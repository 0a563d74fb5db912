"""Dense 3x3 linear algebra over an arbitrary scalar field.

Vectors are 3-tuples and matrices are 3-tuples of row 3-tuples. Every routine
only uses ``+ - * /`` and comparisons, so the same code runs on
:data:`Q` (exact rationals) and on ``float``.

``Q`` is ``gmpy2.mpq`` when gmpy2 is importable and
:class:`fractions.Fraction` otherwise; both are ``numbers.Rational``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Tuple

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

Vec = Tuple  # (x, y, z)
Mat = Tuple  # ((r0), (r1), (r2))

RANGE = (0, 1, 2)


class SingularMatrix(ArithmeticError):
    """Raised when a 3x3 system has no unique solution."""


def vec(values: Sequence) -> Vec:
    v = tuple(values)
    if len(v) != 3:
        raise ValueError(f"expected 3 coordinates, got {len(v)}")
    return v


def mat(rows: Sequence) -> Mat:
    """Build a matrix from 3 rows or from a flat row-major list of 9."""
    rows = list(rows)
    if len(rows) == 9:
        rows = [rows[0:3], rows[3:6], rows[6:9]]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("expected a 3x3 matrix or 9 row-major entries")
    return tuple(tuple(r) for r in rows)


def zero_vec(like=0) -> Vec:
    z = like * 0
    return (z, z, z)


def basis(i: int, one=1) -> Vec:
    zero = one * 0
    return tuple(one if k == i else zero for k in RANGE)


def identity(one=1) -> Mat:
    return tuple(basis(i, one) for i in RANGE)


def zeros(like=0) -> Mat:
    return tuple(zero_vec(like) for _ in RANGE)


def add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def scale(s, u: Vec) -> Vec:
    return (s * u[0], s * u[1], s * u[2])


def dot(u: Vec, v: Vec):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(add(ra, rb) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(sub(ra, rb) for ra, rb in zip(a, b))


def mat_scale(s, a: Mat) -> Mat:
    return tuple(scale(s, r) for r in a)


def transpose(a: Mat) -> Mat:
    return tuple(tuple(a[i][j] for i in RANGE) for j in RANGE)


def column(a: Mat, j: int) -> Vec:
    return (a[0][j], a[1][j], a[2][j])


def from_columns(cols: Sequence[Vec]) -> Mat:
    return transpose(tuple(cols))


def matvec(a: Mat, v: Vec) -> Vec:
    return (dot(a[0], v), dot(a[1], v), dot(a[2], v))


def matmul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def trace(a: Mat):
    return a[0][0] + a[1][1] + a[2][2]


def det(a: Mat):
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def det_terms(a: Mat) -> list:
    """The six signed Leibniz products whose sum is ``det(a)``."""
    out = []
    for perm in itertools.permutations(RANGE):
        inversions = sum(1 for i in RANGE for j in RANGE if i < j and perm[i] > perm[j])
        p = a[0][perm[0]] * a[1][perm[1]] * a[2][perm[2]]
        out.append(-p if inversions % 2 else p)
    return out


def solve(a: Mat, b):
    """Solve ``a x = b`` by Gaussian elimination with partial pivoting.

    ``b`` may be a vector or a matrix (solved column by column). Pivoting
    picks the largest magnitude entry, which is the usual LU choice on floats
    and harmless on exact scalars, where only a non-zero pivot matters.
    """
    if isinstance(b[0], tuple):
        cols = [solve(a, column(b, j)) for j in RANGE]
        return from_columns(cols)
    rows = [list(a[i]) + [b[i]] for i in RANGE]
    for k in RANGE:
        p = max(range(k, 3), key=lambda i: abs(rows[i][k]))
        if rows[p][k] == 0:
            raise SingularMatrix("matrix is singular")
        rows[k], rows[p] = rows[p], rows[k]
        for i in range(k + 1, 3):
            f = rows[i][k] / rows[k][k]
            if f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    x = [None, None, None]
    for i in (2, 1, 0):
        s = rows[i][3]
        for j in range(i + 1, 3):
            s = s - rows[i][j] * x[j]
        x[i] = s / rows[i][i]
    return tuple(x)


def inverse(a: Mat) -> Mat:
    one = a[0][0] * 0 + 1
    return solve(a, identity(one))


def max_abs(values) -> float:
    """Largest absolute value over nested tuples (0 for empty input)."""
    best = 0
    for v in values:
        m = max_abs(v) if isinstance(v, tuple) else abs(v)
        if m > best:
            best = m
    return best


def is_exact(x) -> bool:
    """True if every scalar in the (possibly nested) value is rational."""
    if isinstance(x, (tuple, list)):
        return all(is_exact(v) for v in x)
    return isinstance(x, Rational) and not isinstance(x, bool)


def to_fraction(x):
    if isinstance(x, (tuple, list)):
        return tuple(to_fraction(v) for v in x)
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError("non-finite value has no rational form")
    return Q(x)


def to_float(x):
    if isinstance(x, (tuple, list)):
        return tuple(to_float(v) for v in x)
    return float(x)


def exact_sqrt(x):
    """Rational square root of ``x`` if it exists, else ``None``."""
    x = Fraction(int(x.numerator), int(x.denominator)) if isinstance(x, Rational) else Fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Q(n, d)
    return None
