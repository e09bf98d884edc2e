"""Exact rational and integer-lattice linear algebra.

Every scalar in the package is a :class:`fractions.Fraction` (or a plain
``int``); nothing here ever touches floating point.  Matrices are small
(dimension at most four in practice), so plain Gaussian elimination is used.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = Sequence[Sequence]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            if int(den) == 0:
                raise ZeroDivisionError("zero denominator")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def primitivize(v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Split an integer vector as ``g * w`` with ``w`` primitive.

    >>> primitivize((2, 4))
    ((1, 2), 2)
    """
    coords = tuple(int(c) for c in v)
    g = reduce(gcd, (abs(c) for c in coords), 0)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return tuple(c // g for c in coords), g


def is_primitive(v: Sequence[int]) -> bool:
    return reduce(gcd, (abs(int(c)) for c in v), 0) == 1


def _check_square(M: Matrix) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    return n


def determinant(M: Matrix) -> Fraction:
    n = _check_square(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        p = A[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = A[r][col] / p
            if factor:
                for c in range(col, n):
                    A[r][c] -= factor * A[col][c]
    return det


def rank(rows: Matrix) -> int:
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return 0
    ncols = len(A[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                factor = A[i][col] / A[r][col]
                A[i] = [a - factor * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def solve_linear(A: Matrix, b: Sequence) -> tuple[Fraction, ...]:
    """Solve the square system ``A x = b`` exactly (Gauss-Jordan)."""
    n = _check_square(A)
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    M = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                factor = M[r][col]
                M[r] = [x - factor * y for x, y in zip(M[r], M[col])]
    return tuple(row[n] for row in M)


def affine_dimension(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull; -1 for the empty set."""
    if not points:
        return -1
    base = points[0]
    return rank([[p - q for p, q in zip(pt, base)] for pt in points[1:]])


def unimodular_completion(u: Sequence[int]) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    """Return ``(m0, basis)`` with ``<m0, u> = 1`` and ``basis`` a Z-basis of u^perp.

    Together ``m0, basis[0], ..., basis[n-2]`` form a basis of Z^n.  For
    n >= 2 the basis is oriented so that ``det[m0, e_2, ..., e_n] = -1``:
    with ``u`` the inward normal of a facet this is the boundary orientation
    for which the facet volume form satisfies ``u ^ vol_facet = -vol``.
    """
    u = [int(c) for c in u]
    n = len(u)
    if not is_primitive(u):
        raise ValueError(f"{tuple(u)} is not primitive")
    # column operations on the row vector u, mirrored on T, until u T = e_1
    row = list(u)
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_col(dst: int, src: int, q: int) -> None:
        row[dst] -= q * row[src]
        for r in range(n):
            T[r][dst] -= q * T[r][src]

    while sum(1 for c in row if c) > 1:
        i = min((k for k in range(n) if row[k]), key=lambda k: abs(row[k]))
        for j in range(n):
            if j != i and row[j]:
                add_col(j, i, row[j] // row[i])
    i = next(k for k in range(n) if row[k])
    for r in range(n):
        T[r][0], T[r][i] = T[r][i], T[r][0]
    row[0], row[i] = row[i], row[0]
    if row[0] == -1:
        for r in range(n):
            T[r][0] = -T[r][0]
    cols = [tuple(T[r][c] for r in range(n)) for c in range(n)]
    m0, basis = cols[0], cols[1:]
    if n >= 2 and determinant([m0, *basis]) == 1:
        basis[0] = tuple(-c for c in basis[0])
    return m0, basis


def facet_lattice_basis(u: Sequence[int]) -> list[tuple[int, ...]]:
    """Z-basis of the sublattice ``{m : <m, u> = 0}`` for primitive ``u``."""
    if len(u) < 2:
        raise ValueError("facet lattice basis needs dimension >= 2")
    return unimodular_completion(u)[1]


# --- univariate polynomials, coefficients in ascending order -------------

def interpolate(xs: Sequence, ys: Sequence) -> list[Fraction]:
    """Coefficients of the unique polynomial of degree < len(xs) through the data."""
    xs = [Fraction(x) for x in xs]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    # Newton divided differences, then expand the Newton form
    coef = [Fraction(y) for y in ys]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    return trim(poly)


def trim(poly: Sequence) -> list[Fraction]:
    out = [Fraction(c) for c in poly]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out or [Fraction(0)]


def poly_eval(poly: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def poly_integral(poly: Sequence, a, b) -> Fraction:
    """Exact integral of the polynomial over [a, b]."""
    a, b = Fraction(a), Fraction(b)
    total = Fraction(0)
    for k, c in enumerate(poly):
        if c:
            total += Fraction(c) * (b ** (k + 1) - a ** (k + 1)) / (k + 1)
    return total
