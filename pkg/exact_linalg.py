"""Exact rational linear algebra on top of sympy's DomainMatrix over QQ."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = Tuple[Fraction, ...]


def to_qq(c: Fraction):
    c = Fraction(c)
    return QQ(int(c.numerator), int(c.denominator))


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int, c: Fraction = Fraction(1)) -> Vector:
    return tuple(Fraction(c) if k == i else Fraction(0) for k in range(n))


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(c == 0 for c in v)


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in v)


def combine(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], n: int) -> Vector:
    acc = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for k, a in enumerate(v):
            if a:
                acc[k] += c * a
    return tuple(acc)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Nonzero rows of the reduced row echelon form and the pivot columns."""
    rows = [r for r in rows if not is_zero(r)]
    if not rows or ncols == 0:
        return [], ()
    dm = DomainMatrix([[to_qq(c) for c in r] for r in rows], (len(rows), ncols), QQ)
    reduced, pivots = dm.rref()
    mat = reduced.to_Matrix()
    out = []
    for i in range(len(pivots)):
        out.append(tuple(Fraction(int(mat[i, j].p), int(mat[i, j].q)) for j in range(ncols)))
    return out, tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """Basis of {v : rows . v = 0}, one vector per free column in increasing order."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(reduced, pivots):
            v[p] = -r[f]
        basis.append(tuple(v))
    return basis


def transpose(columns: Sequence[Sequence[Fraction]], nrows: int) -> List[Vector]:
    return [tuple(col[i] for col in columns) for i in range(nrows)]


def independent_columns(columns: Sequence[Sequence[Fraction]], nrows: int) -> Tuple[int, ...]:
    """Indices of the leftmost maximal independent subset of the given columns."""
    if not columns:
        return ()
    return rref(transpose(columns, nrows), len(columns))[1]


def solve_in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[Vector]:
    """Coefficients c with sum c_i v_i == target, or None if target is outside the span.

    The vectors must be linearly independent.
    """
    n = len(target)
    if not vectors:
        return () if is_zero(target) else None
    augmented = transpose(list(vectors) + [target], n)
    reduced, pivots = rref(augmented, len(vectors) + 1)
    if len(vectors) in pivots:
        return None
    coeffs = [Fraction(0)] * len(vectors)
    for r, p in zip(reduced, pivots):
        coeffs[p] = r[len(vectors)]
    return tuple(coeffs)


def reduce_against(v: Sequence[Fraction], echelon: Sequence[Vector], pivots: Sequence[int]) -> Vector:
    """Clear the pivot coordinates of v using reduced echelon rows."""
    out = list(v)
    for r, p in zip(echelon, pivots):
        c = out[p]
        if c:
            for k, a in enumerate(r):
                if a:
                    out[k] -= c * a
    return tuple(out)


def same_span(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], ncols: int) -> bool:
    return rref(a, ncols)[0] == rref(b, ncols)[0]


def inverse(matrix: Sequence[Sequence[Fraction]]) -> Optional[List[Vector]]:
    """Inverse of a square matrix given by rows, or None if singular."""
    n = len(matrix)
    if n == 0:
        return []
    augmented = [tuple(row) + unit_vector(n, i) for i, row in enumerate(matrix)]
    reduced, pivots = rref(augmented, 2 * n)
    if tuple(pivots[:n]) != tuple(range(n)) or len(reduced) < n:
        return None
    return [tuple(r[n:]) for r in reduced[:n]]
