"""Exact rank and nullity of rational matrices."""

from __future__ import annotations

from fractions import Fraction
from math import lcm


def _integer_rows(M):
    rows = []
    for row in M:
        row = [Fraction(x) for x in row]
        d = 1
        for x in row:
            d = lcm(d, x.denominator)
        rows.append([int(x * d) for x in row])
    return rows


def bareiss_rank(M) -> int:
    """Fraction-free Gaussian elimination; every division is exact."""
    A = _integer_rows(M)
    if not A:
        return 0
    nrows, ncols = len(A), len(A[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pv = A[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                A[r][c] = (pv * A[r][c] - A[r][col] * A[rank][c]) // prev
            A[r][col] = 0
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def rref(M):
    """Reduced row echelon form over QQ; returns (matrix, pivot columns)."""
    A = [[Fraction(x) for x in row] for row in M]
    pivots = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def nullity_by_rref(M, ncols: int) -> int:
    """Dimension of ``{v : M v = 0}`` for a matrix with ``ncols`` columns."""
    if not M:
        return ncols
    _, pivots = rref(M)
    return ncols - len(pivots)


def kernel_basis(M, ncols: int):
    """Basis of the right kernel, one vector per free column."""
    if not M:
        return [[Fraction(int(i == k)) for i in range(ncols)] for k in range(ncols)]
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
