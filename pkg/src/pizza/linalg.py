"""Exact dense linear algebra over an ordered field.

Entries may be ``AlgebraicNumber`` or ``gmpy2.mpq``; all routines use only
ring operations, division and nonzero tests.
"""
from __future__ import annotations

from typing import Sequence

from gmpy2 import mpq

from .errors import SingularMatrixError

Matrix = list  # list of row lists
Vector = tuple


def zeros_like(x):
    return x - x


def dot(u: Sequence, v: Sequence):
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        if a and b:
            acc = acc + a * b
    return acc


def matvec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in A)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = transpose(B)
    return [[dot(r, c) for c in Bt] for r in A]


def transpose(A: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*A)]


def identity(n: int, one=mpq(1)) -> list:
    z = one - one
    return [[one if i == j else z for j in range(n)] for i in range(n)]


def vsub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, u) -> tuple:
    return tuple(c * a for a in u)


def _echelon(A: Sequence[Sequence]):
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    piv = []
    r = 0
    sign = 1
    for c in range(cols):
        p = None
        for i in range(r, rows):
            if M[i][c]:
                p = i
                break
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
            sign = -sign
        pv = M[r][c]
        for i in range(r + 1, rows):
            if M[i][c]:
                f = M[i][c] / pv
                Mi, Mr = M[i], M[r]
                for j in range(c, cols):
                    if Mr[j]:
                        Mi[j] = Mi[j] - f * Mr[j]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return M, piv, sign


def rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    return len(_echelon(A)[1])


def det(A: Sequence[Sequence]):
    n = len(A)
    M, piv, sign = _echelon(A)
    if len(piv) < n:
        return zeros_like(A[0][0])
    acc = M[0][0]
    for i in range(1, n):
        acc = acc * M[i][i]
    return acc if sign > 0 else -acc


def solve(A: Sequence[Sequence], b: Sequence) -> tuple:
    """Solve the square system A x = b; raise SingularMatrixError if singular."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    M, piv, _ = _echelon(aug)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise SingularMatrixError("singular system")
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = M[i][n]
        for j in range(i + 1, n):
            if M[i][j]:
                acc = acc - M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return tuple(x)


def inverse(A: Sequence[Sequence]) -> list:
    n = len(A)
    one = A[0][0] - A[0][0] + 1
    cols = [solve(A, [one if i == j else one - one for i in range(n)]) for j in range(n)]
    return transpose(cols)


def nullspace(A: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of {x : A x = 0}."""
    if not A:
        raise ValueError("nullspace of an empty matrix needs ncols")
    cols = len(A[0])
    M, piv, _ = _echelon(A)
    # back-substitute to reduced form
    for k in range(len(piv) - 1, -1, -1):
        c = piv[k]
        pv = M[k][c]
        M[k] = [x / pv if x else x for x in M[k]]
        for i in range(k):
            if M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b if b else a for a, b in zip(M[i], M[k])]
    free = [c for c in range(cols) if c not in piv]
    one = A[0][0] - A[0][0] + 1
    zero = one - one
    out = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for k, c in enumerate(piv):
            v[c] = -M[k][f]
        out.append(tuple(v))
    return out


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of a finite point set (-1 if empty)."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [vsub(p, p0) for p in points[1:]]
    return rank(diffs) if diffs else 0
