# src/linalg.py
# -*- coding: utf-8 -*-
"""
Scalar 행렬의 정확한 선형대수 (Gauss-Jordan)
- 행렬은 List[List[Scalar]] 그대로 쓴다
- 특이 행렬은 SingularMatrix, 크기 불일치는 DimensionMismatch
"""
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from .errors import DimensionMismatch, SingularMatrix
from .exact import ONE, ZERO, Scalar

Matrix = List[List[Scalar]]
Entry = Union[int, Fraction, Scalar]


def as_matrix(rows: Sequence[Sequence[Entry]]) -> Matrix:
    return [[Scalar.of(x) for x in row] for row in rows]


def shape(A: Matrix) -> Tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(A: Matrix) -> Matrix:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise DimensionMismatch(f"cannot multiply {n}x{k} by {k2}x{m}")
    Bt = transpose(B)
    out: Matrix = []
    for row in A:
        out.append([sum((a * b for a, b in zip(row, col)), ZERO) for col in Bt])
    return out


def matvec(A: Matrix, v: Sequence[Scalar]) -> List[Scalar]:
    return [sum((a * x for a, x in zip(row, v)), ZERO) for row in A]


def rref(A: Matrix) -> Tuple[Matrix, List[int]]:
    """기약 행사다리꼴과 피벗 열"""
    R = [list(row) for row in A]
    n, m = shape(R)
    pivots: List[int] = []
    r = 0
    for c in range(m):
        if r == n:
            break
        p = next((i for i in range(r, n) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(n):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def nullspace(A: Matrix, ncols: int = 0) -> List[List[Scalar]]:
    """A v = 0 의 기저. 자유변수 하나를 1 로 두는 RREF 표준 기저"""
    m = shape(A)[1] if A else ncols
    R, pivots = rref(A) if A else ([], [])
    free = [c for c in range(m) if c not in pivots]
    basis: List[List[Scalar]] = []
    for f in free:
        v = [ZERO] * m
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(v)
    return basis


def inverse(A: Matrix) -> Matrix:
    n, m = shape(A)
    if n != m:
        raise DimensionMismatch(f"matrix is not square ({n}x{m})")
    aug = [list(row) + idrow for row, idrow in zip(A, identity(n))]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in R]


def solve_left(A: Matrix, G: Matrix) -> Matrix:
    """C·A = G 를 만족하는 C (A 의 행이 독립이면 유일)"""
    ka, m = shape(A)
    kg, m2 = shape(G)
    if m != m2:
        raise DimensionMismatch(f"row length {m} vs {m2}")
    # Aᵀ Cᵀ = Gᵀ 를 첨가행렬로 푼다
    At, Gt = transpose(A), transpose(G)
    aug = [list(a) + list(g) for a, g in zip(At, Gt)]
    R, pivots = rref(aug)
    if any(p >= ka for p in pivots):
        raise SingularMatrix("target rows are not in the row space")
    Ct = [[ZERO] * kg for _ in range(ka)]
    for r, p in enumerate(pivots):
        Ct[p] = R[r][ka:]
    C = transpose(Ct) if kg else []
    if matmul(C, A) != G:
        raise SingularMatrix("left solve did not reproduce the target")
    return C


def is_integral(A: Matrix) -> bool:
    return all(x.is_rational_integer() for row in A for x in row)


def to_int_matrix(A: Matrix) -> List[List[int]]:
    return [[x.as_int() for x in row] for row in A]


def is_positive_semidefinite(G: Sequence[Sequence[Union[int, Fraction]]]) -> bool:
    """대칭 소거(LDLᵀ)로 판정. 영 피벗이면 남은 행 전체가 0 이어야 한다"""
    n = len(G)
    M = [[Fraction(x) for x in row] for row in G]
    if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
        return False
    for k in range(n):
        p = M[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(M[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = M[i][k] / p
            if f:
                for j in range(k, n):
                    M[i][j] -= f * M[k][j]
    return True
