# tests/test_linalg.py
from fractions import Fraction

import pytest

from src.doc_io import load_case2_instance
from src.errors import DimensionMismatch, SingularMatrix
from src.exact import Scalar
from src.linalg import (as_matrix, identity, inverse, is_integral, is_positive_semidefinite,
                        matmul, nullspace, rank, rref, solve_left, transpose)

from .conftest import CASE2


def test_inverse_of_shipped_transfer_matrix():
    M = load_case2_instance(CASE2).M
    Mi = inverse(M)
    assert matmul(M, Mi) == identity(9)
    assert matmul(Mi, M) == identity(9)


def test_singular_and_non_square():
    with pytest.raises(SingularMatrix):
        inverse(as_matrix([[1, 2], [2, 4]]))
    with pytest.raises(DimensionMismatch):
        inverse(as_matrix([[1, 2, 3], [4, 5, 6]]))
    with pytest.raises(DimensionMismatch):
        matmul(as_matrix([[1, 2]]), as_matrix([[1, 2]]))


def test_rref_and_rank():
    A = as_matrix([[2, 4, 6], [1, 2, 4], [3, 6, 10]])
    R, piv = rref(A)
    assert piv == [0, 2]
    assert R[0] == as_matrix([[1, 2, 0]])[0]
    assert rank(A) == 2


def test_nullspace_basis_is_killed():
    A = as_matrix([[1, 1, 0, 0], [0, 0, 1, Scalar.root3()]])
    N = nullspace(A)
    assert len(N) == 2
    for v in N:
        assert all(not x for x in matmul(A, transpose([v]))[0] + matmul(A, transpose([v]))[1])


def test_nullspace_of_empty_system_is_identity():
    assert nullspace([], ncols=3) == identity(3)


def test_solve_left():
    A = as_matrix([[1, 0, 1], [0, 1, 1]])
    G = as_matrix([[2, 3, 5], [Fraction(1, 2), 0, Fraction(1, 2)]])
    C = solve_left(A, G)
    assert matmul(C, A) == G
    with pytest.raises(SingularMatrix):
        solve_left(A, as_matrix([[0, 0, 1]]))


def test_integrality():
    assert is_integral(as_matrix([[1, -2], [0, 3]]))
    assert not is_integral(as_matrix([[Fraction(1, 2)]]))
    assert not is_integral([[Scalar.root3()]])


@pytest.mark.parametrize("G,ok", [
    ([[2, 1], [1, 2]], True),
    ([[1, 2], [2, 1]], False),
    ([[0, 0], [0, 3]], True),
    ([[0, 1], [1, 3]], False),
    ([[1, 1], [0, 1]], False),
    ([[1, 1, 1], [1, 1, 1], [1, 1, 1]], True),
])
def test_positive_semidefinite(G, ok):
    assert is_positive_semidefinite(G) is ok
