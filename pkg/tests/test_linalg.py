import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dyadiclp.exactnum import AdicClass, is_member
from dyadiclp.linalg import (
    bareiss_det, format_matrix, gcd_minors, hermite_normal_form, independent_rows, is_unimodular, kernel_basis,
    matmul, matvec, parse_matrix, rank, rmatvec, solve_in_adic, solve_or_farkas, xgcd,
)

from oracles import exact_rank, gcd_all_minors, leibniz_det


def int_matrices(max_m=4, max_n=4, lo=-6, hi=6):
    return st.integers(1, max_m).flatmap(
        lambda m: st.integers(1, max_n).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)))


def check_hnf(A, res):
    """All structural identities of a column-style HNF."""
    n = len(A[0])
    kept = [A[i] for i in res.kept]
    assert matmul(kept, [list(r) for r in res.U]) == res.H
    assert abs(leibniz_det(res.U)) == 1 if n <= 6 else is_unimodular(res.U)
    B = res.B
    for i in range(len(B)):
        assert B[i][i] > 0
        for j in range(i + 1, len(B)):
            assert B[i][j] == 0
        for k in range(i):
            assert 0 <= B[i][k] < B[i][i]
    assert len(res.kept) == exact_rank(A)


# -- elimination ----------------------------------------------------------------------

def test_solve_examples():
    assert solve_or_farkas([[1, 1], [1, -1]], [2, 0]).x == (1, 1)
    res = solve_or_farkas([[1, 1], [2, 2]], [1, 3])
    assert not res.solved and res.farkas == (-2, 1)
    assert solve_or_farkas([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 0, 0]).x == (0, 0, 0)


@settings(max_examples=150)
@given(int_matrices(), st.data())
def test_solve_or_farkas_dichotomy(A, data):
    b = data.draw(st.lists(st.integers(-6, 6), min_size=len(A), max_size=len(A)))
    res = solve_or_farkas(A, b)
    if res.solved:
        assert list(matvec(A, res.x)) == [Fraction(v) for v in b]
    else:
        assert all(v == 0 for v in rmatvec(A, res.farkas, len(A[0])))
        assert sum(ui * bi for ui, bi in zip(res.farkas, b)) != 0


@given(int_matrices(4, 4))
def test_rank_and_independent_rows(A):
    r = exact_rank(A)
    assert rank(A) == r
    rows = independent_rows(A)
    assert len(rows) == r and rows == sorted(rows)
    assert exact_rank([A[i] for i in rows]) == r


@given(int_matrices(5, 5, -9, 9).filter(lambda A: len(A) == len(A[0])))
def test_bareiss_matches_leibniz(A):
    assert bareiss_det(A) == leibniz_det(A)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert g >= 0 and s * a + t * b == g
    assert g == math.gcd(a, b)


# -- HNF ------------------------------------------------------------------------------

def test_hnf_examples():
    r = hermite_normal_form([[2]])
    assert r.B == ((2,),) and r.U == ((1,),)
    r = hermite_normal_form([[4, 6]])
    assert r.B == ((2,),) and matmul([[4, 6]], [list(x) for x in r.U]) == [[2, 0]]
    r = hermite_normal_form([[1, 0], [0, 1]])
    assert r.B == ((1, 0), (0, 1)) and r.U == ((1, 0), (0, 1))
    # frozen: extended Euclid on (5, 3)
    r = hermite_normal_form([[5, 3]])
    assert r.B == ((1,),) and r.U == ((-1, -3), (2, 5))


def test_hnf_drops_dependent_rows():
    r = hermite_normal_form([[1, 2], [2, 4], [0, 3]])
    assert r.kept == (0, 2) and r.removed == (1,)


@settings(max_examples=150)
@given(int_matrices(5, 5, -9, 9))
def test_hnf_invariants(A):
    check_hnf(A, hermite_normal_form(A))


@settings(max_examples=100)
@given(int_matrices(3, 4, -9, 9))
def test_gcd_minors_bruteforce(A):
    if exact_rank(A) < len(A):
        with pytest.raises(ValueError):
            gcd_minors(A)
    else:
        assert gcd_minors(A) == gcd_all_minors(A, len(A))


def test_gcd_minors_examples():
    assert gcd_minors([[4, 6]]) == 2
    assert gcd_minors([[1, 0], [0, 1]]) == 1
    assert gcd_minors([[2, 0], [0, 3]]) == 6


# -- kernel ---------------------------------------------------------------------------

def test_kernel_examples():
    k = kernel_basis([[1, 1]])
    assert len(k) == 1 and k[0] in ([1, -1], [-1, 1])
    assert kernel_basis([[1, 0], [0, 1]]) == []
    k = kernel_basis([[0, 0]])
    assert len(k) == 2 and abs(leibniz_det(k)) == 1


@settings(max_examples=100)
@given(int_matrices(3, 4))
def test_kernel_is_a_lattice_basis(A):
    n = len(A[0])
    K = kernel_basis(A)
    assert len(K) == n - exact_rank(A)
    for d in K:
        assert all(v == 0 for v in matvec(A, d))
    # the basis extends to a unimodular matrix, so it spans the full kernel lattice
    res = hermite_normal_form(A)
    assert is_unimodular(res.U)
    assert [[res.U[i][j] for i in range(n)] for j in range(res.rank, n)] == K


# -- solving over L -------------------------------------------------------------------

def test_solve_in_adic_examples():
    D = AdicClass.dyadic()
    assert solve_in_adic([[2]], [1], D).x == (Fraction(1, 2),)
    r = solve_in_adic([[3]], [1], D)
    assert r.kind == "adic" and r.u == (Fraction(1, 3),)
    r = solve_in_adic([[0]], [1], AdicClass.padic(5))
    assert r.kind == "farkas" and r.u == (1,)
    # frozen: rank-deficient system, certificate on the dropped row is zero
    r = solve_in_adic([[3, 0], [6, 0]], [1, 2], D)
    assert r.kind == "adic" and r.u == (Fraction(1, 3), 0)


@settings(max_examples=150)
@given(int_matrices(3, 3, -4, 4), st.data(), st.sampled_from([2, 3, 5]))
def test_solve_in_adic_alternative(A, data, p):
    L = AdicClass.padic(p)
    b = data.draw(st.lists(st.integers(-4, 4), min_size=len(A), max_size=len(A)))
    n = len(A[0])
    r = solve_in_adic(A, b, L)
    if r.kind == "solution":
        assert list(matvec(A, r.x)) == [Fraction(v) for v in b]
        assert all(is_member(v, L) for v in r.x)
    elif r.kind == "adic":
        assert all(v.denominator == 1 for v in rmatvec(A, r.u, n))
        assert not is_member(sum(ui * bi for ui, bi in zip(r.u, b)), L)
    else:
        assert all(v == 0 for v in rmatvec(A, r.u, n))
        assert sum(ui * bi for ui, bi in zip(r.u, b)) != 0


def test_matrix_text_round_trip():
    A = [[1, -2, Fraction(3, 4)], [0, 5, 6]]
    assert parse_matrix(format_matrix(A)) == A
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 2 3")
