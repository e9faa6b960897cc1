import random
from fractions import Fraction as F
from itertools import combinations
from math import gcd

import pytest
from sympy.polys.domains import QQ, QQ_I
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_int_matrix
from hypertorus.errors import DimensionMismatch, RankDeficient
from hypertorus.exactmath import GaussRat, I, Mat, conj, eigenspace_basis, hnf, snf, span_coordinates


def _det_int(rows):
    """Cofactor expansion over the integers."""
    if len(rows) == 1:
        return rows[0][0]
    return sum(
        (-1) ** j * rows[0][j] * _det_int([r[:j] + r[j + 1:] for r in rows[1:]])
        for j in range(len(rows))
        if rows[0][j]
    )


def determinantal_invariants(M: Mat) -> list[int]:
    """SNF diagonal via gcds of k x k minors (independent of the elimination code)."""
    rows = [list(r) for r in M.to_ints()]
    m, n = M.shape
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in combinations(range(m), k):
            for ci in combinations(range(n), k):
                g = gcd(g, _det_int([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


# --------------------------------------------------------------------------
# Gaussian rationals


fractions_ = st.builds(F, st.integers(-60, 60), st.integers(1, 12))
gauss = st.builds(GaussRat, fractions_, fractions_)


def _sym(z: GaussRat):
    q = lambda x: QQ(x.numerator, x.denominator)  # noqa: E731
    return QQ_I(q(z.re), q(z.im))


@settings(max_examples=300, deadline=None)
@given(gauss, gauss)
def test_gauss_field_ops_match_sympy(a, b):
    assert _sym(a + b) == _sym(a) + _sym(b)
    assert _sym(a - b) == _sym(a) - _sym(b)
    assert _sym(a * b) == _sym(a) * _sym(b)
    if b:
        assert _sym(a / b) == _sym(a) / _sym(b)


@given(gauss)
def test_conjugation_is_involution(z):
    assert z.conjugate().conjugate() == z
    assert (z * z.conjugate()).is_real()


def test_gauss_interoperates_with_fraction():
    assert F(1, 2) + I == GaussRat(F(1, 2), 1)
    assert I * I == -1
    assert 1 / I == -I
    assert conj(GaussRat(0, 0)) == 0
    assert hash(GaussRat(3, 0)) == hash(F(3))


def test_mat_normalizes_real_gauss_entries():
    M = Mat([[GaussRat(2, 0), I]])
    assert isinstance(M[0, 0], F)
    assert M.conj() == Mat([[2, -I]])


def test_mat_dimension_errors():
    with pytest.raises(DimensionMismatch):
        Mat([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        Mat.identity(2) @ Mat.identity(3)
    with pytest.raises(DimensionMismatch):
        Mat.identity(2) + Mat.identity(3)
    with pytest.raises(DimensionMismatch):
        Mat.identity(2) @ (1, 2, 3)


def test_mat_inverse_and_det():
    M = Mat([[2, 1], [F(1, 3), 1]])
    assert M @ M.inv() == Mat.identity(2)
    assert M.det() == F(5, 3)
    with pytest.raises(ZeroDivisionError):
        Mat([[1, 2], [2, 4]]).inv()


def test_span_coordinates():
    assert span_coordinates([(1, 0, 0), (0, 1, 1)], (2, 3, 3)) == (2, 3)
    assert span_coordinates([(1, 0, 0), (0, 1, 1)], (2, 3, 4)) is None
    with pytest.raises(RankDeficient):
        span_coordinates([(1, 0), (2, 0)], (1, 0))


# --------------------------------------------------------------------------
# HNF


def test_hnf_identity():
    H, U = hnf(Mat.identity(2))
    assert H == Mat.identity(2) and U == Mat.identity(2)


def test_hnf_reduces_above_pivot():
    # Row reduction by hand: subtract row 2 from row 1.
    H, U = hnf(Mat([[2, 1], [0, 1]]))
    assert H == Mat([[2, 0], [0, 1]])
    assert U == Mat([[1, -1], [0, 1]])


def test_hnf_of_permutation():
    H, U = hnf(Mat([[0, 1], [1, 0]]))
    assert H == Mat.identity(2)
    assert U @ Mat([[0, 1], [1, 0]]) == H


def test_hnf_rank_deficient():
    with pytest.raises(RankDeficient):
        hnf(Mat([[1, 2], [2, 4]]))
    with pytest.raises(RankDeficient):
        hnf(Mat.zeros(3, 3))


def _check_hnf(M: Mat, H: Mat, U: Mat):
    n = M.cols
    assert U @ M == H
    assert abs(U.det()) == 1
    for i in range(H.rows):
        for j in range(min(i, n)):
            assert H[i, j] == 0
    for j in range(n):
        piv = H[j, j]
        assert piv > 0
        for i in range(j):
            assert 0 <= H[i, j] < piv
    for i in range(n, H.rows):
        assert not any(H.row(i))


def test_hnf_properties_random():
    rng = random.Random(11)
    done = 0
    while done < 500:
        n = rng.randint(1, 4)
        m = rng.randint(n, n + 2)
        M = random_int_matrix(rng, m, n)
        if M.rank() < n:
            continue
        H, U = hnf(M)
        _check_hnf(M, H, U)
        H2, _ = hnf(H)
        assert H2 == H  # idempotent
        done += 1


# --------------------------------------------------------------------------
# SNF


def _check_snf(M: Mat, D: Mat, P: Mat, Q: Mat):
    assert P @ M @ Q == D
    assert abs(P.det()) == 1 and abs(Q.det()) == 1
    diag = [D[i, i] for i in range(min(D.shape))]
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D[i, j] == 0
    assert all(d >= 0 for d in diag)
    nz = [int(d) for d in diag if d]
    assert diag[: len(nz)] == nz  # zeros trail
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    return nz


def test_snf_already_diagonal():
    D, P, Q = snf(Mat([[2, 0], [0, 0]]))
    assert D == Mat([[2, 0], [0, 0]])
    assert P == Mat.identity(2) and Q == Mat.identity(2)


def test_snf_two_by_two():
    M = Mat([[2, 4], [6, 8]])
    D, P, Q = snf(M)
    assert D == Mat.diag([2, 4])
    # oracle: gcd of entries is 2, |det| = 8
    assert determinantal_invariants(M) == [2, 4]
    _check_snf(M, D, P, Q)


def test_snf_zero():
    D, P, Q = snf(Mat.zeros(3, 3))
    assert D == Mat.zeros(3, 3)


def test_snf_properties_random():
    rng = random.Random(5)
    for _ in range(500):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        M = random_int_matrix(rng, m, n, -5, 5)
        D, P, Q = snf(M)
        nz = _check_snf(M, D, P, Q)
        assert nz == determinantal_invariants(M)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda m: st.lists(st.lists(st.integers(-30, 30), min_size=3, max_size=3), min_size=m, max_size=m)
    )
)
def test_snf_hypothesis(rows):
    M = Mat(rows)
    D, P, Q = snf(M)
    assert _check_snf(M, D, P, Q) == determinantal_invariants(M)


# --------------------------------------------------------------------------
# eigenspaces


def test_eigenspace_rotation_block():
    M = Mat([[0, -1], [1, 0]])
    (v,) = eigenspace_basis(M, I)
    # hand solution of (M - iI) v = 0: v proportional to (1, -i)
    assert v == (1, -I)
    assert M @ v == tuple(I * x for x in v)


def test_eigenspace_identity():
    assert len(eigenspace_basis(Mat.identity(2), 1)) == 2
    assert eigenspace_basis(Mat.identity(2), -1) == []


def test_eigenspace_dimensions_sum():
    rng = random.Random(3)
    for _ in range(30):
        # conjugate a block-diagonal order-4 matrix by a unimodular change of basis
        blocks = [rng.choice(("rot", "one", "minus")) for _ in range(3)]
        n = 0
        D = [[0] * 6 for _ in range(6)]
        for b in blocks:
            if b == "rot":
                D[n][n + 1], D[n + 1][n] = -1, 1
            elif b == "one":
                D[n][n], D[n + 1][n + 1] = 1, 1
            else:
                D[n][n], D[n + 1][n + 1] = -1, 1
            n += 2
        P = Mat([[1, 1, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 2, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [1, 0, 0, 0, 0, 1]])
        M = P @ Mat(D) @ P.inv()
        total = 0
        for lam in (1, -1, I, -I):
            basis = eigenspace_basis(M, lam)
            for v in basis:
                assert M @ v == tuple(lam * x for x in v)
            total += len(basis)
        assert total == 6
