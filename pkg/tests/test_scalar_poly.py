import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freemonad import linalg
from freemonad.field import FieldSpec
from freemonad.poly import HomogeneousForm, monomial_basis, mult_map_matrix


def test_monomial_basis_examples():
    assert monomial_basis(4, 0) == ((0, 0, 0, 0),)
    assert len(monomial_basis(4, 2)) == 10
    assert monomial_basis(2, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))
    assert monomial_basis(3, -1) == ()


@given(st.integers(1, 6), st.integers(0, 7))
def test_monomial_basis_length_is_binomial(v, d):
    basis = monomial_basis(v, d)
    assert len(basis) == comb(d + v - 1, v - 1)
    assert list(basis) == sorted(basis, reverse=True)
    assert all(sum(m) == d for m in basis)


def test_mult_map_examples(F):
    x0 = HomogeneousForm.variable(F, 2, 0)
    M = mult_map_matrix(x0, 1)
    assert M.tolist() == [[1, 0], [0, 1], [0, 0]]

    zero = HomogeneousForm.zero(F, 2, 2)
    assert not mult_map_matrix(zero, 3).any()
    assert mult_map_matrix(zero, 3).shape == (6, 4)

    s = HomogeneousForm.linear(F, [1, 1])
    # (X0+X1)*X0 = X0^2 + X0X1 ; (X0+X1)*X1 = X0X1 + X1^2
    assert mult_map_matrix(s, 1).T.tolist() == [[1, 1, 0], [0, 1, 1]]


def test_mult_map_negative_degree(F):
    x0 = HomogeneousForm.variable(F, 3, 0)
    assert mult_map_matrix(x0, -1).shape == (1, 0)
    assert mult_map_matrix(x0, -2).shape == (0, 0)


def _random_form(rng, field, v, deg):
    coeffs = {m: int(rng.integers(-3, 4)) for m in monomial_basis(v, deg)}
    return HomogeneousForm.from_dict(field, v, deg, coeffs)


@pytest.mark.parametrize("field", [FieldSpec.prime(), FieldSpec.prime(7), FieldSpec.rational()])
@pytest.mark.parametrize("seed", range(4))
def test_graded_action_is_associative(field, seed):
    rng = np.random.default_rng(seed)
    v = int(rng.integers(2, 4))
    f = _random_form(rng, field, v, int(rng.integers(0, 3)))
    g = _random_form(rng, field, v, int(rng.integers(0, 3)))
    d = int(rng.integers(0, 3))
    lhs = mult_map_matrix(f * g, d)
    rhs = linalg.matmul(field, mult_map_matrix(f, d + g.degree), mult_map_matrix(g, d))
    assert np.array_equal(lhs, rhs)


def test_rank_kernel_image_examples(F, QQ):
    r, K, I = linalg.rank_kernel_image(F, F.identity(3))
    assert r == 3 and K.shape == (0, 3) and I.shape == (3, 3)

    r, K, I = linalg.rank_kernel_image(F, F.zeros((2, 5)))
    assert r == 0 and K.shape == (5, 5)

    r, K, I = linalg.rank_kernel_image(QQ, QQ.array([[1, 2], [2, 4]]))
    assert r == 1
    assert K.shape == (1, 2)
    # kernel spanned by (2, -1), i.e. proportional to (-2, 1)
    assert K[0, 0] / K[0, 1] == Fraction(-2)


def _brute_rank(M, p):
    """p-ary enumeration of the kernel: rank = cols - log_p |ker|."""
    rows, cols = M.shape
    kernel = 0
    for v in itertools.product(range(p), repeat=cols):
        if not (M @ np.array(v, dtype=np.int64) % p).any():
            kernel += 1
    k = 0
    while p**k < kernel:
        k += 1
    return cols - k


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(1, 5), st.integers(0, 10**6))
def test_rank_matches_enumeration(p, rows, cols, seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(0, p, size=(rows, cols))
    field = FieldSpec.prime(p)
    assert linalg.rank(field, M) == _brute_rank(M, p)
    assert linalg.rank(field, M, threshold=0) == _brute_rank(M, p)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 10**6))
def test_rank_nullity_and_kernel(rows, cols, seed):
    rng = np.random.default_rng(seed)
    F = FieldSpec.prime()
    M = rng.integers(-2, 3, size=(rows, cols)) * (rng.random((rows, cols)) < 0.6)
    M = F.array(M.tolist())
    r, K, I = linalg.rank_kernel_image(F, M)
    assert r + K.shape[0] == cols
    assert not linalg.matmul(F, M, K.T).any()
    assert linalg.rank(F, I) == r


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 10**6))
def test_prime_and_rational_ranks_agree(rows, cols, seed):
    rng = np.random.default_rng(seed)
    M = (rng.integers(-4, 5, size=(rows, cols)) * (rng.random((rows, cols)) < 0.5)).tolist()
    QQ, F = FieldSpec.rational(), FieldSpec.prime(2**31 - 1)
    assert linalg.rank(QQ, QQ.array(M)) == linalg.rank(F, F.array(M))


@pytest.mark.parametrize("seed", range(5))
def test_sparse_and_dense_rref_agree(seed):
    F = FieldSpec.prime()
    rng = np.random.default_rng(seed)
    M = rng.integers(0, 5, size=(12, 20)) * (rng.random((12, 20)) < 0.3)
    dense = linalg.rref(F, M, threshold=10**9)
    sparse = linalg.rref(F, M, threshold=0)
    assert dense.pivots == sparse.pivots
    assert np.array_equal(dense.rows, sparse.rows)


def test_subspace_quotient(F):
    W = F.array([[1, 0], [1, 1], [0, 1]])  # columns span a plane in k^3
    sub = linalg.Subspace(F, W, 3)
    Q = sub.quotient_map()
    assert sub.codim == 1
    assert not linalg.matmul(F, Q, W).any()
    assert np.array_equal(linalg.matmul(F, Q, sub.section()), F.identity(1))


def test_field_rejects_composites():
    with pytest.raises(ValueError):
        FieldSpec.prime(32004)
    with pytest.raises(ValueError):
        FieldSpec.prime(2**31 + 11)


def test_field_coefficients():
    F = FieldSpec.prime(7)
    assert F(Fraction(1, 2)) == 4
    assert F.parse("-1") == 6
    assert F.format(-1) == "6"
    QQ = FieldSpec.rational()
    assert QQ.parse("3/6") == Fraction(1, 2)
    assert QQ.format(Fraction(-3, 2)) == "-3/2"
