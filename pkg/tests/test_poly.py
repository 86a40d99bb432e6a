import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from trlab.errors import InputError, InvariantViolation
from trlab.poly import (
    Polynomial, bias_poly, combine, derivative_tensor, diagonal_polynomial, gowers_norm,
    gowers_norm_bruteforce, gowers_via_bias, inverse_witness, random_polynomial, rank_upper_construct,
    taylor_split,
)
from trlab.prank import prank_exact
from trlab.tensor import Tensor


def x(i, p, n):
    return Polynomial.variable(i, p, n)


def test_fermat_reduction_and_degree():
    P = Polynomial(3, 2, {(4, 0): 1})      # x^4 = x^2 on GF(3)
    assert P.terms == {(2, 0): 1}
    assert P.degree == 2
    assert Polynomial(2, 2).degree == -1
    assert Polynomial(5, 1, {(5,): 1}) == x(1, 5, 1)


def test_eval_examples():
    assert all(v == 0 for v in Polynomial(3, 2).eval_all())
    assert (x(1, 3, 2) * x(2, 3, 2)).eval((2, 2)) == 1
    assert Polynomial.constant(4, 5, 3)((1, 2, 3)) == 4


def test_json_roundtrip():
    P = Polynomial(5, 3, {(1, 1, 0): 2, (0, 0, 3): 4})
    obj = P.to_json()
    assert obj["q"] == 5 and obj["n"] == 3
    assert Polynomial.from_json(obj) == P


def test_interpolation_roundtrip():
    rng = np.random.default_rng(0)
    for p, n in [(2, 3), (3, 2), (5, 2)]:
        vals = rng.integers(0, p, size=p ** n)
        P = Polynomial.from_values(vals, p, n)
        assert np.array_equal(P.eval_all(), vals)


def test_bias_examples():
    assert bias_poly(Polynomial(3, 2)) == pytest.approx(1.0)
    for p in (2, 3, 5):
        assert abs(bias_poly(x(1, p, 2))) < 1e-12
    assert abs(bias_poly(x(1, 2, 2) * x(2, 2, 2))) == pytest.approx(0.5)


def test_gowers_examples():
    zero = Polynomial(2, 2)
    for k in (1, 2, 3):
        assert gowers_norm(zero, k).value == pytest.approx(1.0)
    P = x(1, 2, 2) * x(2, 2, 2)
    assert gowers_norm(P, 2).value == pytest.approx(2 ** -0.5)
    assert gowers_norm_bruteforce(P, 2).value == pytest.approx(2 ** -0.5)
    assert gowers_via_bias(P) == Fraction(1, 4)
    assert gowers_via_bias(Polynomial(3, 2)) == 1
    r = gowers_norm(P, 2, via_bias=True)
    assert r.exact == Fraction(1, 4)


def test_derivative_tensor_examples():
    T = derivative_tensor(x(1, 3, 2) * x(2, 3, 2))
    assert np.array_equal(T.data, [[0, 1], [1, 0]])
    L = Polynomial(5, 3, {(1, 0, 0): 2, (0, 0, 1): 3, (0, 0, 0): 1})
    assert np.array_equal(derivative_tensor(L).data, [2, 0, 3])
    C = x(1, 5, 3) * x(2, 5, 3) * x(3, 5, 3)
    T3 = derivative_tensor(C)
    ones = {idx for idx in itertools.product(range(3), repeat=3) if T3.data[idx]}
    assert ones == set(itertools.permutations(range(3)))
    assert all(T3.data[i] == 1 for i in ones)


def test_derivative_tensor_self_check():
    # x1^2 x2 has degree 3; an order-2 alternating sum of it is not multilinear
    P = Polynomial(3, 2, {(2, 1): 1})
    with pytest.raises(InvariantViolation):
        derivative_tensor(P, d=2)


def test_taylor_examples():
    L = Polynomial(3, 2, {(1, 0): 1, (0, 1): 2, (0, 0): 2})
    T, W = taylor_split(L)
    assert np.array_equal(T.data, [1, 2])
    assert W == Polynomial.constant(2, 3, 2)
    with pytest.raises(InputError):
        taylor_split(Polynomial(2, 2, {(1, 1): 1}))


def test_rank_upper_examples():
    L = Polynomial(3, 2, {(1, 0): 1, (0, 0): 1})
    Q = x(1, 3, 2) * x(2, 3, 2)
    T, _ = taylor_split(Q)
    r, cert = prank_exact(T, 2)
    # a symmetric 2x2 with zero diagonal has rank 2 as a matrix
    assert r == 2
    res = rank_upper_construct(Q, cert)
    assert res.n_pairs == 2
    for Qi, Ri in res.pairs:
        assert Qi.degree <= 1 and Ri.degree <= 1
    T1, W1 = taylor_split(L)
    assert T1.order == 1 and W1 == Polynomial.constant(1, 3, 2)


def test_rank_upper_single_term():
    # P = x1 * x1 over GF(3): derivative tensor 2 e1 (x) e1 is a single term
    P = x(1, 3, 2) * x(1, 3, 2)
    T, W = taylor_split(P)
    r, cert = prank_exact(T, 2)
    assert r == 1
    res = rank_upper_construct(P, cert)
    assert res.n_pairs == 1 and res.W.is_zero()
    assert res.n_functions == 2


def test_inverse_witness_examples():
    Q1 = x(1, 3, 2)
    alpha, corr = inverse_witness(Q1, [Q1])
    assert alpha == (1,) and corr == pytest.approx(1.0)
    alpha, corr = inverse_witness(Polynomial(3, 2), [Q1, x(2, 3, 2)])
    assert alpha == (0, 0) and corr == pytest.approx(1.0)
    P = x(1, 3, 2) * x(2, 3, 2)
    alpha, corr = inverse_witness(P, [x(1, 3, 2), x(2, 3, 2)])
    assert corr >= 3 ** -2


def test_combine():
    Qs = [x(1, 5, 2), x(2, 5, 2)]
    assert combine(Qs, (2, 3)) == Polynomial(5, 2, {(1, 0): 2, (0, 1): 3})


@st.composite
def polys(draw, max_deg=3):
    p, n = draw(st.sampled_from([(2, 3), (3, 2), (5, 2), (3, 3)]))
    deg = draw(st.integers(0, min(max_deg, n * (p - 1))))
    seed = draw(st.integers(0, 2 ** 20))
    return random_polynomial(p, n, deg, np.random.default_rng(seed))


@given(polys())
def test_u1_is_abs_bias(P):
    assert gowers_norm(P, 1).value == pytest.approx(abs(bias_poly(P)), abs=1e-9)


@given(polys(max_deg=2))
def test_monotone_in_k(P):
    vals = [gowers_norm(P, k).value for k in (1, 2, 3)]
    assert vals[0] <= vals[1] + 1e-9 and vals[1] <= vals[2] + 1e-9


@given(polys())
def test_gowers_identity(P):
    d = P.degree
    if d < 1:
        return
    assert gowers_norm(P, d).value_2k == pytest.approx(float(gowers_via_bias(P)), abs=1e-9)


@given(polys(max_deg=2))
def test_fast_matches_bruteforce(P):
    for k in (1, 2):
        # compare the 2^k-th powers; roots amplify rounding noise near zero
        assert gowers_norm(P, k).value_2k == pytest.approx(gowers_norm_bruteforce(P, k).value_2k, abs=1e-9)


@given(polys())
def test_taylor_reconstruction(P):
    if P.degree < 1 or P.degree >= P.p:
        return
    T, W = taylor_split(P)
    inv = pow(math.factorial(P.degree), -1, P.p)
    rebuilt = diagonal_polynomial(T, P.n).scale(inv) + W
    assert np.array_equal(rebuilt.eval_all(), P.eval_all())
    assert W.degree < P.degree


@given(polys(), st.integers(0, 2 ** 16))
def test_derivative_tensor_is_multilinear(P, seed):
    if P.degree < 1 or P.degree >= P.p:
        return
    T = derivative_tensor(P, self_check=20, seed=seed)
    assert T.order == P.degree
    assert isinstance(T, Tensor)


@given(st.integers(0, 2 ** 16), st.sampled_from([(3, 2), (5, 2), (2, 3)]), st.integers(1, 2))
def test_inverse_witness_bound_factored(seed, pn, r):
    p, n = pn
    rng = np.random.default_rng(seed)
    Qs = [random_polynomial(p, n, 1, rng) for _ in range(r)]
    table = rng.integers(0, p, size=(p,) * r)
    # P = f(Q_1..Q_r) pointwise for a random f: F^r -> F
    qv = np.stack([Q.eval_all() for Q in Qs])
    vals = table[tuple(qv)]
    P = Polynomial.from_values(vals, p, n)
    _, corr = inverse_witness(P, Qs)
    assert corr >= p ** -r - 1e-12
