import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_tensor
from trlab.analytic import arank, bias_char_oracle, bias_exact, bias_with_mode_last, matrix_bias
from trlab.errors import BudgetExceeded
from trlab.linalg import random_invertible, rank
from trlab.tensor import Tensor, all_tensors, flatten, from_lex_index

DIAG = Tensor.basis((2, 2, 2), (1, 1, 1), 2) + Tensor.basis((2, 2, 2), (2, 2, 2), 2)


def test_zero_tensor():
    b = bias_exact(Tensor.zeros((2, 3, 2), 3))
    assert b.fraction == 1 and b.arank == 0
    assert bias_char_oracle(Tensor.zeros((2, 2), 2)) == pytest.approx(1.0)


def test_identity_matrix():
    b = bias_exact(Tensor(np.eye(2, dtype=int), 2))
    assert (b.numerator, b.exponent) == (1, 2)
    assert b.fraction == Fraction(1, 4)
    assert bias_char_oracle(Tensor(np.eye(2, dtype=int), 2)).real == pytest.approx(0.25)
    for p, n in [(2, 3), (3, 4), (5, 2)]:
        assert arank(Tensor(np.eye(n, dtype=int), p)) == pytest.approx(n)


def test_diagonal_cube():
    b = bias_exact(DIAG)
    assert b.fraction == Fraction(9, 16)
    assert b.arank == pytest.approx(math.log2(16 / 9))
    assert round(b.arank, 4) == 0.8301


def test_exact_rank_comparisons():
    b = bias_exact(DIAG)
    assert b.arank_at_most(1) and not b.arank_at_most(0)
    assert b.arank_ceil() == 1


def test_budget_refusal(monkeypatch):
    monkeypatch.setenv("TRL_BUDGET_BITS", "6")
    with pytest.raises(BudgetExceeded) as exc:
        bias_exact(Tensor.zeros((4, 3, 2), 2))
    assert exc.value.exit_code == 3
    assert exc.value.required > exc.value.limit


def test_d2_arank_equals_rank_exhaustive():
    for shape, p in [((2, 2), 2), ((2, 3), 2), ((2, 2), 3)]:
        for T in all_tensors(shape, p):
            assert bias_exact(T).fraction == Fraction(1, p ** rank(T.data, p))


def test_matrix_bias_helper():
    M = np.array([[1, 2, 0], [2, 4, 0]])
    assert matrix_bias(M, 5).fraction == Fraction(1, 5)


@st.composite
def small_tensors(draw):
    p = draw(st.sampled_from([2, 3]))
    d = draw(st.integers(2, 3))
    shape = tuple(draw(st.lists(st.integers(1, 3 if p == 2 else 2), min_size=d, max_size=d)))
    i = draw(st.integers(0, p ** int(np.prod(shape)) - 1))
    return from_lex_index(i, shape, p)


@given(small_tensors())
def test_exact_matches_character_sum(T):
    z = bias_char_oracle(T)
    assert abs(z - bias_exact(T).value) < 1e-9


@given(small_tensors())
def test_bias_in_unit_interval(T):
    b = bias_exact(T)
    assert 0 < b.fraction <= 1
    assert b.arank >= 0


@given(small_tensors(), st.data())
def test_invariant_under_mode_transform(T, data):
    mode = data.draw(st.integers(1, T.order))
    seed = data.draw(st.integers(0, 2 ** 16))
    A = random_invertible(T.shape[mode - 1], T.p, np.random.default_rng(seed))
    assert bias_exact(T.transform_mode(mode, A)).fraction == bias_exact(T).fraction


@given(small_tensors())
def test_mode_choice_does_not_matter(T):
    ref = bias_exact(T).fraction
    for m in range(1, T.order + 1):
        assert bias_with_mode_last(T, m).fraction == ref


def test_d2_arank_matches_flatten_rank(rng):
    for _ in range(20):
        T = random_tensor(rng, (3, 4), 5)
        assert bias_exact(T).fraction == Fraction(1, 5 ** rank(flatten(T, (1,)), 5))
