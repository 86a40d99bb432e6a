import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_tensor
from trlab.errors import BudgetExceeded, InputError
from trlab.linalg import rank
from trlab.tensor import (
    Tensor, all_factor_tuples, all_tensors, contract, dot, flatten, from_lex_index, join, lex_index,
    multilinear_eval, pure_to_tensor, unflatten,
)


@st.composite
def tensors(draw, max_order=3, max_dim=3):
    p = draw(st.sampled_from([2, 3, 5]))
    d = draw(st.integers(1, max_order))
    shape = tuple(draw(st.lists(st.integers(1, max_dim), min_size=d, max_size=d)))
    size = int(np.prod(shape))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=size, max_size=size))
    return Tensor(np.array(entries).reshape(shape), p)


def _factors_for(draw, T):
    return [tuple(draw(st.lists(st.integers(0, T.p - 1), min_size=n, max_size=n))) for n in T.shape]


def test_pure_examples():
    e1 = (1, 0)
    T = pure_to_tensor([e1, e1, e1], 2)
    assert T == Tensor.basis((2, 2, 2), (1, 1, 1), 2)
    assert pure_to_tensor([(1, 1), (0, 0), (1, 0)], 2).is_zero()
    assert np.array_equal(pure_to_tensor([(1, 1), (1, 2)], 3).data, [[1, 2], [1, 2]])


def test_dot_examples():
    r = Tensor(np.ones((2, 2), dtype=int), 2)
    assert dot(r, Tensor.zeros((2, 2), 2)) == 0
    e = Tensor.basis((2, 2, 2), (1, 1, 1), 2)
    assert dot(e, e) == 1
    assert dot(r, r) == 0


def test_contract_examples():
    diag = Tensor.basis((2, 2, 2), (1, 1, 1), 2) + Tensor.basis((2, 2, 2), (2, 2, 2), 2)
    out = contract(diag, Tensor([1, 0], 2), (1,))
    assert np.array_equal(out.data, [[1, 0], [0, 0]])
    assert contract(diag, Tensor.zeros((2,), 2), (2,)).is_zero()


def test_flatten_zero():
    assert not flatten(Tensor.zeros((2, 3, 2), 3), (1, 3)).any()


def test_lex_index_zero_and_range():
    assert lex_index(Tensor.zeros((2, 2), 3)) == 0
    assert lex_index(from_lex_index(3 ** 4 - 1, (2, 2), 3)) == 3 ** 4 - 1
    with pytest.raises(InputError):
        from_lex_index(3 ** 4, (2, 2), 3)


def test_lex_bijection_full_census():
    seen = [lex_index(T) for T in all_tensors((2, 2, 2), 2)]
    assert seen == list(range(256))


def test_json_roundtrip_and_validation():
    T = from_lex_index(1234, (2, 3, 2), 3)
    assert Tensor.from_json(T.to_json()) == T
    with pytest.raises(InputError):
        Tensor.from_json({"q": 2, "shape": [2, 2], "entries": [0, 1, 1]})
    with pytest.raises(InputError):
        Tensor.from_json({"q": 2, "shape": [2, 2], "entries": [0, 1, 1, 2]})


def test_eval_at_basis_is_entry(rng):
    T = random_tensor(rng, (2, 3, 2), 3)
    for idx in itertools.product(*(range(n) for n in T.shape)):
        vecs = [np.eye(n, dtype=int)[i] for n, i in zip(T.shape, idx)]
        assert multilinear_eval(T, vecs) == T.data[idx]


def test_dot_with_pure_is_eval_exhaustive():
    factors = all_factor_tuples((2, 2, 2), 2)
    for T in all_tensors((2, 2, 2), 2):
        if lex_index(T) % 17:
            continue
        for f in factors:
            assert dot(T, pure_to_tensor(f, 2)) == multilinear_eval(T, f)


def test_budget_guard(monkeypatch):
    monkeypatch.setenv("TRL_BUDGET_BITS", "8")
    with pytest.raises(BudgetExceeded):
        all_factor_tuples((3, 3, 3), 2)


@given(tensors(), st.data())
def test_eval_is_multilinear(T, data):
    f = _factors_for(data.draw, T)
    k = data.draw(st.integers(0, T.order - 1))
    w = tuple(data.draw(st.lists(st.integers(0, T.p - 1), min_size=T.shape[k], max_size=T.shape[k])))
    c = data.draw(st.integers(0, T.p - 1))
    g = list(f)
    g[k] = tuple((c * a + b) % T.p for a, b in zip(f[k], w))
    h = list(f)
    h[k] = w
    assert multilinear_eval(T, g) == (c * multilinear_eval(T, f) + multilinear_eval(T, h)) % T.p


@given(tensors(), st.data())
def test_contract_full_is_dot(T, data):
    s = Tensor(np.array(data.draw(st.lists(st.integers(0, T.p - 1), min_size=T.size, max_size=T.size)))
               .reshape(T.shape), T.p)
    assert contract(T, s, tuple(range(1, T.order + 1))) == dot(T, s)


@given(tensors(), st.data())
def test_contract_linear(T, data):
    if T.order < 2:
        return
    I = (1,)
    n = T.shape[0]
    a = Tensor(data.draw(st.lists(st.integers(0, T.p - 1), min_size=n, max_size=n)), T.p)
    b = Tensor(data.draw(st.lists(st.integers(0, T.p - 1), min_size=n, max_size=n)), T.p)
    assert contract(T, a + b, I) == contract(T, a, I) + contract(T, b, I)
    assert contract(T + T, a, I) == contract(T, a, I) + contract(T, a, I)


@given(tensors(), st.data())
def test_flatten_rank_invariant_under_permutations(T, data):
    d = T.order
    if d < 2:
        return
    I = tuple(sorted(data.draw(st.sets(st.integers(1, d), min_size=1, max_size=d - 1))))
    Ic = tuple(m for m in range(1, d + 1) if m not in I)
    r = rank(flatten(T, I), T.p)
    pI = data.draw(st.permutations(I))
    pIc = data.draw(st.permutations(Ic))
    # rebuild ordering: same sets, permuted within each
    order = list(range(1, d + 1))
    for old, new in zip(I, pI):
        order[old - 1] = new
    for old, new in zip(Ic, pIc):
        order[old - 1] = new
    P = T.permute_modes(order)
    assert rank(flatten(P, I), T.p) == r


@given(tensors(), st.data())
def test_flatten_unflatten_roundtrip(T, data):
    d = T.order
    if d < 2:
        return
    I = tuple(sorted(data.draw(st.sets(st.integers(1, d), min_size=1, max_size=d - 1))))
    assert unflatten(flatten(T, I), T.shape, I, T.p) == T


def test_join_outer_product():
    a = Tensor([1, 2], 3)
    b = Tensor([[1, 0], [2, 1]], 3)
    J = join(a, (2,), b, (2, 2, 2), 3)
    for i, j, k in itertools.product(range(2), repeat=3):
        assert J.data[i, j, k] == a.data[j] * b.data[i, k] % 3
