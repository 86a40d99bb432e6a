import itertools
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from trlab.additive import PointSet, as_multiset
from trlab.errors import ConstructionError, InputError
from trlab.forcing import (
    ForcingFamily, QElement, QMultiset, _balance, c2, degeneracy_bound_for_rank, family_span, focusondeg,
    forcing_check, mainlemma_construct, mainlemma_d1, near_annihilators, paper_constants,
)
from trlab.linalg import Subspace, orth_complement, span
from trlab.prank import min_degeneracy
from trlab.tensor import Tensor, all_factor_tuples, all_tensors, dot, pure_to_tensor


def qset(factors, shape, p):
    return QMultiset(tuple(shape), p, [QElement(tuple(f)) for f in factors])


def all_pure(shape, p):
    return qset(all_factor_tuples(shape, p), shape, p)


def hyperplane(p, n, normal):
    return orth_complement(span([normal], p, n))


# -- near-annihilators ---------------------------------------------------------------------------

def test_near_annihilators_examples():
    R = near_annihilators(all_pure((2, 2), 2), 1)
    assert R == [Tensor.zeros((2, 2), 2)]
    R = near_annihilators(QMultiset((2, 2), 2, []), Fraction(7, 8))
    assert len(R) == 16
    U = span([[1, 1, 0]], 3, 3)
    R = near_annihilators(qset([(tuple(u),) for u in U], (3,), 3), 1)
    assert {tuple(r.flat) for r in R} == {tuple(v) for v in orth_complement(U)}


def test_near_annihilators_brute_force():
    Q = qset([f for i, f in enumerate(all_factor_tuples((2, 2), 3)) if i % 3], (2, 2), 3)
    alpha = Fraction(3, 4)
    got = {r.key() for r in near_annihilators(Q, alpha)}
    want = set()
    for r in all_tensors((2, 2), 3):
        zeros = sum(dot(r, pure_to_tensor(e.factors, 3)) == 0 for e in Q.elements)
        if Fraction(zeros, len(Q.elements)) >= alpha:
            want.add(r.key())
    assert got == want


def test_multiplicity_weights():
    # one element repeated 3 times dominates one singleton
    Q = QMultiset((2,), 2, [QElement(((1, 0),), 3), QElement(((0, 1),), 1)])
    R = {tuple(r.flat) for r in near_annihilators(Q, Fraction(3, 4))}
    assert R == {(0, 0), (0, 1)}


# -- families ----------------------------------------------------------------------------------

def test_family_span_examples():
    F = ForcingFamily((2, 2), 2, {(1, 2): Subspace.full(2, 4)})
    assert family_span(F) == Subspace.full(2, 4)
    assert family_span(ForcingFamily.zero((2, 3), 2)).dim == 0
    F = ForcingFamily((3, 2), 2, {(1,): span([[1, 0, 0]], 2, 3)})
    S = family_span(F)
    assert S.dim == 2
    for v in S.enumerate():
        M = np.asarray(v).reshape(3, 2)
        assert not M[1:].any()


def test_family_json_roundtrip():
    F = ForcingFamily((2, 2), 3, {(1,): span([[1, 2]], 3, 2), (1, 2): span([[1, 0, 0, 1]], 3, 4)})
    G = ForcingFamily.from_json(F.to_json())
    assert G.dims() == F.dims() and family_span(G) == family_span(F)


def test_forcing_check_examples():
    U = span([[1, 0, 1], [0, 1, 1]], 2, 3)
    Q = qset([(tuple(u),) for u in U], (3,), 2)
    F = ForcingFamily((3,), 2, {(1,): orth_complement(U)})
    for a in (Fraction(5, 8), Fraction(7, 8), 1):
        assert forcing_check(Q, a, F)
    # a nonzero functional vanishes on exactly 1/p of U, so alpha <= 1 - 1/p admits everything
    assert not forcing_check(Q, Fraction(1, 2), F)
    Q = qset([f for f in all_factor_tuples((2, 2), 2) if f[0] != (1, 1)], (2, 2), 2)
    assert forcing_check(Q, Fraction(1, 2), ForcingFamily((2, 2), 2, {(1, 2): Subspace.full(2, 4)}))
    assert forcing_check(all_pure((2, 2, 2), 2), 1, ForcingFamily.zero((2, 2, 2), 2))


def test_forcing_check_reports_failure():
    Q = qset([((1, 0), (1, 0))], (2, 2), 2)
    rep = forcing_check(Q, 1, ForcingFamily.zero((2, 2), 2))
    assert not rep and rep.first_failure is not None
    assert rep.annihilator_span_dim > rep.span_dim


@given(st.integers(0, 10 ** 6))
def test_forcing_monotone_in_family(seed):
    rng = np.random.default_rng(seed)
    shape, p = (2, 2), 2
    facs = all_factor_tuples(shape, p)
    Q = qset([f for f in facs if rng.random() < 0.6], shape, p)
    if not Q.elements:
        return
    V1 = span(rng.integers(0, 2, size=(1, 2)), p, 2)
    V12 = span(rng.integers(0, 2, size=(2, 4)), p, 4)
    small = ForcingFamily(shape, p, {(1,): V1})
    big = ForcingFamily(shape, p, {(1,): V1, (1, 2): V12})
    alpha = Fraction(3, 4)
    if forcing_check(Q, alpha, small):
        assert forcing_check(Q, alpha, big)


# -- d = 1 ----------------------------------------------------------------------------------

def test_d1_examples():
    Q, F = mainlemma_d1(PointSet.full(2, 4), 1)
    assert {e.factors[0] for e in Q.elements} == {tuple(v) for v in Subspace.full(2, 4)}
    assert F.get((1,)).dim == 0
    H = span([[1, 1, 0, 0], [0, 0, 1, 0]], 2, 4)
    A = PointSet.from_subspace(H, offset=[1, 0, 0, 1])
    Q, F = mainlemma_d1(A, Fraction(1, 4))
    assert {e.factors[0] for e in Q.elements} == {tuple(v) for v in H}
    assert F.get((1,)) == orth_complement(H)
    assert forcing_check(Q, 1, F)


@given(st.integers(0, 10 ** 6))
def test_d1_random_half_density(seed):
    rng = np.random.default_rng(seed)
    A = PointSet(2, 8, rng.random(256) < 0.5)
    dens = Fraction(len(A), 256)
    Q, F = mainlemma_d1(A, dens)
    assert forcing_check(Q, 1, F)
    assert forcing_check(Q, Fraction(7, 8), F)
    support = {(tuple(v),) for v in A.points()}
    assert Q.validate_witnesses(support, bound=2)


def test_d1_density_check():
    A = PointSet.from_points([[1, 0, 0]], 2, 3)
    with pytest.raises(InputError):
        mainlemma_d1(A, Fraction(1, 2))


# -- degree step -------------------------------------------------------------------------------

def test_focus_full():
    B = all_factor_tuples((2, 2), 2)
    res = focusondeg(B, 1, 2)
    assert res.V.dim == 0
    assert set(all_factor_tuples((2, 2), 2)) <= {e.factors for e in res.Q.elements}
    assert len(res.annihilators) == 1 and not res.annihilators.any()


@given(st.integers(0, 10 ** 6))
def test_focus_random_half(seed):
    rng = np.random.default_rng(seed)
    B = [f for f in all_factor_tuples((2, 2), 2) if rng.random() < 0.5]
    if len(B) < 6:
        return
    dens = Fraction(len(B), 16)
    try:
        res = focusondeg(B, dens, 2)
    except ConstructionError:
        return
    assert all(b > a for a, b in zip(res.potentials, res.potentials[1:]))
    assert res.Q.validate_witnesses(set(B))
    for r in res.annihilators:
        v, y = res.decomposition(r)
        assert res.V.contains(v)
        assert min_degeneracy(y)[0] <= 1


# -- assembly ---------------------------------------------------------------------------------

def test_construct_d1_delegates():
    B = [((1, 0, 0),), ((0, 1, 0),), ((1, 1, 0),), ((0, 0, 0),)]
    c = mainlemma_construct(B, Fraction(1, 2), 2)
    Q, F = mainlemma_d1(B, Fraction(1, 2), 2)
    assert c.family.dims() == F.dims()
    assert c.report


def test_construct_d2_full():
    B = all_factor_tuples((2, 2), 2)
    c = mainlemma_construct(B, 1, 2)
    assert c.report
    assert c.family.max_dim() == 0


@pytest.mark.parametrize("n1,n2", [((1, 0), (0, 1)), ((1, 1), (1, 0)), ((0, 1), (1, 1))])
def test_construct_hyperplane_products(n1, n2):
    H1, H2 = hyperplane(2, 2, n1), hyperplane(2, 2, n2)
    B = list(itertools.product([tuple(u) for u in H1], [tuple(v) for v in H2]))
    c = mainlemma_construct(B, Fraction(len(B), 16), 2)
    assert c.report
    assert c.Q.validate_witnesses(set(B))


def test_construct_d3_needs_stricter_alpha():
    B = all_factor_tuples((2, 2, 2), 2)
    with pytest.raises(ConstructionError):
        mainlemma_construct(B, 1, 2, alpha=Fraction(7, 8))
    c = mainlemma_construct(B, 1, 2, alpha=Fraction(15, 16))
    assert c.report


def test_construct_rejects_order4():
    with pytest.raises(InputError):
        mainlemma_construct(all_factor_tuples((1, 1, 1, 1), 2), 1, 2)


@given(st.lists(st.integers(1, 40), min_size=1, max_size=6))
def test_balance_bound(sizes):
    parts = [QMultiset((1,), 2, [QElement(((1,),), 1)] * s) for s in sizes]
    out = [q.total() for q in _balance(parts)]
    assert max(out) <= 2 * min(out)


# -- constants ----------------------------------------------------------------------------------

def test_constants_examples():
    assert c2(2) == 256
    pc = paper_constants(1, Fraction(1, 2), 2)
    assert pc.f2 == Fraction(1, 2 ** 81)
    assert paper_constants(3, Fraction(1, 100), 2).c_prime == 4 ** 27


def test_constants_variants_and_validation():
    a = paper_constants(2, Fraction(1, 4), 4, variant="log1").G
    b = paper_constants(2, Fraction(1, 4), 4, variant="log2").G
    assert b > a > 0
    with pytest.raises(InputError):
        paper_constants(2, 0, 2)
    with pytest.raises(InputError):
        paper_constants(2, Fraction(1, 2), 2, variant="log3")
    assert degeneracy_bound_for_rank(3, 1, 2) > 0
    pc = paper_constants(2, Fraction(1, 2), 2)
    assert pc.theorem_bound(1, 1) == mpmath.mpf(1) ** pc.c_prime
    assert pc.to_json()["c2"] == "256"


# -- serialization ---------------------------------------------------------------------------

def test_qmultiset_json():
    B = all_factor_tuples((2, 2), 2)
    res = focusondeg(B, 1, 2)
    again = QMultiset.from_json(res.Q.to_json())
    assert again.total() == res.Q.total()
    assert again.validate_witnesses(set(B))
    with pytest.raises(InputError):
        QMultiset.from_json({"q": 2, "shape": [2, 2], "elements": [{"factors": [[1, 0]]}]})
