"""Forcing multisets built from dense sets, for d = 1 and d = 2 over GF(2).

    python3 demos/forcing_small.py
"""

from fractions import Fraction

import numpy as np

from trlab.additive import PointSet, find_system
from trlab.forcing import focusondeg, forcing_check, mainlemma_construct, mainlemma_d1, paper_constants
from trlab.tensor import all_factor_tuples

rng = np.random.default_rng(3)

A = PointSet(2, 8, rng.random(256) < 0.4)
Q, F = mainlemma_d1(A, Fraction(len(A), 256))
print(f"d=1: |A| = {len(A)}, U = span of Q has {Q.total()} points, V has dim {F.get((1,)).dim}")
print("     forcing at alpha=1:", bool(forcing_check(Q, 1, F)))

full = all_factor_tuples((2, 2), 2)
B = [f for f in full if rng.random() < 0.6]
delta = Fraction(len(B), len(full))
S, W = find_system(B, delta, (2, 2), 2)
longest = max(len(w.plus) + len(w.minus) for w in W.values())
print(f"d=2: |B'| = {len(B)}, system with {S.size()} elements, codim <= {S.codim_bound}, longest witness {longest}")

res = focusondeg(B, delta, 2, (2, 2))
print(f"     degree step: {res.Q.total()} elements, potentials {res.potentials}, dim V = {res.V.dim}")
c = mainlemma_construct(B, delta, 2, (2, 2))
print(f"     assembled Q: {c.Q.total()} elements, family dims {c.family.dims()}, forcing: {bool(c.report)}")

pc = paper_constants(2, delta, 2)
print("the theoretical thresholds for comparison:", pc.to_json()["f2"], "and G =", pc.to_json()["G"])
