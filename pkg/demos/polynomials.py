"""Gowers norms of a cubic over GF(5) and what its derivative tensor says about it.

    python3 demos/polynomials.py
"""

import numpy as np

from trlab.poly import (
    gowers_norm, gowers_via_bias, inverse_witness, random_polynomial, rank_upper_construct, taylor_split,
)
from trlab.prank import prank_exact, prank_upper

rng = np.random.default_rng(7)
P = random_polynomial(5, 2, 3, rng)
print("P =", P)

for k in (1, 2, 3, 4):
    print(f"  ||w^P||_U{k} = {gowers_norm(P, k).value:.6f}")
print("  U3 norm^8 from the derivative tensor:", gowers_via_bias(P))

T, W = taylor_split(P)
print("derivative tensor shape", T.shape, "remainder degree", W.degree)

up = prank_upper(T)
found = prank_exact(T, len(up))
r, cert = found
print(f"prank(T) = {r} (greedy bound {len(up)})")
res = rank_upper_construct(P, cert)
print(f"P = sum of {res.n_pairs} products of lower-degree polynomials + W; a function of {res.n_functions} lower-degree pieces")

Qs = [Q for pair in res.pairs for Q in pair][:2]
alpha, corr = inverse_witness(P, Qs)
print(f"best correlation with a combination of two of them: alpha={alpha}, |E| = {corr:.4f}")
