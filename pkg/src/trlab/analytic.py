"""Bias and analytic rank of tensors.

The exact path counts tuples (v^1, ..., v^{d-1}) whose contraction with T is
the zero functional; the bias is that count over p^{n_1 + ... + n_{d-1}}.
The character-sum path averages exp(2 pi i T(v) / p) over every full tuple and
is kept only as an independent cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .fields import check_budget
from .linalg import all_vectors, rank
from .tensor import Tensor, flatten

_CHUNK = 1 << 16


@dataclass(frozen=True)
class ExactBias:
    """bias = numerator / p**exponent, held exactly."""

    numerator: int
    exponent: int
    p: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.p ** self.exponent)

    @property
    def value(self) -> float:
        return self.numerator / self.p ** self.exponent

    @property
    def arank(self) -> float:
        # strip whole powers of p first so integer ranks come out exact
        num, e = self.numerator, self.exponent
        while num % self.p == 0:
            num //= self.p
            e -= 1
        return e - math.log(num, self.p) if num > 1 else float(e)

    def arank_at_most(self, r: int) -> bool:
        """Exact test of arank <= r, i.e. numerator * p^r >= p^exponent."""
        return self.numerator * self.p ** r >= self.p ** self.exponent

    def arank_ceil(self) -> int:
        """Smallest integer r with arank <= r."""
        r = 0
        while not self.arank_at_most(r):
            r += 1
        return r


@lru_cache(maxsize=32)
def pure_matrix(p: int, dims: tuple[int, ...]) -> np.ndarray:
    """Rows are the flattened pure tensors v^1 (x) ... (x) v^k over all factor tuples, lex order."""
    total = 1
    for n in dims:
        total *= p ** n
    check_budget(f"enumerate pure tensors of shape {dims} over GF({p})", total)
    out = all_vectors(p, dims[0]).copy()
    for n in dims[1:]:
        V = all_vectors(p, n)
        out = (out[:, None, :, None] * V[None, :, None, :]).reshape(out.shape[0] * V.shape[0], -1) % p
    out.flags.writeable = False
    return out


def _annihilated_count(P: np.ndarray, M: np.ndarray, p: int) -> int:
    """Number of rows x of P with x M = 0 over GF(p)."""
    count = 0
    for start in range(0, P.shape[0], _CHUNK):
        block = (P[start:start + _CHUNK] @ M) % p
        count += int(np.count_nonzero(~block.any(axis=1)))
    return count


def bias_exact(T: Tensor) -> ExactBias:
    """Exact bias by kernel counting.

    For order 1 there is no tuple to contract with, and the bias is taken to be
    p^{-rank(T)}: 1 for the zero vector and 1/p otherwise.
    """
    p = T.p
    if T.order == 1:
        return ExactBias(1, 0 if T.is_zero() else 1, p)
    dims = T.shape[:-1]
    m = sum(dims)
    check_budget("kernel-count bias", p ** m)
    if T.is_zero():
        return ExactBias(p ** m, m, p)
    M = flatten(T, range(1, T.order))
    N = _annihilated_count(pure_matrix(p, dims), M, p)
    return ExactBias(N, m, p)


def bias_char_oracle(T: Tensor) -> complex:
    """E_{v^1..v^d} exp(2 pi i T(v^1, ..., v^d) / p) by full enumeration."""
    p = T.p
    check_budget("character-sum bias", p ** sum(T.shape))
    vals = T.data
    for n in T.shape:
        vals = np.tensordot(vals, all_vectors(p, n), axes=([0], [1])) % p
    counts = np.bincount(vals.reshape(-1), minlength=p)
    total = int(counts.sum())
    return sum(int(c) * cmath.exp(2j * math.pi * k / p) for k, c in enumerate(counts)) / total


def arank(T: Tensor) -> float:
    return bias_exact(T).arank


def bias_with_mode_last(T: Tensor, mode: int) -> ExactBias:
    """Kernel-count bias with ``mode`` playing the role of the free variable x."""
    order = [m for m in range(1, T.order + 1) if m != mode] + [mode]
    return bias_exact(T.permute_modes(order))


def matrix_bias(M, p: int) -> ExactBias:
    """Closed form for order 2: bias = p^{-rank}."""
    M = np.asarray(M)
    r = rank(M, p)
    return ExactBias(p ** (M.shape[0] - r), M.shape[0], p)
