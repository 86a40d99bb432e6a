"""Partition rank: canonical rank-1 terms, an exact solver, and degeneracy certificates.

A partition-rank-1 tensor is a (x) b with ``a`` living on a proper nonempty
mode set S and ``b`` on its complement.  Terms are canonical when S contains
mode 1 and the first nonzero entry of ``a`` is 1, so each (S, a (x) b) product
has exactly one representation.

The solver runs iterative deepening over the number of terms.  A node with
residual R and k terms left is pruned unless arank(R) <= k, tested exactly on
integers; failures are memoized per (residual, depth, smallest allowed term),
and terms are added in increasing canonical order so sums are unordered.
"""

from __future__ import annotations

import json
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .analytic import bias_exact, pure_matrix
from .errors import InputError, InvariantViolation
from .fields import check_budget
from .linalg import Subspace, all_vectors, iter_subspaces, count_subspaces, solve
from .tensor import Tensor, complement, flatten, join, lex_index, proper_subsets, sub_shape


# -- terms and certificates ------------------------------------------------------

@dataclass(frozen=True)
class Rank1Term:
    split: tuple[int, ...]
    a: Tensor
    b: Tensor

    @property
    def order(self) -> int:
        return self.a.order + self.b.order

    @property
    def shape(self) -> tuple[int, ...]:
        d = self.order
        dims = [0] * d
        for m, n in zip(self.split, self.a.shape):
            dims[m - 1] = n
        for m, n in zip(complement(self.split, d), self.b.shape):
            dims[m - 1] = n
        return tuple(dims)

    def expand(self) -> Tensor:
        return join(self.a, self.split, self.b, self.shape, self.a.p)

    def sort_key(self) -> tuple:
        return (self.split, lex_index(self.a), lex_index(self.b))

    def is_canonical(self) -> bool:
        d = self.order
        if not self.split or len(self.split) == d or self.split[0] != 1:
            return False
        if self.a.is_zero() or self.b.is_zero():
            return False
        return int(self.a.flat[np.flatnonzero(self.a.flat)[0]]) == 1

    def to_json(self) -> dict:
        return {"split": list(self.split), "a": self.a.to_json(), "b": self.b.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Rank1Term":
        return cls(tuple(int(m) for m in obj["split"]), Tensor.from_json(obj["a"]), Tensor.from_json(obj["b"]))


def canonical_term(split, a, b, shape: Sequence[int], p: int) -> Rank1Term:
    """Canonical form of the product a (x) b with ``a`` on ``split``."""
    d = len(shape)
    S = tuple(sorted(split))
    a = np.asarray(a.data if isinstance(a, Tensor) else a, dtype=np.int64) % p
    b = np.asarray(b.data if isinstance(b, Tensor) else b, dtype=np.int64) % p
    if 1 not in S:
        S, a, b = complement(S, d), b, a
    a = a.reshape(sub_shape(shape, S))
    b = b.reshape(sub_shape(shape, complement(S, d)))
    nz = np.flatnonzero(a)
    if nz.size == 0 or not b.any():
        raise InputError("a rank-1 term needs two nonzero factors")
    c = int(a.reshape(-1)[nz[0]])
    a = a * pow(c, -1, p) % p
    b = b * c % p
    return Rank1Term(S, Tensor(a, p), Tensor(b, p))


@dataclass(frozen=True)
class PartitionCertificate:
    shape: tuple[int, ...]
    p: int
    terms: tuple[Rank1Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=Rank1Term.sort_key)))

    def __len__(self):
        return len(self.terms)

    def to_json(self) -> dict:
        return {"q": self.p, "shape": list(self.shape), "terms": [t.to_json() for t in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "PartitionCertificate":
        terms = tuple(Rank1Term.from_json(t) for t in obj.get("terms", []))
        if "shape" in obj:
            shape, p = tuple(obj["shape"]), int(obj["q"])
        elif terms:
            shape, p = terms[0].shape, terms[0].a.p
        else:
            raise InputError("an empty certificate needs explicit q and shape")
        return cls(shape, p, terms)


def expand(cert: PartitionCertificate) -> Tensor:
    out = Tensor.zeros(cert.shape, cert.p)
    for term in cert.terms:
        if term.shape != tuple(cert.shape) or term.a.p != cert.p:
            raise InputError(f"term of shape {term.shape} in a certificate for {cert.shape}")
        out = out + term.expand()
    return out


def verify_certificate(cert: PartitionCertificate, T: Tensor) -> bool:
    if tuple(cert.shape) != T.shape or cert.p != T.p:
        raise InputError(f"certificate for {cert.shape} checked against tensor of shape {T.shape}")
    if not all(t.is_canonical() and t.shape == T.shape for t in cert.terms):
        return False
    keys = [t.sort_key() for t in cert.terms]
    if keys != sorted(keys):
        return False
    return expand(cert) == T


def save_certificate(cert: PartitionCertificate, path) -> None:
    with open(path, "w") as fh:
        json.dump(cert.to_json(), fh)


# -- enumeration -----------------------------------------------------------------

def splits(d: int) -> list[tuple[int, ...]]:
    """Canonical splits: proper mode sets containing mode 1, lex order."""
    return sorted(S for S in proper_subsets(range(1, d + 1)) if S[0] == 1)


def count_rank1_terms(shape: Sequence[int], p: int) -> int:
    d = len(shape)
    total = 0
    for S in splits(d):
        na = int(np.prod(sub_shape(shape, S)))
        nb = int(np.prod(sub_shape(shape, complement(S, d))))
        total += (p ** na - 1) // (p - 1) * (p ** nb - 1)
    return total


def _normalized_rows(p: int, n: int) -> np.ndarray:
    V = all_vectors(p, n)[1:]
    first = V[np.arange(V.shape[0]), (V != 0).argmax(axis=1)]
    return V[first == 1]


def rank1_enumerate(shape: Sequence[int], p: int) -> Iterator[Rank1Term]:
    shape = tuple(shape)
    d = len(shape)
    if d < 2:
        raise InputError("partition rank needs order >= 2")
    check_budget(f"enumerate rank-1 terms of {shape}", count_rank1_terms(shape, p))
    for S in splits(d):
        sa, sb = sub_shape(shape, S), sub_shape(shape, complement(S, d))
        A = _normalized_rows(p, int(np.prod(sa)))
        B = all_vectors(p, int(np.prod(sb)))[1:]
        for a in A:
            ta = Tensor(a.reshape(sa), p)
            for b in B:
                yield Rank1Term(S, ta, Tensor(b.reshape(sb), p))


# -- exact solver ------------------------------------------------------------------

class PrankSolver:
    """Reusable exact partition-rank search for one (shape, p).

    The failure memo is keyed by residual contents, so it stays valid across
    different targets of the same shape.
    """

    def __init__(self, shape: Sequence[int], p: int, cache_size: int = 1 << 20):
        self.shape = tuple(shape)
        self.p = p
        d = len(self.shape)
        if d < 2:
            raise InputError("partition rank needs order >= 2")
        terms = list(rank1_enumerate(self.shape, p))
        expanded = np.array([t.expand().flat for t in terms], dtype=np.int64)
        # one representative (the first canonical term) per distinct product
        _, first = np.unique(expanded, axis=0, return_index=True)
        first = np.sort(first)
        self.terms = [terms[i] for i in first]
        self.E = expanded[first]
        self.n_last = self.shape[-1]
        self.m = sum(self.shape[:-1])
        check_budget("solver kernel table", len(self.terms) * p ** self.m)
        self.P = pure_matrix(p, self.shape[:-1])
        rows = self.E.shape[1] // self.n_last
        self.PE = np.einsum("xa,tab->txb", self.P, self.E.reshape(-1, rows, self.n_last)) % p
        self.cache_size = cache_size
        self._fail: OrderedDict = OrderedDict()
        self.nodes = 0

    def _feasible(self, R: np.ndarray, k: int, start: int) -> np.ndarray:
        """Indices t >= start with arank(R - E_t) <= k - 1."""
        p = self.p
        if k == 1:
            hits = np.flatnonzero((self.E[start:] == R).all(axis=1))
            return hits + start
        PR = (self.P @ R.reshape(-1, self.n_last)) % p
        diff = (PR[None, :, :] - self.PE[start:]) % p
        counts = np.count_nonzero(~diff.any(axis=2), axis=1)
        ok = counts * p ** (k - 1) >= p ** self.m
        return np.flatnonzero(ok) + start

    def _remember(self, key, start):
        old = self._fail.get(key)
        self._fail[key] = start if old is None else min(old, start)
        self._fail.move_to_end(key)
        if len(self._fail) > self.cache_size:
            self._fail.popitem(last=False)

    def _dfs(self, R: np.ndarray, k: int, start: int):
        self.nodes += 1
        if not R.any():
            return []
        if k == 0:
            return None
        key = (R.tobytes(), k)
        known = self._fail.get(key)
        if known is not None and known <= start:
            return None
        for t in self._feasible(R, k, start):
            rest = self._dfs((R - self.E[t]) % self.p, k - 1, int(t) + 1)
            if rest is not None:
                return [int(t)] + rest
        self._remember(key, start)
        return None

    def solve(self, T: Tensor, r_max: int):
        if T.shape != self.shape or T.p != self.p:
            raise InputError(f"solver for {self.shape} over GF({self.p}) given {T.shape} over GF({T.p})")
        if r_max < 0:
            raise InputError("r_max must be >= 0")
        R = T.flat.astype(np.int64)
        lower = bias_exact(T).arank_ceil()
        for r in range(lower, r_max + 1):
            found = self._dfs(R, r, 0)
            if found is not None:
                cert = PartitionCertificate(self.shape, self.p, tuple(self.terms[i] for i in found))
                return len(found), cert
        return None


@lru_cache(maxsize=8)
def _solver(shape: tuple[int, ...], p: int) -> PrankSolver:
    return PrankSolver(shape, p)


def prank_exact(T: Tensor, r_max: int):
    """(prank, certificate) when prank(T) <= r_max, else None."""
    return _solver(T.shape, T.p).solve(T, r_max)


def prank_bruteforce(T: Tensor, r_max: int):
    """Unpruned, unmemoized depth search over every canonical term (test oracle)."""
    terms = list(rank1_enumerate(T.shape, T.p))
    E = np.array([t.expand().flat for t in terms], dtype=np.int64)
    p = T.p

    def search(R, k, start):
        if not R.any():
            return []
        if k == 0:
            return None
        if k == 1:
            hit = np.flatnonzero((E[start:] == R).all(axis=1))
            return [start + int(hit[0])] if hit.size else None
        for t in range(start, len(terms)):
            rest = search((R - E[t]) % p, k - 1, t + 1)
            if rest is not None:
                return [t] + rest
        return None

    R = T.flat.astype(np.int64)
    for r in range(r_max + 1):
        found = search(R, r, 0)
        if found is not None:
            return r, PartitionCertificate(T.shape, p, tuple(terms[i] for i in found))
    return None


def prank_upper(T: Tensor) -> PartitionCertificate:
    """Labeled upper bound: repeatedly cancel the densest nonzero slice with one term."""
    d = T.order
    if d < 2:
        raise InputError("partition rank needs order >= 2")
    p = T.p
    R = T.data.copy()
    terms = []
    while R.any():
        best = None
        for ax in range(d):
            for i in range(R.shape[ax]):
                weight = np.count_nonzero(np.take(R, i, axis=ax))
                if weight and (best is None or weight > best[0]):
                    best = (weight, ax, i)
        _, ax, i = best
        e = np.zeros(R.shape[ax], dtype=np.int64)
        e[i] = 1
        term = canonical_term((ax + 1,), e, np.take(R, i, axis=ax), T.shape, p)
        terms.append(term)
        R = (R - term.expand().data) % p
    return PartitionCertificate(T.shape, p, tuple(terms))


# -- degeneracy ---------------------------------------------------------------------

@dataclass(frozen=True)
class DegeneracyComponent:
    modes: tuple[int, ...]
    H: Subspace
    w: Tensor


@dataclass(frozen=True)
class DegeneracyCertificate:
    k: int
    shape: tuple[int, ...]
    p: int
    components: tuple[DegeneracyComponent, ...] = field(default=())

    def total(self) -> Tensor:
        out = Tensor.zeros(self.shape, self.p)
        for c in self.components:
            out = out + c.w
        return out

    def is_valid(self, T: Tensor | None = None) -> bool:
        d = len(self.shape)
        for c in self.components:
            if not c.modes or d in c.modes or c.H.dim > self.k:
                return False
            # w in H (x) F^{I^c}: every column of the I-flattening lies in H
            cols = flatten(c.w, c.modes).T
            if not all(c.H.contains(col) for col in cols):
                return False
        return T is None or self.total() == T


def degeneracy_modesets(d: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    return [c for s in range(1, d) for c in combinations(range(1, d), s)]


def _component_rows(I, H: Subspace, shape, p) -> np.ndarray:
    d = len(shape)
    J = complement(I, d)
    nJ = int(np.prod(sub_shape(shape, J)))
    rows = []
    for h in H.basis:
        for j in range(nJ):
            e = np.zeros(nJ, dtype=np.int64)
            e[j] = 1
            rows.append(join(h, I, e, shape, p).flat)
    return np.array(rows, dtype=np.int64).reshape(-1, int(np.prod(shape)))


@lru_cache(maxsize=16)
def _degeneracy_table(shape: tuple[int, ...], p: int, k: int):
    """For every tuple (H_I) with dim H_I = min(k, dim F^I): the subspace sum H_I (x) F^{I^c}."""
    d = len(shape)
    Is = degeneracy_modesets(d)
    dims = [int(np.prod(sub_shape(shape, I))) for I in Is]
    n_tuples = 1
    for n in dims:
        n_tuples *= count_subspaces(p, n, min(k, n))
    check_budget("degeneracy subspace tuples", n_tuples)
    choices = [list(iter_subspaces(p, n, min(k, n))) for n in dims]
    N = int(np.prod(shape))
    table = []
    for Hs in product(*choices):
        blocks = [_component_rows(I, H, shape, p) for I, H in zip(Is, Hs)]
        rows = [b for b in blocks if b.size]
        total = Subspace(p, N, np.concatenate(rows) if rows else None)
        table.append((Hs, blocks, total))
    return Is, table


def is_k_degenerate(T: Tensor, k: int) -> DegeneracyCertificate | None:
    """A certificate that T lies in sum_I H_I (x) F^{I^c} with dim H_I <= k, if one exists."""
    d = T.order
    if d < 2:
        raise InputError("degeneracy needs order >= 2")
    if k < 0:
        raise InputError("k must be >= 0")
    if T.is_zero():
        return DegeneracyCertificate(k, T.shape, T.p, ())
    Is, table = _degeneracy_table(T.shape, T.p, k)
    for Hs, blocks, total in table:
        if not total.contains(T.flat):
            continue
        nonempty = [b for b in blocks if b.size]
        x = solve(np.concatenate(nonempty).T, T.flat, T.p)
        comps = []
        pos = 0
        for I, H, b in zip(Is, Hs, blocks):
            n = b.shape[0]
            w_flat = (x[pos:pos + n] @ b) % T.p if n else np.zeros(T.size, dtype=np.int64)
            pos += n
            if w_flat.any():
                comps.append(DegeneracyComponent(I, H, Tensor(w_flat.reshape(T.shape), T.p)))
        cert = DegeneracyCertificate(k, T.shape, T.p, tuple(comps))
        if not cert.is_valid(T):
            raise InvariantViolation("degeneracy certificate failed its own check")
        return cert
    return None


def min_degeneracy(T: Tensor) -> tuple[int, DegeneracyCertificate]:
    """Smallest k for which T is k-degenerate, with its certificate."""
    k = 0
    while True:
        cert = is_k_degenerate(T, k)
        if cert is not None:
            return k, cert
        k += 1


def degeneracy_to_prank(cert: DegeneracyCertificate) -> PartitionCertificate:
    """Expand each component over a basis of H_I: at most 2^{d-1} k rank-1 terms."""
    if not cert.is_valid():
        raise InputError("invalid degeneracy certificate")
    p = cert.p
    terms = []
    for c in cert.components:
        M = flatten(c.w, c.modes)
        S = c.H.basis
        # RREF basis: the pivot rows of M are the coefficients t_i
        Tm = M[list(c.H.pivots), :]
        if not np.array_equal((S.T @ Tm) % p, M):
            raise InputError(f"component on modes {c.modes} is not in H (x) F^(I^c)")
        for s_i, t_i in zip(S, Tm):
            if t_i.any():
                terms.append(canonical_term(c.modes, s_i, t_i, cert.shape, p))
    return PartitionCertificate(cert.shape, p, tuple(terms))
