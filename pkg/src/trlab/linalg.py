"""Exact linear algebra over GF(p).

Vectors and matrices are plain ``numpy`` int64 arrays with entries reduced
mod p.  For p = 2 Gaussian elimination runs on rows packed into Python int
bitsets.  Subspaces are always held in reduced row echelon form so equality
is structural.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import InputError
from .fields import FieldSpec, check_budget


def as_matrix(M, p: int) -> np.ndarray:
    arr = np.array(M, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2:
        raise InputError(f"expected a matrix, got array of shape {arr.shape}")
    return arr % p


# -- vector indexing ----------------------------------------------------------

@lru_cache(maxsize=64)
def all_vectors(p: int, n: int) -> np.ndarray:
    """All of GF(p)^n as a (p^n, n) array in lex order (first coordinate slowest)."""
    check_budget(f"enumerate GF({p})^{n}", p ** n)
    idx = np.arange(p ** n, dtype=np.int64)
    out = np.empty((p ** n, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = idx % p
        idx //= p
    out.flags.writeable = False
    return out


def vec_index(v, p: int) -> int:
    i = 0
    for x in v:
        i = i * p + int(x) % p
    return i


def vec_indices(arr: np.ndarray, p: int) -> np.ndarray:
    """Lex indices of the rows of ``arr``."""
    arr = np.asarray(arr, dtype=np.int64)
    n = arr.shape[-1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (arr % p) @ weights


def index_vec(i: int, p: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for j in range(n - 1, -1, -1):
        out[j] = i % p
        i //= p
    return tuple(out)


# -- elimination --------------------------------------------------------------

def _pack(M: np.ndarray) -> list[int]:
    rows = []
    for row in M:
        bits = 0
        for j in np.flatnonzero(row):
            bits |= 1 << int(j)
        rows.append(bits)
    return rows


def _unpack(rows: list[int], ncols: int) -> np.ndarray:
    out = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, bits in enumerate(rows):
        while bits:
            low = bits & -bits
            out[i, low.bit_length() - 1] = 1
            bits ^= low
    return out


def _rref_gf2(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    nrows, ncols = M.shape
    work = _pack(M)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        bit = 1 << col
        pivot = next((i for i in range(r, nrows) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(nrows):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
    return _unpack(work, ncols), pivots


def _rref_modp(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = M.copy()
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, col]), -1, p)) % p
        factors = A[:, col].copy()
        factors[r] = 0
        rows = np.flatnonzero(factors)
        if rows.size:
            A[rows] = (A[rows] - np.outer(factors[rows], A[r])) % p
        pivots.append(col)
        r += 1
    return A, pivots


def rref_with_pivots(M, p: int) -> tuple[np.ndarray, list[int]]:
    A = as_matrix(M, p)
    if A.size == 0:
        return A.copy(), []
    if p == 2:
        return _rref_gf2(A)
    return _rref_modp(A, p)


def rref(M, p: int) -> np.ndarray:
    """Reduced row echelon form of ``M`` over GF(p), same shape (zero rows last)."""
    return rref_with_pivots(M, p)[0]


def rank(M, p: int) -> int:
    return len(rref_with_pivots(M, p)[1])


def kernel(M, p: int) -> "Subspace":
    """Right kernel {v : M v = 0}."""
    A = as_matrix(M, p)
    ncols = A.shape[1]
    R, pivots = rref_with_pivots(A, p)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return Subspace(p, ncols, basis)


def solve(M, b, p: int) -> np.ndarray | None:
    """One solution x of M x = b, or None when inconsistent."""
    A = as_matrix(M, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    R, pivots = rref_with_pivots(aug, p)
    ncols = A.shape[1]
    if pivots and pivots[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, ncols]
    return x


def matmul(A, B, p: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        M = rng.integers(0, p, size=(n, n))
        if rank(M, p) == n:
            return M


# -- subspaces ----------------------------------------------------------------

class Subspace:
    """A linear subspace of GF(p)^n, stored by its RREF basis."""

    __slots__ = ("p", "n", "basis", "pivots", "_key")

    def __init__(self, p: int, n: int, vectors=None):
        FieldSpec(p)
        self.p = p
        self.n = n
        if vectors is None or len(vectors) == 0:
            basis = np.zeros((0, n), dtype=np.int64)
            pivots: list[int] = []
        else:
            vecs = as_matrix(vectors, p)
            if vecs.shape[1] != n:
                raise InputError(f"vectors of length {vecs.shape[1]} in a subspace of GF({p})^{n}")
            R, pivots = rref_with_pivots(vecs, p)
            basis = R[: len(pivots)].copy()
        basis.flags.writeable = False
        self.basis = basis
        self.pivots = tuple(pivots)
        self._key = (p, n, basis.tobytes())

    @classmethod
    def full(cls, p: int, n: int) -> "Subspace":
        return cls(p, n, np.eye(n, dtype=np.int64))

    @classmethod
    def zero(cls, p: int, n: int) -> "Subspace":
        return cls(p, n)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def codim(self) -> int:
        return self.n - self.dim

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(p={self.p}, n={self.n}, dim={self.dim}, basis={self.basis.tolist()})"

    def _check(self, other: "Subspace"):
        if (self.p, self.n) != (other.p, other.n):
            raise InputError(
                f"subspaces live in different spaces: GF({self.p})^{self.n} vs GF({other.p})^{other.n}")

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1) % self.p
        if v.shape[0] != self.n:
            raise InputError(f"vector of length {v.shape[0]} tested against GF({self.p})^{self.n}")
        if self.dim == 0:
            return not v.any()
        # subtracting the pivot-coordinate combination leaves zero iff v is in the span
        coeffs = v[list(self.pivots)]
        return not ((v - coeffs @ self.basis) % self.p).any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(b) for b in other.basis)

    def enumerate(self) -> np.ndarray:
        """All p^dim points, ordered lex over basis coefficients."""
        check_budget("enumerate subspace", self.p ** self.dim)
        if self.dim == 0:
            return np.zeros((1, self.n), dtype=np.int64)
        return all_vectors(self.p, self.dim) @ self.basis % self.p

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self.enumerate():
            yield tuple(int(x) for x in row)

    def indices(self) -> np.ndarray:
        return vec_indices(self.enumerate(), self.p)

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the RREF basis (``v`` must lie in the space)."""
        v = np.asarray(v, dtype=np.int64) % self.p
        return v[list(self.pivots)].copy()

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.p, self.n, np.concatenate([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return orth_complement(orth_complement(self).sum(orth_complement(other)))

    def drop_last(self) -> "Subspace":
        """The codimension-one subspace spanned by all but the last RREF row."""
        return Subspace(self.p, self.n, self.basis[:-1])

    def to_json(self) -> dict:
        return {"q": self.p, "n": self.n, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Subspace":
        return cls(int(obj["q"]), int(obj["n"]), obj.get("basis") or None)


def span(vectors, p: int, n: int) -> Subspace:
    vectors = list(vectors) if not isinstance(vectors, np.ndarray) else vectors
    return Subspace(p, n, vectors if len(vectors) else None)


def orth_complement(S: Subspace) -> Subspace:
    if S.dim == 0:
        return Subspace.full(S.p, S.n)
    return kernel(S.basis, S.p)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    return A.sum(B)


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    return A.intersect(B)


def contains(S: Subspace, v) -> bool:
    return S.contains(v)


def enumerate_subspace(S: Subspace) -> np.ndarray:
    return S.enumerate()


def iter_subspaces(p: int, n: int, dim: int) -> Iterable[Subspace]:
    """Every subspace of GF(p)^n of the given dimension, via RREF pivot patterns."""
    from itertools import combinations, product

    if dim == 0:
        yield Subspace.zero(p, n)
        return
    for pivots in combinations(range(n), dim):
        free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n) if j not in pivots]
        for vals in product(range(p), repeat=len(free)):
            B = np.zeros((dim, n), dtype=np.int64)
            for i, pc in enumerate(pivots):
                B[i, pc] = 1
            for (i, j), v in zip(free, vals):
                B[i, j] = v
            yield Subspace(p, n, B)


def count_subspaces(p: int, n: int, dim: int) -> int:
    """Gaussian binomial coefficient [n choose dim]_p."""
    num = den = 1
    for i in range(dim):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den
