"""Dense order-d tensors over GF(p).

Modes are numbered from 1, as in the mathematics; a *mode set* is a sorted
tuple of mode numbers.  Entries are stored row-major with the last index
fastest, which fixes the lex index used for census ids.
"""

from __future__ import annotations

import json
from functools import reduce
from typing import Iterator, Sequence

import numpy as np

from .errors import InputError
from .fields import FieldSpec, check_budget
from .linalg import all_vectors

Factors = tuple[tuple[int, ...], ...]


class Tensor:
    """An element of GF(p)^{n_1} (x) ... (x) GF(p)^{n_d}."""

    __slots__ = ("p", "data", "_key")

    def __init__(self, data, p: int):
        FieldSpec(p)
        arr = np.array(data, dtype=np.int64) % p
        if arr.ndim == 0:
            raise InputError("a tensor needs at least one mode")
        if 0 in arr.shape:
            raise InputError(f"every mode needs dimension >= 1, got {arr.shape}")
        arr.flags.writeable = False
        self.p = p
        self.data = arr
        self._key = None

    @classmethod
    def zeros(cls, shape: Sequence[int], p: int) -> "Tensor":
        return cls(np.zeros(tuple(shape), dtype=np.int64), p)

    @classmethod
    def basis(cls, shape: Sequence[int], index: Sequence[int], p: int) -> "Tensor":
        """Standard basis tensor with a single 1 at a 1-indexed position."""
        arr = np.zeros(tuple(shape), dtype=np.int64)
        arr[tuple(i - 1 for i in index)] = 1
        return cls(arr, p)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def flat(self) -> np.ndarray:
        return self.data.reshape(-1)

    def is_zero(self) -> bool:
        return not self.data.any()

    def _same(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            raise InputError(f"expected a Tensor, got {type(other).__name__}")
        if self.p != other.p or self.shape != other.shape:
            raise InputError(
                f"tensor mismatch: GF({self.p}) {self.shape} vs GF({other.p}) {other.shape}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._same(other)
        return Tensor(self.data + other.data, self.p)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._same(other)
        return Tensor(self.data - other.data, self.p)

    def __neg__(self) -> "Tensor":
        return Tensor(-self.data, self.p)

    def scale(self, c: int) -> "Tensor":
        return Tensor(self.data * (int(c) % self.p), self.p)

    __rmul__ = scale

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.p, self.shape, self.data.tobytes())
        return self._key

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Tensor(p={self.p}, shape={self.shape}, entries={self.flat.tolist()})"

    def transform_mode(self, mode: int, A) -> "Tensor":
        """Apply the matrix ``A`` to one mode: t'_{..i..} = sum_j A[i, j] t_{..j..}."""
        ax = mode - 1
        moved = np.tensordot(np.asarray(A, dtype=np.int64), self.data, axes=([1], [ax]))
        return Tensor(np.moveaxis(moved, 0, ax), self.p)

    def permute_modes(self, order: Sequence[int]) -> "Tensor":
        """New tensor whose k-th mode is mode ``order[k]`` of this one."""
        return Tensor(np.transpose(self.data, [m - 1 for m in order]), self.p)

    def to_json(self) -> dict:
        return {"q": self.p, "shape": list(self.shape), "entries": self.flat.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Tensor":
        try:
            p = int(obj["q"])
            shape = [int(n) for n in obj["shape"]]
            entries = [int(e) for e in obj["entries"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad tensor JSON: {exc}") from None
        if len(entries) != int(np.prod(shape)):
            raise InputError(f"tensor JSON has {len(entries)} entries for shape {shape}")
        if any(not 0 <= e < p for e in entries):
            raise InputError(f"tensor JSON entries must be residues in [0, {p})")
        return cls(np.array(entries, dtype=np.int64).reshape(shape), p)


def load_tensor(path) -> Tensor:
    with open(path) as fh:
        return Tensor.from_json(json.load(fh))


# -- mode sets ----------------------------------------------------------------

def mode_set(modes, d: int) -> tuple[int, ...]:
    out = tuple(sorted(set(int(m) for m in modes)))
    if any(not 1 <= m <= d for m in out):
        raise InputError(f"mode set {modes} not inside [1, {d}]")
    return out


def complement(modes, d: int) -> tuple[int, ...]:
    s = set(modes)
    return tuple(m for m in range(1, d + 1) if m not in s)


def sub_shape(shape: Sequence[int], modes) -> tuple[int, ...]:
    return tuple(shape[m - 1] for m in modes)


def proper_subsets(modes) -> list[tuple[int, ...]]:
    """Nonempty proper subsets of ``modes``, ordered by (size, lex)."""
    from itertools import combinations

    modes = tuple(modes)
    return [c for k in range(1, len(modes)) for c in combinations(modes, k)]


# -- construction and products --------------------------------------------------

def pure_to_tensor(factors, p: int) -> Tensor:
    vecs = [np.asarray(v, dtype=np.int64) % p for v in factors]
    if not vecs:
        raise InputError("a pure tensor needs at least one factor")
    return Tensor(reduce(np.multiply.outer, vecs), p)


def pure_flat(factors, p: int) -> np.ndarray:
    """Flattened entries of u^1 (x) ... (x) u^d without building a Tensor."""
    out = np.asarray(factors[0], dtype=np.int64)
    for v in factors[1:]:
        out = np.multiply.outer(out, np.asarray(v, dtype=np.int64)).reshape(-1) % p
    return out % p


def dot(r: Tensor, s: Tensor) -> int:
    r._same(s)
    return int((r.flat @ s.flat) % r.p)


def contract(r: Tensor, s: Tensor, modes) -> Tensor | int:
    """Contract ``r`` with ``s`` over the modes ``modes``; returns an int when all modes are used."""
    I = mode_set(modes, r.order)
    if not I:
        raise InputError("contraction needs at least one mode")
    if s.p != r.p or s.shape != sub_shape(r.shape, I):
        raise InputError(f"cannot contract shape {s.shape} against modes {I} of {r.shape}")
    out = np.tensordot(r.data, s.data, axes=([m - 1 for m in I], list(range(len(I))))) % r.p
    if out.ndim == 0:
        return int(out)
    return Tensor(out, r.p)


def contract_flat(r: Tensor, s_flat: np.ndarray, modes) -> np.ndarray:
    """Flattened contraction over ``modes`` with a flattened argument (no checks)."""
    I = tuple(modes)
    M = flatten(r, I)
    return (np.asarray(s_flat, dtype=np.int64) @ M) % r.p


def flatten(r: Tensor, modes) -> np.ndarray:
    """Matrix with rows indexed lex over ``modes`` and columns lex over the rest."""
    d = r.order
    I = mode_set(modes, d)
    if not I or len(I) == d:
        raise InputError(f"flattening needs a proper nonempty mode set, got {modes}")
    J = complement(I, d)
    perm = [m - 1 for m in I + J]
    rows = int(np.prod(sub_shape(r.shape, I)))
    return np.transpose(r.data, perm).reshape(rows, -1) % r.p


def unflatten(M, shape: Sequence[int], modes, p: int) -> Tensor:
    d = len(shape)
    I = mode_set(modes, d)
    J = complement(I, d)
    arr = np.asarray(M, dtype=np.int64).reshape(sub_shape(shape, I) + sub_shape(shape, J))
    inverse = np.argsort([m - 1 for m in I + J])
    return Tensor(np.transpose(arr, inverse), p)


def join(a, modes, b, shape: Sequence[int], p: int) -> Tensor:
    """The tensor a (x) b with ``a`` on ``modes`` and ``b`` on the complementary modes."""
    a_arr = a.data if isinstance(a, Tensor) else np.asarray(a, dtype=np.int64)
    b_arr = b.data if isinstance(b, Tensor) else np.asarray(b, dtype=np.int64)
    d = len(shape)
    I = mode_set(modes, d)
    J = complement(I, d)
    a_arr = a_arr.reshape(sub_shape(shape, I))
    b_arr = b_arr.reshape(sub_shape(shape, J))
    outer = np.multiply.outer(a_arr, b_arr)
    inverse = np.argsort([m - 1 for m in I + J])
    return Tensor(np.transpose(outer, inverse), p)


def multilinear_eval(r: Tensor, vectors) -> int:
    if len(vectors) != r.order:
        raise InputError(f"need {r.order} vectors, got {len(vectors)}")
    out = r.data
    for v in vectors:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (out.shape[0],):
            raise InputError(f"vector of length {v.shape} for a mode of dimension {out.shape[0]}")
        out = np.tensordot(v, out, axes=([0], [0])) % r.p
    return int(out)


def add(r: Tensor, s: Tensor) -> Tensor:
    return r + s


def scale(r: Tensor, c: int) -> Tensor:
    return r.scale(c)


# -- lex indexing ---------------------------------------------------------------

def lex_index(r: Tensor) -> int:
    """Position of ``r`` in the lex order of all tensors of its shape (zero tensor is 0)."""
    i = 0
    p = r.p
    for e in r.flat.tolist():
        i = i * p + e
    return i


def from_lex_index(i: int, shape: Sequence[int], p: int) -> Tensor:
    size = int(np.prod(shape))
    if not 0 <= i < p ** size:
        raise InputError(f"lex index {i} outside [0, {p}^{size})")
    entries = [0] * size
    for k in range(size - 1, -1, -1):
        entries[k] = i % p
        i //= p
    return Tensor(np.array(entries, dtype=np.int64).reshape(tuple(shape)), p)


def all_tensors(shape: Sequence[int], p: int, start: int = 0, stop: int | None = None) -> Iterator[Tensor]:
    size = int(np.prod(shape))
    total = p ** size
    check_budget(f"enumerate all tensors of shape {tuple(shape)} over GF({p})", total)
    stop = total if stop is None else min(stop, total)
    for i in range(start, stop):
        yield from_lex_index(i, shape, p)


def all_factor_tuples(shape: Sequence[int], p: int) -> list[Factors]:
    """Every tuple (u^1, ..., u^d) in lex order; this is the multiset of pure tensors."""
    from itertools import product

    total = 1
    for n in shape:
        total *= p ** n
    check_budget(f"enumerate pure tensors of shape {tuple(shape)}", total)
    per_mode = [[tuple(int(x) for x in row) for row in all_vectors(p, n)] for n in shape]
    return list(product(*per_mode))
