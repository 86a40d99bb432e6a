"""Sumsets, subspaces inside sumsets, and l-systems with signed witnesses.

A PointSet is a boolean mask over GF(p)^n in lex order.  An l-system is kept
extensionally: one table per level mapping a prefix (u_1, ..., u_{k-1}) of
factor vectors to the subspace of GF(p)^{n_k} allowed next.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping

import numpy as np

from .errors import BudgetExceeded, ConstructionError, InputError
from .fields import FieldSpec, budget_bits, check_budget
from .linalg import Subspace, all_vectors, orth_complement, vec_index, vec_indices
from .tensor import Factors, Tensor, pure_to_tensor

Vec = tuple[int, ...]


class PointSet:
    """A subset of GF(p)^n."""

    __slots__ = ("p", "n", "mask")

    def __init__(self, p: int, n: int, mask=None):
        FieldSpec(p)
        self.p = p
        self.n = n
        size = p ** n
        check_budget(f"point set in GF({p})^{n}", size)
        if mask is None:
            mask = np.zeros(size, dtype=bool)
        mask = np.asarray(mask, dtype=bool).reshape(-1)
        if mask.shape[0] != size:
            raise InputError(f"mask of length {mask.shape[0]} for {size} points")
        self.mask = mask

    @classmethod
    def from_points(cls, points, p: int, n: int) -> "PointSet":
        mask = np.zeros(p ** n, dtype=bool)
        pts = np.asarray(list(points), dtype=np.int64).reshape(-1, n)
        if pts.size:
            mask[vec_indices(pts, p)] = True
        return cls(p, n, mask)

    @classmethod
    def from_subspace(cls, S: Subspace, offset=None) -> "PointSet":
        pts = S.enumerate()
        if offset is not None:
            pts = (pts + np.asarray(offset, dtype=np.int64)) % S.p
        return cls.from_points(pts, S.p, S.n)

    @classmethod
    def full(cls, p: int, n: int) -> "PointSet":
        return cls(p, n, np.ones(p ** n, dtype=bool))

    def points(self) -> np.ndarray:
        return all_vectors(self.p, self.n)[self.mask]

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, v) -> bool:
        return bool(self.mask[vec_index(v, self.p)])

    def __eq__(self, other):
        return (isinstance(other, PointSet) and (self.p, self.n) == (other.p, other.n)
                and np.array_equal(self.mask, other.mask))

    def __or__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.p, self.n, self.mask | other.mask)

    def __repr__(self):
        return f"PointSet(p={self.p}, n={self.n}, size={len(self)})"

    def contains_subspace(self, S: Subspace) -> bool:
        return bool(self.mask[S.indices()].all())

    def to_json(self) -> dict:
        return {"q": self.p, "n": self.n, "points": self.points().tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "PointSet":
        return cls.from_points(obj["points"], int(obj["q"]), int(obj["n"]))


# -- sumsets --------------------------------------------------------------------

def _add_sets(X: PointSet, Y: PointSet, sign: int = 1) -> PointSet:
    """{x + sign*y}."""
    px, py = X.points(), Y.points()
    check_budget("pairwise sums", len(px) * len(py))
    out = np.zeros_like(X.mask)
    for start in range(0, len(px), 1024):
        sums = (px[start:start + 1024, None, :] + sign * py[None, :, :]) % X.p
        out[vec_indices(sums.reshape(-1, X.n), X.p)] = True
    return PointSet(X.p, X.n, out)


def _zero_set(p: int, n: int) -> PointSet:
    return PointSet.from_points([[0] * n], p, n)


def _iterated(A: PointSet, k: int) -> list[PointSet]:
    """[0A, 1A, ..., kA] with exactly j summands in jA."""
    out = [_zero_set(A.p, A.n)]
    for _ in range(k):
        out.append(_add_sets(out[-1], A))
    return out


def sumset(A: PointSet, k: int, l: int, exact: bool = False) -> PointSet:
    """kA - lA.

    By default at most k plus terms and at most l minus terms, with at least one
    term in total.  ``exact`` uses exactly k and exactly l terms, which is the
    set {a_1 + ... + a_k - a'_1 - ... - a'_l} used for Bogolyubov extraction.
    """
    if k < 0 or l < 0 or k + l == 0:
        raise InputError("sumset needs k, l >= 0 with k + l >= 1")
    if len(A) == 0:
        return PointSet(A.p, A.n)
    plus, minus = _iterated(A, k), _iterated(A, l)
    if exact:
        return _add_sets(plus[k], minus[l], -1)
    out = PointSet(A.p, A.n)
    for i in range(k + 1):
        for j in range(l + 1):
            if i + j:
                out = out | _add_sets(plus[i], minus[j], -1)
    return out


def sumset_fourier(A: PointSet, k: int, l: int) -> PointSet:
    """Exact kA - lA from the convolution 1_A^{*k} * 1_{-A}^{*l} > 0, via an FFT on (Z/p)^n."""
    p, n = A.p, A.n
    grid = A.mask.reshape((p,) * n).astype(float)
    if len(A) == 0:
        return PointSet(p, n)
    negidx = vec_indices((-all_vectors(p, n)) % p, p)
    neg = A.mask[negidx].reshape((p,) * n).astype(float)
    f = np.fft.fftn(grid) ** k * np.fft.fftn(neg) ** l
    conv = np.real(np.fft.ifftn(f))
    return PointSet(p, n, conv.reshape(-1) > 0.5)


# -- subspaces inside a set -----------------------------------------------------------

def _extension_ok(D: PointSet, span_pts: np.ndarray, v: np.ndarray) -> bool:
    p = D.p
    for c in range(1, p):
        if not D.mask[vec_indices((span_pts + c * v) % p, p)].all():
            return False
    return True


def _grow(span_pts: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    return np.concatenate([(span_pts + c * v) % p for c in range(p)])


def find_subspace_in(D: PointSet, min_dim_hint: int = 0, exhaustive: bool = False) -> Subspace:
    """A subspace all of whose points lie in D.

    Greedy mode scans vectors in lex order and keeps any whose extension stays
    inside D, giving an inclusion-maximal subspace.  Exhaustive mode finds one
    of maximum dimension by depth-first search.  ``min_dim_hint`` only lets the
    exhaustive search stop once that dimension is reached.
    """
    p, n = D.p, D.n
    zero = np.zeros(n, dtype=np.int64)
    if not D.mask[0]:
        return Subspace.zero(p, n)
    if D.mask.all():
        return Subspace.full(p, n)
    V = all_vectors(p, n)
    if not exhaustive:
        basis: list[np.ndarray] = []
        span_pts = zero[None, :]
        span_mask = np.zeros_like(D.mask)
        span_mask[0] = True
        for i in range(1, p ** n):
            if span_mask[i] or not D.mask[i]:
                continue
            v = V[i]
            if _extension_ok(D, span_pts, v):
                basis.append(v)
                span_pts = _grow(span_pts, v, p)
                span_mask[vec_indices(span_pts, p)] = True
        return Subspace(p, n, np.array(basis) if basis else None)

    limit = 1 << budget_bits()
    nodes = 0
    best: list = [[]]
    cap = int(math.floor(math.log(len(D), p) + 1e-9))
    goal = min(cap, min_dim_hint) if min_dim_hint > 0 else cap

    def done():
        return len(best[0]) >= goal

    def dfs(basis, span_pts, cands):
        nonlocal nodes
        nodes += 1
        if nodes > limit:
            raise BudgetExceeded("exhaustive subspace search nodes", nodes, limit)
        if len(basis) > len(best[0]):
            best[0] = list(basis)
        size = len(span_pts)
        # a j-dim extension puts size * (p^j - 1) new points among the candidates
        reach = len(basis) + int(math.floor(math.log(len(cands) / size + 1, p) + 1e-9))
        if reach <= len(best[0]) or done():
            return
        for pos, i in enumerate(cands):
            v = V[i]
            new_pts = _grow(span_pts, v, p)
            new_mask = np.zeros_like(D.mask)
            new_mask[vec_indices(new_pts, p)] = True
            rest = [j for j in cands[pos + 1:] if not new_mask[j] and _extension_ok(D, new_pts, V[j])]
            dfs(basis + [v], new_pts, rest)
            if done():
                return

    start = [i for i in range(1, p ** n) if D.mask[i] and _extension_ok(D, zero[None, :], V[i])]
    dfs([], zero[None, :], start)
    return Subspace(p, n, np.array(best[0]) if best[0] else None)


def bogolyubov(A: PointSet, exhaustive: bool = False) -> Subspace:
    """A subspace inside 2A - 2A = {a_1 + a_2 - a_3 - a_4}."""
    if len(A) == 0:
        return Subspace.zero(A.p, A.n)
    return find_subspace_in(sumset(A, 2, 2, exact=True), exhaustive=exhaustive)


# -- signed combinations ------------------------------------------------------------

@dataclass(frozen=True)
class SignedCombination:
    """sum(plus) - sum(minus) over pure tensors given by factor tuples."""

    plus: tuple[Factors, ...] = ()
    minus: tuple[Factors, ...] = ()

    def value(self, shape, p: int) -> Tensor:
        out = Tensor.zeros(shape, p)
        for f in self.plus:
            out = out + pure_to_tensor(f, p)
        for f in self.minus:
            out = out - pure_to_tensor(f, p)
        return out

    def validate(self, element, support, p: int, bound: int | None = None) -> bool:
        """Summands lie in ``support`` and the combination sums to ``element``."""
        target = element if isinstance(element, Tensor) else pure_to_tensor(element, p)
        if bound is not None and (len(self.plus) > bound or len(self.minus) > bound):
            return False
        if any(f not in support for f in self.plus + self.minus):
            return False
        return self.value(target.shape, p) == target

    def lift(self, head: Vec, negate: bool = False) -> "SignedCombination":
        """(head (x) .) applied to every summand, optionally with signs swapped."""
        plus = tuple((head,) + f for f in self.plus)
        minus = tuple((head,) + f for f in self.minus)
        return SignedCombination(minus, plus) if negate else SignedCombination(plus, minus)

    def __add__(self, other: "SignedCombination") -> "SignedCombination":
        return SignedCombination(self.plus + other.plus, self.minus + other.minus)

    def to_json(self) -> dict:
        return {"plus": [[list(v) for v in f] for f in self.plus],
                "minus": [[list(v) for v in f] for f in self.minus]}

    @classmethod
    def from_json(cls, obj: dict) -> "SignedCombination":
        conv = lambda fs: tuple(tuple(tuple(int(x) for x in v) for v in f) for f in fs)
        return cls(conv(obj.get("plus", [])), conv(obj.get("minus", [])))


class _WitnessFinder:
    """Lex-first u = (a_1 + .. ) - (a'_1 + ..) with at most two terms per side, shortest first.

    A member of A is its own witness, so 0 gets the empty combination only when 0 is not in A.
    """

    def __init__(self, A: PointSet):
        self.A = A
        p, n = A.p, A.n
        self.V = all_vectors(p, n)
        pts = A.indices()
        # reps[j][idx] is the lex-first j-tuple of elements of A summing to point idx
        reps: list[dict[int, tuple[int, ...]]] = [{0: ()}, {int(i): (int(i),) for i in pts}, {}]
        for a in range(len(pts)):
            s = vec_indices((self.V[pts[a]] + self.V[pts[a:]]) % p, p)
            for b, idx in enumerate(s.tolist()):
                reps[2].setdefault(idx, (int(pts[a]), int(pts[a + b])))
        self.reps = reps

    def find(self, u) -> SignedCombination | None:
        p = self.A.p
        u = np.asarray(u, dtype=np.int64)
        if vec_index(u, p) in self.reps[1]:
            return SignedCombination(((tuple(int(c) for c in u),),))
        for total in range(5):
            for i in range(min(total, 2), -1, -1):
                j = total - i
                if j > 2:
                    continue
                for x in sorted(self.reps[i]):
                    # u = x - y with y a sum of j elements
                    y = vec_index((self.V[x] - u) % p, p)
                    if y in self.reps[j]:
                        vec = lambda k: tuple(int(c) for c in self.V[k])
                        return SignedCombination(tuple((vec(k),) for k in self.reps[i][x]),
                                                 tuple((vec(k),) for k in self.reps[j][y]))
        return None


def find_witness(u, A: PointSet) -> SignedCombination | None:
    return _WitnessFinder(A).find(u)


# -- l-systems ------------------------------------------------------------------------

Prefix = tuple[Vec, ...]


@dataclass
class LSystem:
    """Nested subspace tables; ``levels[k]`` maps prefixes of length k to a subspace of GF(p)^{n_{k+1}}."""

    shape: tuple[int, ...]
    p: int
    levels: list[dict[Prefix, Subspace]]
    codim_bound: int
    meta: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.shape)

    @classmethod
    def build(cls, shape, p: int, rule: Callable[[int, Prefix], Subspace], codim_bound: int | None = None,
              meta=None) -> "LSystem":
        """Fill the tables by walking every reachable prefix; ``rule(level, prefix)`` gives the subspace."""
        shape = tuple(shape)
        levels: list[dict[Prefix, Subspace]] = [dict() for _ in shape]
        check_budget("l-system prefixes", _prefix_bound(shape, p))

        def walk(k: int, prefix: Prefix):
            S = rule(k, prefix)
            if (S.p, S.n) != (p, shape[k]):
                raise ConstructionError(f"level {k + 1}", f"subspace in the wrong ambient space at {prefix}")
            levels[k][prefix] = S
            if k + 1 < len(shape):
                for u in S:
                    walk(k + 1, prefix + (u,))

        walk(0, ())
        sys = cls(shape, p, levels, 0, dict(meta or {}))
        sys.codim_bound = sys.max_codim() if codim_bound is None else codim_bound
        return sys

    @classmethod
    def full(cls, shape, p: int) -> "LSystem":
        return cls.build(shape, p, lambda k, pre: Subspace.full(p, shape[k]), 0)

    def subspace(self, prefix: Prefix) -> Subspace:
        return self.levels[len(prefix)][tuple(prefix)]

    def max_codim(self) -> int:
        return max(S.codim for table in self.levels for S in table.values())

    def enumerate(self) -> Iterator[Factors]:
        """Every element u_1 (x) ... (x) u_d as a factor tuple, depth first in lex order."""
        def walk(prefix):
            S = self.subspace(prefix)
            for u in S:
                if len(prefix) + 1 == self.d:
                    yield prefix + (u,)
                else:
                    yield from walk(prefix + (u,))

        yield from walk(())

    def size(self) -> int:
        def count(prefix):
            S = self.subspace(prefix)
            if len(prefix) + 1 == self.d:
                return self.p ** S.dim
            return sum(count(prefix + (u,)) for u in S)

        return count(())

    def verify(self, l: int) -> bool:
        """All codimensions at most l and the stored prefixes are exactly the reachable ones."""
        reachable = [set() for _ in self.shape]

        def walk(prefix):
            if prefix not in self.levels[len(prefix)]:
                raise KeyError(prefix)
            reachable[len(prefix)].add(prefix)
            if len(prefix) + 1 < self.d:
                for u in self.subspace(prefix):
                    walk(prefix + (u,))

        try:
            walk(())
        except KeyError:
            return False
        if any(set(t) != r for t, r in zip(self.levels, reachable)):
            return False
        return all(S.codim <= l for t in self.levels for S in t.values())

    def contains(self, factors: Factors) -> bool:
        prefix: Prefix = ()
        for k, u in enumerate(factors):
            S = self.levels[k].get(prefix)
            if S is None or not S.contains(u):
                return False
            prefix = prefix + (tuple(int(x) for x in u),)
        return True

    def to_json(self) -> dict:
        return {"q": self.p, "shape": list(self.shape), "codim_bound": self.codim_bound,
                "levels": [[{"prefix": [list(u) for u in pre], "basis": S.basis.tolist()}
                            for pre, S in table.items()] for table in self.levels],
                "meta": _json_safe(self.meta)}

    @classmethod
    def from_json(cls, obj: dict) -> "LSystem":
        p, shape = int(obj["q"]), tuple(int(n) for n in obj["shape"])
        levels = []
        for k, table in enumerate(obj["levels"]):
            levels.append({tuple(tuple(int(x) for x in u) for u in e["prefix"]):
                           Subspace(p, shape[k], e["basis"] or None) for e in table})
        return cls(shape, p, levels, int(obj["codim_bound"]), dict(obj.get("meta", {})))


def _prefix_bound(shape, p: int) -> int:
    total, acc = 0, 1
    for n in shape[:-1]:
        acc *= p ** n
        total += acc
    return total + 1


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def lsystem_enumerate(Q: LSystem) -> Iterator[Factors]:
    return Q.enumerate()


def lsystem_verify(Q: LSystem, l: int) -> bool:
    return Q.verify(l)


def lsystem_intersect(Q: LSystem, R: LSystem) -> LSystem:
    if (Q.shape, Q.p) != (R.shape, R.p):
        raise InputError(f"cannot intersect systems of shapes {Q.shape} and {R.shape}")
    return LSystem.build(Q.shape, Q.p, lambda k, pre: Q.subspace(pre).intersect(R.subspace(pre)),
                         Q.codim_bound + R.codim_bound)


def _prefix_product(prefix: Prefix, modes: tuple[int, ...], p: int) -> np.ndarray:
    out = np.ones(1, dtype=np.int64)
    for m in modes:
        out = np.multiply.outer(out, np.asarray(prefix[m - 1], dtype=np.int64)).reshape(-1) % p
    return out


def system_constrain(Q: LSystem, constraints: Mapping[tuple[int, ...], Subspace]) -> LSystem:
    """Shrink each level so every element lies in L_I (x) F^{I^c} for every constraint.

    At level j the next vector x must satisfy (prod_{i in I, i < j} u_i) (x) x in L_I
    for each constraint I with max I = j, a linear condition on x.
    """
    d, p = Q.d, Q.p
    cons = {}
    for I, L in constraints.items():
        I = tuple(sorted(I))
        need = int(np.prod([Q.shape[i - 1] for i in I]))
        if not I or I[0] < 1 or I[-1] > d or L.n != need:
            raise InputError(f"constraint on modes {I} must live in GF({p})^{need}")
        cons[I] = orth_complement(L).basis
    worst = max((len(b) for b in cons.values()), default=0)

    def rule(k: int, prefix: Prefix) -> Subspace:
        S = Q.subspace(prefix)
        j = k + 1
        rows = []
        for I, C in cons.items():
            if I[-1] != j or not len(C):
                continue
            head = _prefix_product(prefix, I[:-1], p)
            # c . (head (x) x) = (head @ C_mat) . x
            rows.extend((head @ C.reshape(C.shape[0], len(head), Q.shape[k]) % p).tolist())
        if not rows:
            return S
        return S.intersect(orth_complement(Subspace(p, Q.shape[k], rows)))

    out = LSystem.build(Q.shape, p, rule, Q.codim_bound + 2 ** d * worst)
    out.meta["degenerate_levels"] = sum(1 for t in out.levels for S in t.values() if S.dim == 0)
    return out


# -- multisets of pure tensors -------------------------------------------------------------

def as_multiset(Bprime) -> Counter:
    if isinstance(Bprime, Counter):
        return Bprime
    return Counter(tuple(tuple(int(x) for x in v) for v in f) for f in Bprime)


def load_multiset(path) -> tuple[tuple[int, ...], int, Counter]:
    with open(path) as fh:
        obj = json.load(fh)
    try:
        shape = tuple(int(n) for n in obj["shape"])
        p = int(obj["q"])
        B = as_multiset(obj["elements"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad multiset JSON: {exc}") from None
    for f in B:
        if len(f) != len(shape) or any(len(v) != n or any(not 0 <= x < p for x in v) for v, n in zip(f, shape)):
            raise InputError(f"element {f} does not fit shape {shape} over GF({p})")
    return shape, p, B


def multiset_to_json(B: Counter, shape, p: int) -> dict:
    elems = []
    for f in sorted(B):
        elems.extend([[list(v) for v in f]] * B[f])
    return {"q": p, "shape": list(shape), "elements": elems}


def density(B: Counter, shape, p: int) -> Fraction:
    return Fraction(sum(B.values()), p ** sum(shape))


def paper_f1(d: int, delta, C: float = 1.0) -> float:
    return C * 4 ** d * math.log2(2 ** d / float(delta)) ** 4


def paper_f2(d: int) -> int:
    return 4 ** d


@dataclass
class _Found:
    system: LSystem
    # d = 1: witnesses per vector; d >= 2: signed first-mode combination per u plus subresults per t
    base: dict = field(default_factory=dict)
    combos: dict = field(default_factory=dict)
    subs: dict = field(default_factory=dict)

    def witness(self, elem: Factors) -> SignedCombination:
        if self.system.d == 1:
            return self.base[elem[0]]
        u, rest = elem[0], elem[1:]
        out = SignedCombination()
        plus_t, minus_t = self.combos[u]
        for t in plus_t:
            out = out + self.subs[t].witness(rest).lift(t)
        for t in minus_t:
            out = out + self.subs[t].witness(rest).lift(t, negate=True)
        return out


def _find(shape, p: int, B: Counter, delta: Fraction, level: int) -> _Found:
    d = len(shape)
    if d == 1:
        A = PointSet.from_points([f[0] for f in B], p, shape[0])
        U = bogolyubov(A)
        wf = _WitnessFinder(A)
        base = {}
        for u in U:
            w = wf.find(u)
            if w is None:
                raise ConstructionError(f"level {level}", f"no witness for {u}")
            base[u] = w
        sys = LSystem.build(shape, p, lambda k, pre: U)
        return _Found(sys, base=base)
    D_size = p ** sum(shape[1:])
    fibers: dict[Vec, Counter] = {}
    for f, m in B.items():
        fibers.setdefault(f[0], Counter())[f[1:]] += m
    heavy = sorted(u for u, Bu in fibers.items() if Fraction(sum(Bu.values())) >= delta / 2 * D_size)
    if not heavy:
        raise ConstructionError(f"level {level}", f"empty heavy set at density threshold {delta / 2}")
    Tset = PointSet.from_points(heavy, p, shape[0])
    U = bogolyubov(Tset)
    wf = _WitnessFinder(Tset)
    subs: dict[Vec, _Found] = {}
    combos = {}
    Qu: dict[Vec, LSystem] = {}
    for u in U:
        w = wf.find(u)
        if w is None:
            raise ConstructionError(f"level {level}", f"no witness for {u}")
        plus_t = tuple(f[0] for f in w.plus)
        minus_t = tuple(f[0] for f in w.minus)
        combos[u] = (plus_t, minus_t)
        sysu = None
        for t in plus_t + minus_t:
            if t not in subs:
                subs[t] = _find(shape[1:], p, fibers[t], delta / 2, level + 1)
            sysu = subs[t].system if sysu is None else lsystem_intersect(sysu, subs[t].system)
        Qu[u] = LSystem.full(shape[1:], p) if sysu is None else sysu

    def rule(k, pre):
        if k == 0:
            return U
        return Qu[pre[0]].subspace(pre[1:])

    return _Found(LSystem.build(shape, p, rule), combos=combos, subs=subs)


def find_system(Bprime, delta, shape=None, p: int | None = None, C: float = 1.0):
    """An l-system built from elements of 4^d B' - 4^d B', with a witness for every element.

    Returns (system, witnesses) where witnesses maps each element's factor tuple
    to a SignedCombination over B'.
    """
    B = as_multiset(Bprime)
    if not B:
        raise InputError("empty multiset")
    first = next(iter(B))
    shape = tuple(len(v) for v in first) if shape is None else tuple(shape)
    if p is None:
        raise InputError("field size p is required")
    delta = Fraction(delta).limit_denominator(1 << 20) if not isinstance(delta, Fraction) else delta
    if delta <= 0:
        raise InputError("delta must be positive")
    total = p ** sum(shape)
    if Fraction(sum(B.values()), total) < delta:
        raise InputError(f"|B'| = {sum(B.values())} is below delta * |B| = {float(delta * total)}")
    found = _find(shape, p, B, delta, 1)
    sys = found.system
    d = len(shape)
    sys.meta.update({"paper_f1": paper_f1(d, delta, C), "paper_f2": paper_f2(d), "delta": str(delta)})
    witnesses = {e: found.witness(e) for e in sys.enumerate()}
    return sys, witnesses


def witnesses_to_json(witnesses: Mapping[Factors, SignedCombination]) -> list:
    return [{"element": [list(u) for u in e], **w.to_json()} for e, w in witnesses.items()]


__all__ = [
    "PointSet", "sumset", "sumset_fourier", "find_subspace_in", "bogolyubov", "SignedCombination",
    "find_witness", "LSystem", "lsystem_enumerate", "lsystem_verify", "lsystem_intersect",
    "system_constrain", "find_system", "as_multiset", "load_multiset", "multiset_to_json",
    "witnesses_to_json", "density", "paper_f1", "paper_f2",
]
