"""Forcing multisets and the constructions that produce them.

A multiset Q of pure tensors is checked against a family {V_I} by computing
every near-annihilator r (r.q = 0 for at least an alpha fraction of Q, with
multiplicity) over the whole tensor space and testing membership in
sum_I V_I (x) F^{I^c}.  Everything is exhaustive, so this is desk scale only.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

import mpmath
import numpy as np

from .additive import (LSystem, PointSet, SignedCombination, _WitnessFinder, as_multiset, bogolyubov,
                       find_system, system_constrain)
from .errors import ConstructionError, InputError, InvariantViolation
from .fields import check_budget
from .linalg import Subspace, orth_complement
from .tensor import Factors, Tensor, pure_flat, sub_shape

_CHUNK = 1 << 14


def as_fraction(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, float):
        return Fraction(repr(alpha))
    return Fraction(alpha)


# -- multisets ------------------------------------------------------------------------

@dataclass
class QElement:
    factors: Factors
    multiplicity: int = 1
    witness: SignedCombination | None = None


@dataclass
class QMultiset:
    shape: tuple[int, ...]
    p: int
    elements: list[QElement] = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.shape)

    def total(self) -> int:
        return sum(e.multiplicity for e in self.elements)

    def __len__(self) -> int:
        return self.total()

    def matrix(self) -> np.ndarray:
        N = int(np.prod(self.shape))
        if not self.elements:
            return np.zeros((0, N), dtype=np.int64)
        return np.stack([pure_flat(e.factors, self.p) for e in self.elements])

    def weights(self) -> np.ndarray:
        return np.array([e.multiplicity for e in self.elements], dtype=np.int64)

    def scaled(self, m: int) -> "QMultiset":
        return QMultiset(self.shape, self.p,
                         [QElement(e.factors, e.multiplicity * m, e.witness) for e in self.elements])

    def validate_witnesses(self, support, bound: int | None = None) -> bool:
        return all(e.witness is None or e.witness.validate(e.factors, support, self.p, bound)
                   for e in self.elements)

    def max_witness_length(self) -> int:
        return max((max(len(e.witness.plus), len(e.witness.minus)) for e in self.elements if e.witness),
                   default=0)

    def to_json(self) -> dict:
        return {"q": self.p, "shape": list(self.shape),
                "elements": [{"factors": [list(u) for u in e.factors], "multiplicity": e.multiplicity,
                              **({"witness": e.witness.to_json()} if e.witness else {})}
                             for e in self.elements]}

    @classmethod
    def from_json(cls, obj: dict) -> "QMultiset":
        try:
            p, shape = int(obj["q"]), tuple(int(n) for n in obj["shape"])
            elems = []
            for e in obj["elements"]:
                if isinstance(e, dict):
                    f = tuple(tuple(int(x) for x in u) for u in e["factors"])
                    w = SignedCombination.from_json(e["witness"]) if "witness" in e else None
                    elems.append(QElement(f, int(e.get("multiplicity", 1)), w))
                else:
                    elems.append(QElement(tuple(tuple(int(x) for x in u) for u in e)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad multiset JSON: {exc}") from None
        for e in elems:
            if e.multiplicity < 1 or tuple(len(u) for u in e.factors) != shape:
                raise InputError(f"element {e.factors} does not fit shape {shape}")
        return cls(shape, p, elems)


def load_qmultiset(path) -> QMultiset:
    with open(path) as fh:
        return QMultiset.from_json(json.load(fh))


def _candidates(p: int, N: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, N), dtype=np.int64)
    for j in range(N - 1, -1, -1):
        out[:, j] = idx % p
        idx //= p
    return out


def near_annihilator_matrix(Q: QMultiset, alpha) -> np.ndarray:
    """Rows are the flattened r with weight{q : r.q = 0} >= alpha |Q|, lex order."""
    alpha = as_fraction(alpha)
    p = Q.p
    N = int(np.prod(Q.shape))
    total = p ** N
    check_budget("near-annihilator sweep", total)
    M = Q.matrix().T
    w = Q.weights()
    need_num, need_den = alpha.numerator * Q.total(), alpha.denominator
    keep = []
    for start in range(0, total, _CHUNK):
        R = _candidates(p, N, start, min(total, start + _CHUNK))
        if M.shape[1]:
            zero = ((R @ M) % p) == 0
            counts = zero.astype(np.int64) @ w
        else:
            counts = np.zeros(len(R), dtype=np.int64)
        keep.append(R[counts * need_den >= need_num])
    return np.concatenate(keep)


def near_annihilators(Q: QMultiset, alpha) -> list[Tensor]:
    return [Tensor(r.reshape(Q.shape), Q.p) for r in near_annihilator_matrix(Q, alpha)]


# -- families ------------------------------------------------------------------------------

@dataclass
class ForcingFamily:
    """Subspaces V_I of F^I for nonempty mode sets I."""

    shape: tuple[int, ...]
    p: int
    spaces: dict[tuple[int, ...], Subspace] = field(default_factory=dict)

    def __post_init__(self):
        self.shape = tuple(self.shape)
        for I, V in self.spaces.items():
            need = int(np.prod(sub_shape(self.shape, I)))
            if V.n != need:
                raise InputError(f"V_{I} lives in GF({V.p})^{V.n}, expected dimension {need}")

    @classmethod
    def zero(cls, shape, p: int) -> "ForcingFamily":
        return cls(tuple(shape), p, {})

    def get(self, I) -> Subspace:
        I = tuple(I)
        if I in self.spaces:
            return self.spaces[I]
        return Subspace.zero(self.p, int(np.prod(sub_shape(self.shape, I))))

    def add(self, I, V: Subspace) -> None:
        I = tuple(sorted(I))
        self.spaces[I] = self.get(I).sum(V)

    def max_dim(self) -> int:
        return max((V.dim for V in self.spaces.values()), default=0)

    def dims(self) -> dict:
        return {I: V.dim for I, V in sorted(self.spaces.items())}

    def to_json(self) -> dict:
        return {"q": self.p, "shape": list(self.shape),
                "spaces": [{"modes": list(I), "basis": V.basis.tolist()} for I, V in sorted(self.spaces.items())]}

    @classmethod
    def from_json(cls, obj: dict) -> "ForcingFamily":
        p, shape = int(obj["q"]), tuple(int(n) for n in obj["shape"])
        spaces = {}
        for e in obj.get("spaces", []):
            I = tuple(int(m) for m in e["modes"])
            spaces[I] = Subspace(p, int(np.prod(sub_shape(shape, I))), e["basis"] or None)
        return cls(shape, p, spaces)


def load_family(path) -> ForcingFamily:
    with open(path) as fh:
        return ForcingFamily.from_json(json.load(fh))


def _embed(v: np.ndarray, I: tuple[int, ...], shape, p: int) -> np.ndarray:
    """Rows v (x) e_j over the standard basis e_j of F^{I^c}, flattened in the full space."""
    d = len(shape)
    J = tuple(m for m in range(1, d + 1) if m not in I)
    vI = np.asarray(v, dtype=np.int64).reshape(sub_shape(shape, I))
    if not J:
        return vI.reshape(1, -1) % p
    nJ = int(np.prod(sub_shape(shape, J)))
    eye = np.eye(nJ, dtype=np.int64).reshape((nJ,) + sub_shape(shape, J))
    outer = np.multiply.outer(vI, eye)  # I axes, basis index, J axes
    pos = {m: k for k, m in enumerate(I)}
    pos.update({m: len(I) + 1 + k for k, m in enumerate(J)})
    perm = [len(I)] + [pos[m] for m in range(1, d + 1)]
    return np.transpose(outer, perm).reshape(nJ, -1) % p


def family_span(F: ForcingFamily) -> Subspace:
    """sum_I V_I (x) F^{I^c} as one subspace of the full tensor space."""
    N = int(np.prod(F.shape))
    rows = [np.zeros((0, N), dtype=np.int64)]
    for I, V in F.spaces.items():
        for v in V.basis:
            rows.append(_embed(v, I, F.shape, F.p))
    return Subspace(F.p, N, np.concatenate(rows))


@dataclass
class ForcingReport:
    passed: bool
    n_annihilators: int
    span_dim: int
    annihilator_span_dim: int
    first_failure: list | None = None

    def __bool__(self):
        return self.passed


def forcing_check(Q: QMultiset, alpha, F: ForcingFamily) -> ForcingReport:
    """Whether every near-annihilator of Q lies in the family span.

    The report also carries the dimension of the span of the near-annihilators,
    a lower bound on what any valid family has to cover.
    """
    if tuple(F.shape) != tuple(Q.shape) or F.p != Q.p:
        raise InputError("family and multiset live in different spaces")
    R = near_annihilator_matrix(Q, alpha)
    S = family_span(F)
    bad = next((r for r in R if not S.contains(r)), None)
    ann = Subspace(Q.p, R.shape[1], R) if len(R) else Subspace.zero(Q.p, R.shape[1])
    return ForcingReport(bad is None, len(R), S.dim, ann.dim, None if bad is None else bad.tolist())


# -- d = 1 ---------------------------------------------------------------------------------

def _check_density(size: int, total: int, delta) -> None:
    if Fraction(size, total) < as_fraction(delta):
        raise InputError(f"density {size}/{total} is below delta = {delta}")


def mainlemma_d1(Bprime, delta, p: int | None = None) -> tuple[QMultiset, ForcingFamily]:
    """Q = a subspace U inside 2B' - 2B' (with witnesses), family V_{1} = U^perp."""
    if not isinstance(Bprime, PointSet):
        B = as_multiset(Bprime)
        n = len(next(iter(B))[0])
        Bprime = PointSet.from_points([f[0] for f in B], p, n)
    A = Bprime
    _check_density(len(A), A.p ** A.n, delta)
    U = bogolyubov(A)
    wf = _WitnessFinder(A)
    elems = []
    for u in U:
        w = wf.find(u)
        if w is None:
            raise ConstructionError("d=1", f"no witness for {u}")
        elems.append(QElement((u,), 1, w))
    Q = QMultiset((A.n,), A.p, elems)
    return Q, ForcingFamily((A.n,), A.p, {(1,): orth_complement(U)})


# -- the degree-d step ----------------------------------------------------------------------

@dataclass
class FocusResult:
    Q: QMultiset
    V: Subspace
    potentials: list[int]
    heavy: list[Factors]
    codim: int
    annihilators: np.ndarray

    def decomposition(self, r) -> tuple[np.ndarray, Tensor] | None:
        """Some v in V with r - v of minimal degeneracy, as (v, r - v)."""
        from .prank import min_degeneracy

        best = None
        r = np.asarray(r, dtype=np.int64).reshape(-1)
        for v in self.V.enumerate():
            y = Tensor(((r - v) % self.Q.p).reshape(self.Q.shape), self.Q.p)
            k = min_degeneracy(y)[0]
            if best is None or k < best[0]:
                best = (k, v, y)
        return best[1], best[2]


def focusondeg(Bprime, delta, p: int, shape=None, alpha=Fraction(7, 8)) -> FocusResult:
    B = as_multiset(Bprime)
    if not B:
        raise InputError("empty multiset")
    shape = tuple(len(u) for u in next(iter(B))) if shape is None else tuple(shape)
    d = len(shape)
    if d < 2:
        raise InputError("the degree step needs d >= 2")
    delta = as_fraction(delta)
    _check_density(sum(B.values()), p ** sum(shape), delta)
    nd = shape[-1]
    fibers: dict[Factors, set] = {}
    for f in B:
        fibers.setdefault(f[:-1], set()).add(f[-1])
    heavy = sorted(t for t, us in fibers.items() if Fraction(len(us)) >= delta / 2 * p ** nd)
    if not heavy:
        raise ConstructionError("focus step", "empty heavy set D'")
    Ut = {}
    finders = {}
    for t in heavy:
        A = PointSet.from_points(sorted(fibers[t]), p, nd)
        Ut[t] = bogolyubov(A)
        finders[t] = _WitnessFinder(A)
    k = max(U.codim for U in Ut.values())
    for t in heavy:
        while Ut[t].codim < k:
            Ut[t] = Ut[t].drop_last()
    elems = []
    for t in heavy:
        for u in Ut[t]:
            w = finders[t].find(u)
            if w is None:
                raise ConstructionError("focus step", f"no witness for {u} in the fiber of {t}")
            w = SignedCombination(tuple(t + f for f in w.plus), tuple(t + f for f in w.minus))
            elems.append(QElement(t + (u,), 1, w))
    Q = QMultiset(shape, p, elems)
    R = near_annihilator_matrix(Q, alpha)

    N = int(np.prod(shape))
    tflat = np.stack([pure_flat(t, p) for t in heavy])           # (|D'|, N / nd)
    slices = np.einsum("ran,tr->tan", R.reshape(len(R), N // nd, nd).transpose(1, 0, 2), tflat) % p
    # slices[t, a] is the vector r_a t in F^{nd}
    perp = {t: orth_complement(Ut[t]) for t in heavy}
    V = Subspace.zero(p, N)
    half = Fraction(len(heavy), 2)

    def Vt(ti: int) -> Subspace:
        if V.dim == 0:
            return Subspace.zero(p, nd)
        Vm = V.basis.reshape(V.dim, N // nd, nd)
        return Subspace(p, nd, np.einsum("brn,r->bn", Vm, tflat[ti]) % p)

    def potential() -> int:
        return sum(perp[t].intersect(Vt(i)).dim for i, t in enumerate(heavy))

    potentials = [potential()]
    while True:
        spaces = [Vt(i) for i in range(len(heavy))]
        good = np.array([[spaces[i].contains(slices[i, a]) for i in range(len(heavy))] for a in range(len(R))],
                        dtype=bool).reshape(len(R), len(heavy))
        counts = good.sum(axis=1)
        bad = np.flatnonzero(counts < half)
        if not len(bad):
            break
        V = V.sum(Subspace(p, N, R[bad[0]][None, :]))
        potentials.append(potential())
        if potentials[-1] <= potentials[-2]:
            raise InvariantViolation(f"potential did not increase: {potentials}")
    return FocusResult(Q, V, potentials, heavy, k, R)


# -- assembling Q for d <= 3 ----------------------------------------------------------------------

def _merge(fa: Factors, I: tuple[int, ...], fb: Factors, d: int) -> Factors:
    out, ia, ib = [], iter(fa), iter(fb)
    for m in range(1, d + 1):
        out.append(next(ia) if m in I else next(ib))
    return tuple(out)


def _tensor_combination(wa: SignedCombination, I, wb: SignedCombination, d: int) -> SignedCombination:
    """(sum a+ - sum a-) (x) (sum b+ - sum b-) expanded, with a on modes I."""
    plus, minus = [], []
    for sa, A in ((1, wa.plus), (-1, wa.minus)):
        for sb, Bs in ((1, wb.plus), (-1, wb.minus)):
            for a in A:
                for b in Bs:
                    (plus if sa * sb > 0 else minus).append(_merge(a, I, b, d))
    return SignedCombination(tuple(plus), tuple(minus))


def _compose(w: SignedCombination, inner: Mapping[Factors, SignedCombination]) -> SignedCombination:
    plus, minus = [], []
    for f in w.plus:
        plus.extend(inner[f].plus)
        minus.extend(inner[f].minus)
    for f in w.minus:
        plus.extend(inner[f].minus)
        minus.extend(inner[f].plus)
    return SignedCombination(tuple(plus), tuple(minus))


def _balance(parts: list[QMultiset]) -> list[QMultiset]:
    """Repeat every element of each part equally so that max size <= 2 min size."""
    sizes = [q.total() for q in parts if q.total()]
    if not sizes:
        return parts
    M = max(sizes)
    return [q.scaled(max(1, M // q.total())) if q.total() else q for q in parts]


def _ordered_modesets(d: int) -> list[tuple[int, ...]]:
    return [c for k in range(1, d) for c in combinations(range(1, d), k)]


def _relabel(F: ForcingFamily, modes: tuple[int, ...], shape, p: int, out: ForcingFamily) -> None:
    for J, V in F.spaces.items():
        out.add(tuple(modes[j - 1] for j in J), V)


@dataclass
class Construction:
    Q: QMultiset
    family: ForcingFamily
    parts: dict = field(default_factory=dict)
    report: ForcingReport | None = None
    notes: dict = field(default_factory=dict)


def mainlemma_construct(Bprime, delta, p: int, shape=None, alpha=Fraction(7, 8), check: bool = True,
                        _stage: str = "Q") -> Construction:
    """Experimental assembly of a forcing multiset for d <= 3.

    The parts are Q_empty from the degree step and one Q_I per nonempty I in
    [d-1], taken in an order where subsets come first.  The family collects
    V_[d], the families of every Q' and every Q_s.  The result is checked with
    forcing_check and a failure names the failing part.
    """
    B = as_multiset(Bprime)
    if not B:
        raise InputError("empty multiset")
    shape = tuple(len(u) for u in next(iter(B))) if shape is None else tuple(shape)
    d = len(shape)
    delta = as_fraction(delta)
    alpha = as_fraction(alpha)
    if d > 3:
        raise InputError("the assembly is only implemented for d <= 3")
    if d == 1:
        Q, F = mainlemma_d1(B, delta, p)
        return Construction(Q, F, {(): Q}, forcing_check(Q, alpha, F) if check else None)
    _check_density(sum(B.values()), p ** sum(shape), delta)
    focus = focusondeg(B, delta, p, shape, alpha)
    family = ForcingFamily(shape, p, {tuple(range(1, d + 1)): focus.V} if focus.V.dim else {})
    parts: dict[tuple[int, ...], QMultiset] = {(): focus.Q}
    notes: dict = {"V_full_dim": focus.V.dim, "potentials": focus.potentials}
    for I in _ordered_modesets(d):
        parts[I] = _claim_part(B, delta, p, shape, I, family, alpha, f"{_stage}_{''.join(map(str, I))}",
                               notes)
    balanced = _balance([parts[k] for k in parts])
    parts = dict(zip(parts, balanced))
    Q = QMultiset(shape, p, [e for part in parts.values() for e in part.elements])
    out = Construction(Q, family, parts, None, notes)
    if check:
        out.report = forcing_check(Q, alpha, family)
        if not out.report:
            failing = [("".join(map(str, k)) or "empty") for k, part in parts.items()
                       if not forcing_check(part, alpha, family)]
            raise ConstructionError(_stage, f"forcing check failed; parts failing alone: {failing or 'none'}")
    return out


def _claim_part(B: Counter, delta, p: int, shape, I, family: ForcingFamily, alpha, stage: str,
                notes: dict) -> QMultiset:
    d = len(shape)
    Ic = tuple(m for m in range(1, d + 1) if m not in I)
    shI, shIc = sub_shape(shape, I), sub_shape(shape, Ic)
    proj = lambda f, modes: tuple(f[m - 1] for m in modes)
    Dsets: dict[Factors, Counter] = {}
    for f, m in B.items():
        Dsets.setdefault(proj(f, I), Counter())[proj(f, Ic)] += m
    size_D = p ** sum(shIc)
    heavy = sorted(s for s, Ds in Dsets.items() if Fraction(sum(Ds.values())) >= delta / 2 * size_D)
    if not heavy:
        raise ConstructionError(stage, "empty heavy split set C'")
    Cp = Counter({s: 1 for s in heavy})
    dprime = Fraction(len(heavy), p ** sum(shI))
    Rsys, Rwit = find_system(Cp, dprime, shI, p)
    cons = {}
    for J in [J for k in range(1, len(I)) for J in combinations(I, k)]:
        W = family.get(J)
        if W.dim:
            cons[tuple(I.index(j) + 1 for j in J)] = orth_complement(W)
    Tsys = system_constrain(Rsys, cons) if cons else Rsys
    Tp = Counter(Tsys.enumerate())
    inner = _sub_construct(Tp, Fraction(len(Tp), p ** sum(shI)), p, shI, alpha, stage + "'")
    _relabel(inner.family, I, shape, p, family)
    # Q' witnesses are over T' elements, whose witnesses are over C'
    finders: dict[Factors, object] = {}
    Ps_cache: dict[tuple, LSystem] = {}
    elems: list[QElement] = []
    parts_s = []
    sub_fams = []
    for e in inner.Q.elements:
        s_over_C = _compose(e.witness, Rwit)
        cs = tuple(sorted(set(s_over_C.plus + s_over_C.minus)))
        if cs not in Ps_cache:
            P = None
            for c in cs:
                if c not in finders:
                    finders[c] = find_system(Dsets[c], Fraction(sum(Dsets[c].values()), size_D), shIc, p)
                P = finders[c][0] if P is None else _intersect(P, finders[c][0])
            Ps_cache[cs] = LSystem.full(shIc, p) if P is None else P
        P = Ps_cache[cs]
        Pm = Counter(P.enumerate())
        sub = _sub_construct(Pm, Fraction(len(Pm), size_D), p, shIc, alpha, stage + "_s")
        sub_fams.append(sub.family)
        parts_s.append((e, s_over_C, cs, sub.Q))
    for F in sub_fams:
        _relabel(F, Ic, shape, p, family)
    scaled = _balance([q for *_, q in parts_s])
    for (e, s_over_C, cs, _), Qs in zip(parts_s, scaled):
        for q in Qs.elements:
            # q's witness is over P elements; each P element t has a witness in every R_c
            terms_plus, terms_minus = [], []
            for sign, cs_list in ((1, s_over_C.plus), (-1, s_over_C.minus)):
                for c in cs_list:
                    wc = finders[c][1]
                    wq = _compose(q.witness, wc) if q.witness else SignedCombination()
                    piece = _tensor_combination(SignedCombination((c,), ()), I, wq, d)
                    if sign > 0:
                        terms_plus.extend(piece.plus)
                        terms_minus.extend(piece.minus)
                    else:
                        terms_plus.extend(piece.minus)
                        terms_minus.extend(piece.plus)
            w = SignedCombination(tuple(terms_plus), tuple(terms_minus))
            elems.append(QElement(_merge(e.factors, I, q.factors, d), e.multiplicity * q.multiplicity, w))
    notes.setdefault("parts", {})[stage] = {"C_heavy": len(heavy), "T_size": len(Tp), "Qprime": inner.Q.total(),
                                            "elements": sum(x.multiplicity for x in elems)}
    return QMultiset(tuple(shape), p, elems)


def _intersect(P: LSystem, R: LSystem) -> LSystem:
    from .additive import lsystem_intersect

    return lsystem_intersect(P, R)


def _sub_construct(M: Counter, delta, p: int, shape, alpha, stage: str) -> Construction:
    return mainlemma_construct(M, delta, p, shape, alpha, check=True, _stage=stage)


# -- constants ------------------------------------------------------------------------------

@dataclass(frozen=True)
class PaperConstants:
    d: int
    delta: object
    q: int
    C: object
    variant: str
    f1: int
    f2: Fraction
    c1: object
    c2: int
    G: object
    c_prime: int

    def theorem_bound(self, c, r) -> mpmath.mpf:
        """(c log q)^{c'(d)} r^{c'(d)}."""
        return (mpmath.mpf(c) * mpmath.log(self.q, 2)) ** self.c_prime * mpmath.mpf(r) ** self.c_prime

    def to_json(self) -> dict:
        fmt = lambda x: mpmath.nstr(x, 12) if isinstance(x, mpmath.mpf) else str(x)
        return {"d": self.d, "delta": str(self.delta), "q": self.q, "C": str(self.C), "variant": self.variant,
                "f1": f"2^(3^{self.d + 3})", "f1_log2": 3 ** (self.d + 3),
                "f2": f"2^(-3^{self.d + 3})", "c1": fmt(self.c1), "c2": str(self.c2), "G": fmt(self.G),
                "c_prime": str(self.c_prime)}


def c2(d: int) -> int:
    return 4 ** (d ** d)


def c1(d: int, C=1):
    return mpmath.mpf(C) * mpmath.mpf(2) ** (3 ** (d + 6))


def G(d: int, delta, q: int, C=1, variant: str = "log1"):
    """((log q)^e c_1(d) log(1/delta))^{c_2(d)} with e = 1 for log1 and e = 2 for log2; logs base 2."""
    if variant not in ("log1", "log2"):
        raise InputError(f"unknown variant {variant!r}")
    e = 1 if variant == "log1" else 2
    delta = mpmath.mpf(Fraction(delta).numerator) / Fraction(delta).denominator if not isinstance(
        delta, mpmath.mpf) else delta
    base = mpmath.log(q, 2) ** e * c1(d, C) * mpmath.log(1 / delta, 2)
    return base ** c2(d)


def paper_constants(d: int, delta, q: int, C=1, variant: str = "log1") -> PaperConstants:
    if d < 1:
        raise InputError("d must be at least 1")
    delta = as_fraction(delta)
    if not 0 < delta <= 1:
        raise InputError("delta must lie in (0, 1]")
    f1 = 2 ** (3 ** (d + 3))
    return PaperConstants(d, delta, q, C, variant, f1, Fraction(1, f1), c1(d, C), c2(d),
                          G(d, delta, q, C, variant), 4 ** (d ** d))


def degeneracy_bound_for_rank(d: int, r: int, q: int, C=1, variant: str = "log2"):
    """2^{d-1} G(d-1, q^{-r}), the partition-rank bound obtained from arank <= r."""
    return mpmath.mpf(2) ** (d - 1) * G(d - 1, Fraction(1, q ** r), q, C, variant)


__all__ = [
    "QElement", "QMultiset", "ForcingFamily", "ForcingReport", "FocusResult", "Construction", "PaperConstants",
    "near_annihilators", "near_annihilator_matrix", "family_span", "forcing_check", "mainlemma_d1",
    "focusondeg", "mainlemma_construct", "paper_constants", "G", "c1", "c2", "degeneracy_bound_for_rank",
    "load_qmultiset", "load_family",
]
