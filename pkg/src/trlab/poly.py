"""Polynomials over GF(p)^n: bias, Gowers norms, derivative tensors, Taylor splitting.

Exponents are reduced with x^p = x as soon as a polynomial is built, so every
polynomial is a canonical function GF(p)^n -> GF(p) and its degree is well
defined.  Evaluation over the whole space uses the lex order of
:func:`trlab.linalg.all_vectors`.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .analytic import bias_exact
from .errors import InputError, InvariantViolation
from .fields import FieldSpec, check_budget
from .linalg import all_vectors, rref_with_pivots, vec_indices
from .prank import PartitionCertificate, verify_certificate
from .tensor import Tensor, complement, multilinear_eval


def _reduce_exp(e: int, p: int) -> int:
    return e if e < p else (e - 1) % (p - 1) + 1


class Polynomial:
    """A polynomial GF(p)^n -> GF(p) as a map from exponent vectors to nonzero coefficients."""

    __slots__ = ("p", "n", "terms")

    def __init__(self, p: int, n: int, terms=None):
        FieldSpec(p)
        if n < 1:
            raise InputError("a polynomial needs at least one variable")
        self.p = p
        self.n = n
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise InputError(f"exponent vector {exps} for {n} variables")
            key = tuple(_reduce_exp(e, p) for e in exps)
            acc[key] = (acc.get(key, 0) + int(c)) % p
        self.terms = {k: v for k, v in sorted(acc.items()) if v}

    # construction
    @classmethod
    def constant(cls, c: int, p: int, n: int) -> "Polynomial":
        return cls(p, n, {(0,) * n: c})

    @classmethod
    def variable(cls, i: int, p: int, n: int) -> "Polynomial":
        """The coordinate x_i, 1-indexed."""
        exps = [0] * n
        exps[i - 1] = 1
        return cls(p, n, {tuple(exps): 1})

    @classmethod
    def monomial(cls, exps, c: int, p: int) -> "Polynomial":
        return cls(p, len(exps), {tuple(exps): c})

    @classmethod
    def from_values(cls, values, p: int, n: int) -> "Polynomial":
        """Interpolate the unique reduced polynomial with the given value table (lex order)."""
        vals = np.asarray(values, dtype=np.int64).reshape((p,) * n) % p
        Vinv = _vandermonde_inverse(p)
        coeffs = vals
        for ax in range(n):
            coeffs = np.moveaxis(np.tensordot(Vinv, coeffs, axes=([1], [ax])) % p, 0, ax)
        terms = {tuple(int(e) for e in idx): int(coeffs[idx]) for idx in zip(*np.nonzero(coeffs))}
        return cls(p, n, terms)

    # basic properties
    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Polynomial) and (self.p, self.n, self.terms) == (other.p, other.n, other.terms)

    def __hash__(self):
        return hash((self.p, self.n, tuple(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"Polynomial(p={self.p}, n={self.n}, 0)"
        parts = []
        for exps, c in self.terms.items():
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return f"Polynomial(p={self.p}, n={self.n}, {' + '.join(parts)})"

    # arithmetic
    def _check(self, other: "Polynomial"):
        if (self.p, self.n) != (other.p, other.n):
            raise InputError("polynomials over different fields or variable counts")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial(self.p, self.n, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.p, self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.p, self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        out = []
        for (e1, c1), (e2, c2) in product(self.terms.items(), other.terms.items()):
            out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return Polynomial(self.p, self.n, out)

    __rmul__ = __mul__

    # evaluation
    def eval(self, x) -> int:
        x = [int(v) % self.p for v in x]
        if len(x) != self.n:
            raise InputError(f"point of length {len(x)} for {self.n} variables")
        total = 0
        for exps, c in self.terms.items():
            term = c
            for xi, e in zip(x, exps):
                if e:
                    term = term * pow(xi, e, self.p) % self.p
            total += term
        return total % self.p

    __call__ = eval

    def eval_points(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64) % self.p
        out = np.zeros(X.shape[0], dtype=np.int64)
        for exps, c in self.terms.items():
            term = np.full(X.shape[0], c, dtype=np.int64)
            for i, e in enumerate(exps):
                if e:
                    term = term * _powers(self.p, e)[X[:, i]] % self.p
            out = (out + term) % self.p
        return out

    def eval_all(self) -> np.ndarray:
        """Values at every point of GF(p)^n in lex order."""
        check_budget("evaluate polynomial everywhere", self.p ** self.n)
        return self.eval_points(all_vectors(self.p, self.n))

    def to_json(self) -> dict:
        return {"q": self.p, "n": self.n,
                "terms": [{"exps": list(e), "coef": c} for e, c in self.terms.items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Polynomial":
        try:
            p, n = int(obj["q"]), int(obj["n"])
            terms = [(tuple(t["exps"]), int(t["coef"])) for t in obj.get("terms", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad polynomial JSON: {exc}") from None
        return cls(p, n, terms)


def load_polynomial(path) -> Polynomial:
    with open(path) as fh:
        return Polynomial.from_json(json.load(fh))


def load_polynomials(path) -> list[Polynomial]:
    with open(path) as fh:
        obj = json.load(fh)
    items = obj["polys"] if isinstance(obj, dict) else obj
    return [Polynomial.from_json(o) for o in items]


_POWERS: dict = {}


def _powers(p: int, e: int) -> np.ndarray:
    key = (p, e)
    if key not in _POWERS:
        _POWERS[key] = np.array([pow(x, e, p) for x in range(p)], dtype=np.int64)
    return _POWERS[key]


def _vandermonde_inverse(p: int) -> np.ndarray:
    V = np.array([[pow(x, k, p) if (x or k) else 1 for k in range(p)] for x in range(p)], dtype=np.int64)
    R, _ = rref_with_pivots(np.concatenate([V, np.eye(p, dtype=np.int64)], axis=1), p)
    return R[:, p:]


def random_polynomial(p: int, n: int, degree: int, rng: np.random.Generator, density: float = 0.5):
    """Random polynomial of exact total degree ``degree`` (exponents below p)."""
    monos = [e for e in product(range(p), repeat=n) if sum(e) <= degree]
    top = [e for e in monos if sum(e) == degree]
    if not top:
        raise InputError(f"no monomial of degree {degree} in {n} variables over GF({p})")
    terms = {e: int(rng.integers(1, p)) for e in monos if rng.random() < density}
    terms[top[int(rng.integers(len(top)))]] = int(rng.integers(1, p))
    P = Polynomial(p, n, terms)
    assert P.degree == degree
    return P


# -- bias and Gowers norms -----------------------------------------------------------

def _char_sum(values: np.ndarray, p: int, axis=None):
    """Sum of omega^v with omega = exp(2 pi i / p), from exact residue counts."""
    omega = np.exp(2j * np.pi * np.arange(p) / p)
    if axis is None:
        counts = np.bincount(values.reshape(-1), minlength=p)
        return complex(counts @ omega)
    counts = np.stack([(values == c).sum(axis=axis) for c in range(p)], axis=-1)
    return counts @ omega


def bias_poly(P: Polynomial) -> complex:
    """E_x omega^{P(x)}."""
    return _char_sum(P.eval_all(), P.p) / P.p ** P.n


@dataclass(frozen=True)
class GowersNormResult:
    k: int
    value: float
    value_2k: float
    exact: Fraction | None = None


def _add_table(p: int, n: int) -> np.ndarray:
    V = all_vectors(p, n)
    return vec_indices((V[:, None, :] + V[None, :, :]) % p, p)


def gowers_norm(P: Polynomial, k: int, via_bias: bool = False) -> GowersNormResult:
    """||omega^P||_{U^k} from the defining average.

    With ``via_bias`` and k = deg P >= 2 the value comes instead from the exact
    bias of the derivative tensor, and ``exact`` holds that rational.

    The sum over the last direction y_k is done in closed form: for fixed
    x-independent y_1..y_{k-1} the average over (x, y_k) is |E_x g(x)|^2 with g
    the (k-1)-fold multiplicative derivative, so p^{nk} tuples are enumerated.
    """
    if k < 1:
        raise InputError("Gowers norms need k >= 1")
    p, n = P.p, P.n
    if via_bias:
        if k != P.degree:
            raise InputError(f"the bias route needs k = deg P = {P.degree}")
        exact = gowers_via_bias(P)
        return GowersNormResult(k, float(exact) ** (1.0 / 2 ** k), float(exact), exact)
    X = p ** n
    check_budget(f"U^{k} average", X ** k)
    add = _add_table(p, n)
    E = P.eval_all()[None, :]
    for _ in range(k - 1):
        # rows indexed by (previous tuple, y); E_new(x) = E(x + y) - E(x)
        E = ((E[:, add] - E[:, None, :]) % p).reshape(-1, X)
    sums = _char_sum(E, p, axis=1)
    avg = float(np.mean(np.abs(sums) ** 2)) / X ** 2
    value_2k = max(avg, 0.0)
    return GowersNormResult(k, value_2k ** (1.0 / 2 ** k), value_2k)


def gowers_norm_bruteforce(P: Polynomial, k: int) -> GowersNormResult:
    """The defining average over all (x, y_1, ..., y_k), with conjugations, for tiny cases."""
    p, n = P.p, P.n
    X = p ** n
    check_budget(f"U^{k} full enumeration", X ** (k + 1))
    add = _add_table(p, n)
    vals = P.eval_all()
    total = 0j
    omega = cmath.exp(2j * math.pi / p)
    for idx in product(range(X), repeat=k + 1):
        x, ys = idx[0], idx[1:]
        expo = 0
        for size in range(k + 1):
            for S in combinations(range(k), size):
                pt = x
                for i in S:
                    pt = add[pt, ys[i]]
                sign = -1 if (k - size) % 2 else 1
                expo += sign * vals[pt]
        total += omega ** (expo % p)
    avg = total / X ** (k + 1)
    v = abs(avg)
    return GowersNormResult(k, v ** (1.0 / 2 ** k), v)


# -- derivative tensor and Taylor splitting ---------------------------------------------

def alternating_sum(P: Polynomial, ys) -> int:
    d = len(ys)
    total = 0
    ys = [np.asarray(y, dtype=np.int64) for y in ys]
    for size in range(d + 1):
        for S in combinations(range(d), size):
            pt = sum((ys[i] for i in S), np.zeros(P.n, dtype=np.int64)) % P.p
            total += (-1) ** (d - size) * P.eval(pt)
    return total % P.p


def derivative_tensor(P: Polynomial, d: int | None = None, self_check: int = 100, seed: int = 0) -> Tensor:
    """T(y_1, ..., y_d) = sum_S (-1)^{d-|S|} P(sum_{i in S} y_i), as an n x ... x n tensor.

    Entries are the alternating sums at standard basis tuples; ``self_check``
    random tuples confirm the result really is that multilinear form.
    """
    d = P.degree if d is None else d
    if d < 1:
        raise InputError("derivative tensor needs degree >= 1")
    n, p = P.n, P.p
    check_budget("derivative tensor entries", n ** d * 2 ** d)
    eye = np.eye(n, dtype=np.int64)
    data = np.zeros((n,) * d, dtype=np.int64)
    for idx in product(range(n), repeat=d):
        data[idx] = alternating_sum(P, [eye[i] for i in idx])
    T = Tensor(data, p)
    rng = np.random.default_rng(seed)
    for _ in range(self_check):
        ys = rng.integers(0, p, size=(d, n))
        if multilinear_eval(T, list(ys)) != alternating_sum(P, list(ys)):
            raise InvariantViolation(f"alternating sum of order {d} is not multilinear; is deg P > {d}?")
    return T


def diagonal_polynomial(T: Tensor, n: int | None = None) -> Polynomial:
    """The polynomial x -> T(x, ..., x) (every mode of dimension n)."""
    n = T.shape[0] if n is None else n
    if any(m != n for m in T.shape):
        raise InputError(f"diagonal needs all modes of dimension {n}, got {T.shape}")
    terms = []
    for idx in zip(*np.nonzero(T.data)):
        exps = [0] * n
        for i in idx:
            exps[int(i)] += 1
        terms.append((tuple(exps), int(T.data[idx])))
    return Polynomial(T.p, n, terms)


def taylor_split(P: Polynomial) -> tuple[Tensor, Polynomial]:
    """(T, W) with P = (1/d!) T(x, ..., x) + W and deg W < d."""
    d, p = P.degree, P.p
    if d < 1:
        raise InputError("Taylor split needs degree >= 1")
    if d >= p:
        raise InputError(f"Taylor split needs degree < p, got degree {d} over GF({p})")
    T = derivative_tensor(P)
    inv_fact = pow(math.factorial(d), -1, p)
    W = P - diagonal_polynomial(T, P.n).scale(inv_fact)
    if W.degree >= d:
        raise InvariantViolation(f"Taylor remainder has degree {W.degree} >= {d}")
    return T, W


def gowers_via_bias(P: Polynomial) -> Fraction:
    """||omega^P||_{U^d}^{2^d} for d = deg P, as the exact bias of the derivative tensor."""
    d = P.degree
    if d <= 0:
        return Fraction(1)
    T = derivative_tensor(P)
    if d == 1:
        # E_x omega^{c.x}: 1 for c = 0, else 0
        return Fraction(int(T.is_zero()))
    return bias_exact(T).fraction


# -- rank upper bound and inverse witness ---------------------------------------------

@dataclass(frozen=True)
class RankUpperResult:
    pairs: tuple[tuple[Polynomial, Polynomial], ...]
    W: Polynomial

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    @property
    def n_functions(self) -> int:
        """Lower-degree polynomials P is a function of: both factors of each pair, plus W."""
        return 2 * len(self.pairs) + (0 if self.W.is_zero() else 1)


def rank_upper_construct(P: Polynomial, cert: PartitionCertificate) -> RankUpperResult:
    """Write P = sum_i Q_i R_i + W from a partition certificate of its derivative tensor."""
    d, p, n = P.degree, P.p, P.n
    T, W = taylor_split(P)
    if not verify_certificate(cert, T):
        raise InputError("certificate does not decompose the derivative tensor")
    inv_fact = pow(math.factorial(d), -1, p)
    pairs = []
    for term in cert.terms:
        Q = diagonal_polynomial(term.a, n).scale(inv_fact)
        R = diagonal_polynomial(term.b, n)
        if Q.degree > d - 1 or R.degree > d - 1:
            raise InvariantViolation("rank-1 factor of full degree")
        pairs.append((Q, R))
    rebuilt = W
    for Q, R in pairs:
        rebuilt = rebuilt + Q * R
    if not np.array_equal(rebuilt.eval_all(), P.eval_all()):
        raise InvariantViolation("sum of products plus W does not reproduce P")
    return RankUpperResult(tuple(pairs), W)


def inverse_witness(P: Polynomial, Qs: Sequence[Polynomial]) -> tuple[tuple[int, ...], float]:
    """argmax over alpha in GF(p)^r of |E_x omega^{P(x) - sum_i alpha_i Q_i(x)}| (smallest alpha on ties)."""
    p, n, r = P.p, P.n, len(Qs)
    for Q in Qs:
        P._check(Q)
    check_budget("inverse witness sweep", p ** r * p ** n)
    vals = P.eval_all()
    if r == 0:
        return (), abs(_char_sum(vals, p)) / p ** n
    Qv = np.stack([Q.eval_all() for Q in Qs])
    alphas = all_vectors(p, r)
    E = (vals[None, :] - alphas @ Qv) % p
    corr = np.abs(_char_sum(E, p, axis=1)) / p ** n
    best = 0
    for i in range(1, len(corr)):
        if corr[i] > corr[best] + 1e-12:
            best = i
    return tuple(int(a) for a in alphas[best]), float(corr[best])


def combine(Qs: Sequence[Polynomial], alpha) -> Polynomial:
    out = Polynomial(Qs[0].p, Qs[0].n)
    for a, Q in zip(alpha, Qs):
        out = out + Q.scale(a)
    return out


__all__ = [
    "Polynomial", "GowersNormResult", "RankUpperResult", "bias_poly", "gowers_norm",
    "gowers_norm_bruteforce", "derivative_tensor", "taylor_split", "gowers_via_bias",
    "rank_upper_construct", "inverse_witness", "diagonal_polynomial", "random_polynomial",
    "combine", "complement",
]
