"""The acceptance battery: twelve exhaustive or randomized checks with exact tolerances.

Each check returns a CheckResult; ``verify_suite`` runs them in order.  The
last check (solver against an unpruned search) is slow and only runs at level
``full``.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

import numpy as np

from .additive import PointSet, bogolyubov, find_system, lsystem_intersect, sumset
from .analytic import bias_char_oracle, bias_exact
from .errors import ConstructionError
from .forcing import (focusondeg, forcing_check, mainlemma_construct, mainlemma_d1, near_annihilator_matrix)
from .linalg import Subspace, iter_subspaces, orth_complement, rank
from .poly import (Polynomial, derivative_tensor, diagonal_polynomial, gowers_norm, inverse_witness,
                   random_polynomial, taylor_split)
from .prank import degeneracy_to_prank, min_degeneracy, prank_bruteforce, prank_exact, verify_certificate
from .tensor import Tensor, all_factor_tuples, all_tensors


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure of the check, reported not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(number, name, bool(ok), detail, time.perf_counter() - t0)


def check_matrix_ranks() -> tuple[bool, str]:
    bad = 0
    n = 0
    for shape in ((2, 2), (3, 3)):
        for T in all_tensors(shape, 2):
            r = rank(T.data, 2)
            b = bias_exact(T)
            exact_arank = b.numerator * 2 ** r == 2 ** b.exponent
            found = prank_exact(T, min(shape))
            n += 1
            if not exact_arank or found is None or found[0] != r:
                bad += 1
    return bad == 0, f"{n} matrices, {bad} mismatches"


def check_main_inequality() -> tuple[bool, str]:
    bad = 0
    for T in all_tensors((2, 2, 2), 2):
        b = bias_exact(T)
        r = prank_exact(T, 4)[0]
        if b.numerator * 2 ** r < 2 ** 4 or b.exponent != 4:
            bad += 1
    return bad == 0, f"256 tensors, {bad} violations"


def check_bias_oracle(seed: int = 0, count: int = 100) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst_re = worst_im = 0.0
    for _ in range(count):
        p = int(rng.choice([2, 3]))
        d = int(rng.integers(2, 4))
        shape = tuple(int(x) for x in rng.integers(1, 4, size=d))
        T = Tensor(rng.integers(0, p, size=shape), p)
        z = bias_char_oracle(T)
        worst_re = max(worst_re, abs(z.real - bias_exact(T).value))
        worst_im = max(worst_im, abs(z.imag))
    return worst_re <= 1e-9 and worst_im < 1e-12, f"max |diff| {worst_re:.2e}, max |imag| {worst_im:.2e}"


def _gowers_polys(seed: int = 0, count: int = 50) -> list[Polynomial]:
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        d = 2 + i % 2
        n = int(rng.integers(1, 4))
        out.append(random_polynomial(5, n, d, rng))
    return out


def check_gowers_identity(seed: int = 0) -> tuple[bool, str]:
    worst = 0.0
    for P in _gowers_polys(seed):
        direct = gowers_norm(P, P.degree).value_2k
        exact = bias_exact(derivative_tensor(P)).value
        worst = max(worst, abs(direct - exact))
    return worst <= 1e-9, f"50 polynomials over GF(5), max |diff| {worst:.2e}"


def check_monotone(seed: int = 0) -> tuple[bool, str]:
    bad = 0
    for P in _gowers_polys(seed):
        u = [gowers_norm(P, k).value for k in (1, 2, 3)]
        if not (u[0] <= u[1] + 1e-9 and u[1] <= u[2] + 1e-9):
            bad += 1
    return bad == 0, f"50 polynomials, {bad} non-monotone"


def check_taylor(seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(50):
        p, n = (5, 3) if i % 2 == 0 else (7, 2)
        d = int(rng.integers(1, p))
        P = random_polynomial(p, n, d, rng, density=0.3)
        T, W = taylor_split(P)
        inv = pow(math.factorial(d), -1, p)
        rebuilt = diagonal_polynomial(T, n).scale(inv) + W
        if not np.array_equal(rebuilt.eval_all(), P.eval_all()) or W.degree >= d:
            bad += 1
    return bad == 0, f"50 polynomials over GF(5)^3 and GF(7)^2, {bad} failures"


def check_inverse_witness(seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    p, n = 3, 3
    worst = math.inf
    bad = 0
    for i in range(20):
        r = 1 + i % 2
        Qs = [random_polynomial(p, n, int(rng.integers(1, 3)), rng) for _ in range(r)]
        table = rng.integers(0, p, size=(p,) * r)
        vals = np.stack([Q.eval_all() for Q in Qs])
        P = Polynomial.from_values(table[tuple(vals)], p, n)
        _, corr = inverse_witness(P, Qs)
        worst = min(worst, corr * p ** r)
        if corr < p ** -r - 1e-12:
            bad += 1
    return bad == 0, f"20 polynomials, min correlation * 3^r = {worst:.4f}"


def check_degeneracy_bound() -> tuple[bool, str]:
    bad = 0
    worst = 0
    for T in all_tensors((2, 2, 2), 2):
        k, cert = min_degeneracy(T)
        pc = degeneracy_to_prank(cert)
        r = prank_exact(T, 4)[0]
        worst = max(worst, len(pc))
        if not verify_certificate(pc, T) or len(pc) > 4 * k or r > len(pc):
            bad += 1
    return bad == 0, f"256 certificates, largest expansion {worst}, {bad} failures"


def check_additive(seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    notes = []
    # (a) containment in 2A - 2A
    bad_a = 0
    for i in range(100):
        A = PointSet(2, 8, rng.random(256) < 0.08 + 0.42 * (i % 10) / 9)
        if len(A) == 0:
            A = PointSet.from_points([[0] * 8], 2, 8)
        D = sumset(A, 2, 2, exact=True)
        if not D.contains_subspace(bogolyubov(A)):
            bad_a += 1
    notes.append(f"a:{bad_a}")
    # (b) cosets give H back
    bad_b = 0
    for dim in range(0, 9):
        for _ in range(3):
            H = Subspace(2, 8, rng.integers(0, 2, size=(dim, 8))) if dim else Subspace.zero(2, 8)
            A = PointSet.from_subspace(H, rng.integers(0, 2, size=8))
            if bogolyubov(A) != H:
                bad_b += 1
    notes.append(f"b:{bad_b}")
    # (c) witnesses of find_system
    bad_c = 0
    for shape in ((2, 2), (2, 2, 2)):
        B = all_factor_tuples(shape, 2)
        bound = 4 ** len(shape)
        for _ in range(10):
            keep = [f for f in B if rng.random() < 0.75]
            if len(keep) * 2 < len(B):
                continue
            sup = Counter(keep)
            S, W = find_system(keep, Fraction(len(keep), len(B)), shape, 2)
            if set(W) != set(S.enumerate()) or not all(w.validate(e, sup, 2, bound) for e, w in W.items()):
                bad_c += 1
    notes.append(f"c:{bad_c}")
    # (d) intersections
    bad_d = 0
    for shape in ((2, 2), (2, 2, 2)):
        B = all_factor_tuples(shape, 2)
        for _ in range(5):
            sys = []
            for _ in range(2):
                keep = [f for f in B if rng.random() < 0.7] or B
                sys.append(find_system(keep, Fraction(len(keep), len(B)), shape, 2)[0])
            X = lsystem_intersect(*sys)
            l = sys[0].codim_bound + sys[1].codim_bound
            if X.codim_bound != l or not X.verify(l):
                bad_d += 1
            elif not all(sys[0].contains(e) and sys[1].contains(e) for e in X.enumerate()):
                bad_d += 1
    notes.append(f"d:{bad_d}")
    return bad_a + bad_b + bad_c + bad_d == 0, "failures " + " ".join(notes)


def check_forcing_base(seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(50):
        mask = rng.random(256) < 0.3 + 0.4 * (i % 5) / 4
        A = PointSet(2, 8, mask)
        Q, F = mainlemma_d1(A, Fraction(len(A), 256))
        U = Subspace(2, 8, np.array([e.factors[0] for e in Q.elements]))
        R = near_annihilator_matrix(Q, 1)
        perp = orth_complement(U)
        same = {tuple(r) for r in R.tolist()} == set(perp)
        if not same or not forcing_check(Q, 1, F):
            bad += 1
    return bad == 0, f"50 sets in GF(2)^8, {bad} failures"


def check_construction() -> tuple[bool, str]:
    runs = []
    shape = (2, 2)
    runs.append(("B'=B", all_factor_tuples(shape, 2), Fraction(1)))
    hyper = [H for H in iter_subspaces(2, 2, 1)]
    for H1, H2 in product(hyper, hyper):
        B = [(u, v) for u in H1 for v in H2]
        runs.append((f"H1={H1.basis.tolist()} H2={H2.basis.tolist()}", B, Fraction(len(B), 16)))
    H1, H2 = Subspace(2, 3, [[1, 0, 0], [0, 1, 1]]), Subspace(2, 3, [[0, 1, 0], [0, 0, 1]])
    runs.append(("3x3 hyperplanes", [(u, v) for u in H1 for v in H2], Fraction(16, 64)))
    bad = []
    for name, B, delta in runs:
        sh = tuple(len(u) for u in B[0])
        c = mainlemma_construct(B, delta, 2, sh)
        pots = focusondeg(B, delta, 2, sh).potentials
        if not c.report or any(b <= a for a, b in zip(pots, pots[1:])):
            bad.append(name)
    # the fixed inputs above barely iterate; random halves exercise the potential
    rng = np.random.default_rng(0)
    steps = 0
    for sh in ((2, 2), (2, 3), (3, 2), (2, 2, 2)):
        full = all_factor_tuples(sh, 2)
        for i in range(10):
            B = [f for f in full if rng.random() < 0.5]
            try:
                pots = focusondeg(B, Fraction(len(B), len(full)), 2, sh).potentials
            except ConstructionError:
                continue
            steps += len(pots) - 1
            if any(b <= a for a, b in zip(pots, pots[1:])):
                bad.append(f"random {sh} #{i}")
    detail = f"{len(runs)} constructions, {steps} potential steps on 40 random sets"
    return not bad, detail + (f", failed: {bad}" if bad else ", all forcing at 7/8")


def check_solver_oracle() -> tuple[bool, str]:
    bad = 0
    for T in all_tensors((2, 2, 2), 2):
        a = prank_exact(T, 4)
        b = prank_bruteforce(T, 4)
        if a[0] != b[0] or not verify_certificate(b[1], T):
            bad += 1
    return bad == 0, f"256 tensors, {bad} disagreements"


CHECKS = [
    (1, "d=2 equivalence", check_matrix_ranks),
    (2, "arank <= prank on 2x2x2", check_main_inequality),
    (3, "bias oracle equivalence", check_bias_oracle),
    (4, "Gowers identity", check_gowers_identity),
    (5, "Gowers monotonicity", check_monotone),
    (6, "Taylor reconstruction", check_taylor),
    (7, "inverse witness bound", check_inverse_witness),
    (8, "degeneracy bound", check_degeneracy_bound),
    (9, "additive certificates", check_additive),
    (10, "forcing base case", check_forcing_base),
    (11, "construction sanity", check_construction),
    (12, "solver minimality oracle", check_solver_oracle),
]


def run_check(number: int) -> CheckResult:
    _, name, fn = CHECKS[number - 1]
    return _timed(number, name, fn)


def verify_suite(level: str = "quick") -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"level must be quick or full, got {level!r}")
    numbers = [n for n, *_ in CHECKS if level == "full" or n != 12]
    return [run_check(n) for n in numbers]


__all__ = ["CheckResult", "CHECKS", "run_check", "verify_suite"]
