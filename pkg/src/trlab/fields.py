"""Prime fields GF(p) and the enumeration budget."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded, InputError

DEFAULT_BUDGET_BITS = 24
MAX_PRIME = 1 << 16


def budget_bits() -> int:
    """Current enumeration budget in bits (``TRL_BUDGET_BITS`` overrides the default)."""
    raw = os.environ.get("TRL_BUDGET_BITS")
    if raw is None:
        return DEFAULT_BUDGET_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise InputError(f"TRL_BUDGET_BITS must be an integer, got {raw!r}") from None
    if bits <= 0:
        raise InputError("TRL_BUDGET_BITS must be positive")
    return bits


def check_budget(what: str, required: int, bits: int | None = None) -> None:
    limit = 1 << (budget_bits() if bits is None else bits)
    if required > limit:
        raise BudgetExceeded(what, required, limit)


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p <= MAX_PRIME or not is_prime(self.p):
            raise InputError(f"field modulus must be a prime in [2, 2^16], got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def reduce(self, a: int) -> int:
        return a % self.p


def as_field(p) -> FieldSpec:
    return p if isinstance(p, FieldSpec) else FieldSpec(int(p))


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(a, -1, p)
