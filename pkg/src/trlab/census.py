"""Exhaustive (bias, arank, prank, degeneracy) census over every tensor of a shape."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Iterator, Sequence

import numpy as np

from .analytic import bias_exact
from .errors import InputError, InvariantViolation
from .fields import FieldSpec, check_budget
from .prank import min_degeneracy, prank_exact, prank_upper
from .tensor import from_lex_index

FIELDS = ["id", "shape", "q", "bias_num", "bias_den_log_q", "arank", "prank", "min_degeneracy_k", "ann_density"]


@dataclass(frozen=True)
class CensusRecord:
    id: int
    shape: tuple[int, ...]
    q: int
    bias_num: int
    bias_den_log_q: int
    arank: float
    prank: int
    min_degeneracy_k: int | None
    ann_density: float

    @property
    def bias(self) -> Fraction:
        return Fraction(self.bias_num, self.q ** self.bias_den_log_q)

    def satisfies_inequality(self) -> bool:
        """arank <= prank, exactly: bias_num * q^prank >= q^m."""
        return self.prank >= 0 and self.bias_num * self.q ** self.prank >= self.q ** self.bias_den_log_q

    def to_json(self) -> dict:
        out = asdict(self)
        out["shape"] = list(self.shape)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CensusRecord":
        k = obj.get("min_degeneracy_k")
        return cls(int(obj["id"]), tuple(int(n) for n in obj["shape"]), int(obj["q"]), int(obj["bias_num"]),
                   int(obj["bias_den_log_q"]), float(obj["arank"]), int(obj["prank"]),
                   None if k is None else int(k), float(obj["ann_density"]))


@dataclass
class RunConfig:
    shape: tuple[int, ...]
    q: int = 2
    shard: int = 0
    nshards: int = 1
    workers: int = 1
    out: str | None = None
    format: str = "jsonl"
    degeneracy: str = "auto"   # auto | on | off
    budget_bits: int | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.shape = tuple(int(n) for n in self.shape)
        FieldSpec(self.q)
        if len(self.shape) < 2 or any(n < 1 for n in self.shape):
            raise InputError(f"census needs an order >= 2 shape, got {self.shape}")
        if not 0 <= self.shard < self.nshards:
            raise InputError(f"shard {self.shard} outside [0, {self.nshards})")
        if self.workers < 1:
            raise InputError("worker count must be positive")
        if self.format not in ("jsonl", "csv"):
            raise InputError(f"unknown format {self.format!r}")
        if self.degeneracy not in ("auto", "on", "off"):
            raise InputError(f"degeneracy must be auto, on or off, got {self.degeneracy!r}")
        if self.budget_bits is not None and self.budget_bits <= 0:
            raise InputError("budget must be positive")

    @property
    def total(self) -> int:
        return self.q ** int(np.prod(self.shape))

    def id_range(self) -> tuple[int, int]:
        return self.shard * self.total // self.nshards, (self.shard + 1) * self.total // self.nshards

    def with_degeneracy(self) -> bool:
        if self.degeneracy == "auto":
            return self.total <= 512
        return self.degeneracy == "on"


def census_record(i: int, shape: Sequence[int], q: int, degeneracy: bool) -> CensusRecord:
    T = from_lex_index(i, shape, q)
    b = bias_exact(T)
    upper = prank_upper(T)
    found = prank_exact(T, len(upper))
    if found is None:
        raise InvariantViolation(f"tensor {i}: the solver found nothing within the upper bound {len(upper)}")
    k = min_degeneracy(T)[0] if degeneracy else None
    rec = CensusRecord(i, tuple(shape), q, b.numerator, b.exponent, b.arank,
                       found[0], k, b.value)
    if not rec.satisfies_inequality():
        raise InvariantViolation(f"tensor {i}: bias_num * q^prank < q^m")
    return rec


def _work(args) -> list[CensusRecord]:
    start, stop, shape, q, degeneracy, bits = args
    if bits is not None:
        import os

        os.environ["TRL_BUDGET_BITS"] = str(bits)
    return [census_record(i, shape, q, degeneracy) for i in range(start, stop)]


def census_run(cfg: RunConfig) -> Iterator[CensusRecord]:
    """Records for the shard's contiguous lex range, in id order."""
    check_budget(f"census of shape {cfg.shape} over GF({cfg.q})", cfg.total, cfg.budget_bits)
    start, stop = cfg.id_range()
    deg = cfg.with_degeneracy()
    if cfg.workers == 1:
        for i in range(start, stop):
            yield census_record(i, cfg.shape, cfg.q, deg)
        return
    step = max(1, (stop - start) // (cfg.workers * 8) or 1)
    jobs = [(a, min(stop, a + step), cfg.shape, cfg.q, deg, cfg.budget_bits) for a in range(start, stop, step)]
    with ProcessPoolExecutor(cfg.workers) as ex:
        # map keeps submission order, so ids come out sorted
        for chunk in ex.map(_work, jobs):
            yield from chunk


# -- codecs -------------------------------------------------------------------------------

def record_line(rec: CensusRecord) -> str:
    return json.dumps(rec.to_json(), separators=(",", ":"))


def write_jsonl(records: Iterable[CensusRecord], fh) -> int:
    n = 0
    for rec in records:
        fh.write(record_line(rec) + "\n")
        n += 1
    return n


def read_jsonl(fh) -> list[CensusRecord]:
    out = []
    for ln, line in enumerate(fh, 1):
        line = line.strip()
        if not line:
            continue
        try:
            out.append(CensusRecord.from_json(json.loads(line)))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"line {ln}: bad census record: {exc}") from None
    return out


def write_csv(records: Iterable[CensusRecord], fh) -> int:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(FIELDS)
    n = 0
    for r in records:
        w.writerow([r.id, "x".join(map(str, r.shape)), r.q, r.bias_num, r.bias_den_log_q, repr(r.arank),
                    r.prank, "" if r.min_degeneracy_k is None else r.min_degeneracy_k, repr(r.ann_density)])
        n += 1
    return n


def read_csv(fh) -> list[CensusRecord]:
    out = []
    for row in csv.DictReader(fh):
        try:
            out.append(CensusRecord(
                int(row["id"]), parse_shape(row["shape"]), int(row["q"]), int(row["bias_num"]),
                int(row["bias_den_log_q"]), float(row["arank"]), int(row["prank"]),
                int(row["min_degeneracy_k"]) if row["min_degeneracy_k"] else None, float(row["ann_density"])))
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad census CSV row: {exc}") from None
    return out


def read_records(path) -> list[CensusRecord]:
    with open(path) as fh:
        head = fh.read(1)
        fh.seek(0)
        return read_jsonl(fh) if head == "{" else read_csv(fh)


def dumps(records: Iterable[CensusRecord], fmt: str = "jsonl") -> str:
    buf = io.StringIO()
    (write_jsonl if fmt == "jsonl" else write_csv)(records, buf)
    return buf.getvalue()


def parse_shape(text: str) -> tuple[int, ...]:
    try:
        shape = tuple(int(x) for x in str(text).lower().split("x"))
    except ValueError:
        raise InputError(f"bad shape {text!r}; expected something like 2x2x2") from None
    if not shape or any(n < 1 for n in shape):
        raise InputError(f"bad shape {text!r}")
    return shape


# -- summaries ------------------------------------------------------------------------------

@dataclass(frozen=True)
class SummaryRow:
    bias: Fraction
    arank: float
    count: int
    prank_min: int
    prank_max: int
    prank_mean: float

    def to_json(self) -> dict:
        return {"bias": [self.bias.numerator, self.bias.denominator], "arank": self.arank, "count": self.count,
                "prank_min": self.prank_min, "prank_max": self.prank_max, "prank_mean": self.prank_mean}


@dataclass(frozen=True)
class Summary:
    rows: tuple[SummaryRow, ...]
    max_ratio: float
    total: int

    def table(self) -> str:
        lines = [f"{'bias':>12} {'arank':>8} {'count':>7} {'min':>4} {'max':>4} {'mean':>7}"]
        for r in self.rows:
            lines.append(f"{str(r.bias):>12} {r.arank:8.4f} {r.count:7d} {r.prank_min:4d} {r.prank_max:4d} "
                         f"{r.prank_mean:7.3f}")
        lines.append(f"records {self.total}, max prank/max(arank,1) = {self.max_ratio:.4f}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows], "max_ratio": self.max_ratio, "total": self.total}


def census_summarize(records: Iterable[CensusRecord]) -> Summary:
    recs = sorted(records, key=lambda r: (-r.bias, r.id))
    rows = []
    ratio = 0.0
    for bias, grp in groupby(recs, key=lambda r: r.bias):
        grp = list(grp)
        pr = [r.prank for r in grp]
        rows.append(SummaryRow(bias, grp[0].arank, len(grp), min(pr), max(pr), sum(pr) / len(pr)))
        for r in grp:
            ratio = max(ratio, r.prank / max(r.arank, 1.0))
    return Summary(tuple(rows), ratio, len(recs))


__all__ = ["CensusRecord", "RunConfig", "census_run", "census_record", "census_summarize", "Summary",
           "SummaryRow", "write_jsonl", "read_jsonl", "write_csv", "read_csv", "read_records", "dumps",
           "parse_shape"]
