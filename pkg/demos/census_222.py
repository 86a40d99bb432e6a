"""Every 2x2x2 tensor over GF(2): bias, analytic rank, partition rank, degeneracy.

    python3 demos/census_222.py
"""

from collections import Counter

from trlab.census import RunConfig, census_run, census_summarize

records = list(census_run(RunConfig((2, 2, 2), q=2)))
summary = census_summarize(records)
print(summary.table())
print()

worst = max((r for r in records if r.prank), key=lambda r: (r.arank / r.prank, -r.id))
print(f"closest to equality: id {worst.id}, bias {worst.bias}, arank {worst.arank:.4f}, prank {worst.prank}")
print("minimal degeneracy:", dict(sorted(Counter(r.min_degeneracy_k for r in records).items())))

# the gap between the two ranks, per prank value
by_prank = {}
for r in records:
    lo, hi = by_prank.get(r.prank, (float("inf"), 0.0))
    by_prank[r.prank] = (min(lo, r.arank), max(hi, r.arank))
for k, (lo, hi) in sorted(by_prank.items()):
    print(f"prank {k}: arank in [{lo:.4f}, {hi:.4f}]")
