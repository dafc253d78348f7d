"""
Coloring experiments
====================

Color [2, M] with r colors and ask whether some color class contains a
subset with reciprocal sum 1.
"""

import tempfile
from pathlib import Path

from unitfrac.harness import check_coloring, greedy_limit, make_coloring, sweep_threshold

# one color: the first unit subset appears at M = 6, as 1/2 + 1/3 + 1/6
for M in (5, 6):
    rep = check_coloring(make_coloring(M, 1, "round_robin"))
    print(M, rep.verdict, rep.classes[0].witness)

# first-fit greedy keeps every class below 1 for as long as it can
print("greedy limits:", [greedy_limit(r) for r in range(1, 6)])
rep = check_coloring(make_coloring(greedy_limit(3), 3, "greedy_adversarial"))
print("greedy r=3 verdict:", rep.verdict, [str(c.recip_sum) for c in rep.classes])

# random colorings of [2, 40] into two classes
for seed in range(3):
    rep = check_coloring(make_coloring(40, 2, "random", seed=seed))
    wit = [c.witness for c in rep.classes if c.found]
    print(f"seed {seed}: verdict {rep.verdict}, witness {wit[0] if wit else None}")

# reports are reproducible apart from the "meta" block
c = make_coloring(30, 2, "random", seed=7)
assert check_coloring(c).to_json(with_meta=False) == check_coloring(c).to_json(with_meta=False)

# a small sweep, with per-run reports on disk
with tempfile.TemporaryDirectory() as d:
    sw = sweep_threshold(2, ["round_robin", "random"], 2, 30, seeds=(0, 1), report_dir=Path(d))
    print("thresholds:", sw.thresholds, f"({len(list(Path(d).iterdir()))} reports written)")
