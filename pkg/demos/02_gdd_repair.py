"""Turn a group divisible design into an SBBD and repair its spanning condition.

Each group of points becomes a left vertex and the position of a point inside
its group becomes the right vertex.  Relabelling points inside a group does not
change the information matrix, so the repair is free.
"""
from importlib import resources
import json

import numpy as np

from sbbdkit import apply_group_permutations, e_optimal_gdd, gdd_to_sbbd, repair_spanning_gdd, verify_gdd
from sbbdkit.fileio import design_from_json

raw = json.loads(resources.files("sbbdkit").joinpath("data/gdd_9pts_l3_l4.json").read_text())
d = design_from_json(raw)
p = verify_gdd(d)
print(f"GDD: lambda1={p.lambda1} lambda2={p.lambda2} r={p.r} k={p.k} ({d.m} groups of {d.g})")
print("E-optimal certificate lambda2 == lambda1 + 1:", e_optimal_gdd(p))

before = gdd_to_sbbd(d)
print("\nas an SBBD:", before)
for row, subs in before.spanning.missing_by_row().items():
    print(f"  block {row + 1} misses subscript(s) {[j + 1 for j in subs]}")

perms = repair_spanning_gdd(d)
print("\nwithin-group permutations:", [list(q) for q in perms])
after = gdd_to_sbbd(apply_group_permutations(d, perms))
print("after relabelling:", after)
print("information matrix unchanged:", np.array_equal(before.info_matrix, after.info_matrix))
