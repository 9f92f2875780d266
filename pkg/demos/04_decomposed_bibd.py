"""Split a (5,3,3)-BIBD into two equitable halves and paste each onto Z5.

Ten blocks is not a prime power, so there is no (10, s; 1) difference matrix
to paste onto directly.  Each half of five blocks has every point exactly three
times, and each half gets its own (5,5;1) difference matrix over Z5.
"""
from importlib import resources
import json

from sbbdkit import DifferenceMatrix, construct_decomposed, parse_group, partition_blocks
from sbbdkit.fileio import design_from_json

data = resources.files("sbbdkit").joinpath("data")
h = design_from_json(json.loads(data.joinpath("bibd_5_3_3.json").read_text()))
raw = json.loads(data.joinpath("dm_z5.json").read_text())
dm = DifferenceMatrix.from_elements(parse_group(raw["group"]), raw["entries"])

partition = partition_blocks(h)
print("cells:", partition.cells, "replications:", partition.replications)

result = construct_decomposed(h, partition, [dm, dm])
print("\nresult:", result)
print("closed-form prediction (eta r b, eta lambda b, eta sum r_i^2, ...):", result.predicted.as_tuple())
for d in result.discrepancies:
    print(f"  {d['component']}: formula {d['theorem']}, computed {d['computed']}")
print("per-cell value eta * r * b_i:", result.predicates["equal_cell_mu"])

repaired = construct_decomposed(h, partition, [dm, dm], repair_spanning=True)
print("\nwith shift repair:", repaired, repaired.repair)
