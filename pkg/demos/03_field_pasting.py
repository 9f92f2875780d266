"""Paste the tiles of a (4,2)-design on 7 points onto a GF(8) difference matrix.

The multiplication table of GF(8) is an (8,8;1) difference matrix over the
additive group Z2^3.  Pasting gives an SBBD with 64 SB-blocks on K_{8,7}.  The
raw table has an all-zero first row, so each of the first eight SB-blocks uses
one seed block in every slab and misses the points outside it.  Shifting three
columns fixes that without touching X^T X.
"""
import numpy as np

from sbbdkit import construct_single, field_of_order, from_blocks, mult_table_dm, shift_dm_columns, verify_r_lambda

blocks = [[1, 3, 5], [0, 3, 4], [2, 3, 6], [0, 1, 2], [1, 4, 6], [0, 5, 6], [2, 4, 5], list(range(7))]
h = from_blocks(blocks, 7)
rl = verify_r_lambda(h)
print(f"seed: {h.shape[0]} blocks on {h.shape[1]} points, r={rl.r} lambda={rl.lam}")

dm = mult_table_dm(field_of_order(8))
raw = construct_single(h, dm)
print("\nraw multiplication table:", raw)
print("  violations:", len(raw.spanning.violations()), "e.g.", raw.spanning.violations()[0])
print("  predicates:", raw.predicates)

shifts = [(0, 0, 0)] * 5 + [(1, 0, 0), (1, 1, 0), (1, 0, 1)]
fixed = construct_single(h, shift_dm_columns(dm, shifts))
print("\nwith shifts on the last three columns:", fixed)
print("  design matrix shape:", fixed.design.entries.shape)
print("  same information matrix:", np.array_equal(raw.info_matrix, fixed.info_matrix))

searched = construct_single(h, dm, repair_spanning=True)
print("\nshift search finds:", searched.repair["column_shifts"], "->", searched.label)
