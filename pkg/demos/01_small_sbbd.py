"""Verify a 9-row SBBD of K_{3,3} and read off its spectrum.

Each row of the design matrix is an SB-block: a set of edges of the complete
bipartite graph K_{3,3}.  Column i*3 + j is the edge joining the i-th left
vertex to the j-th right vertex.
"""
from importlib import resources

import numpy as np

from sbbdkit import DesignMatrix, cs2_eigenvalues, numeric_spectrum, verify_sbbd
from sbbdkit.fileio import read_matrix

x = read_matrix(resources.files("sbbdkit").joinpath("data/sbbd_3x3_n9.txt"))
print("design matrix, slabs of width 3:")
for row in x:
    print("  " + " | ".join(" ".join(map(str, row[i:i + 3])) for i in (0, 3, 6)))

result = verify_sbbd(DesignMatrix(x, 3, 3))
print("\nverdict:", result)
print("information matrix X^T X:")
print(result.info_matrix)

# four eigenvalues in closed form; the LAPACK solver is only a cross-check
exact = cs2_eigenvalues(result.params, 3, 3)
print("\neigenvalue  multiplicity")
for value, mult in exact.values:
    print(f"{value:>10}  {mult:>12}")
print("trace:", exact.trace, "== 9 * mu:", 9 * result.params.mu)
print("LAPACK:", np.round(numeric_spectrum(result.info_matrix).expanded(), 9) + 0.0)
