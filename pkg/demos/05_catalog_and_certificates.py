"""Sweep the bundled BIBD table and the affine-geometry E-optimal GDDs.

For every table row with a bundled difference set whose block count is small,
paste onto the GF(b) multiplication table, repair spanning, and compare with the
closed form (b r, b lambda, r^2, r^2).  Then check the lambda2 = lambda1 + 1
certificate on hyperplane GDDs and their complements.
"""
import time

from sbbdkit import (
    ag_hyperplane_gdd,
    complement,
    construct_single,
    cs2_eigenvalues,
    e_optimal_gdd,
    field_of_order,
    mult_table_dm,
    verify_gdd,
)
from sbbdkit.catalog import load_catalog

print(f"{'row':<16} {'result':<40} {'closed form':<12} seconds")
for e in load_catalog():
    if e.difference_set is None or e.b > 23:
        continue
    t = time.perf_counter()
    result = construct_single(e.incidence(), mult_table_dm(field_of_order(e.b)), repair_spanning=True)
    spec = cs2_eigenvalues(result.params, result.v1, result.v2)
    ok = result.params == e.predicted_lambda()
    print(f"{e.key():<16} {str(result):<40} {str(ok):<12} {time.perf_counter() - t:.2f}")
    print(f"{'':<16} smallest positive eigenvalue {spec.min_positive()}")

print("\nhyperplane GDDs of AG(n, q)")
for n, q in [(2, 2), (2, 3), (3, 2), (3, 3), (2, 5)]:
    d = ag_hyperplane_gdd(n, q)
    p = verify_gdd(d)
    _, pc = complement(d.incidence, d.groups)
    print(f"  AG({n},{q}): lambda1={p.lambda1} lambda2={p.lambda2} certificate={e_optimal_gdd(p)};"
          f" complement lambda1={pc.lambda1} lambda2={pc.lambda2} certificate={e_optimal_gdd(pc)}")
