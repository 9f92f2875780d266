"""Incidence structures, their verifiers, and generators for ingredient designs.

Designs are dense ``b x v`` integer numpy arrays with entries in {0, 1}: row
``i`` is block ``i``, column ``j`` is point ``j``.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import FiniteField, FiniteGroup, field_of_order, prime_power
from .errors import (
    ConstructionError,
    DegenerateError,
    StructureError,
    VerificationError,
)

SIZE_CAP = 4096


def as_incidence(a) -> np.ndarray:
    """Validate and return ``a`` as a 2-d int64 0/1 array."""
    try:
        h = np.asarray(a)
    except ValueError:
        raise StructureError("incidence matrix rows have unequal lengths") from None
    if h.ndim != 2 or h.shape[0] < 1 or h.shape[1] < 1:
        raise StructureError(f"incidence matrix must be 2-d and non-empty, got shape {h.shape}")
    if not np.isin(h, (0, 1)).all():
        raise StructureError("incidence matrix entries must be 0 or 1")
    return h.astype(np.int64, copy=False)


def from_blocks(blocks, points: int) -> np.ndarray:
    """Incidence matrix of a block list over points ``0 .. points-1``."""
    h = np.zeros((len(blocks), points), dtype=np.int64)
    for i, block in enumerate(blocks):
        for x in block:
            if not 0 <= x < points:
                raise StructureError(f"block {i} contains point {x} outside 0..{points - 1}")
            h[i, x] = 1
    return as_incidence(h)


def to_blocks(h) -> list[list[int]]:
    return [np.flatnonzero(row).tolist() for row in as_incidence(h)]


@dataclass(frozen=True)
class RLambdaParams:
    r: int
    lam: int


@dataclass(frozen=True)
class GddParams:
    """Parameters of a group divisible design.

    ``lambda1`` is None when every group is a singleton (no within-group pair).
    """

    lambda1: int | None
    lambda2: int
    r: int
    k_set: frozenset
    m: int
    g: int

    @property
    def k(self) -> int:
        if len(self.k_set) != 1:
            raise StructureError(f"block sizes are not constant: {sorted(self.k_set)}")
        return next(iter(self.k_set))


class GroupedDesign:
    """An incidence matrix with its points partitioned into groups.

    ``groups[i][j]`` is the column of the point with group ``i`` and
    subscript ``j``.
    """

    def __init__(self, incidence, groups):
        self.incidence = as_incidence(incidence)
        self.groups = tuple(tuple(int(x) for x in cell) for cell in groups)
        flat = [x for cell in self.groups for x in cell]
        v = self.incidence.shape[1]
        if sorted(flat) != list(range(v)):
            raise StructureError("groups must partition the points 0..v-1")
        if any(not cell for cell in self.groups):
            raise StructureError("groups must be non-empty")

    @property
    def m(self) -> int:
        return len(self.groups)

    @property
    def g(self) -> int:
        return len(self.groups[0])

    @property
    def v(self) -> int:
        return self.incidence.shape[1]

    @property
    def N(self) -> int:
        return self.incidence.shape[0]

    def group_of(self) -> np.ndarray:
        """Array mapping each point to the index of its group."""
        out = np.empty(self.v, dtype=np.int64)
        for i, cell in enumerate(self.groups):
            out[list(cell)] = i
        return out

    def __repr__(self):
        return f"GroupedDesign(N={self.N}, v={self.v}, m={self.m}, g={self.g})"


@dataclass(frozen=True)
class DifferenceMatrix:
    """A ``(b, s; eta)`` difference matrix.

    ``entries`` holds element indices into ``group.elements``; shape is
    ``(eta * b, s)``.
    """

    group: FiniteGroup
    entries: np.ndarray
    eta: int

    @property
    def s(self) -> int:
        return self.entries.shape[1]

    @property
    def b(self) -> int:
        return self.group.order

    def element_rows(self) -> list[list[tuple]]:
        els = self.group.elements
        return [[els[i] for i in row] for row in self.entries]

    @classmethod
    def from_elements(cls, group: FiniteGroup, rows) -> "DifferenceMatrix":
        """Build and verify a difference matrix from rows of group elements."""
        entries = np.array([[group.index(x) for x in row] for row in rows], dtype=np.int64)
        eta = verify_difference_matrix(entries, group)
        return cls(group, entries, eta)


def _first_mismatch(mask):
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def verify_r_lambda(h) -> RLambdaParams:
    """Return ``(r, lambda)`` if ``h`` is an (r, lambda)-design.

    Raises VerificationError naming the first point or pair at fault.
    """
    h = as_incidence(h)
    v = h.shape[1]
    if v < 2:
        raise DegenerateError("an (r, lambda)-design needs at least 2 points")
    gram = h.T @ h
    reps = np.diag(gram)
    r = int(reps[0])
    bad = _first_mismatch(reps != r)
    if bad is not None:
        x = bad[0]
        raise VerificationError(
            f"point {x} lies in {reps[x]} blocks, point 0 in {r}",
            {"kind": "replication", "point": x, "expected": r, "found": int(reps[x])},
        )
    lam = int(gram[0, 1])
    off = ~np.eye(v, dtype=bool)
    bad = _first_mismatch(np.triu(off & (gram != lam)))
    if bad is not None:
        x, y = bad
        raise VerificationError(
            f"points {x},{y} lie together in {gram[x, y]} blocks, expected {lam}",
            {"kind": "concurrence", "pair": [x, y], "expected": lam, "found": int(gram[x, y])},
        )
    return RLambdaParams(r, lam)


def verify_gdd(d: GroupedDesign) -> GddParams:
    """Return the GDD parameters of ``d`` or raise VerificationError."""
    sizes = {len(cell) for cell in d.groups}
    if len(sizes) != 1:
        raise StructureError(f"groups have unequal sizes {sorted(sizes)}")
    if d.m < 2:
        raise DegenerateError("a single group has no cross-group pairs; lambda2 is undefined")
    h = d.incidence
    gram = h.T @ h
    reps = np.diag(gram)
    r = int(reps[0])
    bad = _first_mismatch(reps != r)
    if bad is not None:
        x = bad[0]
        raise VerificationError(
            f"point {x} lies in {reps[x]} blocks, point 0 in {r}",
            {"kind": "replication", "point": x, "expected": r, "found": int(reps[x])},
        )
    gid = d.group_of()
    same = (gid[:, None] == gid[None, :]) & ~np.eye(d.v, dtype=bool)
    cross = gid[:, None] != gid[None, :]

    lambda1 = None
    if d.g > 1:
        first = _first_mismatch(np.triu(same))
        lambda1 = int(gram[first])
        bad = _first_mismatch(np.triu(same & (gram != lambda1)))
        if bad is not None:
            raise VerificationError(
                f"same-group points {bad[0]},{bad[1]} meet {gram[bad]} times, expected {lambda1}",
                {"kind": "lambda1", "pair": list(bad), "expected": lambda1, "found": int(gram[bad])},
            )
    first = _first_mismatch(np.triu(cross))
    lambda2 = int(gram[first])
    bad = _first_mismatch(np.triu(cross & (gram != lambda2)))
    if bad is not None:
        raise VerificationError(
            f"cross-group points {bad[0]},{bad[1]} meet {gram[bad]} times, expected {lambda2}",
            {"kind": "lambda2", "pair": list(bad), "expected": lambda2, "found": int(gram[bad])},
        )
    k_set = frozenset(int(k) for k in h.sum(axis=1))
    return GddParams(lambda1, lambda2, r, k_set, d.m, d.g)


def verify_difference_matrix(entries, group: FiniteGroup) -> int:
    """Return eta if ``entries`` (element indices) form a (b, s; eta)-DM over ``group``."""
    d = np.asarray(entries, dtype=np.int64)
    b = group.order
    if d.ndim != 2:
        raise StructureError("difference matrix must be 2-d")
    rows, s = d.shape
    if s < 2:
        raise DegenerateError("a difference matrix needs at least 2 columns")
    if rows == 0 or rows % b:
        raise StructureError(f"row count {rows} is not a positive multiple of |group| = {b}")
    if d.min() < 0 or d.max() >= b:
        raise StructureError("difference matrix entry outside the group")
    eta = rows // b
    sub = group.sub_table
    for i, j in itertools.combinations(range(s), 2):
        counts = np.bincount(sub[d[:, i], d[:, j]], minlength=b)
        bad = _first_mismatch(counts != eta)
        if bad is not None:
            x = bad[0]
            raise VerificationError(
                f"columns {i},{j}: difference {group.elements[x]} occurs {counts[x]} times, "
                f"expected {eta}",
                {
                    "kind": "difference",
                    "columns": [i, j],
                    "element": list(group.elements[x]),
                    "expected": eta,
                    "found": int(counts[x]),
                },
            )
    return eta


def shift_dm_column(dm: DifferenceMatrix, col: int, c) -> DifferenceMatrix:
    """Add the group element ``c`` to every entry of column ``col``."""
    if not 0 <= col < dm.s:
        raise StructureError(f"column {col} out of range for s={dm.s}")
    ci = dm.group.index(c)
    entries = dm.entries.copy()
    entries[:, col] = dm.group.add_table[entries[:, col], ci]
    return DifferenceMatrix(dm.group, entries, dm.eta)


def shift_dm_columns(dm: DifferenceMatrix, shifts) -> DifferenceMatrix:
    """Shift every column ``j`` by ``shifts[j]``."""
    if len(shifts) != dm.s:
        raise StructureError(f"need {dm.s} shifts, got {len(shifts)}")
    idx = np.array([dm.group.index(c) for c in shifts], dtype=np.int64)
    entries = dm.group.add_table[dm.entries, idx[None, :]]
    return DifferenceMatrix(dm.group, np.array(entries), dm.eta)


def mult_table_dm(f: FiniteField) -> DifferenceMatrix:
    """The ``(q, q; 1)`` difference matrix ``D[i][j] = a_i * a_j`` over the additive group.

    Rows and columns follow ``f.elements``; entries index the additive group.
    """
    if f.q > SIZE_CAP:
        raise StructureError(f"field order {f.q} exceeds cap {SIZE_CAP}")
    group = f.additive_group
    to_group = np.array([group.index(x) for x in f.elements], dtype=np.int64)
    entries = to_group[f.mul_table]
    return DifferenceMatrix(group, entries, 1)


def develop_difference_set(base, n: int) -> np.ndarray:
    """Blocks ``base + t (mod n)`` for ``t = 0 .. n-1``; row ``t`` is the t-th translate."""
    base = sorted({int(x) % n for x in base})
    h = np.zeros((n, n), dtype=np.int64)
    for t in range(n):
        h[t, [(x + t) % n for x in base]] = 1
    return h


def _design_params(h, groups):
    if groups is None:
        return verify_r_lambda(h)
    return verify_gdd(GroupedDesign(h, groups))


def complement(h, groups=None):
    """Complement every block.

    Returns ``(complement_matrix, predicted_params)``.  The prediction
    (``r' = N - r``, ``lambda' = N - 2r + lambda``) is re-verified against the
    complemented design before returning.
    """
    h = as_incidence(h)
    params = _design_params(h, groups)
    N, v = h.shape
    hc = 1 - h
    if (hc.sum(axis=1) == 0).any():
        rows = np.flatnonzero(hc.sum(axis=1) == 0).tolist()
        warnings.warn(f"blocks {rows} equal the full point set; their complements are empty")
    if groups is None:
        predicted = RLambdaParams(N - params.r, N - 2 * params.r + params.lam)
    else:
        lambda1 = None if params.lambda1 is None else N - 2 * params.r + params.lambda1
        predicted = GddParams(
            lambda1,
            N - 2 * params.r + params.lambda2,
            N - params.r,
            frozenset(v - k for k in params.k_set),
            params.m,
            params.g,
        )
    found = _design_params(hc, groups)
    if found != predicted:
        raise ConstructionError(f"complement parameters {found} differ from prediction {predicted}")
    return hc, predicted


def _affine_points(f: FiniteField, n: int):
    return list(itertools.product(range(f.q), repeat=n))


def ag_hyperplane_gdd(n: int, q: int) -> GroupedDesign:
    """Points of AG(n, q); groups are the hyperplanes ``x_0 = c``; blocks are all other hyperplanes.

    Points are enumerated as coordinate tuples of field-element indices,
    lexicographically, so each group occupies consecutive columns.
    Hyperplanes ``a . x = c`` use normals whose first nonzero entry is 1.
    """
    if n < 2:
        raise StructureError("AG(n, q) hyperplane GDD needs n >= 2")
    if prime_power(q) is None:
        raise StructureError(f"{q} is not a prime power")
    if q**n > SIZE_CAP:
        raise StructureError(f"q^n = {q**n} exceeds cap {SIZE_CAP}")
    f = field_of_order(q)
    mul, add = f.mul_table, _add_table_int(f)
    points = np.array(_affine_points(f, n), dtype=np.int64)

    def dot(normal):
        acc = np.zeros(len(points), dtype=np.int64)
        for i, a in enumerate(normal):
            acc = add[acc, mul[a, points[:, i]]]
        return acc

    class_normal = (1,) + (0,) * (n - 1)
    rows = []
    for normal in itertools.product(range(q), repeat=n):
        nz = [a for a in normal if a]
        if not nz or nz[0] != 1 or normal == class_normal:
            continue
        values = dot(normal)
        for c in range(q):
            rows.append((values == c).astype(np.int64))
    groups = [np.flatnonzero(points[:, 0] == c).tolist() for c in range(q)]
    return GroupedDesign(np.array(rows), groups)


def _add_table_int(f: FiniteField) -> np.ndarray:
    """Field addition on the integer encoding used by ``f.elements``."""
    q = f.q
    table = np.empty((q, q), dtype=np.int64)
    els = f.elements
    for i in range(q):
        for j in range(q):
            table[i, j] = f.to_int(f.add(els[i], els[j]))
    return table


def transversal_design(q: int) -> GroupedDesign:
    """GD_{0,1}(q+1, q; q(q+1)): q+1 groups of q points, q^2 blocks, each a transversal.

    Group ``m < q`` holds points ``(m, y)``; group ``q`` holds ``(inf, a)``.
    Block ``(a, b)`` is ``{(m, a m + b) : m in F_q} + {(inf, a)}``.
    """
    if prime_power(q) is None:
        raise StructureError(f"{q} is not a prime power")
    if q * (q + 1) > SIZE_CAP:
        raise StructureError(f"transversal design on {q * (q + 1)} points exceeds cap")
    f = field_of_order(q)
    mul, add = f.mul_table, _add_table_int(f)
    h = np.zeros((q * q, q * (q + 1)), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            row = a * q + b
            for m in range(q):
                h[row, m * q + add[mul[a, m], b]] = 1
            h[row, q * q + a] = 1
    groups = [list(range(i * q, (i + 1) * q)) for i in range(q + 1)]
    return GroupedDesign(h, groups)


def bose_connor_check(params: GddParams, N: int, v: int) -> bool:
    """Check ``kN = vr``, ``(g-1) l1 + g(m-1) l2 = r(k-1)`` and ``r >= l1, l2``."""
    if len(params.k_set) != 1:
        raise StructureError(
            f"Bose-Connor relations need constant block size, got {sorted(params.k_set)}"
        )
    k, g, m, r = params.k, params.g, params.m, params.r
    l1 = params.lambda1 or 0
    within = (g - 1) * l1
    return (
        k * N == v * r
        and within + g * (m - 1) * params.lambda2 == r * (k - 1)
        and r >= l1
        and r >= params.lambda2
    )
