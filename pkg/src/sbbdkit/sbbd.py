"""Spanning bipartite block designs: construction, verification and repair.

A design matrix ``X`` has ``N`` rows (SB-blocks) and ``v1 * v2`` columns
ordered ``e_11, ..., e_1v2, e_21, ...``; it splits into ``v1`` slabs of
width ``v2``.  All arithmetic here is exact integer arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteGroup, prime_power
from .errors import (
    ConstructionError,
    SearchFailure,
    StructureError,
    VerificationError,
)
from .incidence import (
    DifferenceMatrix,
    GroupedDesign,
    as_incidence,
    shift_dm_columns,
    verify_difference_matrix,
    verify_gdd,
    verify_r_lambda,
)

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class TileSet:
    """Row translates of a seed incidence matrix indexed by a group.

    ``perm[y, i]`` is the seed row placed at row ``i`` of tile ``y``, i.e.
    ``row_map[x_i + y]``; ``tiles[y]`` is the tile matrix itself.
    """

    group: FiniteGroup
    source: np.ndarray
    row_map: np.ndarray
    perm: np.ndarray

    @property
    def tiles(self) -> np.ndarray:
        return self.source[self.perm]

    def tile(self, y) -> np.ndarray:
        return self.source[self.perm[self.group.index(y)]]

    @property
    def b(self) -> int:
        return self.source.shape[0]

    @property
    def v(self) -> int:
        return self.source.shape[1]


def tiles_from_incidence(h, group: FiniteGroup, row_map=None) -> TileSet:
    """Build ``T_y`` with row ``i`` equal to seed row ``row_map[x_i + y]``.

    ``row_map[i]`` is the seed row labelled by ``group.elements[i]``; the
    default labels row ``i`` with ``elements[i]``.
    """
    h = as_incidence(h)
    b = h.shape[0]
    if group.order != b:
        raise StructureError(f"group order {group.order} differs from block count {b}")
    if row_map is None:
        row_map = np.arange(b, dtype=np.int64)
    row_map = np.asarray(row_map, dtype=np.int64)
    if sorted(row_map.tolist()) != list(range(b)):
        raise StructureError("row_map must be a bijection onto the rows")
    if row_map[0] != 0:
        raise StructureError("the identity element must label row 0")
    perm = row_map[group.add_table.T]
    return TileSet(group, h, row_map, perm)


@dataclass(frozen=True)
class DesignMatrix:
    entries: np.ndarray
    v1: int
    v2: int

    def __post_init__(self):
        x = as_incidence(self.entries)
        if x.shape[1] != self.v1 * self.v2:
            raise StructureError(
                f"design matrix has {x.shape[1]} columns, expected v1*v2 = {self.v1 * self.v2}"
            )
        object.__setattr__(self, "entries", x)

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def slab(self, i: int) -> np.ndarray:
        return self.entries[:, i * self.v2:(i + 1) * self.v2]

    def slabs(self) -> np.ndarray:
        """Shape ``(N, v1, v2)`` view of the entries."""
        return self.entries.reshape(self.N, self.v1, self.v2)


def paste(tiles: TileSet, dm: DifferenceMatrix) -> DesignMatrix:
    """Block matrix whose block ``(p, q)`` is the tile indexed by ``dm`` entry ``(p, q)``."""
    if dm.group != tiles.group:
        raise StructureError(f"difference matrix is over {dm.group}, tiles over {tiles.group}")
    blocks = tiles.tiles[dm.entries]  # (eta*b, s, b, v)
    rows, s, b, v = blocks.shape
    x = blocks.transpose(0, 2, 1, 3).reshape(rows * b, s * v)
    return DesignMatrix(x, s, v)


def _row_indices(tiles: TileSet, dm: DifferenceMatrix) -> np.ndarray:
    """Seed-row index used by each SB-block in each slab, shape ``(N, s)``."""
    idx = tiles.perm[dm.entries]  # (eta*b, s, b)
    return idx.transpose(0, 2, 1).reshape(-1, dm.s)


def information_matrix(x) -> np.ndarray:
    entries = x.entries if isinstance(x, DesignMatrix) else as_incidence(x)
    return entries.T @ entries


@dataclass(frozen=True)
class SbbdParams:
    mu: int
    lambda12: int
    lambda21: int
    lambda22: int

    def as_tuple(self):
        return (self.mu, self.lambda12, self.lambda21, self.lambda22)

    @property
    def gdd_type(self) -> bool:
        return self.lambda21 == self.lambda22


def cs2_matrix(params: SbbdParams, v1: int, v2: int) -> np.ndarray:
    """``I (x) A + (J - I) (x) B`` with A, B completely symmetric of side v2."""
    i2, j2 = np.eye(v2, dtype=np.int64), np.ones((v2, v2), dtype=np.int64)
    i1, j1 = np.eye(v1, dtype=np.int64), np.ones((v1, v1), dtype=np.int64)
    a = params.mu * i2 + params.lambda12 * (j2 - i2)
    b = params.lambda21 * i2 + params.lambda22 * (j2 - i2)
    return np.kron(i1, a) + np.kron(j1 - i1, b)


def classify_information_matrix(m, v1: int, v2: int) -> SbbdParams:
    """Read ``(mu, l12, l21, l22)`` off a doubly completely symmetric matrix.

    Raises VerificationError naming the first entry (row-major) that breaks
    the pattern.
    """
    m = np.asarray(m)
    n = v1 * v2
    if m.shape != (n, n):
        raise StructureError(f"matrix shape {m.shape} does not match v1*v2 = {n}")
    if v1 < 2 or v2 < 2:
        raise StructureError("classification needs v1 >= 2 and v2 >= 2")
    params = SbbdParams(int(m[0, 0]), int(m[0, 1]), int(m[0, v2]), int(m[0, v2 + 1]))
    expected = cs2_matrix(params, v1, v2)
    bad = np.argwhere(m != expected)
    if len(bad):
        i, j = (int(t) for t in bad[0])
        raise VerificationError(
            f"not doubly completely symmetric: entry ({i},{j}) is {m[i, j]}, "
            f"pattern from row 0 requires {expected[i, j]}",
            {"kind": "pattern", "entry": [i, j], "expected": int(expected[i, j]),
             "found": int(m[i, j])},
        )
    return params


@dataclass
class SpanningReport:
    """``zero_rows`` lists ``(row, slab)``; ``zero_cells`` lists ``(row, subscript)``."""

    zero_rows: list = field(default_factory=list)
    zero_cells: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.zero_rows and not self.zero_cells

    def __bool__(self):
        return self.ok

    def violations(self) -> list[dict]:
        out = [{"type": "zero_row", "row": r, "slab": i} for r, i in self.zero_rows]
        out += [{"type": "missing_subscript", "row": r, "subscript": j}
                for r, j in self.zero_cells]
        return out

    def missing_by_row(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for r, j in self.zero_cells:
            out.setdefault(r, []).append(j)
        return out


def check_spanning(x: DesignMatrix) -> SpanningReport:
    """No slab may contain a zero row and the slab sum may contain no zero."""
    slabs = x.slabs()
    zero_rows = [tuple(int(t) for t in rc) for rc in np.argwhere(slabs.sum(axis=2) == 0)]
    zero_cells = [tuple(int(t) for t in rc) for rc in np.argwhere(slabs.sum(axis=1) == 0)]
    return SpanningReport(zero_rows, zero_cells)


@dataclass
class SbbdResult:
    design: DesignMatrix
    params: SbbdParams | None
    spanning: SpanningReport
    info_matrix: np.ndarray
    classification_error: dict | None = None
    predicted: SbbdParams | None = None
    discrepancies: list = field(default_factory=list)
    predicates: dict = field(default_factory=dict)
    repair: dict | None = None

    @property
    def label(self) -> str:
        if self.params is None:
            return "not an SBBD"
        return "SBBD" if self.spanning.ok else "SBBD*"

    @property
    def v1(self) -> int:
        return self.design.v1

    @property
    def v2(self) -> int:
        return self.design.v2

    @property
    def N(self) -> int:
        return self.design.N

    def __str__(self):
        lam = self.params.as_tuple() if self.params else None
        return f"{self.label}({self.v1},{self.v2},{self.N}; {lam})"

    def to_json(self, matrix_file=None) -> dict:
        return {
            "label": self.label,
            "v1": self.v1,
            "v2": self.v2,
            "N": self.N,
            "lambda": list(self.params.as_tuple()) if self.params else None,
            "spanning": self.spanning.ok,
            "violations": self.spanning.violations(),
            "matrix_file": matrix_file,
            "classification_error": self.classification_error,
            "predicted": list(self.predicted.as_tuple()) if self.predicted else None,
            "discrepancies": self.discrepancies,
            "predicates": self.predicates,
            "repair": self.repair,
        }


def verify_sbbd(x: DesignMatrix) -> SbbdResult:
    info = information_matrix(x)
    try:
        params = classify_information_matrix(info, x.v1, x.v2)
        err = None
    except VerificationError as exc:
        params, err = None, exc.violation
    except StructureError as exc:
        params, err = None, {"kind": "unsupported", "message": str(exc)}
    return SbbdResult(x, params, check_spanning(x), info, classification_error=err)


def _distinct_row_counts(h, row_idx) -> np.ndarray:
    """Number of distinct seed-row contents used by each SB-block."""
    _, content_id = np.unique(h, axis=0, return_inverse=True)
    ids = np.sort(np.asarray(content_id).reshape(-1)[row_idx], axis=1)
    return 1 + (np.diff(ids, axis=1) != 0).sum(axis=1)


def construct_single(h, dm: DifferenceMatrix, row_map=None, repair_spanning=False,
                     budget=DEFAULT_BUDGET) -> SbbdResult:
    """Paste the tiles of an (r, lambda)-design onto a ``(b, s; eta)`` difference matrix.

    The result must classify as ``(eta b r, eta b lambda, eta r^2, eta r^2)``;
    anything else raises ConstructionError.  With ``repair_spanning`` a
    failing spanning check triggers a column-shift search.
    """
    h = as_incidence(h)
    rl = verify_r_lambda(h)
    b = h.shape[0]
    if dm.group.order != b:
        raise StructureError(f"difference matrix group has order {dm.group.order}, design has {b} blocks")
    eta = verify_difference_matrix(dm.entries, dm.group)
    tiles = tiles_from_incidence(h, dm.group, row_map)
    repair = None
    x = paste(tiles, dm)
    result = verify_sbbd(x)
    if repair_spanning and not result.spanning.ok:
        shifts = repair_spanning_dm(tiles, dm, budget=budget)
        dm = shift_dm_columns(dm, shifts)
        x = paste(tiles, dm)
        result = verify_sbbd(x)
        repair = {"column_shifts": [list(c) for c in shifts]}

    predicted = SbbdParams(eta * b * rl.r, eta * b * rl.lam, eta * rl.r**2, eta * rl.r**2)
    if result.params != predicted:
        raise ConstructionError(f"pasted design classifies as {result.params}, expected {predicted}")
    result.predicted = predicted
    result.repair = repair
    distinct = _distinct_row_counts(h, _row_indices(tiles, dm))
    result.predicates = {
        "s_gt_b_minus_r": bool(dm.s > b - rl.r),
        "distinct_rows_at_least_b_minus_r_plus_1": bool((distinct >= b - rl.r + 1).all()),
        "min_distinct_rows": int(distinct.min()),
        "spanning_direct": result.spanning.ok,
    }
    return result


# -- spanning repair by difference-matrix column shifts ---------------------

def _shift_search(parts, budget):
    """Joint column-shift search over stacked ``(tiles, dm)`` parts.

    Variables are ordered part by part, column by column; the first column of
    each part is pinned to the identity since a common shift of all columns
    only permutes the SB-blocks of that part.
    """
    s = parts[0][1].s
    for tiles, _ in parts:
        if (tiles.source.sum(axis=1) == 0).any():
            raise SearchFailure("the seed design has an empty block; every slab keeps a zero row")
    kmax = max(int(t.source.sum(axis=1).max()) for t, _ in parts)
    # cover[p][j][c]: (rows_p, v) coverage contributed by column j of part p shifted by c
    covers = []
    for tiles, dm in parts:
        g = dm.group
        tile_rows = tiles.tiles.astype(bool)
        per_col = []
        for j in range(s):
            shifted = g.add_table[dm.entries[:, j]]  # (eta*b, |g|)
            per_col.append([tile_rows[shifted[:, c]].reshape(-1, tiles.v) for c in range(g.order)])
        covers.append(per_col)

    variables = [(p, j) for p in range(len(parts)) for j in range(s)]
    offsets = np.cumsum([0] + [len(c[0][0]) for c in covers])
    total_rows, v = offsets[-1], parts[0][0].v
    cov = np.zeros((total_rows, v), dtype=bool)
    choice = [0] * len(variables)
    nodes = 0
    best = {"covered_cells": -1}

    def remaining_after(pos):
        # columns still unassigned within each part after position pos
        return [sum(1 for q, (pp, _) in enumerate(variables) if q > pos and pp == p)
                for p in range(len(parts))]

    rem_table = [remaining_after(pos) for pos in range(len(variables))]

    def dfs(pos):
        nonlocal cov, nodes
        if cov.all():
            return True
        if pos == len(variables):
            return False
        p, j = variables[pos]
        lo, hi = offsets[p], offsets[p + 1]
        opts = [0] if j == 0 else range(parts[p][1].group.order)
        gains = [(-int((covers[p][j][c] & ~cov[lo:hi]).sum()), c) for c in opts]
        for _, c in sorted(gains):
            nodes += 1
            if nodes > budget:
                raise SearchFailure(f"shift search exceeded budget of {budget} nodes", best)
            saved = cov[lo:hi].copy()
            cov[lo:hi] |= covers[p][j][c]
            covered = int(cov.sum())
            if covered > best["covered_cells"]:
                best.update(covered_cells=covered, total_cells=int(cov.size),
                            partial=[list(choice[:pos]) + [c]])
            rem = rem_table[pos]
            feasible = all(
                int((~cov[offsets[q]:offsets[q + 1]]).sum(axis=1).max(initial=0)) <= rem[q] * kmax
                for q in range(len(parts))
            )
            choice[pos] = c
            if feasible and dfs(pos + 1):
                return True
            cov[lo:hi] = saved
            choice[pos] = 0
        return False

    if not dfs(0):
        raise SearchFailure("no column shifts make the design spanning", best)
    shifts = []
    for p, (_, dm) in enumerate(parts):
        els = dm.group.elements
        shifts.append([els[choice[p * s + j]] for j in range(s)])
    return shifts, nodes


def repair_spanning_dm(tiles: TileSet, dm: DifferenceMatrix, budget=DEFAULT_BUDGET) -> list:
    """Column shifts ``(c_1, ..., c_s)`` that make ``paste(tiles, dm)`` spanning.

    Returns identity shifts when the design already spans.  Columns are
    assigned left to right, each trying the shift that newly covers the most
    (row, point) cells first, with backtracking.  Raises SearchFailure.
    """
    if check_spanning(paste(tiles, dm)).ok:
        return [dm.group.identity] * dm.s
    shifts, _ = _shift_search([(tiles, dm)], budget)
    return shifts[0]


def repair_spanning_decomposed(tile_sets, dms, budget=DEFAULT_BUDGET) -> list[list]:
    """Per-part column shifts making the stacked decomposed design spanning."""
    parts = list(zip(tile_sets, dms))
    x = DesignMatrix(np.vstack([paste(t, d).entries for t, d in parts]), dms[0].s, tile_sets[0].v)
    if check_spanning(x).ok:
        return [[d.group.identity] * d.s for d in dms]
    shifts, _ = _shift_search(parts, budget)
    return shifts


# -- decomposition ----------------------------------------------------------

@dataclass(frozen=True)
class BlockPartition:
    cells: tuple[tuple[int, ...], ...]
    replications: tuple[int, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)


def _cell_replication(h_cell) -> int | None:
    reps = h_cell.sum(axis=0)
    return int(reps[0]) if (reps == reps[0]).all() else None


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class _Budget:
    def __init__(self, limit):
        self.limit, self.used = limit, 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise SearchFailure(f"partition search exceeded budget of {self.limit} nodes")


def _equitable_search(h, sizes, reps, budget):
    b, v = h.shape
    m = len(sizes)
    counts = np.zeros((m, v), dtype=np.int64)
    cap = list(sizes)
    target = np.array(reps, dtype=np.int64)[:, None]
    assign = [[] for _ in range(m)]
    kinds = [(sizes[i], reps[i]) for i in range(m)]

    def dfs(row):
        if row == b:
            return (counts == target).all()
        tried_empty = set()
        for c in range(m):
            if cap[c] == 0:
                continue
            if not assign[c]:
                if kinds[c] in tried_empty:
                    continue
                tried_empty.add(kinds[c])
            new = counts[c] + h[row]
            if (new > reps[c]).any():
                continue
            budget.tick()
            counts[c] = new
            cap[c] -= 1
            assign[c].append(row)
            need_ok = all(int((reps[i] - counts[i]).max()) <= cap[i] for i in range(m))
            if need_ok and dfs(row + 1):
                return True
            assign[c].pop()
            cap[c] += 1
            counts[c] -= h[row]
        return False

    if dfs(0):
        return BlockPartition(tuple(tuple(a) for a in assign), tuple(int(r) for r in reps))
    return None


def _partition_with_sizes(h, r, sizes, budget):
    b, v = h.shape
    ks = set(h.sum(axis=1).tolist())
    if len(ks) == 1:
        k = ks.pop()
        if any(size * k % v for size in sizes):
            return None
        candidates = [tuple(size * k // v for size in sizes)]
    else:
        candidates = _compositions(r, len(sizes))
    for reps in candidates:
        if any(rep < 1 or rep > size for rep, size in zip(reps, sizes)):
            continue
        found = _equitable_search(h, sizes, reps, budget)
        if found is not None:
            return found
    return None


def _prime_power_splits(b, v):
    """Multisets of prime powers summing to b, nearest to v first."""
    pps = [n for n in range(2, b + 1) if prime_power(n)]
    seen = set()
    for d in range(0, b + 1):
        allowed = sorted((n for n in pps if abs(n - v) <= d), reverse=True)
        found = []

        def rec(rest, start, acc):
            if rest == 0:
                found.append(tuple(acc))
                return
            for i in range(start, len(allowed)):
                if allowed[i] <= rest:
                    rec(rest - allowed[i], i, acc + [allowed[i]])

        rec(b, 0, [])
        for split in sorted(found, key=lambda t: (len(t), [-x for x in t])):
            if split not in seen:
                seen.add(split)
                yield split


def partition_blocks(h, sizes="auto", budget=DEFAULT_BUDGET) -> BlockPartition:
    """Split the blocks into cells in which every point has constant replication.

    ``sizes`` is a list of cell sizes summing to b, or "auto" to try prime
    power sizes nearest to v first.  Raises SearchFailure when nothing is
    found; adding the full block to the design is the usual fallback.
    """
    h = as_incidence(h)
    r = verify_r_lambda(h).r
    b, v = h.shape
    tracker = _Budget(budget)
    if sizes == "auto":
        try:
            for split in _prime_power_splits(b, v):
                found = _partition_with_sizes(h, r, split, tracker)
                if found is not None:
                    return found
        except SearchFailure as exc:
            raise SearchFailure(f"{exc}; consider adding the full block", {"nodes": tracker.used})
        raise SearchFailure("no prime-power equitable partition; consider adding the full block")
    sizes = [int(x) for x in sizes]
    if sum(sizes) != b or any(x < 1 for x in sizes):
        raise StructureError(f"cell sizes {sizes} must be positive and sum to b = {b}")
    found = _partition_with_sizes(h, r, sizes, tracker)
    if found is None:
        raise SearchFailure(f"no equitable partition with cell sizes {sizes}",
                            {"nodes": tracker.used})
    return found


def construct_decomposed(h, partition: BlockPartition, dms, row_maps=None,
                         repair_spanning=False, budget=DEFAULT_BUDGET) -> SbbdResult:
    """Paste each cell's tiles onto its own difference matrix and stack the results.

    The information matrix is computed directly.  ``result.predicted`` holds
    ``(eta r b, eta lambda b, eta sum r_i^2, eta sum r_i^2)`` and
    ``result.discrepancies`` lists every component where the computed value
    differs from it.
    """
    h = as_incidence(h)
    rl = verify_r_lambda(h)
    b, v = h.shape
    cells = partition.cells
    if sorted(i for c in cells for i in c) != list(range(b)):
        raise StructureError("partition cells must cover every block exactly once")
    if len(dms) != len(cells):
        raise StructureError(f"{len(cells)} cells but {len(dms)} difference matrices")
    if len({d.s for d in dms}) != 1:
        raise StructureError(f"difference matrices disagree on s: {[d.s for d in dms]}")
    etas = [verify_difference_matrix(d.entries, d.group) for d in dms]
    if len(set(etas)) != 1:
        raise StructureError(f"difference matrices disagree on eta: {etas}")
    eta = etas[0]
    row_maps = row_maps or [None] * len(cells)

    reps, tile_sets = [], []
    for i, (cell, dm) in enumerate(zip(cells, dms)):
        hi = h[list(cell)]
        rep = _cell_replication(hi)
        if not rep:
            raise StructureError(f"cell {i} is not equitable: point replications {hi.sum(axis=0)}")
        if dm.group.order != len(cell):
            raise StructureError(f"cell {i} has {len(cell)} blocks but its DM group has order {dm.group.order}")
        reps.append(rep)
        tile_sets.append(tiles_from_incidence(hi, dm.group, row_maps[i]))

    repair = None
    if repair_spanning:
        shifts = repair_spanning_decomposed(tile_sets, dms, budget=budget)
        if any(c != d.group.identity for sh, d in zip(shifts, dms) for c in sh):
            dms = [shift_dm_columns(d, sh) for d, sh in zip(dms, shifts)]
            repair = {"column_shifts": [[list(c) for c in sh] for sh in shifts]}

    x = DesignMatrix(np.vstack([paste(t, d).entries for t, d in zip(tile_sets, dms)]), dms[0].s, v)
    result = verify_sbbd(x)
    cross = eta * sum(r * r for r in reps)
    info = result.info_matrix
    s = x.v1
    for i, j in itertools.permutations(range(s), 2):
        block = info[i * v:(i + 1) * v, j * v:(j + 1) * v]
        if (block != cross).any():
            raise ConstructionError(f"off-diagonal block ({i},{j}) is not {cross} J")

    predicted = SbbdParams(eta * rl.r * b, eta * rl.lam * b, cross, cross)
    computed = {
        "mu": int(info[0, 0]),
        "lambda12": int(info[0, 1]),
        "lambda21": int(info[0, v]),
        "lambda22": int(info[0, v + 1]),
    }
    result.predicted = predicted
    result.discrepancies = [
        {"component": name, "theorem": getattr(predicted, name), "computed": value}
        for name, value in computed.items()
        if getattr(predicted, name) != value
    ]
    sizes = partition.sizes
    result.predicates = {
        "cell_sizes": list(sizes),
        "cell_replications": reps,
        "equal_cells": len(set(sizes)) == 1,
        "equal_cell_mu": eta * rl.r * sizes[0] if len(set(sizes)) == 1 else None,
        "spanning_direct": result.spanning.ok,
    }
    result.repair = repair
    return result


# -- group divisible designs ------------------------------------------------

def gdd_design_matrix(d: GroupedDesign) -> DesignMatrix:
    """Reorder columns so that point ``groups[i][j]`` becomes edge ``e_ij``."""
    order = [x for cell in d.groups for x in cell]
    return DesignMatrix(d.incidence[:, order], d.m, d.g)


def gdd_to_sbbd(d: GroupedDesign) -> SbbdResult:
    """Read each GDD block as an SB-block; the result has ``Lambda = (r, l1, l2, l2)``."""
    p = verify_gdd(d)
    x = gdd_design_matrix(d)
    result = verify_sbbd(x)
    predicted = SbbdParams(p.r, p.lambda1 if p.lambda1 is not None else 0, p.lambda2, p.lambda2)
    if d.g > 1 and result.params != predicted:
        raise ConstructionError(f"GDD read as SBBD gives {result.params}, expected {predicted}")
    result.predicted = predicted
    gid = d.group_of()
    meets_all = all(
        len(set(gid[np.flatnonzero(row)].tolist())) == d.m for row in d.incidence
    )
    result.predicates = {
        "blocks_meet_every_group": meets_all,
        "subscripts_covered": not result.spanning.zero_cells,
    }
    return result


def apply_group_permutations(d: GroupedDesign, perms) -> GroupedDesign:
    """Move the point with subscript ``j`` in group ``i`` to subscript ``perms[i][j]``."""
    if len(perms) != d.m:
        raise StructureError(f"need {d.m} permutations, got {len(perms)}")
    new = np.zeros_like(d.incidence)
    for cell, perm in zip(d.groups, perms):
        if sorted(perm) != list(range(len(cell))):
            raise StructureError(f"{perm} is not a permutation of 0..{len(cell) - 1}")
        for j, pj in enumerate(perm):
            new[:, cell[pj]] = d.incidence[:, cell[j]]
    return GroupedDesign(new, d.groups)


def repair_spanning_gdd(d: GroupedDesign, budget=DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Within-group relabelings after which every block covers every subscript.

    Group 0 keeps the identity (relabeling all groups alike changes nothing);
    later groups try permutations in lexicographic order, depth first, and
    the first success is returned.  Raises SearchFailure with the best
    coverage seen.
    """
    verify_gdd(d)
    g, m = d.g, d.m
    ident = tuple(range(g))
    # subs[i][B] = bitmask of subscripts of block B inside group i
    subs = []
    for cell in d.groups:
        cols = d.incidence[:, list(cell)]
        subs.append([sum(1 << j for j in np.flatnonzero(row)) for row in cols])
    N = d.N
    if any(subs[i][B] == 0 for i in range(m) for B in range(N)):
        raise StructureError("some block misses a whole group; permutations cannot repair that")
    full = (1 << g) - 1
    if all(_or_all(subs, B) == full for B in range(N)):
        return [ident] * m

    perm_list = list(itertools.permutations(range(g)))
    mapped = {}  # (mask, perm) -> mask, filled lazily

    def apply(mask, perm):
        key = (mask, perm)
        if key not in mapped:
            mapped[key] = sum(1 << perm[j] for j in range(g) if mask >> j & 1)
        return mapped[key]

    # upper bound on subscripts later groups can still add to each block
    tail = [[sum(bin(subs[t][B]).count("1") for t in range(i, m)) for B in range(N)]
            for i in range(m + 1)]
    chosen = [ident] * m
    nodes = 0
    best = {"covered_blocks": -1}

    def dfs(i, cov):
        nonlocal nodes
        if i == m:
            return all(c == full for c in cov)
        for perm in perm_list:
            nodes += 1
            if nodes > budget:
                raise SearchFailure(f"permutation search exceeded budget of {budget} nodes", best)
            new = [cov[B] | apply(subs[i][B], perm) for B in range(N)]
            done = sum(c == full for c in new)
            if done > best["covered_blocks"]:
                best.update(covered_blocks=done, total_blocks=N,
                            permutations=[list(p) for p in chosen[:i]] + [list(perm)])
            if all(g - bin(new[B]).count("1") <= tail[i + 1][B] for B in range(N)):
                chosen[i] = perm
                if dfs(i + 1, new):
                    return True
        chosen[i] = ident
        return False

    start = [subs[0][B] for B in range(N)]
    if not dfs(1, start):
        raise SearchFailure("no within-group permutations make every block spanning", best)
    return list(chosen)


def _or_all(subs, B):
    out = 0
    for row in subs:
        out |= row[B]
    return out
