"""Command-line front end.

Exit codes: 0 pass, 1 verdict failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .algebra import parse_field
from .catalog import find_entry, load_catalog
from .errors import (
    ConstructionError,
    DesignError,
    SearchFailure,
    StructureError,
    VerificationError,
)
from .incidence import (
    DifferenceMatrix,
    GroupedDesign,
    ag_hyperplane_gdd,
    bose_connor_check,
    complement,
    develop_difference_set,
    mult_table_dm,
    shift_dm_columns,
    transversal_design,
    verify_difference_matrix,
    verify_gdd,
    verify_r_lambda,
)
from .optimality import (
    cs2_eigenvalues,
    e_certificate,
    e_optimal_gdd,
    min_positive_eigenvalue,
    numeric_spectrum,
    spectra_agree,
)
from .sbbd import (
    DEFAULT_BUDGET,
    BlockPartition,
    DesignMatrix,
    apply_group_permutations,
    classify_information_matrix,
    construct_decomposed,
    construct_single,
    gdd_design_matrix,
    gdd_to_sbbd,
    information_matrix,
    partition_blocks,
    repair_spanning_gdd,
    verify_sbbd,
)

PASS, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, indent=1, default=_jsonable))
    else:
        print("\n".join(lines))


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (frozenset, set, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    raise TypeError(repr(obj))


def _gdd_payload(p):
    return {"lambda1": p.lambda1, "lambda2": p.lambda2, "r": p.r,
            "k": sorted(p.k_set), "m": p.m, "g": p.g}


def _dims(args, cols):
    v1, v2 = args.v1, args.v2
    if v1 is None and v2 is None:
        raise UsageError("--v1 or --v2 is required for a design matrix")
    if v1 is None:
        v1 = cols // v2
    if v2 is None:
        v2 = cols // v1
    if v1 * v2 != cols:
        raise UsageError(f"v1*v2 = {v1 * v2} does not match {cols} columns")
    return v1, v2


def _load_design_matrix(args) -> DesignMatrix:
    path = Path(args.input)
    if path.suffix == ".json":
        d = fileio.design_from_json(fileio.load_json(path))
        if not isinstance(d, GroupedDesign):
            raise UsageError("a JSON design needs 'groups' to be read as an SBBD")
        return gdd_design_matrix(d)
    x = fileio.read_matrix(path)
    return DesignMatrix(x, *_dims(args, x.shape[1]))


def _result_lines(result):
    lines = [str(result)]
    if result.params is None and result.classification_error:
        lines.append(f"classification: {result.classification_error}")
    missing = result.spanning.missing_by_row()
    for row, subs in list(missing.items())[:20]:
        lines.append(f"  block {row + 1}: missing subscript(s) {[j + 1 for j in subs]}")
    for row, slab in result.spanning.zero_rows[:20]:
        lines.append(f"  block {row + 1}: zero row in slab {slab + 1}")
    for d in result.discrepancies:
        lines.append(f"  theorem formula gives {d['component']}={d['theorem']}, computed {d['computed']}")
    for name, value in result.predicates.items():
        lines.append(f"  {name}: {value}")
    if result.repair:
        lines.append(f"  repair witness: {result.repair}")
    return lines


def cmd_verify(args) -> int:
    kind = args.kind
    if kind == "sbbd":
        result = verify_sbbd(_load_design_matrix(args))
        _emit(args, result.to_json(), _result_lines(result))
        return PASS if result.label == "SBBD" else FAIL

    data = fileio.load_json(args.input)
    try:
        if kind == "rlambda":
            p = verify_r_lambda(fileio.design_from_json(
                {k: v for k, v in data.items() if k != "groups"}))
            _emit(args, {"r": p.r, "lambda": p.lam}, [f"(r, lambda)-design: r={p.r} lambda={p.lam}"])
        elif kind == "gdd":
            d = fileio.design_from_json(data)
            if not isinstance(d, GroupedDesign):
                raise UsageError("a GDD descriptor needs 'groups'")
            p = verify_gdd(d)
            payload = _gdd_payload(p)
            payload["e_optimal"] = e_optimal_gdd(p)
            if len(p.k_set) == 1:
                payload["bose_connor"] = bose_connor_check(p, d.N, d.v)
            lines = [f"GDD: lambda1={p.lambda1} lambda2={p.lambda2} r={p.r} "
                     f"k={sorted(p.k_set)} m={p.m} g={p.g}",
                     f"  E-optimal certificate (lambda2 = lambda1 + 1): {payload['e_optimal']}"]
            if "bose_connor" in payload:
                lines.append(f"  Bose-Connor relations hold: {payload['bose_connor']}")
            _emit(args, payload, lines)
        elif kind == "dm":
            group, entries = fileio.dm_entries_from_json(data)
            eta = verify_difference_matrix(entries, group)
            _emit(args, {"eta": eta, "b": group.order, "s": entries.shape[1]},
                  [f"({group.order}, {entries.shape[1]}; {eta})-difference matrix over {group}"])
        else:
            raise UsageError(f"unknown kind {kind!r}")
    except VerificationError as exc:
        _emit(args, {"pass": False, "violation": exc.violation}, [f"FAIL: {exc}"])
        return FAIL
    return PASS


# -- construct ---------------------------------------------------------------

def _seed_from_recipe(spec):
    if "catalog" in spec:
        return find_entry(spec["catalog"]).incidence()
    if "difference_set" in spec:
        return develop_difference_set(spec["difference_set"], int(spec["modulus"]))
    return fileio.design_from_json(spec)


def _dm_from_recipe(spec, s=None) -> DifferenceMatrix:
    if "field" in spec:
        dm = mult_table_dm(parse_field(spec["field"]))
    else:
        group, entries = fileio.dm_entries_from_json(spec)
        dm = DifferenceMatrix(group, entries, verify_difference_matrix(entries, group))
    if "shifts" in spec:
        dm = shift_dm_columns(dm, spec["shifts"])
    if s is not None and s != dm.s:
        if s > dm.s:
            raise StructureError(f"difference matrix has {dm.s} columns, {s} requested")
        dm = DifferenceMatrix(dm.group, dm.entries[:, :s].copy(), dm.eta)
    return dm


def _gdd_from_recipe(spec) -> GroupedDesign:
    gen = spec.get("generator")
    if gen == "ag":
        return ag_hyperplane_gdd(int(spec["n"]), int(spec["q"]))
    if gen == "transversal":
        return transversal_design(int(spec["q"]))
    d = fileio.design_from_json(spec)
    if not isinstance(d, GroupedDesign):
        raise StructureError("GDD recipe needs 'groups'")
    return d


def run_recipe(recipe: dict, repair=False, budget=DEFAULT_BUDGET):
    """Build the SbbdResult a recipe describes."""
    repair = repair or bool(recipe.get("repair_spanning"))
    if "gdd" in recipe:
        d = _gdd_from_recipe(recipe["gdd"])
        if recipe.get("complement"):
            d = GroupedDesign(complement(d.incidence, d.groups)[0], d.groups)
        result = gdd_to_sbbd(d)
        if repair and not result.spanning.ok:
            perms = repair_spanning_gdd(d, budget=budget)
            before = result.info_matrix
            result = gdd_to_sbbd(apply_group_permutations(d, perms))
            if not np.array_equal(before, result.info_matrix):
                raise ConstructionError("within-group permutation changed the information matrix")
            result.repair = {"group_permutations": [list(p) for p in perms]}
        return result

    if "seed" not in recipe:
        raise StructureError("recipe needs 'seed' (with 'dm' or 'partition') or 'gdd'")
    h = _seed_from_recipe(recipe["seed"])
    part = recipe.get("partition")
    if part is None:
        if "dm" not in recipe:
            raise StructureError("recipe needs a 'dm' entry")
        dm = _dm_from_recipe(recipe["dm"])
        return construct_single(h, dm, row_map=recipe.get("row_map"),
                                repair_spanning=repair, budget=budget)

    if part == "auto" or "sizes" in part:
        partition = partition_blocks(h, "auto" if part == "auto" else part["sizes"], budget=budget)
    else:
        cells = tuple(tuple(c) for c in part["cells"])
        reps = tuple(int(h[list(c)].sum(axis=0)[0]) for c in cells)
        partition = BlockPartition(cells, reps)
    specs = recipe.get("dms")
    if specs is None:
        s = min(partition.sizes)
        specs = [{"field": f"GF({size})"} for size in partition.sizes]
    else:
        s = None
    dms = [_dm_from_recipe(spec, s) for spec in specs]
    return construct_decomposed(h, partition, dms, repair_spanning=repair, budget=budget)


def cmd_construct(args) -> int:
    recipe = fileio.load_json(args.recipe)
    result = run_recipe(recipe, repair=args.repair_spanning, budget=args.seed_budget)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    compact = bool(recipe.get("compact"))
    fileio.write_matrix(out / "design.txt", result.design.entries, compact=compact)
    np.savetxt(out / "info.txt", result.info_matrix, fmt="%d")
    payload = result.to_json(matrix_file="design.txt")
    fileio.dump_json(out / "result.json", payload)
    _emit(args, payload, _result_lines(result) + [f"wrote {out}/design.txt, info.txt, result.json"])
    return PASS if result.params is not None else FAIL


# -- eigen -------------------------------------------------------------------

def cmd_eigen(args) -> int:
    if args.info:
        m = np.loadtxt(args.input, dtype=np.int64, ndmin=2)
        v1, v2 = _dims(args, m.shape[0])
    else:
        x = _load_design_matrix(args)
        m, v1, v2 = information_matrix(x), x.v1, x.v2
    try:
        params = classify_information_matrix(m, v1, v2)
    except (VerificationError, StructureError):
        params = None
    numeric = numeric_spectrum(m)
    payload = {"v1": v1, "v2": v2, "lambda": list(params.as_tuple()) if params else None}
    lines = []
    if params is not None:
        exact = cs2_eigenvalues(params, v1, v2)
        payload["spectrum"] = [[int(t), mult] for t, mult in exact.values]
        payload["numeric_agrees"] = spectra_agree(exact, numeric)
        payload["e_certificate"] = e_certificate(params)
        lines.append(f"Lambda = {params.as_tuple()}")
        lines.append(f"{'eigenvalue':>12} {'multiplicity':>12}")
        lines += [f"{int(t):>12} {mult:>12}" for t, mult in exact.values]
        lines.append(f"numeric eigensolver agrees (rtol 1e-9): {payload['numeric_agrees']}")
        lines.append("E-optimal certificate (GDD type, lambda21 = lambda12 + 1): "
                     f"{payload['e_certificate']}")
    else:
        payload["spectrum"] = [[t, mult] for t, mult in numeric.values]
        lines.append("not doubly completely symmetric; numeric spectrum:")
        lines += [f"{t:>12.6g} {mult:>12}" for t, mult in numeric.values]
    try:
        payload["min_positive"] = min_positive_eigenvalue(m)
        lines.append(f"minimum positive eigenvalue: {payload['min_positive']:.10g}")
    except DesignError:
        payload["min_positive"] = None
        lines.append("minimum positive eigenvalue: none (degenerate)")
    _emit(args, payload, lines)
    return PASS


# -- catalog -----------------------------------------------------------------

def cmd_catalog(args) -> int:
    entries = load_catalog()
    if args.action == "list":
        rows = [{"v": e.v, "b": e.b, "r": e.r, "k": e.k, "lambda": e.lam, "remark": e.remark,
                 "generator": e.difference_set is not None} for e in entries]
        lines = [f"{'v':>4} {'b':>4} {'r':>4} {'k':>4} {'lam':>4}  remark"]
        lines += [f"{e.v:>4} {e.b:>4} {e.r:>4} {e.k:>4} {e.lam:>4}  {e.remark}" for e in entries]
        _emit(args, {"entries": rows}, lines)
        return PASS
    ok = True
    rows, lines = [], []
    for e in entries:
        rel = e.relations()
        if e.difference_set is not None:
            p = verify_r_lambda(e.incidence())
            rel["generator verifies"] = (p.r, p.lam) == (e.r, e.lam)
        good = all(rel.values())
        ok &= good
        pred = e.predicted_lambda().as_tuple()
        rows.append({"key": e.key(), "checks": rel, "predicted_lambda": list(pred)})
        lines.append(f"{'ok  ' if good else 'FAIL'} {e.key():<16} Lambda={pred} {e.remark}")
    _emit(args, {"pass": ok, "entries": rows}, lines)
    return PASS if ok else FAIL


# -- export ------------------------------------------------------------------

def cmd_export(args) -> int:
    what = args.what
    if what == "ag":
        data = fileio.design_to_json(ag_hyperplane_gdd(args.n, args.q))
    elif what == "transversal":
        data = fileio.design_to_json(transversal_design(args.q))
    elif what == "dm":
        data = fileio.dm_to_json(mult_table_dm(parse_field(args.field)))
    elif what == "catalog":
        data = fileio.design_to_json(find_entry(args.ref).incidence())
    elif what == "difference-set":
        data = fileio.design_to_json(develop_difference_set(args.base, args.modulus))
    elif what == "complement":
        d = fileio.design_from_json(fileio.load_json(args.input))
        if isinstance(d, GroupedDesign):
            data = fileio.design_to_json(GroupedDesign(complement(d.incidence, d.groups)[0], d.groups))
        else:
            data = fileio.design_to_json(complement(d)[0])
    elif what == "matrix":
        d = fileio.design_from_json(fileio.load_json(args.input))
        if isinstance(d, GroupedDesign):
            m = gdd_design_matrix(d).entries
        else:
            m = d
        if args.output:
            fileio.write_matrix(args.output, m, compact=args.compact)
        else:
            print("\n".join(" ".join(map(str, row)) for row in m))
        return PASS
    else:
        raise UsageError(f"unknown export {what!r}")
    text = json.dumps(data)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return PASS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed-budget", type=int, default=DEFAULT_BUDGET,
                        help="node budget for repair and partition searches")

    parser = argparse.ArgumentParser(prog="sbbdkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="verify a design, DM, GDD or SBBD")
    p.add_argument("input")
    p.add_argument("--kind", required=True, choices=["rlambda", "gdd", "dm", "sbbd"])
    p.add_argument("--v1", type=int)
    p.add_argument("--v2", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="build an SBBD from a JSON recipe")
    p.add_argument("recipe")
    p.add_argument("--out", default=".")
    p.add_argument("--repair-spanning", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("eigen", parents=[common], help="spectrum and E-certificate")
    p.add_argument("input")
    p.add_argument("--v1", type=int)
    p.add_argument("--v2", type=int)
    p.add_argument("--info", action="store_true", help="input is already an information matrix")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("catalog", parents=[common], help="bundled BIBD parameter table")
    p.add_argument("action", choices=["list", "check"])
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("export", parents=[common], help="write generated designs")
    p.add_argument("what", choices=["ag", "transversal", "dm", "catalog", "difference-set",
                                    "complement", "matrix"])
    p.add_argument("input", nargs="?")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--field", default="GF(8)")
    p.add_argument("--ref", default="PG(2,2)")
    p.add_argument("--base", type=int, nargs="+", default=[1, 2, 4])
    p.add_argument("--modulus", type=int, default=7)
    p.add_argument("--compact", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, StructureError, FileNotFoundError, KeyError, ValueError) as exc:
        if isinstance(exc, (VerificationError, SearchFailure)):
            print(f"FAIL: {exc}", file=sys.stderr)
            return FAIL
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ConstructionError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
