"""Shared test corpus: the bundled fixtures plus generated designs."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np

from sbbdkit import (
    DifferenceMatrix,
    GroupedDesign,
    ag_hyperplane_gdd,
    develop_difference_set,
    field_of_order,
    from_blocks,
    mult_table_dm,
    parse_group,
    transversal_design,
)
from sbbdkit.catalog import load_catalog
from sbbdkit.fileio import design_from_json, read_matrix

DATA = resources.files("sbbdkit").joinpath("data")

# the repaired nine-block set, with the third group relabelled 0->1->2->0
REPAIRED_NINE = [[1, 2, 4, 5, 8, 6], [0, 2, 3, 5, 7, 6], [0, 1, 3, 4, 7, 8],
                 [0, 2, 3, 4, 8, 6], [1, 2, 3, 5, 7, 8], [0, 1, 4, 5, 7, 6],
                 [0, 1, 3, 5, 8, 6], [1, 2, 3, 4, 7, 6], [0, 2, 4, 5, 7, 8]]
NINE_GROUPS = [[0, 1, 2], [3, 4, 5], [6, 7, 8]]

GF8_SHIFTS = [(0, 0, 0)] * 5 + [(1, 0, 0), (1, 1, 0), (1, 0, 1)]


def data_path(name):
    return DATA.joinpath(name)


def load(name):
    return json.loads(data_path(name).read_text())


def sbbd_nine():
    return read_matrix(data_path("sbbd_3x3_n9.txt"))


def gdd_nine() -> GroupedDesign:
    return design_from_json(load("gdd_9pts_l3_l4.json"))


def gdd_nine_repaired() -> GroupedDesign:
    return GroupedDesign(from_blocks(REPAIRED_NINE, 9), NINE_GROUPS)


def rl_eight_blocks() -> np.ndarray:
    return design_from_json(load("rl_7pts_8blocks.json"))


def bibd_533() -> np.ndarray:
    return design_from_json(load("bibd_5_3_3.json"))


def fano() -> np.ndarray:
    return develop_difference_set([1, 2, 4], 7)


def dm_from_file(name) -> DifferenceMatrix:
    raw = load(name)
    return DifferenceMatrix.from_elements(parse_group(raw["group"]), raw["entries"])


@lru_cache(maxsize=None)
def catalog_designs(max_b=64):
    """(key, incidence) for bundled catalog rows with a generator and b <= max_b."""
    return tuple((e.key(), e.incidence()) for e in load_catalog()
                 if e.difference_set is not None and e.b <= max_b)


def rl_corpus(max_b=64):
    """(name, incidence) pairs of every (r, lambda)-design in the corpus."""
    items = [("fano", fano()), ("seven_points_eight_blocks", rl_eight_blocks()),
             ("bibd_5_3_3", bibd_533())]
    items += [(f"catalog_{k}", h) for k, h in catalog_designs(max_b)]
    return [(n, h) for n, h in items if h.shape[0] <= max_b]


AG_CASES = [(2, 2), (2, 3), (3, 2), (3, 3)]
TD_CASES = [2, 3, 4, 5]


def gdd_corpus():
    items = [("nine_points", gdd_nine()), ("nine_points_repaired", gdd_nine_repaired())]
    items += [(f"ag_{n}_{q}", ag_hyperplane_gdd(n, q)) for n, q in AG_CASES]
    items += [(f"td_{q}", transversal_design(q)) for q in TD_CASES]
    return items


def dm_corpus():
    items = [(f"gf{q}", mult_table_dm(field_of_order(q))) for q in (2, 3, 4, 5, 7, 8, 9, 16)]
    items += [("z5", dm_from_file("dm_z5.json")), ("gf8_shifted", dm_from_file("dm_gf8_shifted.json"))]
    return items
