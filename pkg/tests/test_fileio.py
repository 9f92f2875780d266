import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import data_path, gdd_nine, sbbd_nine
from sbbdkit import GroupedDesign, StructureError, field_of_order, mult_table_dm
from sbbdkit.fileio import (
    design_from_json,
    design_to_json,
    dm_entries_from_json,
    dm_to_json,
    load_json,
    read_matrix,
    write_matrix,
)


def test_read_text_matrix_with_comments():
    x = sbbd_nine()
    assert x.shape == (9, 9)
    assert x[0].tolist() == [0, 1, 1, 1, 1, 0, 1, 1, 0]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 13), st.data(), st.booleans())
def test_matrix_round_trip(tmp_path_factory, rows, cols, data, compact):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=rows * cols, max_size=rows * cols))
    m = np.array(bits).reshape(rows, cols)
    path = tmp_path_factory.mktemp("m") / "x.txt"
    write_matrix(path, m, compact=compact)
    assert np.array_equal(read_matrix(path), m)


def test_compact_header(tmp_path):
    path = tmp_path / "x.txt"
    write_matrix(path, [[1, 0, 1, 1, 0]], compact=True)
    assert path.read_text().splitlines() == ["#hex 5", "16"]


@pytest.mark.parametrize("text", ["0 1\n1\n", "0 x\n", "", "#hex\n"])
def test_read_matrix_rejects(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(StructureError):
        read_matrix(path)


def test_design_json_round_trip():
    d = gdd_nine()
    again = design_from_json(design_to_json(d))
    assert isinstance(again, GroupedDesign)
    assert np.array_equal(again.incidence, d.incidence) and again.groups == d.groups
    h = design_from_json({"points": 3, "blocks": [[0, 1], [1, 2]]})
    assert design_to_json(h) == {"points": 3, "blocks": [[0, 1], [1, 2]]}
    with pytest.raises(StructureError):
        design_from_json({"blocks": [[0]]})


def test_dm_json_round_trip():
    dm = mult_table_dm(field_of_order(8))
    group, entries = dm_entries_from_json(dm_to_json(dm))
    assert group == dm.group and np.array_equal(entries, dm.entries)
    dm5 = mult_table_dm(field_of_order(5))
    assert dm_to_json(dm5)["entries"][2] == [0, 2, 4, 1, 3]
    with pytest.raises(StructureError):
        dm_entries_from_json({"group": "Z5"})
    with pytest.raises(StructureError):
        dm_entries_from_json({"group": "Z5", "entries": [[0, 1], [2]]})


def test_load_json_errors(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    with pytest.raises(StructureError):
        load_json(path)
    assert load_json(data_path("dm_z5.json"))["group"] == "Z5"
