import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from corpus import bibd_533, dm_corpus, fano, gdd_corpus, gdd_nine, rl_corpus, rl_eight_blocks
from sbbdkit import (
    ConstructionError,
    DegenerateError,
    DifferenceMatrix,
    GroupedDesign,
    StructureError,
    VerificationError,
    ag_hyperplane_gdd,
    bose_connor_check,
    complement,
    develop_difference_set,
    field_of_order,
    from_blocks,
    mult_table_dm,
    parse_group,
    shift_dm_column,
    shift_dm_columns,
    transversal_design,
    verify_difference_matrix,
    verify_gdd,
    verify_r_lambda,
)
from sbbdkit.incidence import as_incidence, to_blocks


def test_blocks_round_trip():
    blocks = [[0, 2], [1], [0, 1, 2]]
    h = from_blocks(blocks, 3)
    assert h.tolist() == [[1, 0, 1], [0, 1, 0], [1, 1, 1]]
    assert to_blocks(h) == blocks


@pytest.mark.parametrize("bad", [[[0, 2]], [[0, 1], [1, 2, 2]]])
def test_as_incidence_rejects_non_binary(bad):
    with pytest.raises(StructureError):
        as_incidence(bad)


def test_from_blocks_rejects_out_of_range():
    with pytest.raises(StructureError):
        from_blocks([[0, 5]], 3)


@pytest.mark.parametrize("name,h", rl_corpus(31), ids=lambda x: x if isinstance(x, str) else "")
def test_r_lambda_matches_pair_count_oracle(name, h):
    p = verify_r_lambda(h)
    assert oracles.r_lambda(h.tolist()) == (p.r, p.lam)


def test_known_r_lambda_values():
    assert verify_r_lambda(fano()) == verify_r_lambda(from_blocks([[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 0], [5, 6, 1], [6, 0, 2], [0, 1, 3]], 7))
    assert (verify_r_lambda(rl_eight_blocks()).r, verify_r_lambda(rl_eight_blocks()).lam) == (4, 2)
    assert (verify_r_lambda(bibd_533()).r, verify_r_lambda(bibd_533()).lam) == (6, 3)


def test_r_lambda_reports_first_violation():
    h = fano().copy()
    h[0, 0] ^= 1
    with pytest.raises(VerificationError) as exc:
        verify_r_lambda(h)
    assert exc.value.violation["kind"] in ("replication", "concurrence")
    h = from_blocks([[0, 1], [0, 2], [0, 1]], 3)
    with pytest.raises(VerificationError) as exc:
        verify_r_lambda(h)
    assert exc.value.violation == {"kind": "replication", "point": 1, "expected": 3, "found": 2}


def test_r_lambda_degenerate():
    with pytest.raises(DegenerateError):
        verify_r_lambda([[1], [1]])


@pytest.mark.parametrize("name,d", gdd_corpus(), ids=lambda x: x if isinstance(x, str) else "")
def test_gdd_matches_oracle(name, d):
    p = verify_gdd(d)
    assert oracles.gdd(d.incidence.tolist(), d.groups) == (p.lambda1, p.lambda2, p.r)
    assert bose_connor_check(p, d.N, d.v)


def test_gdd_rejections():
    d = gdd_nine()
    with pytest.raises(StructureError):
        GroupedDesign(d.incidence, [[0, 1, 2], [3, 4, 5], [6, 7]])
    with pytest.raises(StructureError):
        verify_gdd(GroupedDesign(d.incidence, [[0, 1], [2, 3, 4], [5, 6, 7, 8]]))
    with pytest.raises(DegenerateError):
        verify_gdd(GroupedDesign(d.incidence, [list(range(9))]))
    broken = d.incidence.copy()
    broken[0, 0] ^= 1
    with pytest.raises(VerificationError):
        verify_gdd(GroupedDesign(broken, d.groups))


def test_gdd_singleton_groups_have_no_lambda1():
    h = fano()
    p = verify_gdd(GroupedDesign(h, [[i] for i in range(7)]))
    assert p.lambda1 is None and p.lambda2 == 1 and p.r == 3


def test_transversal_design_parameters():
    for q in (2, 3, 4, 5, 7):
        d = transversal_design(q)
        p = verify_gdd(d)
        assert (p.lambda1, p.lambda2, p.r, p.k, p.m, p.g, d.N) == (0, 1, q, q + 1, q + 1, q, q * q)
    with pytest.raises(StructureError):
        transversal_design(6)


def test_ag_hyperplane_block_counts():
    # AG(n, q): (q^n - 1)/(q - 1) - 1 non-class parallel classes of q hyperplanes each
    for n, q in [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (2, 5)]:
        d = ag_hyperplane_gdd(n, q)
        classes = (q**n - 1) // (q - 1) - 1
        assert d.N == classes * q
        assert d.v == q**n and d.m == q and d.g == q ** (n - 1)
        p = verify_gdd(d)
        assert p.lambda2 == p.lambda1 + 1
    assert ag_hyperplane_gdd(2, 3).N == 9


def test_ag23_complement_is_the_nine_block_gdd_up_to_order():
    d = ag_hyperplane_gdd(2, 3)
    hc, p = complement(d.incidence, d.groups)
    assert (p.lambda1, p.lambda2, p.r, p.k) == (3, 4, 6, 6)
    assert sorted(map(tuple, hc.tolist())) == sorted(map(tuple, gdd_nine().incidence.tolist()))


def test_complement_predictions():
    for name, h in rl_corpus(23):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            hc, p = complement(h)
        base = verify_r_lambda(h)
        N = h.shape[0]
        assert (p.r, p.lam) == (N - base.r, N - 2 * base.r + base.lam)
        assert oracles.r_lambda(hc.tolist()) == (p.r, p.lam)


def test_complement_warns_on_full_block():
    with pytest.warns(UserWarning, match="full point set"):
        complement(rl_eight_blocks())


def test_difference_matrix_validation():
    dm = mult_table_dm(field_of_order(5))
    assert verify_difference_matrix(dm.entries, dm.group) == 1
    bad = dm.entries.copy()
    bad[1, 1] = (bad[1, 1] + 1) % 5
    with pytest.raises(VerificationError) as exc:
        verify_difference_matrix(bad, dm.group)
    assert exc.value.violation["kind"] == "difference"
    with pytest.raises(DegenerateError):
        verify_difference_matrix(dm.entries[:, :1], dm.group)
    with pytest.raises(StructureError):
        verify_difference_matrix(dm.entries[:4], dm.group)
    with pytest.raises(StructureError):
        DifferenceMatrix.from_elements(parse_group("Z5"), [[0, 7]] * 5)


@pytest.mark.parametrize("name,dm", dm_corpus(), ids=lambda x: x if isinstance(x, str) else "")
def test_difference_matrix_oracle(name, dm):
    g = dm.group
    assert oracles.dm_eta(dm.element_rows(), list(g.elements), g.sub) == dm.eta
    assert verify_difference_matrix(dm.entries, g) == dm.eta


def test_stacked_dm_has_eta_two():
    dm = mult_table_dm(field_of_order(4))
    stacked = np.vstack([dm.entries, dm.entries])
    assert verify_difference_matrix(stacked, dm.group) == 2


def test_mult_table_dm_entries_are_field_products():
    f = field_of_order(9)
    dm = mult_table_dm(f)
    for i, a in enumerate(f.elements):
        for j, b in enumerate(f.elements):
            assert dm.group.elements[dm.entries[i, j]] == f.mul(a, b)


def test_shift_column_adds_constant():
    dm = mult_table_dm(field_of_order(8))
    c = (1, 1, 0)
    shifted = shift_dm_column(dm, 6, c)
    g = dm.group
    for row, new in zip(dm.element_rows(), shifted.element_rows()):
        assert new[6] == g.add(row[6], c)
        assert new[:6] == row[:6] and new[7:] == row[7:]
    with pytest.raises(StructureError):
        shift_dm_column(dm, 8, c)
    with pytest.raises(StructureError):
        shift_dm_columns(dm, [c])


def test_develop_difference_set():
    h = develop_difference_set([0, 1, 3], 7)
    assert to_blocks(h)[0] == [0, 1, 3]
    assert to_blocks(h)[2] == [2, 3, 5]
    assert (verify_r_lambda(h).r, verify_r_lambda(h).lam) == (3, 1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 4, 5, 7, 8, 9]), st.data())
def test_shifts_preserve_eta_property(q, data):
    dm = mult_table_dm(field_of_order(q))
    g = dm.group
    shifts = data.draw(st.lists(st.integers(0, q - 1), min_size=dm.s, max_size=dm.s))
    shifted = shift_dm_columns(dm, [g.elements[i] for i in shifts])
    assert verify_difference_matrix(shifted.entries, g) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 9), st.integers(2, 4), st.data())
def test_complete_designs_property(v, k, data):
    k = min(k, v - 1)
    blocks = [list(c) for c in itertools.combinations(range(v), k)]
    h = from_blocks(blocks, v)
    p = verify_r_lambda(h)
    assert oracles.r_lambda(h.tolist()) == (p.r, p.lam)
    rows = data.draw(st.permutations(range(len(blocks))))
    assert verify_r_lambda(h[list(rows)]) == p
